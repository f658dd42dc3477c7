#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "limitlab/rational.hpp"

namespace limitlab {

// Trial division, adequate for desk-scale moduli (n <= 1e6).
bool is_prime(std::int64_t n);

// C(n, k) as an exact big integer; 0 when k < 0 or k > n.
Int binomial(std::int64_t n, std::int64_t k);

struct MomentSummary {
    Rational mean;
    Rational variance;
    bool exact = true;
    // False when a prime-only closed form was evaluated at composite n via
    // the explicit override; values are then formula-unsafe.
    bool formula_safe = true;
};

// Descents of a uniform permutation of {1..n}: mean (n-1)/2, variance (n+1)/12.
MomentSummary descent_moments(std::int64_t n);

// Number of 3-term progressions in Z/nZ, n(n-1)/2.
std::int64_t ap_total(std::int64_t n);

// Mean and variance of the 3-AP count of a p-biased random subset of Z/nZ.
//   mean = p^3 C(n,2)
//   var  = (9/4) n (n-1)^2 p^5 (1-p) + 9 C(n,2) p^4 (1-p)^2 + C(n,2) p^3 (1-p)^3
// Requires n prime unless allow_composite; composite results are flagged
// formula-unsafe.
MomentSummary ap_moments_unconditional(std::int64_t n, const Rational& p,
                                       bool allow_composite = false);

struct ConditionalMoments {
    Rational mean;                      // C(n,2) C(k,3) / C(n,3)
    std::optional<Rational> variance;   // closed form; absent when n < 7
    Rational variance_leading;          // k^3 (n-k)^3 / (2 n^4)
};

// Moments of the 3-AP count conditioned on subset size k. The variance closed
// form's derivation needs n >= 7; for n = 5 callers fall back to enumeration.
ConditionalMoments ap_moments_conditional(std::int64_t n, std::int64_t k,
                                          bool allow_composite = false);

// Difference of consecutive conditional means: mu_{n,k+1} - mu_{n,k} = 3 C(k,2) / (n-2).
Rational conditional_mean_gap(std::int64_t n, std::int64_t k);

// Ordered pairs of 3-AP triples of Z/nZ bucketed by how many elements the two
// progressions share. The published counts are for ordered pairs: they sum to
// C(n,2)^2 with the diagonal in the i=3 cell.
struct IntersectionTable {
    std::int64_t n;
    std::array<Int, 4> counts;  // indexed by i = |overlap| in {0,1,2,3}
    Int total() const;          // == C(n,2)^2
};

IntersectionTable intersection_table(std::int64_t n);

struct ContinuousMoments {
    Rational mean;              // C(n,2) / 8
    Rational variance_closed_form;    // (1/64) C(n,2) (n - 25/54), transcribed
    Rational variance_from_moments;   // from intersection counts with E[x]=1/2, E[x^2]=1/3
    bool agree() const { return variance_closed_form == variance_from_moments; }
};

// Moments of the continuous-weight 3-AP statistic. Two variance values are
// returned on purpose: the transcribed closed form and an independent exact
// evaluation disagree, and the caller decides what to do with that.
ContinuousMoments ap_moments_continuous(std::int64_t n, bool allow_composite = false);

// Constant value of A(S) + A(S^c) over all subsets S of size k (n odd > 3):
// (1/4) (3k(k-1) + 3(n-k)(n-k-1) - n(n-1)).
Rational complement_identity(std::int64_t n, std::int64_t k);

// f(i): number of 3-AP triples containing a fixed i-element subset of a triple.
// f(0) = C(n,2), f(1) = (3/2)(n-1), f(2) = 3, f(3) = 1.
Int extension_count(std::int64_t n, int i);

}  // namespace limitlab
