#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "limitlab/rational.hpp"
#include "limitlab/rng.hpp"

namespace limitlab {

// Exact probability mass function on a contiguous integer support.
struct IntegerPmf {
    std::int64_t support_min = 0;
    std::vector<Rational> probs;  // sums to exactly 1

    std::int64_t support_max() const {
        return support_min + static_cast<std::int64_t>(probs.size()) - 1;
    }
    Rational mass_at(std::int64_t value) const;  // 0 outside the support
    Rational mean() const;
    Rational variance() const;
    std::vector<double> float_probs() const;
};

struct Provenance {
    std::uint64_t seed = 0;
    std::uint64_t stream_first = 0;
    std::uint64_t stream_count = 0;
    std::string config_hash;  // hex fnv1a64 of the canonical config string
};

// Monte Carlo histogram. For integer statistics an index IS the value; for the
// binned continuous statistic index b covers [b*bin_width, (b+1)*bin_width).
struct EmpiricalDist {
    std::int64_t support_min = 0;
    std::vector<std::uint64_t> counts;
    std::uint64_t sample_size = 0;
    bool binned = false;
    double bin_width = 1.0;
    Provenance provenance;

    double value_at(std::int64_t index) const {
        return binned ? (static_cast<double>(index) + 0.5) * bin_width
                      : static_cast<double>(index);
    }
    double mean() const;
    double variance() const;
};

struct GaussianRef {
    double mean = 0.0;
    double sigma = 1.0;  // > 0
};

// Density of the reference normal at x.
double gaussian_height(const GaussianRef& ref, double x);

// Exact pmf of the descent count of a uniform permutation of {1..n}; Eulerian
// triangle by the standard recurrence, in big integers. 1 <= n <= 1000.
IntegerPmf eulerian_pmf(std::int64_t n);

// Joint subset census of Z/nZ: entry (a, k) counts subsets of size k whose
// 3-AP count is a. One Gray-code sweep over all 2^n masks with incremental
// count updates. n odd prime (override flag for composite), n <= 25.
class JointApTable {
public:
    JointApTable(std::int64_t n, bool allow_composite = false);

    std::int64_t n() const { return n_; }
    std::int64_t max_ap() const { return max_ap_; }
    std::uint64_t count(std::int64_t ap, std::int64_t k) const {
        return counts_[static_cast<std::size_t>(ap * (n_ + 1) + k)];
    }

    // pmf of the 3-AP count with Bernoulli(p) membership, p in (0,1) exact.
    IntegerPmf pmf(const Rational& p) const;
    // pmf of P(A = a) restricted to |S| = k (uniform over C(n,k) subsets).
    IntegerPmf conditional_pmf(std::int64_t k) const;

private:
    std::int64_t n_;
    std::int64_t max_ap_;
    std::vector<std::uint64_t> counts_;  // (max_ap+1) x (n+1), row-major
};

// Exact pmf of the 3-AP count, each subset weighted p^|S| (1-p)^(n-|S|).
IntegerPmf exhaustive_ap_pmf(std::int64_t n, const Rational& p,
                             bool allow_composite = false);

// Exact pmf of the 3-AP count over uniform size-k subsets, by direct
// enumeration of the C(n,k) combinations (independent of the mask sweep).
// Refuses when C(n,k) > 1e7.
IntegerPmf exhaustive_conditional_pmf(std::int64_t n, std::int64_t k,
                                      bool allow_composite = false);

// What to simulate.
struct McStatistic {
    enum class Kind { Descents, Aps, ApsFixedK, ApsContinuous };
    Kind kind = Kind::Descents;
    std::int64_t n = 0;
    double p = 0.5;          // Aps only
    std::int64_t k = 0;      // ApsFixedK only
    double bin_width = 1.0;  // ApsContinuous only

    std::string config_string(std::uint64_t samples, std::uint64_t seed,
                              std::uint64_t stream_base) const;
};

struct McConfig {
    std::uint64_t seed = 0;
    std::uint64_t stream_base = 0;
    int workers = 1;
    // Samples are consumed in fixed blocks, one sub-stream per block, so the
    // histogram is identical for every worker count.
    std::uint64_t block_size = 8192;
};

EmpiricalDist mc_histogram(const McStatistic& stat, std::uint64_t samples,
                           const McConfig& cfg);

// P(X_j = 1 | X_{j-1} = a, X_{j+1} = b) for adjacent descent indicators, by
// enumeration of S_4; order of cases: (1,1), (1,0), (0,1), (0,0).
std::array<Rational, 4> conditional_descent_probs();

}  // namespace limitlab
