#pragma once

#include <cstdint>
#include <vector>

#include "limitlab/distributions.hpp"
#include "limitlab/rational.hpp"

namespace limitlab {

struct DependencyGraphSummary {
    std::int64_t n = 0;
    std::int64_t vertex_count = 0;  // C(n,2)
    std::int64_t max_degree = 0;    // exact, <= (9/2)(n-1)
    std::int64_t d_value = 0;       // 1 + max_degree
};

// Exact maximum degree of the triple-intersection dependency graph, by
// incidence-list sweep over all C(n,2) vertices. n odd prime, n <= 200.
DependencyGraphSummary dependency_graph(std::int64_t n);

// Closed-form fallback D <= (9/2)(n-1) + 1 for n beyond the exact sweep.
std::int64_t dependency_degree_bound(std::int64_t n);

struct ChatterjeeBound {
    std::int64_t n = 0;
    std::int64_t d_value = 0;     // D = 1 + max degree (exact when available)
    bool d_exact = true;
    double sigma = 0.0;           // sqrt of the exact variance
    double sum_abs_m3 = 0.0;      // sum over triples of E|X|^3
    double sum_abs_m4 = 0.0;
    double wasserstein = 0.0;     // dependency-graph bound
    double kolmogorov = 0.0;      // sqrt((2/pi) wasserstein)
};

// Wasserstein bound (4/(sqrt(pi) sigma^2)) sqrt(D^3 sum E|X|^4)
//                  + (D^2/sigma^3) sum E|X|^3
// for the centered triple indicators X = 1_triple - p^3, with exact two-point
// moments (or the E|X|^m <= 1 relaxation when exact_moments is false).
// D defaults to the closed-form (9/2)(n-1)+1, the constant the O(n^(-1/4))
// derivation runs on; it dominates the true degree, so the bound stays valid.
// exact_degree swaps in the brute-force maximum, which is smaller but grows
// super-linearly over desk-scale n and flattens scaling scans.
ChatterjeeBound chatterjee_bound(std::int64_t n, const Rational& p,
                                 bool exact_moments = true,
                                 bool exact_degree = false);

struct ExchangeableReport {
    std::int64_t n = 0;
    std::int64_t k = 0;
    Rational lambda_effective;   // 3(n-2) / (k(n-k)): exact for the implemented swap
    Rational lambda_stated;      // 3(n-k) / C(n,2): the published constant
    Rational mean;               // mu_{n,k}
    Rational max_residual;       // vs lambda_effective; exactly 0 when the identity holds
    Rational max_residual_stated;  // vs lambda_stated, for the audit trail
    std::uint64_t subsets_checked = 0;
    bool exhaustive = false;
};

// For each size-k subset S (all of them, or `samples` random ones), averages
// A(S') - A(S) over every member/non-member swap and compares against
// -lambda (A(S) - mu_{n,k}), in exact rationals.
ExchangeableReport exchangeable_verify(std::int64_t n, std::int64_t k);
ExchangeableReport exchangeable_verify_mc(std::int64_t n, std::int64_t k,
                                          std::uint64_t samples, RngStream& rng);

struct SpacingProfile {
    std::int64_t n = 0;
    std::vector<std::int64_t> ks;
    std::vector<Rational> gaps;   // mu_{n,k+1} - mu_{n,k} = 3 C(k,2)/(n-2)
    std::vector<double> sigmas;   // sigma_{n,k}
    std::vector<double> ratios;   // gap / sigma
};

// Conditional mean spacings against conditional standard deviations over
// k in [k_lo, k_hi] within [3, n-3].
SpacingProfile spacing_profile(std::int64_t n, std::int64_t k_lo, std::int64_t k_hi);

struct GapDiagnostic {
    std::int64_t n = 0;
    std::int64_t x = 0;
    double chebyshev_bound = 0.0;   // genuine upper bound on P(A_n = x)
    double gaussian_form_bound = 0.0;  // tail form assuming per-k CLT shape
    double gaussian_height = 0.0;   // reference density 1/(sqrt(2 pi) sigma_n)
    std::vector<double> terms;      // per-k Chebyshev contributions
};

// Mixture bound on P(A_n = x) at p = 1/2: sum over k of
// min(1, (sigma_{n,k}/|x - mu_{n,k}|)^2) Binom(n,1/2)(k), plus the
// Gaussian-tail variant, compared to the unconditional Gaussian height.
GapDiagnostic gap_diagnostic(std::int64_t n, std::int64_t x);

struct PeakHeightReport {
    std::int64_t n = 0;
    std::int64_t k = 0;            // (n+1)/2
    std::int64_t x = 0;            // round(mu_{n,k})
    double p_hat = 0.0;            // estimate of P(A_n = x)
    double ci_half_width = 0.0;    // ~95% binomial CI (doubled when under-counted)
    bool low_count_warning = false;
    double scaled_peak = 0.0;      // p_hat * n^(3/2)
    double predicted_constant = 0.0;   // 8 sqrt(2)/pi
    double gaussian_ceiling = 0.0;     // (1/3) sqrt(2/pi)
};

// Monte Carlo estimate of the mixture-peak height at the central conditional
// mean, against the two predicted n^(-3/2) constants.
PeakHeightReport peak_height_check(std::int64_t n, std::uint64_t samples,
                                   const McConfig& cfg);

// Same report from the exhaustive pmf (n <= 25).
PeakHeightReport peak_height_exact(std::int64_t n);

}  // namespace limitlab
