#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "limitlab/distributions.hpp"

namespace limitlab {

// Finite distribution on real support points (strictly increasing xs).
// Exact pmfs and empirical histograms both project onto this before any
// metric is evaluated; standardization is an affine map of the support.
struct LatticeDist {
    std::vector<double> xs;
    std::vector<double> ps;  // same length, sums to ~1

    static LatticeDist from_pmf(const IntegerPmf& pmf);
    static LatticeDist from_empirical(const EmpiricalDist& emp);

    double mean() const;
    double stddev() const;
    LatticeDist standardized(double mu, double sigma) const;
    LatticeDist standardized() const;  // by its own moments
};

double normal_cdf(double x);

struct LltError {
    double raw = 0.0;     // sup_k |P(X=k) - density(k)|
    double scaled = 0.0;  // sigma * raw
};

// Pointwise distance from the discrete-Gaussian reference. The sup runs over
// the support extended by 3 sigma on each side, so regions where the Gaussian
// has mass but the pmf has none count too.
LltError llt_error(const IntegerPmf& pmf, const GaussianRef& ref);
LltError llt_error(const EmpiricalDist& emp, const GaussianRef& ref);

// sup-CDF distance.
double kolmogorov(const LatticeDist& a, const LatticeDist& b);
double kolmogorov(const LatticeDist& a, const GaussianRef& ref);

// L1 distance between CDFs (dual form over 1-Lipschitz test functions).
double wasserstein(const LatticeDist& a, const LatticeDist& b);
double wasserstein(const LatticeDist& a, const GaussianRef& ref);

struct CharProfile {
    std::vector<double> t_grid;
    std::vector<std::complex<double>> phi;
    std::vector<double> gauss_ref;  // e^(-t^2/2)
    std::vector<double> abs_diff;   // |phi - gauss_ref|
};

// phi(t) = sum_k p_k e^(i t x_k) on the grid; standardize first if asked.
CharProfile char_fn(const LatticeDist& dist, bool standardize,
                    std::span<const double> t_grid);

// Uniform grid over [-pi b, pi b] sized so that step^2 * E[Y^2] < 1e-9
// (|phi''| <= E[Y^2] bounds the trapezoid curvature error).
std::vector<double> inversion_grid(double b, double second_moment);

// P(Y = y) = (1/(2 pi b)) \int_{-pi b}^{pi b} e^(-i t y) phi(t) dt for a
// variable supported on the lattice (1/b)(Z - a), by composite trapezoid over
// the profile's grid. The grid must span the full inversion interval.
double fourier_invert(const CharProfile& profile, double a, double b, double y);

struct EnvelopePoint {
    double t;
    double abs_diff;  // |phi_Z(t) - e^(-t^2/2)|
    double envelope;  // t^3 e^(-t^2/3) / sqrt(n) + t / sqrt(n)
};

struct EnvelopeReport {
    std::int64_t n;
    std::vector<EnvelopePoint> points;
    double fitted_c;  // smallest C with abs_diff <= C * envelope on the grid
};

// Small-t comparison of the standardized exhaustive 3-AP pmf against the
// Gaussian characteristic function; grid must lie in (0, sqrt(n)/4].
EnvelopeReport small_t_envelope(std::int64_t n, std::span<const double> t_grid);

struct SlopeFit {
    double slope = 0.0;
    double stderr_slope = 0.0;
    double intercept = 0.0;
};

// OLS of log(metric) against log(n); needs >= 3 points, all positive.
SlopeFit fit_loglog(std::span<const double> n_values, std::span<const double> metric_values);

struct ScanResult {
    std::vector<double> n_values;
    std::vector<double> metric_values;
    std::vector<double> noise_floors;  // 0 for exact metrics
    SlopeFit fit;
};

ScanResult make_scan_result(std::vector<double> n_values, std::vector<double> metric_values,
                            std::vector<double> noise_floors);

// |E[e^{i theta B}]| for B ~ Bernoulli(p), and the quadratic bound
// 1 - 8 p (1-p) ||theta/(2 pi)||^2 it must stay under (||.|| = distance to
// the nearest integer).
double bernoulli_cf_abs(double p, double theta);
double bernoulli_cf_bound(double p, double theta);

}  // namespace limitlab
