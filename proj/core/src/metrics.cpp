#include "limitlab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "limitlab/errors.hpp"

namespace limitlab {

namespace {

constexpr double kPi = std::numbers::pi;

double phi_density(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi); }

// Antiderivative of the standard normal CDF: d/dx (x Phi(x) + phi(x)) = Phi(x).
double cdf_antiderivative(double x) { return x * normal_cdf(x) + phi_density(x); }

void require_dist(const LatticeDist& d, const char* op) {
    if (d.xs.empty() || d.xs.size() != d.ps.size())
        throw domain_error(std::string(op) + ": empty or inconsistent distribution");
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

LatticeDist LatticeDist::from_pmf(const IntegerPmf& pmf) {
    if (pmf.probs.empty()) throw domain_error("LatticeDist: empty pmf");
    LatticeDist d;
    d.xs.resize(pmf.probs.size());
    for (std::size_t i = 0; i < pmf.probs.size(); ++i)
        d.xs[i] = static_cast<double>(pmf.support_min + static_cast<std::int64_t>(i));
    d.ps = pmf.float_probs();
    return d;
}

LatticeDist LatticeDist::from_empirical(const EmpiricalDist& emp) {
    if (emp.sample_size == 0) throw domain_error("LatticeDist: empty histogram");
    LatticeDist d;
    d.xs.reserve(emp.counts.size());
    d.ps.reserve(emp.counts.size());
    const double inv = 1.0 / static_cast<double>(emp.sample_size);
    for (std::size_t i = 0; i < emp.counts.size(); ++i) {
        if (emp.counts[i] == 0) continue;
        d.xs.push_back(emp.value_at(emp.support_min + static_cast<std::int64_t>(i)));
        d.ps.push_back(static_cast<double>(emp.counts[i]) * inv);
    }
    return d;
}

double LatticeDist::mean() const {
    double m = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) m += xs[i] * ps[i];
    return m;
}

double LatticeDist::stddev() const {
    const double mu = mean();
    double v = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) v += (xs[i] - mu) * (xs[i] - mu) * ps[i];
    return std::sqrt(v);
}

LatticeDist LatticeDist::standardized(double mu, double sigma) const {
    if (!(sigma > 0.0)) throw domain_error("standardized: sigma must be > 0");
    LatticeDist d;
    d.xs.resize(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) d.xs[i] = (xs[i] - mu) / sigma;
    d.ps = ps;
    return d;
}

LatticeDist LatticeDist::standardized() const { return standardized(mean(), stddev()); }

namespace {

LltError llt_error_impl(const std::vector<double>& mass, std::int64_t support_min,
                        double width, const GaussianRef& ref) {
    if (mass.empty()) throw domain_error("llt_error: empty distribution");
    if (!(ref.sigma > 0.0)) throw domain_error("llt_error: sigma must be > 0");
    const std::int64_t pad = static_cast<std::int64_t>(std::ceil(3.0 * ref.sigma / width)) + 1;
    const std::int64_t lo = support_min - pad;
    const std::int64_t hi = support_min + static_cast<std::int64_t>(mass.size()) - 1 + pad;
    double sup = 0.0;
    for (std::int64_t k = lo; k <= hi; ++k) {
        const std::int64_t idx = k - support_min;
        const double p =
            (idx >= 0 && idx < static_cast<std::int64_t>(mass.size()))
                ? mass[static_cast<std::size_t>(idx)]
                : 0.0;
        const double center = (width == 1.0) ? static_cast<double>(k)
                                             : (static_cast<double>(k) + 0.5) * width;
        sup = std::max(sup, std::abs(p - gaussian_height(ref, center) * width));
    }
    return {sup / width, ref.sigma * sup / width};
}

}  // namespace

LltError llt_error(const IntegerPmf& pmf, const GaussianRef& ref) {
    return llt_error_impl(pmf.float_probs(), pmf.support_min, 1.0, ref);
}

LltError llt_error(const EmpiricalDist& emp, const GaussianRef& ref) {
    if (emp.sample_size == 0) throw domain_error("llt_error: empty histogram");
    std::vector<double> mass(emp.counts.size());
    const double inv = 1.0 / static_cast<double>(emp.sample_size);
    for (std::size_t i = 0; i < mass.size(); ++i)
        mass[i] = static_cast<double>(emp.counts[i]) * inv;
    return llt_error_impl(mass, emp.support_min, emp.binned ? emp.bin_width : 1.0, ref);
}

double kolmogorov(const LatticeDist& a, const LatticeDist& b) {
    require_dist(a, "kolmogorov");
    require_dist(b, "kolmogorov");
    double fa = 0.0, fb = 0.0, sup = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.xs.size() || j < b.xs.size()) {
        double x;
        if (j >= b.xs.size() || (i < a.xs.size() && a.xs[i] <= b.xs[j]))
            x = a.xs[i];
        else
            x = b.xs[j];
        while (i < a.xs.size() && a.xs[i] <= x) fa += a.ps[i++];
        while (j < b.xs.size() && b.xs[j] <= x) fb += b.ps[j++];
        sup = std::max(sup, std::abs(fa - fb));
    }
    return sup;
}

double kolmogorov(const LatticeDist& a, const GaussianRef& ref) {
    require_dist(a, "kolmogorov");
    if (!(ref.sigma > 0.0)) throw domain_error("kolmogorov: sigma must be > 0");
    double f = 0.0, sup = 0.0;
    for (std::size_t i = 0; i < a.xs.size(); ++i) {
        const double g = normal_cdf((a.xs[i] - ref.mean) / ref.sigma);
        sup = std::max(sup, std::abs(f - g));  // just below the jump
        f += a.ps[i];
        sup = std::max(sup, std::abs(f - g));  // at the jump
    }
    return sup;
}

double wasserstein(const LatticeDist& a, const LatticeDist& b) {
    require_dist(a, "wasserstein");
    require_dist(b, "wasserstein");
    // Merge support points; integrate |Fa - Fb| over the constant pieces.
    double fa = 0.0, fb = 0.0, total = 0.0;
    double prev = 0.0;
    bool have_prev = false;
    std::size_t i = 0, j = 0;
    while (i < a.xs.size() || j < b.xs.size()) {
        double x;
        if (j >= b.xs.size() || (i < a.xs.size() && a.xs[i] <= b.xs[j]))
            x = a.xs[i];
        else
            x = b.xs[j];
        if (have_prev) total += std::abs(fa - fb) * (x - prev);
        while (i < a.xs.size() && a.xs[i] <= x) fa += a.ps[i++];
        while (j < b.xs.size() && b.xs[j] <= x) fb += b.ps[j++];
        prev = x;
        have_prev = true;
    }
    return total;
}

double wasserstein(const LatticeDist& a, const GaussianRef& ref) {
    require_dist(a, "wasserstein");
    if (!(ref.sigma > 0.0)) throw domain_error("wasserstein: sigma must be > 0");

    // Work in standardized coordinates; Wasserstein rescales by sigma.
    std::vector<double> zs(a.xs.size());
    for (std::size_t i = 0; i < zs.size(); ++i) zs[i] = (a.xs[i] - ref.mean) / ref.sigma;

    // |int_u^v (Phi - c)| with a bisection split when Phi crosses c.
    auto piece = [](double u, double v, double c) {
        auto integral = [&](double lo, double hi) {
            return cdf_antiderivative(hi) - cdf_antiderivative(lo) - c * (hi - lo);
        };
        const double su = normal_cdf(u) - c, sv = normal_cdf(v) - c;
        if (su >= 0.0 == sv >= 0.0) return std::abs(integral(u, v));
        double lo = u, hi = v;
        for (int it = 0; it < 80 && hi - lo > 1e-14; ++it) {
            const double mid = 0.5 * (lo + hi);
            if ((normal_cdf(mid) - c >= 0.0) == (su >= 0.0))
                lo = mid;
            else
                hi = mid;
        }
        const double cross = 0.5 * (lo + hi);
        return std::abs(integral(u, cross)) + std::abs(integral(cross, v));
    };

    // Left tail: F = 0, integral of Phi over (-inf, z_0].
    double total = cdf_antiderivative(zs.front());
    double f = 0.0;
    for (std::size_t i = 0; i + 1 < zs.size(); ++i) {
        f += a.ps[i];
        total += piece(zs[i], zs[i + 1], f);
    }
    // Right tail: F = 1, integral of (1 - Phi) over [z_last, inf).
    const double v = zs.back();
    total += phi_density(v) - v * (1.0 - normal_cdf(v));
    return total * ref.sigma;
}

CharProfile char_fn(const LatticeDist& dist, bool standardize,
                    std::span<const double> t_grid) {
    require_dist(dist, "char_fn");
    if (t_grid.empty()) throw domain_error("char_fn: empty grid");
    const LatticeDist d = standardize ? dist.standardized() : dist;
    CharProfile profile;
    profile.t_grid.assign(t_grid.begin(), t_grid.end());
    profile.phi.resize(t_grid.size());
    profile.gauss_ref.resize(t_grid.size());
    profile.abs_diff.resize(t_grid.size());
    for (std::size_t j = 0; j < t_grid.size(); ++j) {
        const double t = t_grid[j];
        std::complex<double> sum = 0.0;
        for (std::size_t i = 0; i < d.xs.size(); ++i)
            sum += d.ps[i] * std::polar(1.0, t * d.xs[i]);
        profile.phi[j] = sum;
        profile.gauss_ref[j] = std::exp(-0.5 * t * t);
        profile.abs_diff[j] = std::abs(sum - profile.gauss_ref[j]);
    }
    return profile;
}

std::vector<double> inversion_grid(double b, double second_moment) {
    if (!(b > 0.0)) throw domain_error("inversion_grid: b must be > 0");
    const double curvature = std::max(second_moment, 1.0);
    const double step_target = std::sqrt(1e-9 / curvature);
    const double span = 2.0 * kPi * b;
    const std::uint64_t intervals =
        static_cast<std::uint64_t>(std::ceil(span / step_target));
    if (intervals > 80'000'000)
        throw resource_error("inversion_grid: grid would exceed 8e7 points");
    std::vector<double> grid(intervals + 1);
    const double step = span / static_cast<double>(intervals);
    for (std::uint64_t i = 0; i <= intervals; ++i)
        grid[i] = -kPi * b + step * static_cast<double>(i);
    grid.back() = kPi * b;  // exact endpoint
    return grid;
}

double fourier_invert(const CharProfile& profile, double a, double b, double y) {
    (void)a;  // the lattice offset is already baked into the support/profile
    if (!(b > 0.0)) throw domain_error("fourier_invert: b must be > 0");
    const std::size_t m = profile.t_grid.size();
    if (m < 3) throw domain_error("fourier_invert: grid too small");
    const double lo = profile.t_grid.front(), hi = profile.t_grid.back();
    const double step = (hi - lo) / static_cast<double>(m - 1);
    if (lo > -kPi * b + 0.51 * step || hi < kPi * b - 0.51 * step)
        throw domain_error("fourier_invert: grid does not span [-pi b, pi b]");
    double sum = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        const double w = (j == 0 || j == m - 1) ? 0.5 : 1.0;
        const std::complex<double> term =
            std::polar(1.0, -profile.t_grid[j] * y) * profile.phi[j];
        sum += w * term.real();
    }
    return sum * step / (2.0 * kPi * b);
}

EnvelopeReport small_t_envelope(std::int64_t n, std::span<const double> t_grid) {
    if (t_grid.empty()) throw domain_error("small_t_envelope: empty grid");
    const double t_max = std::sqrt(static_cast<double>(n)) / 4.0;
    for (const double t : t_grid)
        if (!(t > 0.0 && t <= t_max + 1e-12))
            throw domain_error("small_t_envelope: grid must lie in (0, sqrt(n)/4]");

    const IntegerPmf pmf = exhaustive_ap_pmf(n, Rational(1, 2));
    const LatticeDist z = LatticeDist::from_pmf(pmf).standardized();
    const CharProfile profile = char_fn(z, false, t_grid);

    EnvelopeReport report;
    report.n = n;
    report.fitted_c = 0.0;
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    report.points.reserve(t_grid.size());
    for (std::size_t j = 0; j < t_grid.size(); ++j) {
        const double t = t_grid[j];
        const double envelope = (t * t * t * std::exp(-t * t / 3.0) + t) / sqrt_n;
        report.points.push_back({t, profile.abs_diff[j], envelope});
        report.fitted_c = std::max(report.fitted_c, profile.abs_diff[j] / envelope);
    }
    return report;
}

SlopeFit fit_loglog(std::span<const double> n_values, std::span<const double> metric_values) {
    if (n_values.size() != metric_values.size() || n_values.size() < 3)
        throw domain_error("fit_loglog: need >= 3 matched points");
    const std::size_t m = n_values.size();
    std::vector<double> lx(m), ly(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (!(n_values[i] > 0.0) || !(metric_values[i] > 0.0))
            throw domain_error("fit_loglog: points must be positive");
        lx[i] = std::log(n_values[i]);
        ly[i] = std::log(metric_values[i]);
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(m);
    my /= static_cast<double>(m);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    SlopeFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double rss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
        rss += r * r;
    }
    fit.stderr_slope =
        m > 2 ? std::sqrt(rss / static_cast<double>(m - 2) / sxx) : 0.0;
    return fit;
}

ScanResult make_scan_result(std::vector<double> n_values, std::vector<double> metric_values,
                            std::vector<double> noise_floors) {
    ScanResult scan;
    scan.fit = fit_loglog(n_values, metric_values);
    scan.n_values = std::move(n_values);
    scan.metric_values = std::move(metric_values);
    scan.noise_floors = std::move(noise_floors);
    if (scan.noise_floors.empty()) scan.noise_floors.assign(scan.n_values.size(), 0.0);
    return scan;
}

double bernoulli_cf_abs(double p, double theta) {
    const double q = 1.0 - p;
    return std::sqrt(std::max(0.0, 1.0 - 2.0 * p * q * (1.0 - std::cos(theta))));
}

double bernoulli_cf_bound(double p, double theta) {
    const double u = theta / (2.0 * kPi);
    const double dist = std::abs(u - std::nearbyint(u));
    return 1.0 - 8.0 * p * (1.0 - p) * dist * dist;
}

}  // namespace limitlab
