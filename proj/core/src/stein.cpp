#include "limitlab/stein.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "limitlab/combinatorics.hpp"
#include "limitlab/counters.hpp"
#include "limitlab/errors.hpp"
#include "limitlab/samplers.hpp"

namespace limitlab {

namespace {

void require_odd_prime(std::int64_t n, const char* op) {
    if (n < 3 || n % 2 == 0 || !is_prime(n))
        throw domain_error(std::string(op) + ": n must be an odd prime");
}

std::vector<std::array<std::int32_t, 3>> triple_elements(std::int64_t n) {
    std::vector<std::array<std::int32_t, 3>> out;
    const auto triples = enumerate_aps(n);
    out.reserve(triples.size());
    for (const ApTriple& t : triples)
        out.push_back({t.start, static_cast<std::int32_t>((t.start + t.diff) % n),
                       static_cast<std::int32_t>((t.start + 2 * t.diff) % n)});
    return out;
}

}  // namespace

std::int64_t dependency_degree_bound(std::int64_t n) { return 9 * (n - 1) / 2 + 1; }

DependencyGraphSummary dependency_graph(std::int64_t n) {
    require_odd_prime(n, "dependency_graph");
    if (n > 200)
        throw resource_error(
            "dependency_graph: exact sweep capped at n = 200; closed-form bound D <= " +
            std::to_string(dependency_degree_bound(n)));

    const auto triples = triple_elements(n);
    const std::int64_t m = static_cast<std::int64_t>(triples.size());
    // Triples through each element.
    std::vector<std::vector<std::int32_t>> through(n);
    for (std::int64_t t = 0; t < m; ++t)
        for (const std::int32_t v : triples[static_cast<std::size_t>(t)])
            through[v].push_back(static_cast<std::int32_t>(t));

    std::vector<std::int32_t> stamp(static_cast<std::size_t>(m), -1);
    std::int64_t max_degree = 0;
    for (std::int64_t t = 0; t < m; ++t) {
        std::int64_t neighbors = 0;
        for (const std::int32_t v : triples[static_cast<std::size_t>(t)]) {
            for (const std::int32_t other : through[v]) {
                if (stamp[static_cast<std::size_t>(other)] != t) {
                    stamp[static_cast<std::size_t>(other)] = static_cast<std::int32_t>(t);
                    ++neighbors;
                }
            }
        }
        max_degree = std::max(max_degree, neighbors - 1);  // exclude self
    }
    return {n, m, max_degree, max_degree + 1};
}

ChatterjeeBound chatterjee_bound(std::int64_t n, const Rational& p, bool exact_moments,
                                 bool exact_degree) {
    require_odd_prime(n, "chatterjee_bound");
    if (p <= 0 || p >= 1) throw domain_error("chatterjee_bound: p must be in (0,1)");

    ChatterjeeBound out;
    out.n = n;
    if (exact_degree) {
        out.d_value = dependency_graph(n).d_value;  // throws resource_error past 200
        out.d_exact = true;
    } else {
        out.d_value = dependency_degree_bound(n);
        out.d_exact = false;
    }

    const MomentSummary moments = ap_moments_unconditional(n, p);
    out.sigma = std::sqrt(to_double(moments.variance));

    const double vertices = static_cast<double>(n * (n - 1) / 2);
    double m3 = 1.0, m4 = 1.0;
    if (exact_moments) {
        // X = 1_triple - p^3 takes value 1-p^3 w.p. p^3 and -p^3 w.p. 1-p^3.
        const double p3 = to_double(p * p * p);
        m3 = p3 * std::pow(1.0 - p3, 3) + (1.0 - p3) * std::pow(p3, 3);
        m4 = p3 * std::pow(1.0 - p3, 4) + (1.0 - p3) * std::pow(p3, 4);
    }
    out.sum_abs_m3 = vertices * m3;
    out.sum_abs_m4 = vertices * m4;

    const double d = static_cast<double>(out.d_value);
    const double s2 = out.sigma * out.sigma;
    out.wasserstein =
        4.0 / (std::sqrt(std::numbers::pi) * s2) * std::sqrt(d * d * d * out.sum_abs_m4) +
        d * d / (s2 * out.sigma) * out.sum_abs_m3;
    out.kolmogorov = std::sqrt(2.0 / std::numbers::pi * out.wasserstein);
    return out;
}

namespace {

ExchangeableReport exchangeable_report_base(std::int64_t n, std::int64_t k) {
    ExchangeableReport r;
    r.n = n;
    r.k = k;
    r.mean = ap_moments_conditional(n, k, true).mean;
    r.lambda_stated = Rational(3 * (n - k), binomial(n, 2));
    r.lambda_effective =
        (k >= 1 && k <= n - 1) ? Rational(3 * (n - 2), k * (n - k)) : Rational(0);
    r.max_residual = 0;
    r.max_residual_stated = 0;
    return r;
}

// Exact swap average for one subset: mean of A(S') - A(S) over all
// member/non-member swaps, and the residuals against both lambdas.
void accumulate_subset(const ApIncidence& inc, const SubsetState& s, std::int64_t ap,
                       ExchangeableReport& r) {
    const std::int64_t n = s.n, k = r.k;
    if (k < 1 || k > n - 1) return;  // degenerate: identity trivially 0
    std::int64_t delta_total = 0;
    for (std::int32_t u = 0; u < n; ++u) {
        if (!s.member[u]) continue;
        SubsetState t = s;
        t.member[u] = 0;
        const std::int64_t lost = inc.completions(u, t.member);
        for (std::int32_t v = 0; v < n; ++v) {
            if (s.member[v]) continue;
            const std::int64_t gained = inc.completions(v, t.member);
            delta_total += gained - lost;
        }
    }
    const Rational swap_mean(delta_total, k * (n - k));
    const Rational centered = Rational(ap) - r.mean;
    const Rational residual = swap_mean + r.lambda_effective * centered;
    const Rational residual_stated = swap_mean + r.lambda_stated * centered;
    if (abs(residual) > abs(r.max_residual)) r.max_residual = residual;
    if (abs(residual_stated) > abs(r.max_residual_stated))
        r.max_residual_stated = residual_stated;
    r.subsets_checked++;
}

}  // namespace

ExchangeableReport exchangeable_verify(std::int64_t n, std::int64_t k) {
    require_odd_prime(n, "exchangeable_verify");
    if (k < 0 || k > n) throw domain_error("exchangeable_verify: k must be in [0, n]");
    if (binomial(n, k) * k * (n - k) > 40'000'000)
        throw resource_error("exchangeable_verify: exhaustive sweep too large; use the "
                             "Monte Carlo mode");

    ExchangeableReport r = exchangeable_report_base(n, k);
    r.exhaustive = true;
    if (k == 0 || k == n) {  // no swap exists; identity holds vacuously
        r.subsets_checked = 1;
        return r;
    }

    const ApIncidence inc(n);
    SubsetState s;
    s.n = n;
    s.member.assign(static_cast<std::size_t>(n), 0);
    std::int64_t ap = 0;
    auto recurse = [&](auto&& self, std::int64_t next, std::int64_t remaining) -> void {
        if (remaining == 0) {
            accumulate_subset(inc, s, ap, r);
            return;
        }
        for (std::int64_t v = next; v <= n - remaining; ++v) {
            const std::int64_t delta =
                inc.completions(static_cast<std::int32_t>(v), s.member);
            ap += delta;
            s.member[v] = 1;
            self(self, v + 1, remaining - 1);
            s.member[v] = 0;
            ap -= delta;
        }
    };
    recurse(recurse, 0, k);
    return r;
}

ExchangeableReport exchangeable_verify_mc(std::int64_t n, std::int64_t k,
                                          std::uint64_t samples, RngStream& rng) {
    require_odd_prime(n, "exchangeable_verify_mc");
    if (k < 0 || k > n) throw domain_error("exchangeable_verify_mc: k must be in [0, n]");
    if (samples < 1) throw domain_error("exchangeable_verify_mc: samples must be >= 1");

    ExchangeableReport r = exchangeable_report_base(n, k);
    r.exhaustive = false;
    if (k == 0 || k == n) {
        r.subsets_checked = 1;
        return r;
    }
    const ApIncidence inc(n);
    for (std::uint64_t i = 0; i < samples; ++i) {
        const SubsetState s = sample_subset_fixed_k(n, k, rng);
        accumulate_subset(inc, s, count_aps(s), r);
    }
    return r;
}

SpacingProfile spacing_profile(std::int64_t n, std::int64_t k_lo, std::int64_t k_hi) {
    require_odd_prime(n, "spacing_profile");
    if (k_lo < 3 || k_hi > n - 3 || k_lo > k_hi)
        throw domain_error("spacing_profile: k range must lie within [3, n-3]");

    SpacingProfile profile;
    profile.n = n;
    for (std::int64_t k = k_lo; k <= k_hi; ++k) {
        const auto moments = ap_moments_conditional(n, k);
        if (!moments.variance || *moments.variance <= 0)
            throw domain_error("spacing_profile: sigma_{n,k} vanishes at k = " +
                               std::to_string(k));
        const double sigma = std::sqrt(to_double(*moments.variance));
        const Rational gap = conditional_mean_gap(n, k);
        profile.ks.push_back(k);
        profile.gaps.push_back(gap);
        profile.sigmas.push_back(sigma);
        profile.ratios.push_back(to_double(gap) / sigma);
    }
    return profile;
}

GapDiagnostic gap_diagnostic(std::int64_t n, std::int64_t x) {
    require_odd_prime(n, "gap_diagnostic");
    if (n < 7) throw domain_error("gap_diagnostic: n must be >= 7");

    GapDiagnostic diag;
    diag.n = n;
    diag.x = x;
    diag.terms.resize(static_cast<std::size_t>(n + 1), 0.0);

    const MomentSummary unconditional = ap_moments_unconditional(n, Rational(1, 2));
    const double sigma_n = std::sqrt(to_double(unconditional.variance));
    diag.gaussian_height = 1.0 / (std::sqrt(2.0 * std::numbers::pi) * sigma_n);

    const Rational two_pow = Rational(Int(1), Int(1) << n);
    double cheb_total = 0.0, gauss_total = 0.0;
    for (std::int64_t k = 0; k <= n; ++k) {
        const double weight = to_double(Rational(binomial(n, k)) * two_pow);
        const auto moments = ap_moments_conditional(n, k);
        const Rational dist_exact = Rational(x) - moments.mean;
        double cheb_term, gauss_term;
        if (!moments.variance || *moments.variance == 0) {
            // Point mass at mu_{n,k}: contributes only when x hits it exactly.
            cheb_term = gauss_term = (dist_exact == 0) ? 1.0 : 0.0;
        } else if (dist_exact == 0) {
            cheb_term = gauss_term = 1.0;  // Chebyshev vacuous at the center
        } else {
            const double sigma_k = std::sqrt(to_double(*moments.variance));
            const double dist = std::abs(to_double(dist_exact));
            const double ratio = sigma_k / dist;
            cheb_term = std::min(1.0, ratio * ratio);
            gauss_term = std::min(
                1.0, ratio / std::sqrt(2.0 * std::numbers::pi) *
                         std::exp(-0.5 * (dist / sigma_k) * (dist / sigma_k)));
        }
        diag.terms[static_cast<std::size_t>(k)] = cheb_term * weight;
        cheb_total += cheb_term * weight;
        gauss_total += gauss_term * weight;
    }
    diag.chebyshev_bound = cheb_total;
    diag.gaussian_form_bound = gauss_total;
    return diag;
}

namespace {

PeakHeightReport peak_report_base(std::int64_t n) {
    require_odd_prime(n, "peak_height");
    PeakHeightReport r;
    r.n = n;
    r.k = (n + 1) / 2;
    const Rational mu = ap_moments_conditional(n, r.k, true).mean;
    r.x = static_cast<std::int64_t>(std::llround(to_double(mu)));
    r.predicted_constant = 8.0 * std::numbers::sqrt2 / std::numbers::pi;
    r.gaussian_ceiling = std::sqrt(2.0 / std::numbers::pi) / 3.0;
    return r;
}

}  // namespace

PeakHeightReport peak_height_check(std::int64_t n, std::uint64_t samples,
                                   const McConfig& cfg) {
    PeakHeightReport r = peak_report_base(n);
    McStatistic stat;
    stat.kind = McStatistic::Kind::Aps;
    stat.n = n;
    stat.p = 0.5;
    const EmpiricalDist hist = mc_histogram(stat, samples, cfg);
    std::uint64_t hits = 0;
    if (r.x >= hist.support_min &&
        r.x < hist.support_min + static_cast<std::int64_t>(hist.counts.size()))
        hits = hist.counts[static_cast<std::size_t>(r.x - hist.support_min)];
    r.p_hat = static_cast<double>(hits) / static_cast<double>(samples);
    r.ci_half_width =
        1.96 * std::sqrt(std::max(r.p_hat * (1.0 - r.p_hat), 1e-300) /
                         static_cast<double>(samples));
    r.low_count_warning = hits < 100;
    if (r.low_count_warning) r.ci_half_width *= 2.0;  // widened, not trusted
    r.scaled_peak = r.p_hat * std::pow(static_cast<double>(n), 1.5);
    return r;
}

PeakHeightReport peak_height_exact(std::int64_t n) {
    PeakHeightReport r = peak_report_base(n);
    const IntegerPmf pmf = exhaustive_ap_pmf(n, Rational(1, 2));
    r.p_hat = to_double(pmf.mass_at(r.x));
    r.ci_half_width = 0.0;
    r.low_count_warning = false;
    r.scaled_peak = r.p_hat * std::pow(static_cast<double>(n), 1.5);
    return r;
}

}  // namespace limitlab
