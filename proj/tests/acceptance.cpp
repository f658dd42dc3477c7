// Acceptance suite: one self-contained check per shipped guarantee, one
// [PASS]/[FAIL] line each, nonzero exit when anything fails. Tolerances are
// pinned here, not configurable.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "limitlab/combinatorics.hpp"
#include "limitlab/counters.hpp"
#include "limitlab/distributions.hpp"
#include "limitlab/errors.hpp"
#include "limitlab/metrics.hpp"
#include "limitlab/samplers.hpp"
#include "limitlab/stein.hpp"

using namespace limitlab;

namespace {

struct Harness {
    int failures = 0;
    int only = 0;  // run a single criterion when nonzero

    void criterion(int id, const std::string& label, double budget_seconds,
                   const std::function<bool(std::string&)>& body) {
        if (only != 0 && only != id) return;
        std::string detail;
        bool ok = false;
        const auto start = std::chrono::steady_clock::now();
        try {
            ok = body(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        if (secs > budget_seconds) {
            ok = false;
            detail += detail.empty() ? "" : "; ";
            detail += "over time budget";
        }
        std::printf("[%s] C%02d %s (%.2fs%s%s)\n", ok ? "PASS" : "FAIL", id,
                    label.c_str(), secs, detail.empty() ? "" : "; ",
                    detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
};

SubsetState subset_from_mask(std::int64_t n, std::uint64_t mask) {
    SubsetState s;
    s.n = n;
    s.member.resize(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) s.member[i] = (mask >> i) & 1;
    return s;
}

GaussianRef matched_gaussian(const IntegerPmf& pmf) {
    return {to_double(pmf.mean()), std::sqrt(to_double(pmf.variance()))};
}

// KS-statistic 95% quantile: the Monte Carlo noise floor for CDF distances.
double ks_noise_floor(std::uint64_t samples) {
    return 1.358 / std::sqrt(static_cast<double>(samples));
}

bool c1_eulerian_moments(std::string& detail) {
    for (std::int64_t n = 2; n <= 200; ++n) {
        const auto pmf = eulerian_pmf(n);
        if (pmf.mean() != Rational(n - 1, 2) || pmf.variance() != Rational(n + 1, 12)) {
            detail = "mismatch at n=" + std::to_string(n);
            return false;
        }
    }
    detail = "mean=(n-1)/2 and var=(n+1)/12 exact for n=2..200";
    return true;
}

bool c2_conditional_descents(std::string& detail) {
    const auto probs = conditional_descent_probs();
    detail = to_string(probs[0]) + ", " + to_string(probs[1]) + ", " +
             to_string(probs[2]) + ", " + to_string(probs[3]);
    return probs[0] == Rational(1, 6) && probs[1] == Rational(1, 2) &&
           probs[2] == Rational(1, 2) && probs[3] == Rational(5, 6);
}

bool c3_parseval_variance(std::string& detail) {
    for (const std::int64_t n : {5, 7, 11, 13, 17, 19}) {
        const JointApTable table(n);
        std::vector<Rational> ps{Rational(1, 2)};
        if (n <= 13) ps.push_back(Rational(1, 4));
        for (const Rational& p : ps) {
            const auto pmf = table.pmf(p);
            const auto closed = ap_moments_unconditional(n, p);
            if (pmf.mean() != closed.mean || pmf.variance() != closed.variance) {
                detail = "mismatch at n=" + std::to_string(n) + ", p=" + to_string(p);
                return false;
            }
        }
    }
    detail = "2^n sweeps equal the closed forms exactly up to n=19";
    return true;
}

bool c4_conditional_moments(std::string& detail) {
    for (const std::int64_t n : {7, 11, 13}) {
        for (std::int64_t k = 0; k <= n; ++k) {
            const auto pmf = exhaustive_conditional_pmf(n, k);
            const auto closed = ap_moments_conditional(n, k);
            if (pmf.mean() != closed.mean || !closed.variance ||
                pmf.variance() != *closed.variance) {
                detail = "mismatch at n=" + std::to_string(n) + ", k=" + std::to_string(k);
                return false;
            }
        }
    }
    if (exhaustive_conditional_pmf(5, 3).variance() != 0) {
        detail = "sigma^2_{5,3} != 0";
        return false;
    }
    detail = "all k for n in {7,11,13}; sigma^2_{5,3}=0 by enumeration";
    return true;
}

bool c5_complement_identity(std::string& detail) {
    for (const std::int64_t n : {5, 7, 9, 11, 13}) {
        for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
            const auto s = subset_from_mask(n, mask);
            const Rational sum =
                Rational(count_aps(s)) + Rational(count_aps(s.complement()));
            if (sum != complement_identity(n, s.popcount())) {
                detail = "mismatch at n=" + std::to_string(n) +
                         ", mask=" + std::to_string(mask);
                return false;
            }
        }
    }
    detail = "every subset, n in {5,7,9,11,13}";
    return true;
}

bool c6_intersection_table(std::string& detail) {
    for (const std::int64_t n : {7, 11, 13}) {
        const auto triples = enumerate_aps(n);
        std::vector<std::array<std::int32_t, 3>> elems;
        elems.reserve(triples.size());
        for (const auto& t : triples)
            elems.push_back({t.start, static_cast<std::int32_t>((t.start + t.diff) % n),
                             static_cast<std::int32_t>((t.start + 2 * t.diff) % n)});
        std::array<Int, 4> census{};
        for (const auto& a : elems)
            for (const auto& b : elems) {
                int overlap = 0;
                for (const auto x : a)
                    for (const auto y : b) overlap += x == y;
                census[static_cast<std::size_t>(overlap)] += 1;
            }
        const auto table = intersection_table(n);
        for (int i = 0; i < 4; ++i) {
            if (table.counts[i] != census[i]) {
                detail = "count mismatch at n=" + std::to_string(n) +
                         ", overlap=" + std::to_string(i);
                return false;
            }
        }
        if (table.total() != binomial(n, 2) * binomial(n, 2)) {
            detail = "ordered-pair total mismatch at n=" + std::to_string(n);
            return false;
        }
    }
    detail = "formulas equal brute force for n in {7,11,13}; totals C(n,2)^2";
    return true;
}

bool c7_exchangeable_pair(std::string& detail) {
    Rational worst_stated = 0;
    for (const std::int64_t n : {5, 7, 11, 13}) {
        for (std::int64_t k = 0; k <= n; ++k) {
            const auto r = exchangeable_verify(n, k);
            if (r.max_residual != 0) {
                detail = "nonzero residual at n=" + std::to_string(n) +
                         ", k=" + std::to_string(k) + ": " + to_string(r.max_residual);
                return false;
            }
            if (abs(r.max_residual_stated) > abs(worst_stated))
                worst_stated = r.max_residual_stated;
        }
    }
    detail = "residual exactly 0 with lambda=3(n-2)/(k(n-k)) for all (n,k); "
             "published lambda=3(n-k)/C(n,2) leaves residual up to " +
             to_string(worst_stated);
    return true;
}

bool c8_stein_bounds(std::string& detail) {
    const GaussianRef z{0.0, 1.0};
    auto inequality_holds = [&](const LatticeDist& w) {
        return kolmogorov(w, z) <=
               std::sqrt(2.0 / std::numbers::pi * wasserstein(w, z)) + 1e-12;
    };
    for (const std::int64_t n : {20, 50, 100, 200})
        if (!inequality_holds(LatticeDist::from_pmf(eulerian_pmf(n)).standardized())) {
            detail = "Kolm/Wass inequality failed on descents n=" + std::to_string(n);
            return false;
        }
    for (const std::int64_t n : {7, 11, 13, 17, 19})
        if (!inequality_holds(
                LatticeDist::from_pmf(exhaustive_ap_pmf(n, Rational(1, 2))).standardized())) {
            detail = "Kolm/Wass inequality failed on AP counts n=" + std::to_string(n);
            return false;
        }
    for (std::int64_t k = 4; k <= 9; ++k)
        if (!inequality_holds(
                LatticeDist::from_pmf(exhaustive_conditional_pmf(13, k)).standardized())) {
            detail = "Kolm/Wass inequality failed on conditional k=" + std::to_string(k);
            return false;
        }
    {
        McStatistic stat;
        stat.kind = McStatistic::Kind::Aps;
        stat.n = 53;
        stat.p = 0.5;
        McConfig cfg;
        cfg.seed = 7;
        const auto hist = mc_histogram(stat, 50'000, cfg);
        if (!inequality_holds(LatticeDist::from_empirical(hist).standardized())) {
            detail = "Kolm/Wass inequality failed on the empirical pair";
            return false;
        }
    }

    std::vector<double> ns, ks;
    for (std::int64_t n = 11; n <= 101; ++n) {
        if (!is_prime(n)) continue;
        ns.push_back(static_cast<double>(n));
        ks.push_back(chatterjee_bound(n, Rational(1, 2)).kolmogorov);
    }
    const auto fit = fit_loglog(ns, ks);
    std::ostringstream note;
    note << "inequality held on every pair; chatterjee slope=" << fit.slope
         << " stderr=" << fit.stderr_slope;
    detail = note.str();
    return fit.slope >= -0.35 && fit.slope <= -0.15;
}

bool c9_descents_llt_scaling(std::string& detail) {
    std::vector<double> ns{50, 100, 200, 400};
    std::vector<double> raw, scaled;
    for (const double n : ns) {
        const auto pmf = eulerian_pmf(static_cast<std::int64_t>(n));
        const auto err = llt_error(pmf, matched_gaussian(pmf));
        raw.push_back(err.raw);
        scaled.push_back(err.scaled);
    }
    const auto raw_fit = fit_loglog(ns, raw);
    const auto scaled_fit = fit_loglog(ns, scaled);
    std::ostringstream note;
    note << "raw slope=" << raw_fit.slope << " (<= -0.9), scaled slope="
         << scaled_fit.slope << " (<= -0.4), stderrs " << raw_fit.stderr_slope << "/"
         << scaled_fit.stderr_slope;
    detail = note.str();
    return raw_fit.slope <= -0.9 && scaled_fit.slope <= -0.4 &&
           raw_fit.stderr_slope <= 0.1 && scaled_fit.stderr_slope <= 0.1;
}

bool c10_no_llt_for_aps(std::string& detail) {
    // exact part: the scaled pointwise error stays bounded away from zero
    double lo = 1e9, hi = 0.0;
    for (const std::int64_t n : {11, 13, 17, 19}) {
        const auto pmf = exhaustive_ap_pmf(n, Rational(1, 2));
        const double scaled = llt_error(pmf, matched_gaussian(pmf)).scaled;
        lo = std::min(lo, scaled);
        hi = std::max(hi, scaled);
    }
    if (lo < 0.5 * hi) {
        std::ostringstream note;
        note << "scaled error decayed: min=" << lo << " < 0.5*max=" << 0.5 * hi;
        detail = note.str();
        return false;
    }

    // Monte Carlo part at the Figure-1 operating point
    McStatistic stat;
    stat.kind = McStatistic::Kind::Aps;
    stat.n = 101;
    stat.p = 0.5;
    McConfig cfg;
    cfg.seed = 7;
    const auto hist = mc_histogram(stat, 100'000, cfg);
    double max_mass = 0.0;
    for (const auto c : hist.counts)
        max_mass = std::max(max_mass,
                            static_cast<double>(c) / static_cast<double>(hist.sample_size));
    const double sigma =
        std::sqrt(to_double(ap_moments_unconditional(101, Rational(1, 2)).variance));
    const double peak = sigma * max_mass;
    const double gate = 1.5 / std::sqrt(2.0 * std::numbers::pi);
    std::ostringstream note;
    note << "scaled error in [" << lo << ", " << hi << "]; sigma*max_mass=" << peak
         << " > " << gate;
    detail = note.str();
    return peak > gate;
}

bool c11_conditional_gaussianity(std::string& detail) {
    constexpr std::int64_t n = 53;
    constexpr std::uint64_t samples = 10'000;
    const double threshold = 0.05 + ks_noise_floor(samples);
    double worst = 0.0;
    std::int64_t worst_k = 0;
    for (std::int64_t k = 20; k <= 33; ++k) {
        McStatistic stat;
        stat.kind = McStatistic::Kind::ApsFixedK;
        stat.n = n;
        stat.k = k;
        McConfig cfg;
        cfg.seed = 7;
        cfg.stream_base = static_cast<std::uint64_t>(k - 20) << 20;
        const auto hist = mc_histogram(stat, samples, cfg);
        const auto m = ap_moments_conditional(n, k);
        const double kolm = kolmogorov(
            LatticeDist::from_empirical(hist).standardized(
                to_double(m.mean), std::sqrt(to_double(*m.variance))),
            GaussianRef{0.0, 1.0});
        if (kolm > worst) {
            worst = kolm;
            worst_k = k;
        }
    }
    std::ostringstream note;
    note << "worst Kolm=" << worst << " at k=" << worst_k << " (< " << threshold << ")";
    detail = note.str();
    return worst < threshold;
}

bool c12_continuous_variant(std::string& detail) {
    constexpr std::int64_t n = 23;
    constexpr std::uint64_t samples = 100'000;
    const auto moments = ap_moments_continuous(n);
    const double mean = to_double(moments.mean);
    const double sigma = std::sqrt(to_double(moments.variance_from_moments));

    // raw draws, no histogram binning in the CDF comparison
    RngStream rng(7, 0);
    std::vector<double> values;
    values.reserve(samples);
    for (std::uint64_t i = 0; i < samples; ++i)
        values.push_back(count_aps_continuous(sample_continuous(n, rng)));
    std::sort(values.begin(), values.end());
    double kolm = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double g = normal_cdf((values[i] - mean) / sigma);
        const double lo = static_cast<double>(i) / static_cast<double>(samples);
        const double hi = static_cast<double>(i + 1) / static_cast<double>(samples);
        kolm = std::max(kolm, std::max(std::abs(lo - g), std::abs(hi - g)));
    }
    const double threshold = 0.05 + ks_noise_floor(samples);

    // The discrepancy report: both exact variance forms, no winner declared.
    std::ostringstream note;
    note << "Kolm=" << kolm << " (< " << threshold
         << "); variance forms: closed-form " << to_string(moments.variance_closed_form)
         << " vs moment-oracle " << to_string(moments.variance_from_moments)
         << " (standardization uses the oracle; sample variance matches it)";
    detail = note.str();
    return kolm < threshold && !moments.agree();
}

bool c13_fourier_round_trip(std::string& detail) {
    const auto pmf = eulerian_pmf(20);
    const auto dist = LatticeDist::from_pmf(pmf);
    const double m2 = to_double(pmf.variance() + pmf.mean() * pmf.mean());
    const auto grid = inversion_grid(1.0, m2);
    const auto profile = char_fn(dist, false, grid);
    const auto exact = pmf.float_probs();
    double worst = 0.0;
    for (std::size_t k = 0; k < exact.size(); ++k) {
        const double rec = fourier_invert(profile, 0.0, 1.0, static_cast<double>(k));
        worst = std::max(worst, std::abs(rec - exact[k]));
    }
    std::ostringstream note;
    note << "max |recovered - exact| = " << worst << " over 20 masses (< 1e-8)";
    detail = note.str();
    return worst < 1e-8;
}

bool c14_small_t_envelope(std::string& detail) {
    auto fitted = [](std::int64_t n) {
        std::vector<double> grid;
        const double t_max = std::sqrt(static_cast<double>(n)) / 4.0;
        for (int i = 1; i <= 64; ++i) grid.push_back(t_max * i / 64.0);
        return small_t_envelope(n, grid).fitted_c;
    };
    const double c11 = fitted(11);
    const double c19 = fitted(19);
    const double ratio = std::max(c11, c19) / std::min(c11, c19);
    std::ostringstream note;
    note << "C(11)=" << c11 << ", C(19)=" << c19 << ", ratio=" << ratio << " (< 2)";
    detail = note.str();
    return std::isfinite(c11) && std::isfinite(c19) && c11 > 0 && c19 > 0 && ratio < 2.0;
}

}  // namespace

int main(int argc, char** argv) {
    Harness harness;
    if (argc == 3 && std::string(argv[1]) == "--only") harness.only = std::atoi(argv[2]);

    harness.criterion(1, "exact Eulerian moments, n = 2..200", 30, c1_eulerian_moments);
    harness.criterion(2, "conditional descent probabilities from S_4", 1,
                      c2_conditional_descents);
    harness.criterion(3, "Parseval variance vs exhaustive sweeps", 300,
                      c3_parseval_variance);
    harness.criterion(4, "conditional moments vs exhaustive sweeps", 120,
                      c4_conditional_moments);
    harness.criterion(5, "complement identity over every subset", 120,
                      c5_complement_identity);
    harness.criterion(6, "intersection-table closed forms vs brute force", 10,
                      c6_intersection_table);
    harness.criterion(7, "exchangeable-pair linear identity, exact zero", 300,
                      c7_exchangeable_pair);
    harness.criterion(8, "Kolm/Wass inequality and bound scaling", 60, c8_stein_bounds);
    harness.criterion(9, "descent LLT error scaling", 120, c9_descents_llt_scaling);
    harness.criterion(10, "AP counts resist a pointwise Gaussian fit", 60,
                      c10_no_llt_for_aps);
    harness.criterion(11, "size-conditioned counts are near-Gaussian", 60,
                      c11_conditional_gaussianity);
    harness.criterion(12, "continuous statistic is near-Gaussian; variance report", 60,
                      c12_continuous_variant);
    harness.criterion(13, "Fourier inversion round trip at 1e-8", 5,
                      c13_fourier_round_trip);
    harness.criterion(14, "small-t characteristic envelope stability", 60,
                      c14_small_t_envelope);

    if (harness.failures == 0) {
        std::printf("acceptance: all criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criterion(s) failed\n", harness.failures);
    return 1;
}
