#include "verify.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>

#include "limitlab/combinatorics.hpp"
#include "limitlab/counters.hpp"
#include "limitlab/distributions.hpp"
#include "limitlab/errors.hpp"
#include "limitlab/metrics.hpp"
#include "limitlab/stein.hpp"

namespace limitlab::cli {

namespace {

struct Runner {
    int failures = 0;

    void check(const std::string& name, const std::function<bool()>& body) {
        bool ok = false;
        std::string note;
        try {
            ok = body();
        } catch (const std::exception& e) {
            note = std::string(" (") + e.what() + ")";
        }
        std::printf("[%s] %s%s\n", ok ? "ok" : "FAIL", name.c_str(), note.c_str());
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

void suite_identities(Runner& r) {
    for (const std::int64_t n : {5, 7, 9, 11, 13}) {
        r.check("complement identity exhaustive, n=" + std::to_string(n), [n] {
            for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
                const auto s = subset_from_mask(n, mask);
                const Rational sum =
                    Rational(count_aps(s)) + Rational(count_aps(s.complement()));
                if (sum != complement_identity(n, s.popcount())) return false;
            }
            return true;
        });
    }
    for (const std::int64_t n : {7, 11, 13}) {
        r.check("intersection table vs ordered-pair census, n=" + std::to_string(n), [n] {
            const auto triples = enumerate_aps(n);
            std::vector<std::array<std::int32_t, 3>> elems;
            for (const auto& t : triples)
                elems.push_back({t.start, static_cast<std::int32_t>((t.start + t.diff) % n),
                                 static_cast<std::int32_t>((t.start + 2 * t.diff) % n)});
            std::array<Int, 4> census{};
            for (const auto& a : elems)
                for (const auto& b : elems) {
                    int overlap = 0;
                    for (const auto x : a)
                        for (const auto y : b)
                            overlap += x == y;
                    census[static_cast<std::size_t>(overlap)] += 1;
                }
            const auto table = intersection_table(n);
            for (int i = 0; i < 4; ++i)
                if (table.counts[i] != census[i]) return false;
            return table.total() == binomial(n, 2) * binomial(n, 2);
        });
    }
    r.check("extension counts f(i) at n in {7, 11, 13}", [] {
        for (const std::int64_t n : {7, 11, 13}) {
            const auto triples = enumerate_aps(n);
            Int through_zero = 0, through_pair = 0;
            for (const auto& t : triples) {
                const std::array<std::int64_t, 3> e{
                    t.start, (t.start + t.diff) % n, (t.start + 2 * t.diff) % n};
                bool has0 = false, has1 = false;
                for (const auto x : e) {
                    has0 |= x == 0;
                    has1 |= x == 1;
                }
                through_zero += has0;
                through_pair += has0 && has1;
            }
            if (extension_count(n, 1) != through_zero) return false;
            if (extension_count(n, 2) != through_pair) return false;
            if (extension_count(n, 0) != Int(triples.size())) return false;
            if (extension_count(n, 3) != 1) return false;
        }
        return true;
    });
}

void suite_moments(Runner& r) {
    r.check("eulerian moments exact, n = 2..200", [] {
        for (std::int64_t n = 2; n <= 200; ++n) {
            const auto pmf = eulerian_pmf(n);
            const auto m = descent_moments(n);
            if (pmf.mean() != m.mean || pmf.variance() != m.variance) return false;
        }
        return true;
    });
    for (const std::int64_t n : {5, 7, 11, 13}) {
        r.check("Parseval variance vs 2^n sweep, n=" + std::to_string(n), [n] {
            for (const Rational p : {Rational(1, 2), Rational(1, 4)}) {
                const auto pmf = exhaustive_ap_pmf(n, p);
                const auto closed = ap_moments_unconditional(n, p);
                if (pmf.mean() != closed.mean) return false;
                if (pmf.variance() != closed.variance) return false;
            }
            return true;
        });
    }
    for (const std::int64_t n : {7, 11, 13}) {
        r.check("conditional moments vs C(n,k) sweeps, n=" + std::to_string(n), [n] {
            for (std::int64_t k = 0; k <= n; ++k) {
                const auto pmf = exhaustive_conditional_pmf(n, k);
                const auto closed = ap_moments_conditional(n, k);
                if (pmf.mean() != closed.mean) return false;
                if (!closed.variance || pmf.variance() != *closed.variance) return false;
            }
            return true;
        });
    }
    r.check("sigma_{5,3} = 0 by enumeration", [] {
        return exhaustive_conditional_pmf(5, 3).variance() == 0;
    });
    r.check("continuous-variance discrepancy is reported, ratio near 3/2", [] {
        const auto m = ap_moments_continuous(23);
        if (m.agree()) return false;  // the two routes genuinely differ
        const double ratio = to_double(m.variance_from_moments) / to_double(m.variance_closed_form);
        return ratio > 1.3 && ratio < 1.6;
    });
}

void suite_stein(Runner& r) {
    for (const std::int64_t n : {5, 7, 11, 13}) {
        r.check("exchangeable-pair residual exactly 0, n=" + std::to_string(n), [n] {
            for (std::int64_t k = 0; k <= n; ++k)
                if (exchangeable_verify(n, k).max_residual != 0) return false;
            return true;
        });
    }
    r.check("dependency degree bound holds, n in {7..101}", [] {
        for (std::int64_t n = 7; n <= 101; n += 2) {
            if (!is_prime(n)) continue;
            const auto g = dependency_graph(n);
            if (g.max_degree > 9 * (n - 1) / 2) return false;
            if (g.vertex_count != n * (n - 1) / 2) return false;
        }
        return true;
    });
    r.check("chatterjee bound tighter with exact moments", [] {
        for (const std::int64_t n : {11, 53, 101}) {
            if (!(chatterjee_bound(n, Rational(1, 2), true).wasserstein <
                  chatterjee_bound(n, Rational(1, 2), false).wasserstein))
                return false;
        }
        return true;
    });
    r.check("gap diagnostic upper-bounds the exact pmf at n = 13", [] {
        const auto pmf = exhaustive_ap_pmf(13, Rational(1, 2));
        for (std::int64_t x = 0; x <= pmf.support_max(); ++x) {
            const auto diag = gap_diagnostic(13, x);
            if (diag.chebyshev_bound + 1e-12 < to_double(pmf.mass_at(x))) return false;
        }
        return true;
    });
}

void suite_metrics(Runner& r) {
    r.check("conditional descent probabilities (1/6, 1/2, 1/2, 5/6)", [] {
        const auto probs = conditional_descent_probs();
        return probs[0] == Rational(1, 6) && probs[1] == Rational(1, 2) &&
               probs[2] == Rational(1, 2) && probs[3] == Rational(5, 6);
    });
    r.check("Kolm <= sqrt((2/pi) Wass) on standardized pairs", [] {
        const GaussianRef z{0.0, 1.0};
        for (const std::int64_t n : {20, 50, 100}) {
            const auto w = LatticeDist::from_pmf(eulerian_pmf(n)).standardized();
            if (kolmogorov(w, z) >
                std::sqrt(2.0 / std::numbers::pi * wasserstein(w, z)) + 1e-12)
                return false;
        }
        for (const std::int64_t n : {7, 11, 13}) {
            const auto w =
                LatticeDist::from_pmf(exhaustive_ap_pmf(n, Rational(1, 2))).standardized();
            if (kolmogorov(w, z) >
                std::sqrt(2.0 / std::numbers::pi * wasserstein(w, z)) + 1e-12)
                return false;
        }
        return true;
    });
    r.check("fourier round trip on the n = 20 descent pmf, 1e-8", [] {
        const auto pmf = eulerian_pmf(20);
        const auto dist = LatticeDist::from_pmf(pmf);
        const double m2 = to_double(pmf.variance() + pmf.mean() * pmf.mean());
        const auto grid = inversion_grid(1.0, m2);
        const auto profile = char_fn(dist, false, grid);
        const auto exact = pmf.float_probs();
        for (std::size_t k = 0; k < exact.size(); ++k) {
            const double rec = fourier_invert(profile, 0.0, 1.0, static_cast<double>(k));
            if (std::abs(rec - exact[k]) >= 1e-8) return false;
        }
        return true;
    });
    r.check("bernoulli modulus bound on theta in (-pi, pi)", [] {
        for (const double p : {1.0 / 6.0, 0.5, 5.0 / 6.0})
            for (int i = -499; i <= 499; ++i) {
                const double theta = i * std::numbers::pi / 500.0;
                if (bernoulli_cf_abs(p, theta) > bernoulli_cf_bound(p, theta) + 1e-12)
                    return false;
            }
        return true;
    });
    r.check("small-t envelope finite at n = 11", [] {
        std::vector<double> grid;
        const double t_max = std::sqrt(11.0) / 4.0;
        for (int i = 1; i <= 48; ++i) grid.push_back(t_max * i / 48.0);
        const auto report = small_t_envelope(11, grid);
        return std::isfinite(report.fitted_c) && report.fitted_c > 0.0;
    });
}

}  // namespace

int run_verify_suite(const std::string& suite) {
    Runner runner;
    const bool all = suite == "all";
    if (suite == "identities" || all) suite_identities(runner);
    if (suite == "moments" || all) suite_moments(runner);
    if (suite == "stein" || all) suite_stein(runner);
    if (suite == "metrics" || all) suite_metrics(runner);
    if (!all && suite != "identities" && suite != "moments" && suite != "stein" &&
        suite != "metrics")
        throw domain_error("unknown suite: " + suite +
                           " (expected identities|moments|stein|metrics|all)");
    std::printf("%s: %d check(s) failed\n", suite.c_str(), runner.failures);
    return runner.failures;
}

}  // namespace limitlab::cli
