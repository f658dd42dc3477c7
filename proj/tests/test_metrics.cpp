#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "limitlab/combinatorics.hpp"
#include "limitlab/distributions.hpp"
#include "limitlab/errors.hpp"
#include "limitlab/metrics.hpp"

using namespace limitlab;

namespace {

// Normal density sampled at integers and renormalized, as an exact pmf.
IntegerPmf discretized_gaussian(double mu, double sigma) {
    const std::int64_t lo = static_cast<std::int64_t>(std::floor(mu - 8 * sigma));
    const std::int64_t hi = static_cast<std::int64_t>(std::ceil(mu + 8 * sigma));
    IntegerPmf pmf;
    pmf.support_min = lo;
    Rational total = 0;
    for (std::int64_t k = lo; k <= hi; ++k) {
        const Rational w(gaussian_height({mu, sigma}, static_cast<double>(k)));
        pmf.probs.push_back(w);
        total += w;
    }
    for (auto& q : pmf.probs) q /= total;
    return pmf;
}

IntegerPmf point_mass(std::int64_t at) {
    IntegerPmf pmf;
    pmf.support_min = at;
    pmf.probs = {Rational(1)};
    return pmf;
}

}  // namespace

TEST_CASE("normal cdf sanity") {
    CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-12));
    CHECK(normal_cdf(-8.0) == doctest::Approx(6.22096e-16).epsilon(1e-3));
}

TEST_CASE("llt_error: discretized Gaussian against itself is tiny") {
    const double sigma = 50.0;
    const auto pmf = discretized_gaussian(0.0, sigma);
    const auto err = llt_error(pmf, {0.0, sigma});
    CHECK(err.scaled < 1e-3);
    CHECK(err.raw == doctest::Approx(err.scaled / sigma));
}

TEST_CASE("llt_error: descents shrink with n, AP counts do not vanish") {
    auto scaled_at = [](std::int64_t n) {
        const auto pmf = eulerian_pmf(n);
        const auto m = descent_moments(n);
        const GaussianRef ref{to_double(m.mean), std::sqrt(to_double(m.variance))};
        return llt_error(pmf, ref).scaled;
    };
    const double at100 = scaled_at(100);
    const double at200 = scaled_at(200);
    CHECK(at100 < 0.01);
    CHECK(at200 < at100);

    const auto ap = exhaustive_ap_pmf(11, Rational(1, 2));
    const GaussianRef ref{to_double(ap.mean()), std::sqrt(to_double(ap.variance()))};
    CHECK(llt_error(ap, ref).scaled > 0.1);

    CHECK_THROWS_AS(llt_error(IntegerPmf{}, ref), domain_error);
}

TEST_CASE("kolmogorov distances") {
    const auto a = LatticeDist::from_pmf(eulerian_pmf(8));
    CHECK(kolmogorov(a, a) == 0.0);
    CHECK(kolmogorov(LatticeDist::from_pmf(point_mass(0)),
                     LatticeDist::from_pmf(point_mass(1))) == doctest::Approx(1.0));
    // point mass at 0 vs standard normal: sup gap is 1/2 at the jump
    CHECK(kolmogorov(LatticeDist::from_pmf(point_mass(0)), GaussianRef{0.0, 1.0}) ==
          doctest::Approx(0.5));
    // Standardized Eulerian vs the standard normal: the sup distance sits at
    // the lattice jumps, about half the largest atom (0.4/sigma/2 here).
    const auto pmf100 = eulerian_pmf(100);
    const auto z = LatticeDist::from_pmf(pmf100).standardized();
    const double biggest = *std::max_element(z.ps.begin(), z.ps.end());
    const double kolm = kolmogorov(z, GaussianRef{0.0, 1.0});
    CHECK(kolm < 0.08);
    CHECK(kolm == doctest::Approx(biggest / 2).epsilon(0.05));
}

TEST_CASE("wasserstein distances") {
    const auto a = LatticeDist::from_pmf(eulerian_pmf(8));
    CHECK(wasserstein(a, a) == 0.0);
    CHECK(wasserstein(LatticeDist::from_pmf(point_mass(0)),
                      LatticeDist::from_pmf(point_mass(7))) == doctest::Approx(7.0));
    // E|Z| = sqrt(2/pi): transport cost from a point mass at the mean
    CHECK(wasserstein(LatticeDist::from_pmf(point_mass(0)), GaussianRef{0.0, 1.0}) ==
          doctest::Approx(std::sqrt(2.0 / std::numbers::pi)).epsilon(1e-9));
    // scale equivariance of the Gaussian path
    CHECK(wasserstein(LatticeDist::from_pmf(point_mass(5)), GaussianRef{5.0, 3.0}) ==
          doctest::Approx(3.0 * std::sqrt(2.0 / std::numbers::pi)).epsilon(1e-9));
}

TEST_CASE("Kolm <= sqrt((2/pi) Wass) against the standard normal") {
    const GaussianRef z{0.0, 1.0};
    for (std::int64_t n : {10, 20, 50}) {
        const auto w = LatticeDist::from_pmf(eulerian_pmf(n)).standardized();
        CHECK(kolmogorov(w, z) <= std::sqrt(2.0 / std::numbers::pi * wasserstein(w, z)));
    }
    for (std::int64_t n : {7, 11, 13}) {
        const auto w =
            LatticeDist::from_pmf(exhaustive_ap_pmf(n, Rational(1, 2))).standardized();
        CHECK(kolmogorov(w, z) <= std::sqrt(2.0 / std::numbers::pi * wasserstein(w, z)));
    }
}

TEST_CASE("char_fn basics") {
    const auto dist = LatticeDist::from_pmf(eulerian_pmf(30));
    std::vector<double> grid;
    for (int i = -40; i <= 40; ++i) grid.push_back(i * 0.1);
    const auto profile = char_fn(dist, true, grid);

    REQUIRE(profile.phi.size() == grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        CHECK(std::abs(profile.phi[j]) <= 1.0 + 1e-12);
        if (grid[j] == 0.0) CHECK(std::abs(profile.phi[j] - 1.0) < 1e-15);
    }
    // conjugate symmetry and vanishing imaginary part (Eulerian pmf is symmetric)
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const std::size_t mirror = grid.size() - 1 - j;
        CHECK(profile.phi[j].real() == doctest::Approx(profile.phi[mirror].real()));
        CHECK(profile.phi[j].imag() == doctest::Approx(-profile.phi[mirror].imag()));
        CHECK(std::abs(profile.phi[j].imag()) < 1e-12);
    }
    CHECK_THROWS_AS(char_fn(dist, true, std::span<const double>{}), domain_error);
}

TEST_CASE("standardized Eulerian char fn decays like exp(-c t^2) with c > 0") {
    const auto z = LatticeDist::from_pmf(eulerian_pmf(100)).standardized();
    std::vector<double> grid;
    for (int i = 0; i <= 20; ++i) grid.push_back(1.0 + 2.0 * i / 20.0);
    const auto profile = char_fn(z, false, grid);
    double c = 1e9;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double mag = std::abs(profile.phi[j]);
        REQUIRE(mag > 0.0);
        c = std::min(c, -std::log(mag) / (grid[j] * grid[j]));
    }
    CHECK(c > 0.1);
}

TEST_CASE("bernoulli characteristic bound") {
    for (const double p : {1.0 / 6.0, 0.5, 5.0 / 6.0}) {
        for (int i = -499; i <= 499; ++i) {
            const double theta = i * std::numbers::pi / 500.0;
            REQUIRE(bernoulli_cf_abs(p, theta) <= bernoulli_cf_bound(p, theta) + 1e-12);
        }
        // cross-check the modulus against the generic char_fn machinery
        IntegerPmf bern;
        bern.support_min = 0;
        bern.probs = {Rational(1.0 - p), Rational(p)};
        const auto dist = LatticeDist::from_pmf(bern);
        const auto profile = char_fn(dist, false, std::vector<double>{0.7});
        CHECK(std::abs(profile.phi[0]) == doctest::Approx(bernoulli_cf_abs(p, 0.7)));
    }
}

TEST_CASE("fourier inversion round trips") {
    // fair Bernoulli on {0,1}
    {
        IntegerPmf bern;
        bern.support_min = 0;
        bern.probs = {Rational(1, 2), Rational(1, 2)};
        const auto dist = LatticeDist::from_pmf(bern);
        const auto grid = inversion_grid(1.0, 1.0);
        const auto profile = char_fn(dist, false, grid);
        CHECK(fourier_invert(profile, 0.0, 1.0, 0.0) == doctest::Approx(0.5).epsilon(1e-6));
        CHECK(fourier_invert(profile, 0.0, 1.0, 1.0) == doctest::Approx(0.5).epsilon(1e-6));
    }
    // all twenty Eulerian masses within 1e-8
    {
        const auto pmf = eulerian_pmf(20);
        const auto dist = LatticeDist::from_pmf(pmf);
        const double m2 = to_double(pmf.variance() + pmf.mean() * pmf.mean());
        const auto grid = inversion_grid(1.0, m2);
        const auto profile = char_fn(dist, false, grid);
        const auto exact = pmf.float_probs();
        for (std::size_t k = 0; k < exact.size(); ++k) {
            const double rec = fourier_invert(profile, 0.0, 1.0, static_cast<double>(k));
            REQUIRE(std::abs(rec - exact[k]) < 1e-8);
        }
    }
    // point mass: recovered 1 at the point, < 1e-8 elsewhere
    {
        const auto dist = LatticeDist::from_pmf(point_mass(4));
        const auto grid = inversion_grid(1.0, 16.0);
        const auto profile = char_fn(dist, false, grid);
        CHECK(fourier_invert(profile, 0.0, 1.0, 4.0) == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(std::abs(fourier_invert(profile, 0.0, 1.0, 5.0)) < 1e-8);
        CHECK(std::abs(fourier_invert(profile, 0.0, 1.0, -3.0)) < 1e-8);
    }
    // a grid that stops short of [-pi b, pi b] is rejected
    {
        const auto dist = LatticeDist::from_pmf(point_mass(0));
        std::vector<double> grid;
        for (int i = -100; i <= 100; ++i) grid.push_back(i * 0.01);
        const auto profile = char_fn(dist, false, grid);
        CHECK_THROWS_AS(fourier_invert(profile, 0.0, 1.0, 0.0), domain_error);
    }
}

TEST_CASE("small-t envelope at n = 11: finite and grid-stable") {
    auto make_grid = [](std::int64_t n, int steps) {
        std::vector<double> grid;
        const double t_max = std::sqrt(static_cast<double>(n)) / 4.0;
        for (int i = 1; i <= steps; ++i)
            grid.push_back(t_max * static_cast<double>(i) / steps);
        return grid;
    };
    const auto coarse = small_t_envelope(11, make_grid(11, 40));
    const auto fine = small_t_envelope(11, make_grid(11, 160));
    CHECK(std::isfinite(coarse.fitted_c));
    CHECK(coarse.fitted_c > 0.0);
    CHECK(fine.fitted_c >= coarse.fitted_c - 1e-12);  // finer grid can only see more
    CHECK(fine.fitted_c <= coarse.fitted_c * 1.5);

    std::vector<double> bad{-0.5};
    CHECK_THROWS_AS(small_t_envelope(11, bad), domain_error);
}

TEST_CASE("log-log slope fits") {
    std::vector<double> ns{10, 20, 40, 80};
    std::vector<double> flat{3.0, 3.0, 3.0, 3.0};
    const auto fit_flat = fit_loglog(ns, flat);
    CHECK(fit_flat.slope == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::abs(fit_flat.slope) <= fit_flat.stderr_slope + 1e-12);

    std::vector<double> quad(ns.size());
    for (std::size_t i = 0; i < ns.size(); ++i) quad[i] = 5.0 / (ns[i] * ns[i]);
    const auto fit_quad = fit_loglog(ns, quad);
    CHECK(fit_quad.slope == doctest::Approx(-2.0).epsilon(1e-10));
    CHECK(fit_quad.stderr_slope < 1e-10);

    std::vector<double> two{1.0, 2.0};
    CHECK_THROWS_AS(fit_loglog(two, two), domain_error);
}
