#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "limitlab/combinatorics.hpp"
#include "limitlab/counters.hpp"
#include "limitlab/distributions.hpp"
#include "limitlab/errors.hpp"
#include "oracles.hpp"

using namespace limitlab;

TEST_CASE("count_descents on permutations") {
    CHECK(count_descents(std::vector<std::int32_t>{1, 2, 3, 4}) == 0);
    CHECK(count_descents(std::vector<std::int32_t>{5, 4, 3, 2, 1}) == 4);
    CHECK(count_descents(std::vector<std::int32_t>{2, 1, 3}) == 1);
    CHECK_THROWS_AS(count_descents(std::vector<std::int32_t>{1, 1, 3}), validation_error);
    CHECK_THROWS_AS(count_descents(std::vector<std::int32_t>{0, 1, 2}), validation_error);
    CHECK_THROWS_AS(count_descents(std::vector<std::int32_t>{}), validation_error);
}

TEST_CASE("count_descents on codes") {
    CHECK(count_descents(LehmerCode{{1, 1, 1}}) == 0);
    CHECK(count_descents(LehmerCode{{3, 2, 1}}) == 2);
    CHECK_THROWS_AS(count_descents(LehmerCode{{4, 1, 1}}), validation_error);
}

TEST_CASE("enumerate_aps: counts, uniqueness, distinct elements") {
    CHECK(enumerate_aps(3).size() == 3);
    CHECK(enumerate_aps(5).size() == 10);
    CHECK_THROWS_AS(enumerate_aps(4), domain_error);

    for (std::int64_t n : {3, 5, 7, 9, 13}) {
        std::set<std::pair<int, int>> seen;
        for (const ApTriple& t : enumerate_aps(n)) {
            CHECK(t.diff >= 1);
            CHECK(t.diff <= (n - 1) / 2);
            seen.insert({t.start, t.diff});
            const int a = t.start, b = (t.start + t.diff) % n,
                      c = (t.start + 2 * t.diff) % n;
            CHECK(a != b);
            CHECK(b != c);
            CHECK(a != c);
        }
        CHECK(static_cast<std::int64_t>(seen.size()) == n * (n - 1) / 2);
    }
}

TEST_CASE("count_aps: extremes and spot subsets") {
    auto full = oracle::subset_from_mask(7, 0b1111111);
    CHECK(count_aps(full) == 21);
    auto empty = oracle::subset_from_mask(7, 0);
    CHECK(count_aps(empty) == 0);
    CHECK(count_aps(oracle::subset_from_mask(5, 0b00111)) == 1);  // {0,1,2}
    CHECK(count_aps(oracle::subset_from_mask(5, 0b01011)) == 1);  // {0,1,3}
    SubsetState even{4, {1, 1, 1, 1}};
    CHECK_THROWS_AS(count_aps(even), domain_error);
}

TEST_CASE("count_aps equals the double-sum formula on every subset of Z/5 and Z/7") {
    for (std::int64_t n : {5, 7}) {
        for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
            const auto s = oracle::subset_from_mask(n, mask);
            REQUIRE(count_aps(s) == oracle::ap_count_double_sum(s));
        }
    }
}

TEST_CASE("complement identity holds for every subset, n in {5,7,9,11,13}") {
    for (std::int64_t n : {5, 7, 9, 11, 13}) {
        for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
            const auto s = oracle::subset_from_mask(n, mask);
            const Rational both = Rational(count_aps(s)) + Rational(count_aps(s.complement()));
            REQUIRE(both == complement_identity(n, s.popcount()));
        }
    }
}

TEST_CASE("descent counts over S_n reproduce the Eulerian pmf (n <= 8)") {
    for (int n = 2; n <= 8; ++n) {
        std::vector<Int> tally(n, 0);
        std::vector<std::int32_t> perm(n);
        for (int i = 0; i < n; ++i) perm[i] = i + 1;
        Int total = 0;
        do {
            tally[count_descents(perm)] += 1;
            total += 1;
        } while (std::next_permutation(perm.begin(), perm.end()));
        const IntegerPmf pmf = eulerian_pmf(n);
        REQUIRE(pmf.probs.size() == static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k)
            REQUIRE(pmf.probs[k] == Rational(tally[k], total));
    }
}

TEST_CASE("continuous count embeds the discrete one at 0/1 weights") {
    RngStream rng(404, 0);
    for (int rep = 0; rep < 200; ++rep) {
        const auto s = sample_subset(11, 0.5, rng);
        ContinuousState c;
        c.n = s.n;
        c.weight.assign(s.member.begin(), s.member.end());
        CHECK(count_aps_continuous(c) == doctest::Approx(count_aps(s)).epsilon(1e-12));
    }
}

TEST_CASE("continuous count: constant-weight closed values") {
    ContinuousState ones{7, std::vector<double>(7, 1.0)};
    CHECK(count_aps_continuous(ones) == doctest::Approx(21.0));
    ContinuousState zeros{7, std::vector<double>(7, 0.0)};
    CHECK(count_aps_continuous(zeros) == doctest::Approx(0.0));
    ContinuousState halves{7, std::vector<double>(7, 0.5)};
    CHECK(count_aps_continuous(halves) == doctest::Approx(21.0 / 8.0));
    CHECK(count_aps_continuous(halves) ==
          doctest::Approx(oracle::ap_weight_double_sum(halves)));
}

TEST_CASE("incidence completions agree with direct recounts") {
    const std::int64_t n = 11;
    const ApIncidence inc(n);
    RngStream rng(5150, 0);
    for (int rep = 0; rep < 500; ++rep) {
        const auto s = sample_subset(n, 0.4, rng);
        for (std::int32_t v = 0; v < n; ++v) {
            if (s.member[v]) continue;
            auto with = s;
            with.member[v] = 1;
            REQUIRE(count_aps(with) - count_aps(s) == inc.completions(v, s.member));
        }
    }
}
