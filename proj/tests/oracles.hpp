#pragma once

// Brute-force reference implementations for the test suite. Everything here
// is written from the defining formulas, independent of the library's
// counting and enumeration paths, so disagreements point at real bugs.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <vector>

#include "limitlab/rational.hpp"
#include "limitlab/samplers.hpp"

namespace oracle {

using limitlab::Int;
using limitlab::Rational;

inline limitlab::SubsetState subset_from_mask(std::int64_t n, std::uint64_t mask) {
    limitlab::SubsetState s;
    s.n = n;
    s.member.resize(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) s.member[i] = (mask >> i) & 1;
    return s;
}

// (1/2) sum_i sum_{j=1}^{n-1} x_i x_{i+j} x_{i+2j}, straight off the
// double-sum definition (each progression hit twice, then halved).
inline std::int64_t ap_count_double_sum(const limitlab::SubsetState& s) {
    const std::int64_t n = s.n;
    std::int64_t doubled = 0;
    for (std::int64_t i = 0; i < n; ++i)
        for (std::int64_t j = 1; j < n; ++j)
            doubled += s.member[i] & s.member[(i + j) % n] & s.member[(i + 2 * j) % n];
    return doubled / 2;
}

inline double ap_weight_double_sum(const limitlab::ContinuousState& s) {
    const std::int64_t n = s.n;
    double doubled = 0.0;
    for (std::int64_t i = 0; i < n; ++i)
        for (std::int64_t j = 1; j < n; ++j)
            doubled += s.weight[i] * s.weight[(i + j) % n] * s.weight[(i + 2 * j) % n];
    return doubled / 2.0;
}

inline std::int64_t descents_of(const std::vector<std::int32_t>& perm) {
    std::int64_t d = 0;
    for (std::size_t j = 0; j + 1 < perm.size(); ++j)
        if (perm[j] > perm[j + 1]) ++d;
    return d;
}

// Mean and variance of the AP count under Bernoulli(p) membership, by a full
// 2^n sweep with exact weights.
struct ExactMoments {
    Rational mean;
    Rational variance;
};

inline ExactMoments ap_moments_by_enumeration(std::int64_t n, const Rational& p) {
    const Rational q = 1 - p;
    Rational mean = 0, second = 0;
    for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
        const auto s = subset_from_mask(n, mask);
        const std::int64_t a = ap_count_double_sum(s);
        Rational w = 1;
        for (std::int64_t i = 0; i < n; ++i) w *= s.member[i] ? p : q;
        mean += w * a;
        second += w * a * a;
    }
    return {mean, second - mean * mean};
}

// Same restricted to |S| = k (uniform over C(n,k) subsets).
inline ExactMoments conditional_moments_by_enumeration(std::int64_t n, std::int64_t k) {
    Int total = 0, sum = 0, sum_sq = 0;
    for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
        if (std::popcount(mask) != k) continue;
        const std::int64_t a = ap_count_double_sum(subset_from_mask(n, mask));
        total += 1;
        sum += a;
        sum_sq += Int(a) * a;
    }
    const Rational mean(sum, total);
    return {mean, Rational(sum_sq, total) - mean * mean};
}

// All 3-element AP sets of Z/nZ (n prime): subsets {x,y,z} with some ordering
// in arithmetic progression. For prime n these biject with the progressions.
inline std::vector<std::array<std::int32_t, 3>> ap_sets_by_definition(std::int64_t n) {
    std::vector<std::array<std::int32_t, 3>> sets;
    for (std::int32_t x = 0; x < n; ++x)
        for (std::int32_t y = x + 1; y < n; ++y)
            for (std::int32_t z = y + 1; z < n; ++z) {
                const bool ap = (x + z) % n == 2 * y % n || (x + y) % n == 2 * z % n ||
                                (y + z) % n == 2 * x % n;
                if (ap) sets.push_back({x, y, z});
            }
    return sets;
}

// Ordered AP-set pairs bucketed by overlap size.
inline std::array<std::int64_t, 4> intersection_census(std::int64_t n) {
    const auto sets = ap_sets_by_definition(n);
    std::array<std::int64_t, 4> census{};
    for (const auto& a : sets)
        for (const auto& b : sets) {
            int overlap = 0;
            for (const auto x : a)
                overlap += std::count(b.begin(), b.end(), x) > 0;
            census[static_cast<std::size_t>(overlap)]++;
        }
    return census;
}

}  // namespace oracle
