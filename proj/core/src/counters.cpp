#include "limitlab/counters.hpp"

#include <algorithm>

#include "limitlab/errors.hpp"

namespace limitlab {

namespace {

void require_odd(std::int64_t n, const char* op) {
    if (n < 3 || n % 2 == 0)
        throw domain_error(std::string(op) + ": n must be odd and >= 3");
}

}  // namespace

std::vector<ApTriple> enumerate_aps(std::int64_t n) {
    require_odd(n, "enumerate_aps");
    std::vector<ApTriple> triples;
    triples.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
    for (std::int32_t d = 1; d <= (n - 1) / 2; ++d)
        for (std::int32_t a = 0; a < n; ++a)
            triples.push_back({a, d});
    return triples;
}

std::int64_t count_descents(const std::vector<std::int32_t>& perm) {
    const std::int64_t n = static_cast<std::int64_t>(perm.size());
    if (n < 1) throw validation_error("count_descents: empty permutation");
    std::vector<std::uint8_t> seen(n, 0);
    for (const std::int32_t v : perm) {
        if (v < 1 || v > n || seen[v - 1])
            throw validation_error("count_descents: not a permutation of {1..n}");
        seen[v - 1] = 1;
    }
    std::int64_t descents = 0;
    for (std::int64_t j = 0; j + 1 < n; ++j)
        if (perm[j] > perm[j + 1]) ++descents;
    return descents;
}

std::int64_t count_descents(const LehmerCode& code) {
    const std::int64_t n = code.size();
    if (n < 1) throw validation_error("count_descents: empty code");
    for (std::int64_t j = 0; j < n; ++j)
        if (code.a[j] < 1 || code.a[j] > n - j)
            throw validation_error("count_descents: code value out of range");
    std::int64_t descents = 0;
    for (std::int64_t j = 0; j + 1 < n; ++j)
        if (code.a[j] > code.a[j + 1]) ++descents;
    return descents;
}

std::int64_t count_aps(const SubsetState& s) {
    require_odd(s.n, "count_aps");
    const std::int64_t n = s.n;
    std::int64_t count = 0;
    for (std::int64_t d = 1; d <= (n - 1) / 2; ++d) {
        for (std::int64_t a = 0; a < n; ++a) {
            const std::int64_t b = a + d >= n ? a + d - n : a + d;
            std::int64_t c = b + d;
            if (c >= n) c -= n;
            count += s.member[a] & s.member[b] & s.member[c];
        }
    }
    return count;
}

double count_aps_continuous(const ContinuousState& s) {
    require_odd(s.n, "count_aps_continuous");
    const std::int64_t n = s.n;
    double total = 0.0;
    for (std::int64_t d = 1; d <= (n - 1) / 2; ++d) {
        for (std::int64_t a = 0; a < n; ++a) {
            const std::int64_t b = a + d >= n ? a + d - n : a + d;
            std::int64_t c = b + d;
            if (c >= n) c -= n;
            total += s.weight[a] * s.weight[b] * s.weight[c];
        }
    }
    return total;
}

ApIncidence::ApIncidence(std::int64_t n) : n_(n) {
    require_odd(n, "ApIncidence");
    std::vector<std::vector<std::pair<std::int32_t, std::int32_t>>> lists(n);
    for (const ApTriple& t : enumerate_aps(n)) {
        const std::int32_t a = t.start;
        const std::int32_t b = static_cast<std::int32_t>((t.start + t.diff) % n);
        const std::int32_t c = static_cast<std::int32_t>((t.start + 2 * t.diff) % n);
        lists[a].emplace_back(b, c);
        lists[b].emplace_back(a, c);
        lists[c].emplace_back(a, b);
    }
    offset_.resize(n + 1, 0);
    for (std::int64_t v = 0; v < n; ++v)
        offset_[v + 1] = offset_[v] + static_cast<std::int32_t>(lists[v].size());
    pairs_.reserve(offset_[n]);
    for (auto& l : lists) pairs_.insert(pairs_.end(), l.begin(), l.end());
}

std::int64_t ApIncidence::completions(std::int32_t v, std::uint32_t mask) const {
    std::int64_t hits = 0;
    for (std::int32_t i = offset_[v]; i < offset_[v + 1]; ++i) {
        const auto& [x, y] = pairs_[i];
        hits += (mask >> x) & (mask >> y) & 1u;
    }
    return hits;
}

std::int64_t ApIncidence::completions(std::int32_t v,
                                      const std::vector<std::uint8_t>& member) const {
    std::int64_t hits = 0;
    for (std::int32_t i = offset_[v]; i < offset_[v + 1]; ++i) {
        const auto& [x, y] = pairs_[i];
        hits += member[x] & member[y];
    }
    return hits;
}

}  // namespace limitlab
