#include "limitlab/samplers.hpp"

#include <algorithm>
#include <numeric>

#include "limitlab/errors.hpp"

namespace limitlab {

std::int64_t SubsetState::popcount() const {
    return std::accumulate(member.begin(), member.end(), std::int64_t{0});
}

SubsetState SubsetState::complement() const {
    SubsetState c{n, member};
    for (auto& m : c.member) m ^= 1;
    return c;
}

LehmerCode sample_lehmer(std::int64_t n, RngStream& rng) {
    if (n < 1) throw domain_error("sample_lehmer: n must be >= 1");
    LehmerCode code;
    code.a.resize(n);
    for (std::int64_t j = 0; j < n; ++j)
        code.a[j] = static_cast<std::int32_t>(
            rng.uniform_below(static_cast<std::uint32_t>(n - j)) + 1);
    return code;
}

std::vector<std::int32_t> lehmer_to_permutation(const LehmerCode& code) {
    const std::int64_t n = code.size();
    if (n < 1) throw validation_error("lehmer_to_permutation: empty code");
    std::vector<std::int32_t> remaining(n);
    std::iota(remaining.begin(), remaining.end(), 1);
    std::vector<std::int32_t> perm(n);
    for (std::int64_t j = 0; j < n; ++j) {
        const std::int32_t a = code.a[j];
        if (a < 1 || a > n - j)
            throw validation_error("lehmer_to_permutation: code value out of range");
        perm[j] = remaining[a - 1];
        remaining.erase(remaining.begin() + (a - 1));
    }
    return perm;
}

SubsetState sample_subset(std::int64_t n, double p, RngStream& rng) {
    if (n < 1) throw domain_error("sample_subset: n must be >= 1");
    if (!(p > 0.0 && p < 1.0)) throw domain_error("sample_subset: p must be in (0,1)");
    SubsetState s;
    s.n = n;
    s.member.resize(n);
    for (std::int64_t i = 0; i < n; ++i) s.member[i] = rng.next_unit() < p ? 1 : 0;
    return s;
}

SubsetState sample_subset_fixed_k(std::int64_t n, std::int64_t k, RngStream& rng) {
    if (n < 1) throw domain_error("sample_subset_fixed_k: n must be >= 1");
    if (k < 0 || k > n) throw domain_error("sample_subset_fixed_k: k must be in [0, n]");
    std::vector<std::int32_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    SubsetState s;
    s.n = n;
    s.member.assign(n, 0);
    for (std::int64_t j = 0; j < k; ++j) {
        const std::int64_t pick =
            j + rng.uniform_below(static_cast<std::uint32_t>(n - j));
        std::swap(idx[j], idx[pick]);
        s.member[idx[j]] = 1;
    }
    return s;
}

ContinuousState sample_continuous(std::int64_t n, RngStream& rng) {
    if (n < 1) throw domain_error("sample_continuous: n must be >= 1");
    ContinuousState c;
    c.n = n;
    c.weight.resize(n);
    for (auto& w : c.weight) w = rng.next_unit();
    return c;
}

}  // namespace limitlab
