#pragma once

#include <cstdint>
#include <vector>

#include "limitlab/samplers.hpp"

namespace limitlab {

// Canonical 3-term progression {start, start+diff, start+2*diff} in Z/nZ.
// diff is restricted to 1..(n-1)/2 so each unordered progression appears once
// ((a, d) and (a+2d, -d) describe the same one).
struct ApTriple {
    std::int32_t start;
    std::int32_t diff;
};

// All C(n,2) canonical triples of Z/nZ; n odd >= 3.
std::vector<ApTriple> enumerate_aps(std::int64_t n);

// Number of indices j with perm[j] > perm[j+1]. Validates the bijection.
std::int64_t count_descents(const std::vector<std::int32_t>& perm);

// Same statistic straight off the selection code (a[j] > a[j+1]).
std::int64_t count_descents(const LehmerCode& code);

// Canonical 3-AP triples fully contained in the subset; n odd.
std::int64_t count_aps(const SubsetState& s);

// Sum over canonical triples of the product of the three weights; n odd.
double count_aps_continuous(const ContinuousState& s);

// For each element v, the other two elements of every triple through v.
// Shared by the incremental exhaustive enumerators.
class ApIncidence {
public:
    explicit ApIncidence(std::int64_t n);

    std::int64_t n() const { return n_; }
    std::int64_t triple_count() const { return n_ * (n_ - 1) / 2; }

    // Number of triples through v whose other two elements are in the mask.
    std::int64_t completions(std::int32_t v, std::uint32_t mask) const;
    std::int64_t completions(std::int32_t v, const std::vector<std::uint8_t>& member) const;

private:
    std::int64_t n_;
    std::vector<std::pair<std::int32_t, std::int32_t>> pairs_;  // flattened per-element lists
    std::vector<std::int32_t> offset_;                          // n+1 entries into pairs_
};

}  // namespace limitlab
