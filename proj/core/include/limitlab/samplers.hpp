#pragma once

#include <cstdint>
#include <vector>

#include "limitlab/rng.hpp"

namespace limitlab {

// Selection code for a permutation of {1..n}: 1 <= a[j] <= n-j for 0-based j.
struct LehmerCode {
    std::vector<std::int32_t> a;
    std::int64_t size() const { return static_cast<std::int64_t>(a.size()); }
};

// Subset of Z/nZ as a byte-per-element membership vector.
struct SubsetState {
    std::int64_t n = 0;
    std::vector<std::uint8_t> member;  // length n, values 0/1

    std::int64_t popcount() const;
    SubsetState complement() const;
};

// Real weights in [0,1] per element of Z/nZ.
struct ContinuousState {
    std::int64_t n = 0;
    std::vector<double> weight;  // length n
};

// Each a[j] uniform on {1..n-j}, mutually independent.
LehmerCode sample_lehmer(std::int64_t n, RngStream& rng);

// Bijection: position j takes the a[j]-th smallest unused value. Descents of
// the code (a[j] > a[j+1]) coincide with descents of the permutation.
std::vector<std::int32_t> lehmer_to_permutation(const LehmerCode& code);

// Independent membership with probability p per element; p in (0,1).
SubsetState sample_subset(std::int64_t n, double p, RngStream& rng);

// Uniform over the C(n,k) subsets of size k (partial Fisher-Yates).
SubsetState sample_subset_fixed_k(std::int64_t n, std::int64_t k, RngStream& rng);

// i.i.d. uniform [0,1) weights.
ContinuousState sample_continuous(std::int64_t n, RngStream& rng);

}  // namespace limitlab
