#include "limitlab/distributions.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <numbers>
#include <thread>

#include "limitlab/combinatorics.hpp"
#include "limitlab/counters.hpp"
#include "limitlab/errors.hpp"
#include "limitlab/hash.hpp"
#include "limitlab/samplers.hpp"

namespace limitlab {

Rational IntegerPmf::mass_at(std::int64_t value) const {
    if (value < support_min || value > support_max()) return Rational(0);
    return probs[static_cast<std::size_t>(value - support_min)];
}

Rational IntegerPmf::mean() const {
    Rational m = 0;
    for (std::size_t i = 0; i < probs.size(); ++i)
        m += probs[i] * Rational(support_min + static_cast<std::int64_t>(i));
    return m;
}

Rational IntegerPmf::variance() const {
    const Rational mu = mean();
    Rational m2 = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        const Rational v(support_min + static_cast<std::int64_t>(i));
        m2 += probs[i] * v * v;
    }
    return m2 - mu * mu;
}

std::vector<double> IntegerPmf::float_probs() const {
    std::vector<double> out(probs.size());
    std::transform(probs.begin(), probs.end(), out.begin(),
                   [](const Rational& q) { return to_double(q); });
    return out;
}

double EmpiricalDist::mean() const {
    if (sample_size == 0) throw domain_error("EmpiricalDist::mean: no samples");
    double s = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i)
        s += static_cast<double>(counts[i]) *
             value_at(support_min + static_cast<std::int64_t>(i));
    return s / static_cast<double>(sample_size);
}

double EmpiricalDist::variance() const {
    const double mu = mean();
    double s = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const double d = value_at(support_min + static_cast<std::int64_t>(i)) - mu;
        s += static_cast<double>(counts[i]) * d * d;
    }
    return s / static_cast<double>(sample_size);
}

double gaussian_height(const GaussianRef& ref, double x) {
    if (!(ref.sigma > 0.0)) throw domain_error("gaussian_height: sigma must be > 0");
    const double z = (x - ref.mean) / ref.sigma;
    return std::exp(-0.5 * z * z) / (std::sqrt(2.0 * std::numbers::pi) * ref.sigma);
}

IntegerPmf eulerian_pmf(std::int64_t n) {
    if (n < 1) throw domain_error("eulerian_pmf: n must be >= 1");
    if (n > 1000) throw resource_error("eulerian_pmf: n capped at 1000");
    // A(n,k) = (k+1) A(n-1,k) + (n-k) A(n-1,k-1)
    std::vector<Int> row{1};
    for (std::int64_t m = 2; m <= n; ++m) {
        std::vector<Int> next(m, 0);
        for (std::int64_t k = 0; k < m; ++k) {
            if (k < m - 1) next[k] += (k + 1) * row[k];
            if (k > 0) next[k] += (m - k) * row[k - 1];
        }
        row = std::move(next);
    }
    Int total = 0;
    for (const Int& a : row) total += a;
    IntegerPmf pmf;
    pmf.support_min = 0;
    pmf.probs.reserve(row.size());
    for (const Int& a : row) pmf.probs.emplace_back(a, total);
    return pmf;
}

JointApTable::JointApTable(std::int64_t n, bool allow_composite) : n_(n) {
    if (n < 3 || n % 2 == 0) throw domain_error("JointApTable: n must be odd and >= 3");
    if (n > 25) throw resource_error("JointApTable: 2^n sweep capped at n = 25; use Monte Carlo");
    if (!allow_composite && !is_prime(n)) throw domain_error("JointApTable: n must be prime");

    max_ap_ = n * (n - 1) / 2;
    counts_.assign(static_cast<std::size_t>((max_ap_ + 1) * (n + 1)), 0);
    const ApIncidence inc(n);

    // Reflected-Gray-code walk: step i flips bit ctz(i+1), so the AP count is
    // maintained with one incidence scan per mask.
    std::uint32_t mask = 0;
    std::int64_t ap = 0, k = 0;
    counts_[0]++;  // empty set: ap = 0, k = 0
    const std::uint64_t total = 1ull << n;
    for (std::uint64_t i = 1; i < total; ++i) {
        const int bit = std::countr_zero(i);
        const std::uint32_t flag = 1u << bit;
        if (mask & flag) {
            mask ^= flag;
            ap -= inc.completions(bit, mask);
            --k;
        } else {
            ap += inc.completions(bit, mask);
            mask ^= flag;
            ++k;
        }
        counts_[static_cast<std::size_t>(ap * (n_ + 1) + k)]++;
    }
}

IntegerPmf JointApTable::pmf(const Rational& p) const {
    if (p <= 0 || p >= 1) throw domain_error("JointApTable::pmf: p must be in (0,1)");
    const Rational q = 1 - p;
    std::vector<Rational> weight(n_ + 1);  // p^k (1-p)^(n-k)
    weight[0] = 1;
    for (std::int64_t k = 1; k <= n_; ++k) weight[k] = weight[k - 1] * p;
    Rational qpow = 1;
    for (std::int64_t k = n_ - 1; k >= 0; --k) {
        qpow *= q;
        weight[k] *= qpow;
    }
    IntegerPmf out;
    out.support_min = 0;
    out.probs.assign(static_cast<std::size_t>(max_ap_ + 1), Rational(0));
    for (std::int64_t a = 0; a <= max_ap_; ++a)
        for (std::int64_t k = 0; k <= n_; ++k)
            if (const std::uint64_t c = count(a, k))
                out.probs[static_cast<std::size_t>(a)] += Rational(c) * weight[k];
    return out;
}

IntegerPmf JointApTable::conditional_pmf(std::int64_t k) const {
    if (k < 0 || k > n_) throw domain_error("JointApTable::conditional_pmf: bad k");
    const Int denom = binomial(n_, k);
    IntegerPmf out;
    out.support_min = 0;
    out.probs.assign(static_cast<std::size_t>(max_ap_ + 1), Rational(0));
    for (std::int64_t a = 0; a <= max_ap_; ++a)
        if (const std::uint64_t c = count(a, k))
            out.probs[static_cast<std::size_t>(a)] = Rational(Int(c), denom);
    return out;
}

IntegerPmf exhaustive_ap_pmf(std::int64_t n, const Rational& p, bool allow_composite) {
    return JointApTable(n, allow_composite).pmf(p);
}

IntegerPmf exhaustive_conditional_pmf(std::int64_t n, std::int64_t k, bool allow_composite) {
    if (n < 3 || n % 2 == 0)
        throw domain_error("exhaustive_conditional_pmf: n must be odd and >= 3");
    if (k < 0 || k > n) throw domain_error("exhaustive_conditional_pmf: k must be in [0, n]");
    if (!allow_composite && !is_prime(n))
        throw domain_error("exhaustive_conditional_pmf: n must be prime");
    const Int combos = binomial(n, k);
    if (combos > 10'000'000)
        throw resource_error("exhaustive_conditional_pmf: C(n,k) > 1e7; use Monte Carlo");

    const ApIncidence inc(n);
    const std::int64_t max_ap = n * (n - 1) / 2;
    std::vector<std::uint64_t> hist(static_cast<std::size_t>(max_ap + 1), 0);

    // Depth-first over increasing positions, maintaining the AP count while
    // elements enter and leave the working mask.
    std::uint32_t mask = 0;
    std::int64_t ap = 0;
    auto recurse = [&](auto&& self, std::int64_t next, std::int64_t remaining) -> void {
        if (remaining == 0) {
            hist[static_cast<std::size_t>(ap)]++;
            return;
        }
        for (std::int64_t v = next; v <= n - remaining; ++v) {
            const std::int64_t delta = inc.completions(static_cast<std::int32_t>(v), mask);
            ap += delta;
            mask |= 1u << v;
            self(self, v + 1, remaining - 1);
            mask &= ~(1u << v);
            ap -= delta;
        }
    };
    recurse(recurse, 0, k);

    IntegerPmf out;
    out.support_min = 0;
    out.probs.reserve(hist.size());
    for (const std::uint64_t c : hist) out.probs.emplace_back(Int(c), combos);
    return out;
}

std::string McStatistic::config_string(std::uint64_t samples, std::uint64_t seed,
                                       std::uint64_t stream_base) const {
    std::string name;
    switch (kind) {
        case Kind::Descents: name = "descents|n=" + std::to_string(n); break;
        case Kind::Aps:
            name = "aps|n=" + std::to_string(n) + "|p=" + format_double(p);
            break;
        case Kind::ApsFixedK:
            name = "aps_fixed_k|n=" + std::to_string(n) + "|k=" + std::to_string(k);
            break;
        case Kind::ApsContinuous:
            name = "aps_continuous|n=" + std::to_string(n) +
                   "|bin_width=" + format_double(bin_width);
            break;
    }
    return name + "|samples=" + std::to_string(samples) + "|seed=" + std::to_string(seed) +
           "|stream=" + std::to_string(stream_base);
}

namespace {

void validate_statistic(const McStatistic& stat) {
    switch (stat.kind) {
        case McStatistic::Kind::Descents:
            if (stat.n < 1) throw domain_error("mc_histogram: descents needs n >= 1");
            break;
        case McStatistic::Kind::Aps:
            if (stat.n < 3 || stat.n % 2 == 0)
                throw domain_error("mc_histogram: aps needs odd n >= 3");
            if (!(stat.p > 0.0 && stat.p < 1.0))
                throw domain_error("mc_histogram: p must be in (0,1)");
            break;
        case McStatistic::Kind::ApsFixedK:
            if (stat.n < 3 || stat.n % 2 == 0)
                throw domain_error("mc_histogram: aps_fixed_k needs odd n >= 3");
            if (stat.k < 0 || stat.k > stat.n)
                throw domain_error("mc_histogram: k must be in [0, n]");
            break;
        case McStatistic::Kind::ApsContinuous:
            if (stat.n < 3 || stat.n % 2 == 0)
                throw domain_error("mc_histogram: aps_continuous needs odd n >= 3");
            if (!(stat.bin_width > 0.0))
                throw domain_error("mc_histogram: bin_width must be > 0");
            break;
    }
}

std::int64_t histogram_span(const McStatistic& stat) {
    switch (stat.kind) {
        case McStatistic::Kind::Descents: return stat.n;  // values 0..n-1
        case McStatistic::Kind::Aps:
        case McStatistic::Kind::ApsFixedK: return stat.n * (stat.n - 1) / 2 + 1;
        case McStatistic::Kind::ApsContinuous: {
            const double max_value = static_cast<double>(stat.n * (stat.n - 1) / 2);
            return static_cast<std::int64_t>(max_value / stat.bin_width) + 2;
        }
    }
    return 0;
}

std::int64_t draw_statistic(const McStatistic& stat, RngStream& rng) {
    switch (stat.kind) {
        case McStatistic::Kind::Descents:
            return count_descents(sample_lehmer(stat.n, rng));
        case McStatistic::Kind::Aps:
            return count_aps(sample_subset(stat.n, stat.p, rng));
        case McStatistic::Kind::ApsFixedK:
            return count_aps(sample_subset_fixed_k(stat.n, stat.k, rng));
        case McStatistic::Kind::ApsContinuous: {
            const double v = count_aps_continuous(sample_continuous(stat.n, rng));
            return static_cast<std::int64_t>(v / stat.bin_width);
        }
    }
    return 0;
}

}  // namespace

EmpiricalDist mc_histogram(const McStatistic& stat, std::uint64_t samples,
                           const McConfig& cfg) {
    if (samples < 1) throw domain_error("mc_histogram: samples must be >= 1");
    validate_statistic(stat);

    const std::uint64_t block = std::max<std::uint64_t>(cfg.block_size, 1);
    const std::uint64_t nblocks = (samples + block - 1) / block;
    const std::int64_t span = histogram_span(stat);
    const int workers =
        static_cast<int>(std::min<std::uint64_t>(std::max(cfg.workers, 1), nblocks));

    std::vector<std::vector<std::uint64_t>> partial(
        workers, std::vector<std::uint64_t>(static_cast<std::size_t>(span), 0));
    std::atomic<std::uint64_t> next_block{0};

    auto work = [&](int w) {
        auto& hist = partial[w];
        for (;;) {
            const std::uint64_t b = next_block.fetch_add(1);
            if (b >= nblocks) break;
            RngStream rng(cfg.seed, cfg.stream_base + b);
            const std::uint64_t lo = b * block;
            const std::uint64_t hi = std::min(samples, lo + block);
            for (std::uint64_t i = lo; i < hi; ++i)
                hist[static_cast<std::size_t>(draw_statistic(stat, rng))]++;
        }
    };

    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }

    std::vector<std::uint64_t> merged(static_cast<std::size_t>(span), 0);
    for (const auto& hist : partial)
        for (std::size_t i = 0; i < merged.size(); ++i) merged[i] += hist[i];

    std::int64_t lo = 0, hi = span - 1;
    while (hi > lo && merged[static_cast<std::size_t>(hi)] == 0) --hi;
    while (lo < hi && merged[static_cast<std::size_t>(lo)] == 0) ++lo;

    EmpiricalDist out;
    out.support_min = lo;
    out.counts.assign(merged.begin() + lo, merged.begin() + hi + 1);
    out.sample_size = samples;
    out.binned = stat.kind == McStatistic::Kind::ApsContinuous;
    out.bin_width = out.binned ? stat.bin_width : 1.0;
    out.provenance.seed = cfg.seed;
    out.provenance.stream_first = cfg.stream_base;
    out.provenance.stream_count = nblocks;
    out.provenance.config_hash =
        to_hex(fnv1a64(stat.config_string(samples, cfg.seed, cfg.stream_base)));
    return out;
}

std::array<Rational, 4> conditional_descent_probs() {
    // Enumerate S_4; bucket by (X_1, X_3) and tally X_2.
    std::array<std::int64_t, 4> total{};
    std::array<std::int64_t, 4> descent{};
    std::vector<std::int32_t> perm{1, 2, 3, 4};
    do {
        const int x1 = perm[0] > perm[1];
        const int x2 = perm[1] > perm[2];
        const int x3 = perm[2] > perm[3];
        // case order (1,1), (1,0), (0,1), (0,0)
        const int idx = (1 - x1) * 2 + (1 - x3);
        total[idx]++;
        descent[idx] += x2;
    } while (std::next_permutation(perm.begin(), perm.end()));
    std::array<Rational, 4> out;
    for (int i = 0; i < 4; ++i) out[i] = Rational(descent[i], total[i]);
    return out;
}

}  // namespace limitlab
