#include "limitlab/combinatorics.hpp"

#include "limitlab/errors.hpp"

namespace limitlab {

bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    if (n < 4) return true;
    if (n % 2 == 0) return false;
    for (std::int64_t d = 3; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

Int binomial(std::int64_t n, std::int64_t k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    Int result = 1;
    for (std::int64_t i = 1; i <= k; ++i) {
        result *= n - k + i;
        result /= i;
    }
    return result;
}

namespace {

void require_prime(std::int64_t n, bool allow_composite, const char* op) {
    if (!allow_composite && !is_prime(n))
        throw domain_error(std::string(op) + ": n must be prime (pass the composite "
                                             "override for a formula-unsafe run)");
}

}  // namespace

MomentSummary descent_moments(std::int64_t n) {
    if (n < 2) throw domain_error("descent_moments: n must be >= 2");
    return {Rational(n - 1, 2), Rational(n + 1, 12), true, true};
}

std::int64_t ap_total(std::int64_t n) {
    if (n < 3) throw domain_error("ap_total: n must be >= 3");
    return n * (n - 1) / 2;
}

MomentSummary ap_moments_unconditional(std::int64_t n, const Rational& p,
                                       bool allow_composite) {
    if (n < 3) throw domain_error("ap_moments_unconditional: n must be >= 3");
    if (p <= 0 || p >= 1) throw domain_error("ap_moments_unconditional: p must be in (0,1)");
    require_prime(n, allow_composite, "ap_moments_unconditional");

    const Rational q = 1 - p;
    const Rational pairs(binomial(n, 2));
    const Rational p2 = p * p;
    const Rational p3 = p2 * p;
    const Rational mean = p3 * pairs;
    const Rational variance = Rational(9, 4) * n * (n - 1) * (n - 1) * p3 * p2 * q
                            + 9 * pairs * p2 * p2 * q * q
                            + pairs * p3 * q * q * q;
    return {mean, variance, true, is_prime(n)};
}

ConditionalMoments ap_moments_conditional(std::int64_t n, std::int64_t k,
                                          bool allow_composite) {
    if (n < 3) throw domain_error("ap_moments_conditional: n must be >= 3");
    if (k < 0 || k > n) throw domain_error("ap_moments_conditional: k must be in [0, n]");
    require_prime(n, allow_composite, "ap_moments_conditional");

    ConditionalMoments out;
    out.mean = Rational(binomial(n, 2) * binomial(k, 3), binomial(n, 3));

    const Int kk = k, nn = n;
    out.variance_leading =
        Rational(kk * kk * kk * (nn - kk) * (nn - kk) * (nn - kk), 2 * nn * nn * nn * nn);

    if (n <= 4)
        throw domain_error("ap_moments_conditional: variance closed form needs n > 4");
    if (n >= 7) {
        // Exact closed form; the inner cubic vanishes identically at the
        // degenerate sizes k in {0,1,2,n-2,n-1,n}.
        const Int inner = kk * kk * kk - 3 * kk * kk * (nn - 1) - nn * (nn * nn - 3 * nn + 2)
                        + kk * (3 * nn * nn - 6 * nn + 2);
        const Int numer = -(kk - 2) * (kk - 1) * kk * inner;
        const Int denom = 2 * (nn - 4) * (nn - 3) * (nn - 2) * (nn - 2);
        out.variance = Rational(numer, denom);
    }
    // n in {5, 6}: derivation preconditions fail; variance left unset so the
    // caller is forced onto the enumeration oracle.
    return out;
}

Rational conditional_mean_gap(std::int64_t n, std::int64_t k) {
    if (n < 3) throw domain_error("conditional_mean_gap: n must be >= 3");
    if (k < 0 || k >= n) throw domain_error("conditional_mean_gap: k must be in [0, n)");
    return Rational(3 * binomial(k, 2), n - 2);
}

Int IntersectionTable::total() const { return counts[0] + counts[1] + counts[2] + counts[3]; }

IntersectionTable intersection_table(std::int64_t n) {
    if (n < 5 || n % 2 == 0) throw domain_error("intersection_table: n must be odd and >= 5");
    if (!is_prime(n)) throw domain_error("intersection_table: n must be prime");

    const Int pairs = binomial(n, 2);
    IntersectionTable t;
    t.n = n;
    t.counts[3] = pairs;
    t.counts[2] = 6 * pairs;
    t.counts[1] = pairs * (9 * n - 39) / 2;
    t.counts[0] = pairs * (Int(n) * n - 10 * n + 25) / 2;
    for (int i = 0; i < 4; ++i)
        if (t.counts[i] < 0)
            throw formula_domain_error("intersection_table: count formula negative", n);
    return t;
}

ContinuousMoments ap_moments_continuous(std::int64_t n, bool allow_composite) {
    if (n < 7) throw domain_error("ap_moments_continuous: n must be >= 7");
    require_prime(n, allow_composite, "ap_moments_continuous");

    const Int pairs = binomial(n, 2);
    ContinuousMoments out;
    out.mean = Rational(pairs, 8);

    // Transcribed closed form: (1/64) C(n,2) (n - 25/54).
    out.variance_closed_form = Rational(pairs, 64) * (Rational(n) - Rational(25, 54));

    // Independent route: E[Abar^2] = sum_i N_i (1/2)^(6-2i) (1/3)^i, where N_i
    // counts ordered triple pairs sharing i elements and each shared element
    // contributes E[x^2] = 1/3 instead of E[x]^2.
    const IntersectionTable table = intersection_table(n);
    Rational second_moment = 0;
    Int three_pow = 1;
    for (int i = 0; i <= 3; ++i) {
        second_moment += Rational(table.counts[i], (Int(1) << (6 - 2 * i)) * three_pow);
        three_pow *= 3;
    }
    out.variance_from_moments = second_moment - out.mean * out.mean;
    return out;
}

Rational complement_identity(std::int64_t n, std::int64_t k) {
    if (n <= 3 || n % 2 == 0) throw domain_error("complement_identity: n must be odd and > 3");
    if (k < 0 || k > n) throw domain_error("complement_identity: k must be in [0, n]");
    const Int kk = k, nn = n;
    return Rational(3 * kk * (kk - 1) + 3 * (nn - kk) * (nn - kk - 1) - nn * (nn - 1), 4);
}

Int extension_count(std::int64_t n, int i) {
    if (n < 3 || n % 2 == 0) throw domain_error("extension_count: n must be odd and >= 3");
    if (!is_prime(n)) throw domain_error("extension_count: n must be prime");
    switch (i) {
        case 0: return binomial(n, 2);
        case 1: return Int(3) * (n - 1) / 2;
        case 2: return 3;
        case 3: return 1;
        default: throw domain_error("extension_count: i must be in 0..3");
    }
}

}  // namespace limitlab
