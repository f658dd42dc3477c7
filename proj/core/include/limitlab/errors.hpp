#pragma once

#include <stdexcept>
#include <string>

namespace limitlab {

// Argument outside an operation's mathematical domain (bad n, k, p, ...).
struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

// Structurally malformed input (non-bijective permutation, ragged data, ...).
struct validation_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Request is well-formed but too large for the exact/exhaustive path.
struct resource_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A transcribed closed form left its region of validity (e.g. a count went
// negative); carries the offending modulus.
struct formula_domain_error : domain_error {
    formula_domain_error(const std::string& what, long long n)
        : domain_error(what + " (n = " + std::to_string(n) + ")"), n(n) {}
    long long n;
};

}  // namespace limitlab
