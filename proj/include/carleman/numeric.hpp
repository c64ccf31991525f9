#pragma once

// Scalar types shared by every module: exact rationals (GMP) and
// runtime-precision binary floats (MPFR).

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace carleman {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;
using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                           boost::multiprecision::et_off>;

/// Malformed or out-of-contract input. The CLI maps this to exit code 2.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when an exact (rational) computation would need an irrational value,
/// e.g. exp(1/2) in rational mode.
class NotExactError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

inline constexpr unsigned kDefaultPrecisionBits = 256;
inline constexpr unsigned kMinPrecisionBits = 64;

/// Sets the mantissa used for Real values created afterwards. Returns the
/// mantissa actually obtained (never smaller than requested).
unsigned set_precision_bits(unsigned bits);

/// Mantissa of a freshly constructed Real.
unsigned precision_bits();

/// Significant decimal digits printed for Real values at the current precision.
unsigned output_digits();

/// Parses "12", "-1.25", "3e-4", "2.5E+3" or "25/12" into an exact rational.
Rational parse_rational(std::string_view text);

/// Integer string for integers, "p/q" otherwise.
std::string format_rational(const Rational& value);

/// Scientific notation with output_digits() significant digits.
std::string format_real(const Real& value);

Real to_real(const Rational& value);

/// Exact rational r with r^degree == value, if one exists.
std::optional<Rational> exact_root(const Rational& value, unsigned degree);

Rational pow_int(const Rational& base, unsigned exponent);

Integer factorial(unsigned n);

Real ln(const Rational& value);

/// 2^{-exponent} as a Real.
Real relative_tolerance(unsigned exponent);

/// One-sided check: actual <= bound * (1 + tol).
inline bool within_bound(const Real& actual, const Real& bound, const Real& tol) {
    return actual <= bound * (1 + tol);
}

/// actual / bound, with 0/0 reported as 0 and x/0 (x > 0) as +inf.
Real safe_ratio(const Real& actual, const Real& bound);

/// A value that is exact when possible: `approx` is always set, `exact` only
/// for rationals.
struct Number {
    Real approx;
    std::optional<Rational> exact;

    static Number of(const Rational& r) { return {to_real(r), r}; }
    static Number of(const Real& x) { return {x, std::nullopt}; }
    bool is_exact() const { return exact.has_value(); }
};

/// parse_rational, plus the named constants "e", "cosh(1)" and "sinh(1)"
/// (inexact).
Number parse_number(std::string_view text);

/// format_rational for exact numbers, format_real otherwise.
std::string format_number(const Number& value);

/// RAII guard restoring the previous precision.
class PrecisionScope {
public:
    explicit PrecisionScope(unsigned bits) : saved_(precision_bits()) { set_precision_bits(bits); }
    ~PrecisionScope() { set_precision_bits(saved_); }
    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;

private:
    unsigned saved_;
};

}  // namespace carleman
