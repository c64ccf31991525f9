#include "carleman/numeric.hpp"

#include <cctype>
#include <cmath>
#include <limits>

namespace carleman {

unsigned set_precision_bits(unsigned bits) {
    if (bits < kMinPrecisionBits) {
        throw InputError("precision must be at least " + std::to_string(kMinPrecisionBits) + " bits");
    }
    // Boost configures MPFR through decimal digits; pick the smallest digit
    // count whose mantissa covers the request.
    auto digits = static_cast<unsigned>(std::floor(bits * 0.30102999566398120));
    for (;; ++digits) {
        Real::default_precision(digits);
        if (precision_bits() >= bits) {
            return precision_bits();
        }
    }
}

namespace {
const unsigned initial_precision = set_precision_bits(kDefaultPrecisionBits);
}  // namespace

unsigned precision_bits() {
    Real probe = 0;
    return static_cast<unsigned>(mpfr_get_prec(probe.backend().data()));
}

unsigned output_digits() {
    return static_cast<unsigned>(std::floor((precision_bits() - 1) * 0.30102999566398120));
}

Rational parse_rational(std::string_view text) {
    auto fail = [&] { return InputError("malformed number '" + std::string(text) + "'"); };
    if (text.empty()) {
        throw fail();
    }
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        Rational num = parse_rational(text.substr(0, slash));
        Rational den = parse_rational(text.substr(slash + 1));
        if (den == 0) {
            throw InputError("zero denominator in '" + std::string(text) + "'");
        }
        return num / den;
    }

    std::size_t pos = 0;
    bool negative = false;
    if (text[pos] == '+' || text[pos] == '-') {
        negative = text[pos] == '-';
        ++pos;
    }
    std::string digits;
    long scale = 0;
    bool seen_digit = false;
    bool seen_point = false;
    for (; pos < text.size(); ++pos) {
        char c = text[pos];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            digits.push_back(c);
            seen_digit = true;
            if (seen_point) {
                --scale;
            }
        } else if (c == '.' && !seen_point) {
            seen_point = true;
        } else {
            break;
        }
    }
    if (!seen_digit) {
        throw fail();
    }
    if (pos < text.size()) {
        if (text[pos] != 'e' && text[pos] != 'E') {
            throw fail();
        }
        ++pos;
        bool exp_negative = false;
        if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
            exp_negative = text[pos] == '-';
            ++pos;
        }
        if (pos == text.size()) {
            throw fail();
        }
        long exponent = 0;
        for (; pos < text.size(); ++pos) {
            if (!std::isdigit(static_cast<unsigned char>(text[pos]))) {
                throw fail();
            }
            exponent = exponent * 10 + (text[pos] - '0');
            if (exponent > 100000) {
                throw InputError("exponent out of range in '" + std::string(text) + "'");
            }
        }
        scale += exp_negative ? -exponent : exponent;
    }

    Integer mantissa(digits);
    Integer ten_pow = boost::multiprecision::pow(Integer(10), static_cast<unsigned>(std::labs(scale)));
    Rational value = scale >= 0 ? Rational(mantissa * ten_pow) : Rational(mantissa, ten_pow);
    return negative ? Rational(-value) : value;
}

std::string format_rational(const Rational& value) {
    return value.str();
}

std::string format_real(const Real& value) {
    return value.str(output_digits(), std::ios_base::scientific);
}

Real to_real(const Rational& value) {
    return Real(value);
}

std::optional<Rational> exact_root(const Rational& value, unsigned degree) {
    if (degree == 0) {
        throw std::invalid_argument("root of degree 0");
    }
    if (degree == 1) {
        return value;
    }
    if (value < 0 && degree % 2 == 0) {
        return std::nullopt;
    }
    auto integer_root = [degree](Integer n) -> std::optional<Integer> {
        bool negative = n < 0;
        if (negative) {
            n = -n;
        }
        Integer root;
        if (mpz_root(root.backend().data(), n.backend().data(), degree) == 0) {
            return std::nullopt;
        }
        return negative ? Integer(-root) : root;
    };
    auto num = integer_root(boost::multiprecision::numerator(value));
    if (!num) {
        return std::nullopt;
    }
    auto den = integer_root(boost::multiprecision::denominator(value));
    if (!den) {
        return std::nullopt;
    }
    return Rational(*num, *den);
}

Rational pow_int(const Rational& base, unsigned exponent) {
    return Rational(boost::multiprecision::pow(boost::multiprecision::numerator(base), exponent),
                    boost::multiprecision::pow(boost::multiprecision::denominator(base), exponent));
}

Integer factorial(unsigned n) {
    Integer result = 1;
    for (unsigned i = 2; i <= n; ++i) {
        result *= i;
    }
    return result;
}

Real ln(const Rational& value) {
    // log(p) - log(q) keeps full relative accuracy for huge numerators.
    return log(Real(boost::multiprecision::numerator(value))) -
           log(Real(boost::multiprecision::denominator(value)));
}

Number parse_number(std::string_view text) {
    if (text == "e") {
        return Number::of(exp(Real(1)));
    }
    if (text == "cosh(1)") {
        return Number::of(cosh(Real(1)));
    }
    if (text == "sinh(1)") {
        return Number::of(sinh(Real(1)));
    }
    return Number::of(parse_rational(text));
}

std::string format_number(const Number& value) {
    return value.exact ? format_rational(*value.exact) : format_real(value.approx);
}

Real relative_tolerance(unsigned exponent) {
    return ldexp(Real(1), -static_cast<int>(exponent));
}

Real safe_ratio(const Real& actual, const Real& bound) {
    if (bound == 0) {
        return actual == 0 ? Real(0) : Real(std::numeric_limits<double>::infinity());
    }
    return actual / bound;
}

}  // namespace carleman
