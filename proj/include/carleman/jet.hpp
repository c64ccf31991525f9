#pragma once

// Truncated Taylor expansions ("jets") templated on the scalar type.
//
// A Jet<T> of order N at base point x0 stores c_0..c_N with
// c_j = h^(j)(x0) / j!. Jet<Rational> is exact; Jet<Real> runs at the current
// MPFR precision. Arithmetic is truncated at the common order and never reads
// past it.

#include "carleman/numeric.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace carleman {

inline constexpr std::size_t kDefaultMaxOrder = 64;

/// Guardrail on jet orders: coefficients grow factorially, so orders above
/// max_order need allow_high_order.
struct OrderBudget {
    std::size_t max_order = kDefaultMaxOrder;
    bool allow_high_order = false;

    void check(std::size_t order) const {
        if (order > max_order && !allow_high_order) {
            throw InputError("jet order " + std::to_string(order) + " exceeds the budget of " +
                             std::to_string(max_order) + " (pass an explicit override to allow it)");
        }
    }
};

/// Scalar-level elementary functions. The Rational specialization only
/// accepts arguments whose image is rational and throws NotExactError
/// otherwise.
template <class T>
struct ScalarOps;

template <>
struct ScalarOps<Real> {
    static constexpr const char* mode = "precision";
    static Real exp(const Real& x) { return boost::multiprecision::exp(x); }
    static Real log(const Real& x) { return boost::multiprecision::log(x); }
    static Real sin(const Real& x) { return boost::multiprecision::sin(x); }
    static Real cos(const Real& x) { return boost::multiprecision::cos(x); }
    static Real sinh(const Real& x) { return boost::multiprecision::sinh(x); }
    static Real cosh(const Real& x) { return boost::multiprecision::cosh(x); }
    static Real pow(const Real& x, const Rational& p) { return boost::multiprecision::pow(x, to_real(p)); }
    static Real from(const Rational& r) { return to_real(r); }
    static Real to_real(const Real& x) { return x; }
    static Real to_real(const Rational& r) { return carleman::to_real(r); }
};

template <>
struct ScalarOps<Rational> {
    static constexpr const char* mode = "exact";
    static Rational exp(const Rational& x) { return zero_only(x, "exp", 1); }
    static Rational sin(const Rational& x) { return zero_only(x, "sin", 0); }
    static Rational cos(const Rational& x) { return zero_only(x, "cos", 1); }
    static Rational sinh(const Rational& x) { return zero_only(x, "sinh", 0); }
    static Rational cosh(const Rational& x) { return zero_only(x, "cosh", 1); }
    static Rational log(const Rational& x) {
        if (x != 1) {
            throw NotExactError("log of " + x.str() + " is not rational");
        }
        return 0;
    }
    static Rational pow(const Rational& x, const Rational& p) {
        auto num = boost::multiprecision::numerator(p);
        auto den = boost::multiprecision::denominator(p);
        auto root = exact_root(x, static_cast<unsigned>(den));
        if (!root) {
            throw NotExactError(x.str() + "^(" + p.str() + ") is not rational");
        }
        Rational result = pow_int(*root, static_cast<unsigned>(abs(num)));
        return num < 0 ? Rational(1 / result) : result;
    }
    static Rational from(const Rational& r) { return r; }
    static Real to_real(const Rational& r) { return carleman::to_real(r); }

private:
    static Rational zero_only(const Rational& x, const char* name, int value_at_zero) {
        if (x != 0) {
            throw NotExactError(std::string(name) + " of " + x.str() + " is not rational");
        }
        return value_at_zero;
    }
};

template <class T>
class Jet {
public:
    using scalar_type = T;

    Jet(T base_point, std::vector<T> coeffs) : base_(std::move(base_point)), coeffs_(std::move(coeffs)) {
        if (coeffs_.empty()) {
            throw InputError("a jet needs at least one coefficient");
        }
    }

    static Jet constant(const T& base_point, const T& value, std::size_t order) {
        std::vector<T> c(order + 1, T(0));
        c[0] = value;
        return Jet(base_point, std::move(c));
    }

    /// The identity function t -> t expanded at base_point.
    static Jet variable(const T& base_point, std::size_t order) {
        std::vector<T> c(order + 1, T(0));
        c[0] = base_point;
        if (order >= 1) {
            c[1] = 1;
        }
        return Jet(base_point, std::move(c));
    }

    const T& base_point() const { return base_; }
    std::size_t order() const { return coeffs_.size() - 1; }
    std::span<const T> coeffs() const { return coeffs_; }
    const T& operator[](std::size_t j) const { return coeffs_.at(j); }

    /// h^(j)(x0) = c_j * j!.
    T derivative(std::size_t j) const {
        T d = coeffs_.at(j);
        for (std::size_t i = 2; i <= j; ++i) {
            d *= T(i);
        }
        return d;
    }

    /// Copy truncated to a lower order.
    Jet truncated(std::size_t order) const {
        if (order > this->order()) {
            throw InputError("cannot raise jet order by truncation");
        }
        return Jet(base_, std::vector<T>(coeffs_.begin(), coeffs_.begin() + order + 1));
    }

    friend bool operator==(const Jet& a, const Jet& b) { return a.base_ == b.base_ && a.coeffs_ == b.coeffs_; }

private:
    T base_;
    std::vector<T> coeffs_;
};

namespace detail {

template <class T>
void require_compatible(const Jet<T>& a, const Jet<T>& b) {
    if (a.base_point() != b.base_point()) {
        throw InputError("jets expanded at different base points");
    }
    if (a.order() != b.order()) {
        throw InputError("jets of different orders (" + std::to_string(a.order()) + " vs " +
                         std::to_string(b.order()) + ")");
    }
}

}  // namespace detail

template <class T>
Jet<T> operator+(const Jet<T>& a, const Jet<T>& b) {
    detail::require_compatible(a, b);
    std::vector<T> c(a.coeffs().begin(), a.coeffs().end());
    for (std::size_t j = 0; j < c.size(); ++j) {
        c[j] += b[j];
    }
    return Jet<T>(a.base_point(), std::move(c));
}

template <class T>
Jet<T> operator-(const Jet<T>& a) {
    std::vector<T> c(a.coeffs().begin(), a.coeffs().end());
    for (auto& x : c) {
        x = -x;
    }
    return Jet<T>(a.base_point(), std::move(c));
}

template <class T>
Jet<T> operator-(const Jet<T>& a, const Jet<T>& b) {
    return a + (-b);
}

/// Truncated Cauchy product.
template <class T>
Jet<T> operator*(const Jet<T>& a, const Jet<T>& b) {
    detail::require_compatible(a, b);
    const std::size_t n = a.order();
    std::vector<T> c(n + 1, T(0));
    for (std::size_t i = 0; i <= n; ++i) {
        if (a[i] == 0) {
            continue;
        }
        for (std::size_t j = 0; i + j <= n; ++j) {
            c[i + j] += a[i] * b[j];
        }
    }
    return Jet<T>(a.base_point(), std::move(c));
}

template <class T>
Jet<T> operator*(const T& s, const Jet<T>& a) {
    std::vector<T> c(a.coeffs().begin(), a.coeffs().end());
    for (auto& x : c) {
        x *= s;
    }
    return Jet<T>(a.base_point(), std::move(c));
}

template <class T>
Jet<T> add(const Jet<T>& a, const Jet<T>& b) {
    return a + b;
}

template <class T>
Jet<T> mul(const Jet<T>& a, const Jet<T>& b) {
    return a * b;
}

template <class T>
Jet<T> scale(const Jet<T>& a, const T& s) {
    return s * a;
}

/// Same coefficients with the constant term replaced by zero: the series of
/// h - h(x0).
template <class T>
std::vector<T> centered(const Jet<T>& a) {
    std::vector<T> c(a.coeffs().begin(), a.coeffs().end());
    c[0] = 0;
    return c;
}

template <class T>
Jet<T> exp(const Jet<T>& a) {
    const std::size_t n = a.order();
    std::vector<T> b(n + 1, T(0));
    b[0] = ScalarOps<T>::exp(a[0]);
    for (std::size_t m = 1; m <= n; ++m) {
        T acc = 0;
        for (std::size_t k = 1; k <= m; ++k) {
            acc += T(k) * a[k] * b[m - k];
        }
        b[m] = acc / T(m);
    }
    return Jet<T>(a.base_point(), std::move(b));
}

template <class T>
Jet<T> log(const Jet<T>& a) {
    if (a[0] <= 0) {
        throw InputError("log of a jet needs a positive constant term");
    }
    const std::size_t n = a.order();
    std::vector<T> b(n + 1, T(0));
    b[0] = ScalarOps<T>::log(a[0]);
    for (std::size_t m = 1; m <= n; ++m) {
        T acc = 0;
        for (std::size_t k = 1; k < m; ++k) {
            acc += T(k) * b[k] * a[m - k];
        }
        b[m] = (a[m] - acc / T(m)) / a[0];
    }
    return Jet<T>(a.base_point(), std::move(b));
}

/// sin and cos of a jet, computed together.
template <class T>
std::pair<Jet<T>, Jet<T>> sin_cos(const Jet<T>& a) {
    const std::size_t n = a.order();
    std::vector<T> s(n + 1, T(0)), c(n + 1, T(0));
    s[0] = ScalarOps<T>::sin(a[0]);
    c[0] = ScalarOps<T>::cos(a[0]);
    for (std::size_t m = 1; m <= n; ++m) {
        T acc_s = 0, acc_c = 0;
        for (std::size_t k = 1; k <= m; ++k) {
            acc_s += T(k) * a[k] * c[m - k];
            acc_c += T(k) * a[k] * s[m - k];
        }
        s[m] = acc_s / T(m);
        c[m] = -acc_c / T(m);
    }
    return {Jet<T>(a.base_point(), std::move(s)), Jet<T>(a.base_point(), std::move(c))};
}

/// sinh and cosh of a jet, computed together.
template <class T>
std::pair<Jet<T>, Jet<T>> sinh_cosh(const Jet<T>& a) {
    const std::size_t n = a.order();
    std::vector<T> s(n + 1, T(0)), c(n + 1, T(0));
    s[0] = ScalarOps<T>::sinh(a[0]);
    c[0] = ScalarOps<T>::cosh(a[0]);
    for (std::size_t m = 1; m <= n; ++m) {
        T acc_s = 0, acc_c = 0;
        for (std::size_t k = 1; k <= m; ++k) {
            acc_s += T(k) * a[k] * c[m - k];
            acc_c += T(k) * a[k] * s[m - k];
        }
        s[m] = acc_s / T(m);
        c[m] = acc_c / T(m);
    }
    return {Jet<T>(a.base_point(), std::move(s)), Jet<T>(a.base_point(), std::move(c))};
}

template <class T>
Jet<T> sin(const Jet<T>& a) {
    return sin_cos(a).first;
}

template <class T>
Jet<T> cos(const Jet<T>& a) {
    return sin_cos(a).second;
}

template <class T>
Jet<T> cosh(const Jet<T>& a) {
    return sinh_cosh(a).second;
}

template <class T>
Jet<T> sinh(const Jet<T>& a) {
    return sinh_cosh(a).first;
}

template <class T>
Jet<T> reciprocal(const Jet<T>& a) {
    if (a[0] == 0) {
        throw InputError("reciprocal of a jet needs a nonzero constant term");
    }
    const std::size_t n = a.order();
    std::vector<T> b(n + 1, T(0));
    b[0] = T(1) / a[0];
    for (std::size_t m = 1; m <= n; ++m) {
        T acc = 0;
        for (std::size_t k = 1; k <= m; ++k) {
            acc += a[k] * b[m - k];
        }
        b[m] = -acc / a[0];
    }
    return Jet<T>(a.base_point(), std::move(b));
}

/// a^p for rational p. Non-integer p needs a positive constant term; negative
/// integer p a nonzero one.
template <class T>
Jet<T> pow(const Jet<T>& a, const Rational& p) {
    const bool integral = boost::multiprecision::denominator(p) == 1;
    if (!integral && a[0] <= 0) {
        throw InputError("non-integer power of a jet needs a positive constant term");
    }
    if (a[0] == 0) {
        if (p < 0) {
            throw InputError("negative power of a jet needs a nonzero constant term");
        }
        // Nonnegative integer power with zero constant term: repeated products.
        auto e = static_cast<unsigned>(boost::multiprecision::numerator(p));
        Jet<T> result = Jet<T>::constant(a.base_point(), T(1), a.order());
        for (unsigned i = 0; i < e; ++i) {
            result = result * a;
        }
        return result;
    }
    const std::size_t n = a.order();
    const T power = ScalarOps<T>::from(p);
    std::vector<T> b(n + 1, T(0));
    b[0] = ScalarOps<T>::pow(a[0], p);
    for (std::size_t m = 1; m <= n; ++m) {
        T acc = 0;
        for (std::size_t k = 1; k <= m; ++k) {
            acc += (power * T(k) - T(m - k)) * a[k] * b[m - k];
        }
        b[m] = acc / (T(m) * a[0]);
    }
    return Jet<T>(a.base_point(), std::move(b));
}

/// Jet of outer o inner at inner.base_point(). `outer` must be expanded at
/// the value inner[0]; the series of outer is evaluated in (inner - inner[0])
/// by Horner's rule.
template <class T>
Jet<T> compose(const Jet<T>& outer, const Jet<T>& inner) {
    if (outer.base_point() != inner[0]) {
        throw InputError("outer jet is not expanded at the value of the inner jet");
    }
    if (outer.order() != inner.order()) {
        throw InputError("composed jets must have equal orders");
    }
    const std::size_t n = inner.order();
    Jet<T> shift(inner.base_point(), centered(inner));
    Jet<T> result = Jet<T>::constant(inner.base_point(), outer[n], n);
    for (std::size_t m = n; m-- > 0;) {
        result = result * shift;
        std::vector<T> c(result.coeffs().begin(), result.coeffs().end());
        c[0] += outer[m];
        result = Jet<T>(inner.base_point(), std::move(c));
    }
    return result;
}

/// The jet of x -> x^k at x0.
template <class T>
Jet<T> power_map_jet(const T& x0, unsigned k, std::size_t order) {
    std::vector<T> c(order + 1, T(0));
    // c_j = binom(k, j) x0^{k-j}
    T binom = 1;
    for (std::size_t j = 0; j <= std::min<std::size_t>(k, order); ++j) {
        T x_pow = 1;
        for (std::size_t i = 0; i < k - j; ++i) {
            x_pow *= x0;
        }
        c[j] = binom * x_pow;
        binom = binom * T(k - j) / T(j + 1);
    }
    return Jet<T>(x0, std::move(c));
}

}  // namespace carleman
