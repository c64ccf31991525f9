#include "carleman/functions.hpp"

#include <sstream>

namespace carleman {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string join(const std::vector<Rational>& values) {
    std::ostringstream out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        out << (i ? "," : "") << format_rational(values[i]);
    }
    return out.str();
}

template <class T>
T factorial_as(std::size_t n) {
    T f = 1;
    for (std::size_t i = 2; i <= n; ++i) {
        f *= T(i);
    }
    return f;
}

template <class T>
Jet<T> polynomial_jet(const std::vector<Rational>& a, const T& x0, std::size_t order) {
    // Taylor shift: c_m = sum_{i >= m} a_i binom(i, m) x0^{i-m}, via Horner on
    // the jet of the identity.
    Jet<T> x = Jet<T>::variable(x0, order);
    Jet<T> acc = Jet<T>::constant(x0, T(0), order);
    for (std::size_t i = a.size(); i-- > 0;) {
        acc = acc * x;
        std::vector<T> c(acc.coeffs().begin(), acc.coeffs().end());
        c[0] += ScalarOps<T>::from(a[i]);
        acc = Jet<T>(x0, std::move(c));
    }
    return acc;
}

template <class T>
Jet<T> exp_neg_inv_jet(const T& x0, std::size_t order);

template <>
Jet<Rational> exp_neg_inv_jet<Rational>(const Rational&, std::size_t) {
    throw NotExactError("e^{-1/x} has no rational jet away from 0");
}

template <>
Jet<Real> exp_neg_inv_jet<Real>(const Real& x0, std::size_t order) {
    Real u = 1 / x0;
    Real envelope = exp(-u);
    std::vector<Real> c(order + 1);
    Real n_fact = 1;
    for (std::size_t n = 0; n <= order; ++n) {
        if (n > 1) {
            n_fact *= n;
        }
        std::vector<Integer> p = exp_neg_inv_polynomial(n);
        Real value = 0;
        for (std::size_t i = p.size(); i-- > 0;) {
            value = value * u + Real(p[i]);
        }
        c[n] = envelope * value / n_fact;
    }
    return Jet<Real>(x0, std::move(c));
}

template <class T>
Jet<T> cosh_sqrt_jet(const T& y0, std::size_t order);

template <>
Jet<Rational> cosh_sqrt_jet<Rational>(const Rational& y0, std::size_t order) {
    if (y0 != 0) {
        throw NotExactError("cosh(sqrt(y)) has no rational jet at y0 != 0");
    }
    // c_n = 1 / (2n)!
    std::vector<Rational> c(order + 1);
    Integer f = 1;
    for (std::size_t n = 0; n <= order; ++n) {
        if (n > 0) {
            f *= (2 * n - 1) * (2 * n);
        }
        c[n] = Rational(1, f);
    }
    return Jet<Rational>(y0, std::move(c));
}

template <>
Jet<Real> cosh_sqrt_jet<Real>(const Real& y0, std::size_t order) {
    // c_n = sum_{m >= n} binom(m, n) y0^{m-n} / (2m)!: positive terms for
    // y0 >= 0, so no cancellation at any y0 in [0, 1].
    const Real eps = ldexp(Real(1), -static_cast<int>(precision_bits()) - 8);
    std::vector<Real> c(order + 1);
    Real base_term = 1;  // 1 / (2n)!
    for (std::size_t n = 0; n <= order; ++n) {
        if (n > 0) {
            base_term /= Real((2 * n - 1) * (2 * n));
        }
        Real term = base_term;
        Real sum = term;
        if (y0 != 0) {
            for (std::size_t m = n; m < n + 100000; ++m) {
                Real ratio = Real(m + 1) / Real(m + 1 - n) * y0 / (Real(2 * m + 1) * Real(2 * m + 2));
                term *= ratio;
                sum += term;
                if (abs(term) <= eps * abs(sum) && abs(ratio) < 0.5) {
                    break;
                }
            }
        }
        c[n] = sum;
    }
    return Jet<Real>(y0, std::move(c));
}

template <class T>
Jet<T> exp_decay_jet(const std::vector<Rational>& a, const T& x0, std::size_t order) {
    std::vector<T> c(order + 1, T(0));
    for (std::size_t j = 0; j < a.size(); ++j) {
        if (a[j] == 0) {
            continue;
        }
        T rate = -T(static_cast<long>(j));
        T term = ScalarOps<T>::from(a[j]) * ScalarOps<T>::exp(rate * x0);
        for (std::size_t n = 0; n <= order; ++n) {
            if (n > 0) {
                term = term * rate / T(n);
            }
            c[n] += term;
        }
    }
    return Jet<T>(x0, std::move(c));
}

}  // namespace

std::vector<Integer> exp_neg_inv_polynomial(std::size_t n) {
    std::vector<Integer> p{1};
    for (std::size_t step = 0; step < n; ++step) {
        // q(u) = u^2 (p(u) - p'(u))
        std::vector<Integer> q(p.size() + 2, 0);
        for (std::size_t i = 0; i < p.size(); ++i) {
            q[i + 2] += p[i];
            if (i > 0) {
                q[i + 1] -= p[i] * i;
            }
        }
        while (q.size() > 1 && q.back() == 0) {
            q.pop_back();
        }
        p = std::move(q);
    }
    return p;
}

Function::Function(Variant v) : v_(std::move(v)) {
    if (auto* ps = std::get_if<fn::PowerSubstituted>(&v_)) {
        if (!ps->outer) {
            throw InputError("power substitution needs an outer function");
        }
        if (ps->k < 2) {
            throw InputError("power substitution needs k >= 2");
        }
    }
    if (auto* r = std::get_if<fn::RationalFunction>(&v_)) {
        if (r->denominator.empty()) {
            throw InputError("rational function needs a denominator");
        }
    }
}

Function power_substituted(Function outer, unsigned k) {
    return Function(fn::PowerSubstituted{std::make_shared<const Function>(std::move(outer)), k});
}

std::string Function::id() const {
    return std::visit(overloaded{
                          [](const fn::ExpNegInv&) { return std::string("exp_neg_inv"); },
                          [](const fn::Exp&) { return std::string("exp"); },
                          [](const fn::Cosh&) { return std::string("cosh"); },
                          [](const fn::CoshSqrt&) { return std::string("cosh_sqrt"); },
                          [](const fn::ExpDecay&) { return std::string("exp_decay_fourier"); },
                          [](const fn::Polynomial&) { return std::string("polynomial"); },
                          [](const fn::RationalFunction&) { return std::string("rational"); },
                          [](const fn::PowerSubstituted&) { return std::string("power_substituted"); },
                      },
                      v_);
}

std::string Function::describe() const {
    return std::visit(
        overloaded{
            [](const fn::Exp& e) {
                return e.rate == 1 ? std::string("exp") : "exp[" + format_rational(e.rate) + "]";
            },
            [](const fn::ExpDecay& e) { return "exp_decay_fourier[" + join(e.coeffs) + "]"; },
            [](const fn::Polynomial& p) { return "polynomial[" + join(p.coeffs) + "]"; },
            [](const fn::RationalFunction& r) {
                return "rational[" + join(r.numerator) + "/" + join(r.denominator) + "]";
            },
            [](const fn::PowerSubstituted& p) {
                return p.outer->describe() + "(x^" + std::to_string(p.k) + ")";
            },
            [this](const auto&) { return id(); },
        },
        v_);
}

template <class T>
Jet<T> Function::jet(const T& x0, std::size_t order, const OrderBudget& budget) const {
    budget.check(order);
    return std::visit(
        overloaded{
            [&](const fn::ExpNegInv&) {
                if (x0 <= 0) {
                    throw InputError("exp_neg_inv is only expanded at x0 > 0");
                }
                return exp_neg_inv_jet<T>(x0, order);
            },
            [&](const fn::Exp& e) {
                T rate = ScalarOps<T>::from(e.rate);
                std::vector<T> c(order + 1);
                c[0] = ScalarOps<T>::exp(rate * x0);
                for (std::size_t n = 1; n <= order; ++n) {
                    c[n] = c[n - 1] * rate / T(n);
                }
                return Jet<T>(x0, std::move(c));
            },
            [&](const fn::Cosh&) {
                T ch = ScalarOps<T>::cosh(x0);
                T sh = ScalarOps<T>::sinh(x0);
                std::vector<T> c(order + 1);
                T fact = 1;
                for (std::size_t n = 0; n <= order; ++n) {
                    if (n > 1) {
                        fact *= T(n);
                    }
                    c[n] = (n % 2 == 0 ? ch : sh) / fact;
                }
                return Jet<T>(x0, std::move(c));
            },
            [&](const fn::CoshSqrt&) { return cosh_sqrt_jet<T>(x0, order); },
            [&](const fn::ExpDecay& e) { return exp_decay_jet<T>(e.coeffs, x0, order); },
            [&](const fn::Polynomial& p) { return polynomial_jet<T>(p.coeffs, x0, order); },
            [&](const fn::RationalFunction& r) {
                Jet<T> den = polynomial_jet<T>(r.denominator, x0, order);
                if (den[0] == 0) {
                    throw InputError("rational function has a pole at the base point");
                }
                return polynomial_jet<T>(r.numerator, x0, order) * reciprocal(den);
            },
            [&](const fn::PowerSubstituted& p) {
                T y0 = 1;
                for (unsigned i = 0; i < p.k; ++i) {
                    y0 *= x0;
                }
                Jet<T> outer = p.outer->jet<T>(y0, order, budget);
                return compose(outer, power_map_jet<T>(x0, p.k, order));
            },
        },
        v_);
}

template <class T>
Jet<T> cosh_sqrt_by_composition(const T& y0, std::size_t order) {
    if (y0 <= 0) {
        throw InputError("the composition route for cosh(sqrt(y)) needs y0 > 0");
    }
    Jet<T> root = pow(Jet<T>::variable(y0, order), Rational(1, 2));
    Jet<T> outer = Function(fn::Cosh{}).jet<T>(root[0], order);
    return compose(outer, root);
}

template Jet<Real> Function::jet<Real>(const Real&, std::size_t, const OrderBudget&) const;
template Jet<Rational> Function::jet<Rational>(const Rational&, std::size_t, const OrderBudget&) const;
template Jet<Real> cosh_sqrt_by_composition<Real>(const Real&, std::size_t);

}  // namespace carleman
