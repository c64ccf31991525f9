#pragma once

// Registry of named test functions with jet evaluators.

#include "carleman/jet.hpp"

#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace carleman {

class Function;

namespace fn {

/// e^{-1/x}, x > 0. Derivatives are e^{-1/x} P_n(1/x) with integer
/// polynomials P_0 = 1, P_{n+1}(u) = u^2 (P_n(u) - P_n'(u)).
struct ExpNegInv {};

/// e^{rate * x}.
struct Exp {
    Rational rate = 1;
};

struct Cosh {};

/// cosh(sqrt(y)) = sum_n y^n / (2n)!, entire.
struct CoshSqrt {};

/// sum_{j=0..J} a_j e^{-j x}.
struct ExpDecay {
    std::vector<Rational> coeffs;
};

/// sum_i a_i x^i.
struct Polynomial {
    std::vector<Rational> coeffs;
};

/// numerator(x) / denominator(x).
struct RationalFunction {
    std::vector<Rational> numerator;
    std::vector<Rational> denominator;
};

/// x -> outer(x^k).
struct PowerSubstituted {
    std::shared_ptr<const Function> outer;
    unsigned k = 2;
};

}  // namespace fn

class Function {
public:
    using Variant = std::variant<fn::ExpNegInv, fn::Exp, fn::Cosh, fn::CoshSqrt, fn::ExpDecay, fn::Polynomial,
                                 fn::RationalFunction, fn::PowerSubstituted>;

    Function(Variant v);  // NOLINT(google-explicit-constructor)

    const Variant& variant() const { return v_; }

    /// Registry id: exp_neg_inv, exp, cosh, cosh_sqrt, exp_decay_fourier,
    /// polynomial, rational, power_substituted.
    std::string id() const;
    /// id plus parameters, e.g. "polynomial[0,0,1]".
    std::string describe() const;

    /// Jet at x0 to the given order. Throws InputError outside the domain and
    /// NotExactError when T = Rational cannot represent the coefficients.
    template <class T>
    Jet<T> jet(const T& x0, std::size_t order, const OrderBudget& budget = {}) const;

    Real value(const Real& x) const { return jet<Real>(x, 0)[0]; }

private:
    Variant v_;
};

/// outer(x^k) as a Function.
Function power_substituted(Function outer, unsigned k);

/// Registry lookup used by the CLI and pair files: same jet as Function::jet.
template <class T>
Jet<T> jet_of_named_function(const Function& f, const T& x0, std::size_t order, const OrderBudget& budget = {}) {
    return f.jet<T>(x0, order, budget);
}

/// Jet of cosh(sqrt(y)) at y0 > 0 built by composing the cosh series with
/// the y^{1/2} series. Loses accuracy as y0 -> 0 (intermediate terms grow
/// like y0^{-n}); Function(CoshSqrt) sums the power series directly instead.
template <class T>
Jet<T> cosh_sqrt_by_composition(const T& y0, std::size_t order);

/// Integer coefficients of P_n (index = power of u) for e^{-1/x}.
std::vector<Integer> exp_neg_inv_polynomial(std::size_t n);

extern template Jet<Real> Function::jet<Real>(const Real&, std::size_t, const OrderBudget&) const;
extern template Jet<Rational> Function::jet<Rational>(const Rational&, std::size_t, const OrderBudget&) const;
extern template Jet<Real> cosh_sqrt_by_composition<Real>(const Real&, std::size_t);

}  // namespace carleman
