#pragma once

// Chain-rule tables for compositions with x -> x^k and the explicit
// derivative bounds for power substitutions.
//
// With F(x) = G(x^k),
//   F^(n)(x) = sum_{i+j=n, 1<=i<=n, i(k-1)>=j} B_n(i,j) G^(i)(x^k) x^{i(k-1)-j},
// where B_1(1,0) = k and
//   B_{n+1}(i,j) = k B_n(i-1,j) + (i(k-1) - (j-1)) B_n(i,j-1).

#include "carleman/jet.hpp"
#include "carleman/sequence.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace carleman {

class BTable {
public:
    /// Exact table of order n >= 1 for the power k >= 2.
    BTable(std::size_t n, unsigned k);

    std::size_t order() const { return n_; }
    unsigned power() const { return k_; }

    /// B_n(i, n - i); zero outside the admissible region.
    const Integer& entry(std::size_t i) const;
    Integer at(std::size_t i, std::size_t j) const;
    static bool admissible(std::size_t n, unsigned k, std::size_t i, std::size_t j);

    struct Entry {
        std::size_t i;
        std::size_t j;
        Integer value;
    };
    /// Admissible entries with i ascending.
    std::vector<Entry> entries() const;

private:
    std::size_t n_;
    unsigned k_;
    std::vector<Integer> by_i_;  // index i = 0..n, j = n - i
};

/// Tables for orders 1..n, each built from the previous one.
std::vector<BTable> b_tables(std::size_t n, unsigned k);

/// n-th derivative at x of F(x) = G(x^k) from the jet of G at x^k.
template <class T>
T reconstruct_derivative(std::size_t n, unsigned k, const T& x, const Jet<T>& g_jet, const BTable& table) {
    if (table.order() != n || table.power() != k) {
        throw InputError("B-table does not match (n, k)");
    }
    if (g_jet.order() < n) {
        throw InputError("jet of order " + std::to_string(g_jet.order()) + " is too short for derivative " +
                         std::to_string(n));
    }
    T total = 0;
    for (const auto& e : table.entries()) {
        T term = ScalarOps<T>::from(Rational(e.value)) * g_jet.derivative(e.i);
        const std::size_t exponent = e.i * (k - 1) - e.j;
        for (std::size_t p = 0; p < exponent; ++p) {
            term *= x;
        }
        total += term;
    }
    return total;
}

struct GrowthCheck {
    bool holds = true;
    std::size_t worst_i = 0;
    std::size_t worst_j = 0;
    /// max over entries of B_n(i,j) / (C^n n^{n-i}).
    Real worst_ratio = 0;
};

/// Checks B_n(i,j) <= C^n n^{n-i} for every entry.
GrowthCheck b_growth_check(std::size_t n, unsigned k, const Rational& c);
GrowthCheck b_growth_check(const BTable& table, const Rational& c);

/// 2^n M_n x^{-(1-1/k) n}, x in (0, 1].
Real lemma_power_sub_bound(const WeightSequence& m, unsigned k, std::size_t n, const Real& x);

enum class BoundBranch { above, equal, below, plain, log_factor };

const char* to_string(BoundBranch b);

struct BoundValue {
    Real value;
    BoundBranch branch;
};

/// 2^n (l!/n!) M_n times
///   (l - sigma n)^{-1} x^{-(l - sigma n)}  if l > sigma n
///   1 + log(1/x)                           if l = sigma n
///   (sigma n - l)^{-1}                     if l < sigma n.
/// Requires M_n / n! nondecreasing on M_0..M_n (checked).
BoundValue lemma_add_smooth_bound(const WeightSequence& m, const Rational& sigma, std::size_t n, std::size_t ell,
                                  const Real& x);

/// A C^n M_n, times (1 + log(1/x)) when k | n and n > 0.
BoundValue lemma_log_bound(const WeightSequence& m, unsigned k, std::size_t n, const Real& x, const Real& a,
                           const Real& c);

}  // namespace carleman
