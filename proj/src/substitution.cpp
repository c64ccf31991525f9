#include "carleman/substitution.hpp"

#include <algorithm>

namespace carleman {

bool BTable::admissible(std::size_t n, unsigned k, std::size_t i, std::size_t j) {
    return i >= 1 && i <= n && i + j == n && i * (k - 1) >= j;
}

BTable::BTable(std::size_t n, unsigned k) : n_(n), k_(k) {
    if (n == 0) {
        throw InputError("B-table order must be at least 1");
    }
    if (k < 2) {
        throw InputError("B-table power must be at least 2");
    }
    // Row of order m stored by i; j = m - i.
    std::vector<Integer> row(2, 0);
    row[1] = k;
    for (std::size_t m = 1; m < n; ++m) {
        std::vector<Integer> next(m + 2, 0);
        for (std::size_t i = 1; i <= m + 1; ++i) {
            const std::size_t j = m + 1 - i;
            if (!admissible(m + 1, k, i, j)) {
                continue;
            }
            Integer value = 0;
            // k B_m(i-1, j)
            if (i >= 2 && admissible(m, k, i - 1, j)) {
                value += Integer(k) * row[i - 1];
            }
            // (i(k-1) - (j-1)) B_m(i, j-1)
            if (j >= 1 && admissible(m, k, i, j - 1)) {
                value += Integer(static_cast<long>(i * (k - 1)) - static_cast<long>(j - 1)) * row[i];
            }
            next[i] = value;
        }
        row = std::move(next);
    }
    by_i_ = std::move(row);
}

const Integer& BTable::entry(std::size_t i) const {
    return by_i_.at(i);
}

Integer BTable::at(std::size_t i, std::size_t j) const {
    if (!admissible(n_, k_, i, j)) {
        return 0;
    }
    return by_i_[i];
}

std::vector<BTable::Entry> BTable::entries() const {
    std::vector<Entry> out;
    for (std::size_t i = 1; i <= n_; ++i) {
        const std::size_t j = n_ - i;
        if (admissible(n_, k_, i, j)) {
            out.push_back({i, j, by_i_[i]});
        }
    }
    return out;
}

std::vector<BTable> b_tables(std::size_t n, unsigned k) {
    std::vector<BTable> out;
    out.reserve(n);
    for (std::size_t m = 1; m <= n; ++m) {
        out.emplace_back(m, k);
    }
    return out;
}

GrowthCheck b_growth_check(std::size_t n, unsigned k, const Rational& c) {
    return b_growth_check(BTable(n, k), c);
}

GrowthCheck b_growth_check(const BTable& table, const Rational& c) {
    const std::size_t n = table.order();
    GrowthCheck out;
    bool first = true;
    Rational worst = 0;
    for (const auto& e : table.entries()) {
        Rational bound = pow_int(c, static_cast<unsigned>(n)) * pow_int(Rational(n), static_cast<unsigned>(n - e.i));
        Rational ratio = Rational(e.value) / bound;
        if (first || ratio > worst) {
            worst = ratio;
            out.worst_i = e.i;
            out.worst_j = e.j;
            first = false;
        }
        if (Rational(e.value) > bound) {
            out.holds = false;
        }
    }
    out.worst_ratio = to_real(worst);
    return out;
}

namespace {

void require_unit_interval(const Real& x) {
    if (!(x > 0) || x > 1) {
        throw InputError("bound formulas need x in (0, 1]");
    }
}

}  // namespace

Real lemma_power_sub_bound(const WeightSequence& m, unsigned k, std::size_t n, const Real& x) {
    if (k < 2) {
        throw InputError("power substitution needs k >= 2");
    }
    if (n == 0) {
        return m.value(0);
    }
    require_unit_interval(x);
    Real exponent = (Real(1) - Real(1) / Real(k)) * Real(n);
    return ldexp(m.value(n), static_cast<int>(n)) / pow(x, exponent);
}

const char* to_string(BoundBranch b) {
    switch (b) {
        case BoundBranch::above:
            return "l>sigma*n";
        case BoundBranch::equal:
            return "l=sigma*n";
        case BoundBranch::below:
            return "l<sigma*n";
        case BoundBranch::plain:
            return "plain";
        case BoundBranch::log_factor:
            return "log";
    }
    return "plain";
}

BoundValue lemma_add_smooth_bound(const WeightSequence& m, const Rational& sigma, std::size_t n, std::size_t ell,
                                  const Real& x) {
    if (!(sigma > 0 && sigma < 1)) {
        throw InputError("sigma must lie in (0, 1)");
    }
    if (ell > n) {
        throw InputError("need l <= n");
    }
    require_unit_interval(x);
    if (!check_factorial_monotone(m, std::max<std::size_t>(n, 2))) {
        throw InputError("lemma hypothesis violated: M_n / n! is not nondecreasing");
    }
    // 2^n l! / n! M_n
    Real front = ldexp(m.value(n), static_cast<int>(n));
    for (std::size_t i = ell + 1; i <= n; ++i) {
        front /= Real(i);
    }
    const Rational gap = Rational(ell) - sigma * Rational(n);
    if (gap > 0) {
        Real g = to_real(gap);
        return {front / g / pow(x, g), BoundBranch::above};
    }
    if (gap == 0) {
        return {front * (1 - log(x)), BoundBranch::equal};
    }
    return {front / to_real(-gap), BoundBranch::below};
}

BoundValue lemma_log_bound(const WeightSequence& m, unsigned k, std::size_t n, const Real& x, const Real& a,
                           const Real& c) {
    if (!(a > 0) || !(c > 0)) {
        throw InputError("constants A and C must be positive");
    }
    if (k < 2) {
        throw InputError("power substitution needs k >= 2");
    }
    Real base = a * pow(c, Real(n)) * m.value(n);
    if (n == 0 || n % k != 0) {
        return {base, BoundBranch::plain};
    }
    if (!(x > 0)) {
        throw InputError("the log branch (k | n) is undefined at x = 0");
    }
    require_unit_interval(x);
    return {base * (1 - log(x)), BoundBranch::log_factor};
}

}  // namespace carleman
