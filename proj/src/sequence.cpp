#include "carleman/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace carleman {

namespace {

Real log_log_shift(std::size_t j) {
    return log(log(Real(j) + exp(Real(1))));
}

Rational param_or(const FamilyDescriptor& d, const std::string& key, const Rational& fallback) {
    auto it = d.params.find(key);
    return it == d.params.end() ? fallback : parse_rational(it->second);
}

Number number_param_or(const FamilyDescriptor& d, const std::string& key, const Rational& fallback) {
    auto it = d.params.find(key);
    return it == d.params.end() ? Number::of(fallback) : parse_number(it->second);
}

void require_positive(const Number& x, const std::string& what) {
    if (x.approx <= 0) {
        throw InputError("family parameter '" + what + "' must be positive");
    }
}

void reject_unknown_params(const FamilyDescriptor& d, std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : d.params) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
            throw InputError("family '" + d.id + "' has no parameter '" + key + "'");
        }
    }
}

// Tolerance used to call two log-space quantities equal in precision mode.
Real tie_tolerance() {
    int bits = std::min<int>(200, static_cast<int>(precision_bits()) - 8);
    return ldexp(Real(1), -bits);
}

// Rounding margin for the filtered exact predicates.
Real filter_margin() {
    return ldexp(Real(1), -(static_cast<int>(precision_bits()) - 40));
}

// Sign of value - 0 using the float filter first and an exact tie-break.
template <class ExactCompare>
int filtered_sign(const Real& value, const Real& scale, bool exact, ExactCompare exact_compare) {
    Real magnitude = abs(value);
    if (exact) {
        if (magnitude > scale * filter_margin()) {
            return value > 0 ? 1 : -1;
        }
        return exact_compare();
    }
    if (magnitude <= scale * tie_tolerance()) {
        return 0;
    }
    return value > 0 ? 1 : -1;
}

int sign_of(const Rational& lhs, const Rational& rhs) {
    return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

}  // namespace

// ---------------------------------------------------------------------------
// Families

bool Family::is_exact() const {
    return scale.is_exact() && rate.is_exact() && denominator(s) == 1 && beta == 0;
}

Number Family::value(std::size_t n) const {
    if (is_exact()) {
        auto power = static_cast<unsigned>(numerator(s));
        Rational fact(factorial(static_cast<unsigned>(n)));
        return Number::of(*scale.exact * pow_int(*rate.exact, static_cast<unsigned>(n)) * pow_int(fact, power));
    }
    Real log_value = log(scale.approx) + Real(n) * log(rate.approx) + to_real(s) * lgamma(Real(n) + 1);
    if (beta != 0) {
        Real sum = 0;
        for (std::size_t j = 1; j <= n; ++j) {
            sum += log_log_shift(j);
        }
        log_value += to_real(beta) * sum;
    }
    return Number::of(exp(log_value));
}

Number Family::ratio(std::size_t n) const {
    if (is_exact()) {
        auto power = static_cast<unsigned>(numerator(s));
        Rational denom = *rate.exact * pow_int(Rational(n + 1), power);
        return Number::of(Rational(1) / denom);
    }
    Real log_denom = log(rate.approx) + to_real(s) * log(Real(n + 1));
    if (beta != 0) {
        log_denom += to_real(beta) * log_log_shift(n + 1);
    }
    return Number::of(exp(-log_denom));
}

Family make_family(const FamilyDescriptor& d) {
    Family f;
    f.descriptor = d;
    if (d.id == "gevrey") {
        reject_unknown_params(d, {"s", "scale", "rate"});
        f.s = param_or(d, "s", 1);
        f.scale = number_param_or(d, "scale", 1);
        f.rate = number_param_or(d, "rate", 1);
    } else if (d.id == "constant") {
        reject_unknown_params(d, {"c"});
        f.scale = number_param_or(d, "c", 1);
    } else if (d.id == "geometric") {
        reject_unknown_params(d, {"r", "scale"});
        f.rate = number_param_or(d, "r", 1);
        f.scale = number_param_or(d, "scale", 1);
    } else if (d.id == "log_gevrey") {
        reject_unknown_params(d, {"beta", "scale"});
        f.s = 1;
        f.beta = param_or(d, "beta", 1);
        f.scale = number_param_or(d, "scale", 1);
    } else {
        throw InputError("unknown family id '" + d.id + "'");
    }
    require_positive(f.scale, "scale");
    require_positive(f.rate, "rate");
    if (f.s < 0 || f.beta < 0) {
        throw InputError("family '" + d.id + "' requires nonnegative exponents");
    }
    return f;
}

ClassVerdict classify_quasianalytic(const FamilyDescriptor& descriptor) {
    Family f;
    try {
        f = make_family(descriptor);
    } catch (const InputError&) {
        return {Verdict::inconclusive, "not a registry family"};
    }
    // Registry members are log-convex, so M^C = M and the series is
    // sum 1 / (rate * (n+1)^s * log(n+1+e)^beta).
    if (f.s < 1) {
        return {Verdict::quasianalytic,
                "ratios behave like n^-s with s < 1; the series diverges by comparison with the harmonic series"};
    }
    if (f.s > 1) {
        return {Verdict::not_quasianalytic, "ratios behave like n^-s with s > 1; the p-series converges"};
    }
    if (f.beta <= 1) {
        return {Verdict::quasianalytic,
                "ratios behave like 1/(n log^beta n) with beta <= 1; the series diverges by the integral test"};
    }
    return {Verdict::not_quasianalytic,
            "ratios behave like 1/(n log^beta n) with beta > 1; the series converges by the integral test"};
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::quasianalytic:
            return "quasianalytic";
        case Verdict::not_quasianalytic:
            return "not-quasianalytic";
        case Verdict::inconclusive:
            return "inconclusive";
    }
    return "inconclusive";
}

const char* to_string(VerdictBasis b) {
    return b == VerdictBasis::closed_form ? "closed-form" : "prefix-only";
}

// ---------------------------------------------------------------------------
// WeightSequence

WeightSequence WeightSequence::from_rationals(std::string name, std::vector<Rational> values) {
    if (values.size() < 3) {
        throw InputError("explicit sequence needs at least 3 values (M_0..M_2)");
    }
    auto data = std::make_shared<Data>();
    data->values.reserve(values.size());
    data->logs.reserve(values.size());
    for (std::size_t n = 0; n < values.size(); ++n) {
        if (values[n] <= 0) {
            throw InputError("sequence value at index " + std::to_string(n) + " is not positive");
        }
        data->values.push_back(to_real(values[n]));
        data->logs.push_back(ln(values[n]));
    }
    data->exact = std::move(values);
    WeightSequence seq;
    seq.name_ = std::move(name);
    seq.data_ = std::move(data);
    return seq;
}

WeightSequence WeightSequence::from_reals(std::string name, std::vector<Real> values) {
    if (values.size() < 3) {
        throw InputError("explicit sequence needs at least 3 values (M_0..M_2)");
    }
    auto data = std::make_shared<Data>();
    data->logs.reserve(values.size());
    for (std::size_t n = 0; n < values.size(); ++n) {
        if (!(values[n] > 0) || !isfinite(values[n])) {
            throw InputError("sequence value at index " + std::to_string(n) + " is not positive");
        }
        data->logs.push_back(log(values[n]));
    }
    data->values = std::move(values);
    WeightSequence seq;
    seq.name_ = std::move(name);
    seq.data_ = std::move(data);
    return seq;
}

WeightSequence WeightSequence::from_family(std::string name, Family family) {
    WeightSequence seq;
    seq.name_ = std::move(name);
    seq.family_ = std::move(family);
    return seq;
}

std::optional<std::size_t> WeightSequence::last_index() const {
    if (family_) {
        return std::nullopt;
    }
    return data_->values.size() - 1;
}

bool WeightSequence::has_index(std::size_t n) const {
    return family_ || n < data_->values.size();
}

bool WeightSequence::is_exact() const {
    return family_ ? family_->is_exact() : data_->exact.has_value();
}

std::size_t WeightSequence::size() const {
    if (family_) {
        throw std::logic_error("family sequences have no size");
    }
    return data_->values.size();
}

void WeightSequence::require(std::size_t n) const {
    if (!has_index(n)) {
        throw InputError("sequence '" + name_ + "' has no value at index " + std::to_string(n) + " (need " +
                         std::to_string(n + 1) + " values, have " + std::to_string(data_->values.size()) + ")");
    }
}

Real WeightSequence::value(std::size_t n) const {
    require(n);
    return family_ ? family_->value(n).approx : data_->values[n];
}

Real WeightSequence::log_value(std::size_t n) const {
    require(n);
    return family_ ? log(family_->value(n).approx) : data_->logs[n];
}

std::optional<Rational> WeightSequence::exact_value(std::size_t n) const {
    require(n);
    if (family_) {
        return family_->value(n).exact;
    }
    if (data_->exact) {
        return (*data_->exact)[n];
    }
    return std::nullopt;
}

WeightSequence WeightSequence::prefix(std::size_t upto) const {
    require(upto);
    if (upto < 2) {
        throw InputError("a prefix needs at least 3 values (upto >= 2)");
    }
    if (!family_) {
        if (upto + 1 == data_->values.size()) {
            return *this;
        }
        auto data = std::make_shared<Data>();
        data->values.assign(data_->values.begin(), data_->values.begin() + upto + 1);
        data->logs.assign(data_->logs.begin(), data_->logs.begin() + upto + 1);
        if (data_->exact) {
            data->exact.emplace(data_->exact->begin(), data_->exact->begin() + upto + 1);
        }
        WeightSequence seq;
        seq.name_ = name_;
        seq.data_ = std::move(data);
        return seq;
    }

    // Incremental materialization: M_n = M_{n-1} / ratio(n-1).
    const Family& f = *family_;
    auto data = std::make_shared<Data>();
    data->values.reserve(upto + 1);
    data->logs.reserve(upto + 1);
    if (f.is_exact()) {
        std::vector<Rational> exact;
        exact.reserve(upto + 1);
        auto power = static_cast<unsigned>(numerator(f.s));
        Rational current = *f.scale.exact;
        Real log_current = ln(current);
        Real log_rate = ln(*f.rate.exact);
        for (std::size_t n = 0; n <= upto; ++n) {
            if (n > 0) {
                current *= *f.rate.exact * pow_int(Rational(n), power);
                log_current += log_rate + Real(power) * log(Real(n));
            }
            exact.push_back(current);
            data->values.push_back(to_real(current));
            data->logs.push_back(log_current);
        }
        data->exact = std::move(exact);
    } else {
        Real log_current = log(f.scale.approx);
        Real log_rate = log(f.rate.approx);
        Real s = to_real(f.s);
        Real beta = to_real(f.beta);
        for (std::size_t n = 0; n <= upto; ++n) {
            if (n > 0) {
                log_current += log_rate + s * log(Real(n));
                if (f.beta != 0) {
                    log_current += beta * log_log_shift(n);
                }
            }
            data->values.push_back(exp(log_current));
            data->logs.push_back(log_current);
        }
    }
    WeightSequence seq;
    seq.name_ = name_;
    seq.data_ = std::move(data);
    return seq;
}

WeightSequence WeightSequence::inexact() const {
    if (family_) {
        throw std::logic_error("inexact() needs an explicit prefix; call prefix(upto) first");
    }
    WeightSequence explicit_seq = *this;
    if (!explicit_seq.data_->exact) {
        return explicit_seq;
    }
    auto data = std::make_shared<Data>(*explicit_seq.data_);
    data->exact.reset();
    explicit_seq.data_ = std::move(data);
    return explicit_seq;
}

// ---------------------------------------------------------------------------
// Hull predicates

int chord_side(const WeightSequence& m, std::size_t a, std::size_t b, std::size_t c) {
    Real la = m.log_value(a), lb = m.log_value(b), lc = m.log_value(c);
    Real ca(c - a), ba(b - a);
    Real cross = (lb - la) * ca - (lc - la) * ba;
    Real scale = (abs(lb) + abs(la)) * ca + (abs(lc) + abs(la)) * ba + 1;
    return filtered_sign(cross, scale, m.is_exact(), [&] {
        // b above the chord <=> M_b^{c-a} > M_a^{c-b} M_c^{b-a}.
        Rational lhs = pow_int(*m.exact_value(b), static_cast<unsigned>(c - a));
        Rational rhs = pow_int(*m.exact_value(a), static_cast<unsigned>(c - b)) *
                       pow_int(*m.exact_value(c), static_cast<unsigned>(b - a));
        return sign_of(lhs, rhs);
    });
}

Real term_log(const WeightSequence& m, HullTerm t, std::size_t n) {
    if (t.is_support()) {
        return m.log_value(t.left);
    }
    Real width(t.right - t.left);
    return (Real(t.right - n) * m.log_value(t.left) + Real(n - t.left) * m.log_value(t.right)) / width;
}

Real term_value(const WeightSequence& m, HullTerm t, std::size_t n) {
    if (t.is_support()) {
        return m.value(t.left);
    }
    return exp(term_log(m, t, n));
}

namespace {

// term^width as an exact rational, width = right - left (1 on support).
Rational term_power(const WeightSequence& m, HullTerm t, std::size_t n, std::size_t multiplier) {
    if (t.is_support()) {
        return pow_int(*m.exact_value(t.left), static_cast<unsigned>(multiplier));
    }
    return pow_int(*m.exact_value(t.left), static_cast<unsigned>((t.right - n) * multiplier)) *
           pow_int(*m.exact_value(t.right), static_cast<unsigned>((n - t.left) * multiplier));
}

std::size_t width(HullTerm t) {
    return t.is_support() ? 1 : t.right - t.left;
}

}  // namespace

std::optional<Rational> term_exact(const WeightSequence& m, HullTerm t, std::size_t n) {
    if (!m.is_exact()) {
        return std::nullopt;
    }
    if (t.is_support()) {
        return m.exact_value(t.left);
    }
    return exact_root(term_power(m, t, n, 1), static_cast<unsigned>(width(t)));
}

int compare_terms(const WeightSequence& m, HullTerm a, HullTerm b, std::size_t n) {
    Real la = term_log(m, a, n), lb = term_log(m, b, n);
    Real scale = abs(la) + abs(lb) + 1;
    return filtered_sign(la - lb, scale, m.is_exact(), [&] {
        // Compare a^(wa*wb) with b^(wa*wb).
        return sign_of(term_power(m, a, n, width(b)), term_power(m, b, n, width(a)));
    });
}

// ---------------------------------------------------------------------------
// Minorant

std::optional<std::vector<Rational>> RegularizedSequence::exact_minorant() const {
    if (!source.is_exact()) {
        return std::nullopt;
    }
    std::vector<Rational> out;
    out.reserve(terms.size());
    for (std::size_t n = 0; n < terms.size(); ++n) {
        auto v = term_exact(source, terms[n], n);
        if (!v) {
            return std::nullopt;
        }
        out.push_back(std::move(*v));
    }
    return out;
}

WeightSequence RegularizedSequence::as_sequence() const {
    std::string name = source.name() + "^C";
    if (auto exact = exact_minorant()) {
        return WeightSequence::from_rationals(std::move(name), std::move(*exact));
    }
    return WeightSequence::from_reals(std::move(name), minorant);
}

RegularizedSequence log_convex_minorant(const WeightSequence& m, std::size_t upto) {
    RegularizedSequence out{m.prefix(upto), {}, {}, {}, {}};
    const WeightSequence& p = out.source;

    // Monotone chain over increasing n; pop only points strictly above the
    // chord so collinear points stay on the hull.
    std::vector<std::size_t> hull;
    hull.reserve(upto + 1);
    for (std::size_t n = 0; n <= upto; ++n) {
        while (hull.size() >= 2 && chord_side(p, hull[hull.size() - 2], hull.back(), n) > 0) {
            hull.pop_back();
        }
        hull.push_back(n);
    }

    out.terms.resize(upto + 1);
    for (std::size_t h = 0; h < hull.size(); ++h) {
        out.terms[hull[h]] = {hull[h], hull[h]};
        if (h + 1 < hull.size()) {
            for (std::size_t n = hull[h] + 1; n < hull[h + 1]; ++n) {
                out.terms[n] = {hull[h], hull[h + 1]};
            }
        }
    }
    out.minorant.reserve(upto + 1);
    out.log_minorant.reserve(upto + 1);
    for (std::size_t n = 0; n <= upto; ++n) {
        out.minorant.push_back(term_value(p, out.terms[n], n));
        out.log_minorant.push_back(term_log(p, out.terms[n], n));
    }
    out.support = std::move(hull);
    return out;
}

// ---------------------------------------------------------------------------
// Denjoy-Carleman

DcDiagnostics dc_partial_sums(const WeightSequence& m, std::size_t upto) {
    RegularizedSequence reg = log_convex_minorant(m, upto);
    DcDiagnostics out;
    out.partial_sums.reserve(upto);
    Real sum = 0;
    for (std::size_t n = 0; n < upto; ++n) {
        sum += exp(reg.log_minorant[n] - reg.log_minorant[n + 1]);
        out.partial_sums.push_back(sum);
    }
    if (upto <= kExactSumLimit) {
        if (auto exact = reg.exact_minorant()) {
            std::vector<Rational> sums;
            sums.reserve(upto);
            Rational acc = 0;
            for (std::size_t n = 0; n < upto; ++n) {
                acc += (*exact)[n] / (*exact)[n + 1];
                sums.push_back(acc);
            }
            out.exact_partial_sums = std::move(sums);
        }
    }
    if (const Family* f = m.family()) {
        ClassVerdict v = classify_quasianalytic(f->descriptor);
        out.verdict = v.verdict;
        out.justification = std::move(v.justification);
        out.basis = VerdictBasis::closed_form;
    } else {
        out.verdict = Verdict::inconclusive;
        out.basis = VerdictBasis::prefix_only;
        out.justification = "divergence is not decidable from a finite prefix";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Transforms

WeightSequence power_transform_sequence(const WeightSequence& m, unsigned k, std::size_t upto) {
    if (k < 2) {
        throw InputError("power transform needs k >= 2");
    }
    std::size_t needed = upto * k + 1;
    if (!m.has_index(needed)) {
        throw InputError("power transform with k=" + std::to_string(k) + " up to n=" + std::to_string(upto) +
                         ": need " + std::to_string(needed) + " values after M_0 (M_0..M_" + std::to_string(needed) + ")");
    }
    WeightSequence p = m.prefix(std::max<std::size_t>(needed, 2));
    std::string name = m.name() + "^(" + std::to_string(k) + ")";

    if (p.is_exact()) {
        std::vector<Rational> out;
        out.reserve(upto + 1);
        Rational best = 0;
        Rational j_fact = 1;
        std::size_t next_j = 0;
        Rational n_fact = 1;
        for (std::size_t n = 0; n <= upto; ++n) {
            if (n > 0) {
                n_fact *= n;
            }
            for (; next_j <= n * k + 1; ++next_j) {
                if (next_j > 0) {
                    j_fact *= next_j;
                }
                Rational candidate = *p.exact_value(next_j) / j_fact;
                if (candidate > best) {
                    best = candidate;
                }
            }
            out.push_back(n_fact * best);
        }
        return WeightSequence::from_rationals(std::move(name), std::move(out));
    }

    std::vector<Real> out;
    out.reserve(upto + 1);
    Real best_log = 0;
    bool have_best = false;
    Real log_j_fact = 0;
    Real log_n_fact = 0;
    std::size_t next_j = 0;
    for (std::size_t n = 0; n <= upto; ++n) {
        if (n > 0) {
            log_n_fact += log(Real(n));
        }
        for (; next_j <= n * k + 1; ++next_j) {
            if (next_j > 0) {
                log_j_fact += log(Real(next_j));
            }
            Real candidate = p.log_value(next_j) - log_j_fact;
            if (!have_best || candidate > best_log) {
                best_log = candidate;
                have_best = true;
            }
        }
        out.push_back(exp(log_n_fact + best_log));
    }
    return WeightSequence::from_reals(std::move(name), std::move(out));
}

WeightSequence hat_regularize(const WeightSequence& m, std::size_t upto) {
    WeightSequence p = m.prefix(upto);
    std::string name = m.name() + "^hat";
    if (p.is_exact()) {
        std::vector<Rational> out;
        out.reserve(upto + 1);
        out.push_back(*p.exact_value(0));
        for (std::size_t n = 1; n <= upto; ++n) {
            Rational growth = *p.exact_value(n) / *p.exact_value(n - 1);
            Rational floor(n);
            out.push_back(out.back() * (growth > floor ? growth : floor));
        }
        return WeightSequence::from_rationals(std::move(name), std::move(out));
    }
    std::vector<Real> out;
    out.reserve(upto + 1);
    Real log_hat = p.log_value(0);
    out.push_back(p.value(0));
    for (std::size_t n = 1; n <= upto; ++n) {
        Real growth = p.log_value(n) - p.log_value(n - 1);
        Real floor = log(Real(n));
        log_hat += growth > floor ? growth : floor;
        out.push_back(exp(log_hat));
    }
    return WeightSequence::from_reals(std::move(name), std::move(out));
}

namespace {

std::size_t check_range(const WeightSequence& m, std::optional<std::size_t> upto) {
    if (upto) {
        return *upto;
    }
    if (auto last = m.last_index()) {
        return *last;
    }
    throw InputError("family sequences need an explicit upto for this check");
}

}  // namespace

bool check_log_convex(const WeightSequence& m, std::optional<std::size_t> upto) {
    WeightSequence p = m.prefix(check_range(m, upto));
    for (std::size_t n = 1; n + 1 <= *p.last_index(); ++n) {
        if (chord_side(p, n - 1, n, n + 1) > 0) {
            return false;
        }
    }
    return true;
}

bool check_factorial_monotone(const WeightSequence& m, std::optional<std::size_t> upto) {
    WeightSequence p = m.prefix(check_range(m, upto));
    for (std::size_t n = 0; n < *p.last_index(); ++n) {
        Real lhs = p.log_value(n + 1);
        Real rhs = p.log_value(n) + log(Real(n + 1));
        Real scale = abs(lhs) + abs(rhs) + 1;
        int side = filtered_sign(lhs - rhs, scale, p.is_exact(), [&] {
            return sign_of(*p.exact_value(n + 1), Rational(n + 1) * *p.exact_value(n));
        });
        if (side < 0) {
            return false;
        }
    }
    return true;
}

}  // namespace carleman
