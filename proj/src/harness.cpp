#include "carleman/harness.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace carleman {

namespace {

constexpr const char* kGridNote = "grid maxima; lower estimates of true suprema";

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep)) {
        out.push_back(item);
    }
    return out;
}

void require_open_unit(const Grid& grid, const std::string& suite) {
    if (grid.points.empty()) {
        throw InputError(suite + ": grid is empty");
    }
    for (const Real& x : grid.points) {
        if (!(x > 0) || x > 1) {
            throw InputError(suite + ": grid points must lie in (0, 1]");
        }
    }
}

Real factorial_real(std::size_t n) {
    Real f = 1;
    for (std::size_t i = 2; i <= n; ++i) {
        f *= Real(i);
    }
    return f;
}

// Worst row and verdict; `extra` carries suite-specific conditions.
void finalize(VerificationReport& report, const Real& tol, bool extra) {
    bool ok = true;
    for (std::size_t r = 0; r < report.rows.size(); ++r) {
        const ReportRow& row = report.rows[r];
        if (!within_bound(row.actual, row.bound, tol)) {
            ok = false;
        }
        if (!report.worst || row.ratio > report.rows[*report.worst].ratio) {
            report.worst = r;
        }
    }
    report.pass = ok && extra;
}

VerificationReport start_report(const std::string& suite, const std::string& subject, std::size_t orders,
                                const Grid& grid, const HarnessConfig& cfg) {
    VerificationReport report;
    report.suite = suite;
    report.subject = subject;
    report.orders = orders;
    report.grid_spec = grid.spec;
    report.grid = grid.points;
    report.tolerance_exp = cfg.tolerance_exp;
    report.annotations.emplace_back("sup_semantics", kGridNote);
    return report;
}

// Fitted second constant, clamped to the ceiling so that an over-ceiling fit
// shows up as violated rows.
Real clamp_to_ceiling(const Real& value, const HarnessConfig& cfg) {
    return value > cfg.ceiling ? cfg.ceiling : value;
}

std::string yes_no(bool b) {
    return b ? "true" : "false";
}

}  // namespace

// ---------------------------------------------------------------------------
// Grids and pairs

Grid dyadic_grid(unsigned j_max, bool closed) {
    if (j_max < 1) {
        throw InputError("dyadic grids need J >= 1");
    }
    Grid grid;
    grid.spec = (closed ? "dyadic-closed:" : "dyadic:") + std::to_string(j_max);
    if (closed) {
        grid.points.emplace_back(1);
    }
    for (unsigned j = 1; j <= j_max; ++j) {
        grid.points.push_back(ldexp(Real(1), -static_cast<int>(j)));
    }
    if (closed) {
        grid.points.emplace_back(0);
    }
    return grid;
}

Grid parse_grid(const std::string& spec) {
    auto parse_j = [&](const std::string& tail) {
        try {
            std::size_t used = 0;
            long j = std::stol(tail, &used);
            if (used != tail.size() || j < 1 || j > 4096) {
                throw InputError("");
            }
            return static_cast<unsigned>(j);
        } catch (const std::exception&) {
            throw InputError("malformed grid '" + spec + "' (expected dyadic:J with J >= 1)");
        }
    };
    if (spec.rfind("dyadic-closed:", 0) == 0) {
        return dyadic_grid(parse_j(spec.substr(14)), true);
    }
    if (spec.rfind("dyadic:", 0) == 0) {
        return dyadic_grid(parse_j(spec.substr(7)), false);
    }
    Grid grid;
    grid.spec = spec;
    for (const auto& item : split(spec, ',')) {
        grid.points.push_back(to_real(parse_rational(item)));
    }
    if (grid.points.empty()) {
        throw InputError("grid is empty");
    }
    return grid;
}

void validate_pair(const SubstitutionPair& pair, std::size_t order, const HarnessConfig& cfg) {
    if (pair.k < 2) {
        throw InputError("pair '" + pair.id + "': k must be at least 2");
    }
    std::mt19937_64 rng(0x5eed5eedULL);
    std::uniform_int_distribution<long> draw(1, 1L << 20);
    const Real tol = cfg.tolerance();
    for (int i = 0; i < 16; ++i) {
        Real x = ldexp(Real(draw(rng)), -20);
        Real fx = pair.f.value(x);
        Real gx = pair.g.value(pow(x, Real(pair.k)));
        Real scale = std::max(abs(fx), abs(gx));
        if (abs(fx - gx) > tol * scale) {
            throw InputError("pair '" + pair.id + "': f(x) != g(x^k) at x = " + format_real(x));
        }
    }
    try {
        (void)pair.g.jet<Real>(Real(0), order, cfg.budget);
    } catch (const InputError& e) {
        throw InputError("pair '" + pair.id + "': g has no jet at 0 (" + e.what() + ")");
    }
}

EmpiricalSup measure_sup_derivatives(const Function& fn, std::size_t order, const Grid& grid,
                                     const OrderBudget& budget) {
    if (grid.points.empty()) {
        throw InputError("measure_sup_derivatives: grid is empty");
    }
    EmpiricalSup out;
    out.sup.assign(order + 1, Real(0));
    out.argmax.assign(order + 1, grid.points.front());
    std::vector<bool> seen(order + 1, false);
    for (const Real& x : grid.points) {
        Jet<Real> jet = fn.jet<Real>(x, order, budget);
        for (std::size_t n = 0; n <= order; ++n) {
            Real v = abs(jet.derivative(n));
            if (!seen[n] || v > out.sup[n]) {
                out.sup[n] = v;
                out.argmax[n] = x;
                seen[n] = true;
            }
        }
    }
    return out;
}

WeightSequence resolve_bound_sequence(const SubstitutionPair& pair, std::size_t upto, const OrderBudget& budget) {
    const std::size_t length = std::max<std::size_t>(upto, 2);
    if (pair.m_source.kind == BoundSource::Kind::sequence) {
        const WeightSequence& m = *pair.m_source.sequence;
        if (!m.has_index(length)) {
            throw InputError("pair '" + pair.id + "': bound sequence is shorter than the " + std::to_string(upto) +
                             " orders requested");
        }
        return m.prefix(length);
    }
    EmpiricalSup measured = measure_sup_derivatives(pair.f, length, parse_grid(pair.m_source.measure_grid), budget);
    std::vector<Real> values;
    values.reserve(measured.sup.size());
    for (const Real& v : measured.sup) {
        values.push_back(v > 0 ? v : Real(1));
    }
    return WeightSequence::from_reals("measured:" + pair.f.describe(), std::move(values));
}

std::string VerificationReport::annotation(const std::string& key) const {
    for (const auto& [k, v] : annotations) {
        if (k == key) {
            return v;
        }
    }
    return {};
}

// ---------------------------------------------------------------------------
// Fitting

FitResult fit_class_constants(const ClassMembershipQuery& query) {
    FitResult fit;
    std::size_t max_n = 0;
    for (const auto& s : query.samples) {
        max_n = std::max(max_n, s.n);
    }
    fit.d.assign(query.samples.empty() ? 0 : max_n + 1, Real(0));
    for (const auto& s : query.samples) {
        if (s.x == 0 && query.a > 0) {
            continue;
        }
        Real weight = query.a == 0 ? Real(1) : pow(abs(s.x), query.a * Real(s.n));
        Real d = abs(s.value) * weight / query.m.value(s.n);
        if (d > fit.d[s.n]) {
            fit.d[s.n] = d;
        }
    }
    fit.first = fit.d.empty() ? Real(1) : std::max(fit.d[0], Real(1));
    fit.second = 0;
    for (std::size_t n = 1; n < fit.d.size(); ++n) {
        if (fit.d[n] > 0) {
            Real root = pow(fit.d[n] / fit.first, Real(1) / Real(n));
            if (root > fit.second) {
                fit.second = root;
            }
        }
    }
    return fit;
}

// ---------------------------------------------------------------------------
// Suites

VerificationReport verify_theorem1(const SubstitutionPair& pair, std::size_t orders, const Grid& grid,
                                   const HarnessConfig& cfg, const std::optional<WeightSequence>& override_m) {
    require_open_unit(grid, "theorem1");
    validate_pair(pair, orders, cfg);
    WeightSequence m = [&] {
        if (!override_m) {
            return resolve_bound_sequence(pair, orders, cfg.budget);
        }
        if (!override_m->has_index(orders)) {
            throw InputError("bound sequence is shorter than the " + std::to_string(orders) + " orders requested");
        }
        return *override_m;
    }();

    VerificationReport report = start_report("theorem1", pair.id, orders, grid, cfg);
    report.annotations.emplace_back("bound_sequence", m.name());
    std::vector<Jet<Real>> jets;
    jets.reserve(grid.points.size());
    for (const Real& x : grid.points) {
        jets.push_back(pair.g.jet<Real>(x, orders, cfg.budget));
    }
    for (std::size_t n = 0; n <= orders; ++n) {
        for (std::size_t p = 0; p < grid.points.size(); ++p) {
            const Real& x = grid.points[p];
            Real actual = abs(jets[p].derivative(n));
            Real bound = lemma_power_sub_bound(m, pair.k, n, x);
            report.rows.push_back({n, std::nullopt, x, actual, bound, safe_ratio(actual, bound), "plain"});
        }
    }
    finalize(report, cfg.tolerance(), true);
    return report;
}

namespace {

// g^(n)(0)/n! == f^(kn)(0)/(kn)!, exactly if both jets are rational.
std::pair<bool, std::string> check_zero_identity(const SubstitutionPair& pair, std::size_t orders,
                                                 const HarnessConfig& cfg) {
    try {
        Jet<Rational> gj = pair.g.jet<Rational>(Rational(0), orders, cfg.budget);
        Jet<Rational> fj = pair.f.jet<Rational>(Rational(0), orders * pair.k, cfg.budget);
        for (std::size_t n = 0; n <= orders; ++n) {
            if (gj[n] != fj[n * pair.k]) {
                return {false, "exact mismatch at n=" + std::to_string(n)};
            }
        }
        return {true, "exact"};
    } catch (const NotExactError&) {
        Jet<Real> gj = pair.g.jet<Real>(Real(0), orders, cfg.budget);
        Jet<Real> fj = pair.f.jet<Real>(Real(0), orders * pair.k, cfg.budget);
        const Real tol = cfg.tolerance();
        for (std::size_t n = 0; n <= orders; ++n) {
            Real scale = std::max(abs(gj[n]), abs(fj[n * pair.k]));
            if (abs(gj[n] - fj[n * pair.k]) > tol * scale) {
                return {false, "precision mismatch at n=" + std::to_string(n)};
            }
        }
        return {true, "precision"};
    }
}

}  // namespace

VerificationReport verify_prop2(const SubstitutionPair& pair, std::size_t orders, const Grid& grid,
                                const HarnessConfig& cfg) {
    validate_pair(pair, orders, cfg);
    WeightSequence m = resolve_bound_sequence(pair, orders * pair.k + 1, cfg.budget);
    WeightSequence transformed = power_transform_sequence(m, pair.k, std::max<std::size_t>(orders, 2));

    Grid samples_grid = grid;
    if (std::none_of(grid.points.begin(), grid.points.end(), [](const Real& x) { return x == 0; })) {
        samples_grid.points.emplace_back(0);
    }
    for (const Real& x : samples_grid.points) {
        if (x < 0 || x > 1) {
            throw InputError("prop2: grid points must lie in [0, 1]");
        }
    }

    ClassMembershipQuery query{transformed, Real(0), {}};
    for (const Real& x : samples_grid.points) {
        Jet<Real> jet = pair.g.jet<Real>(x, orders, cfg.budget);
        for (std::size_t n = 0; n <= orders; ++n) {
            query.samples.push_back({n, x, abs(jet.derivative(n))});
        }
    }
    FitResult fit = fit_class_constants(query);
    Real b = clamp_to_ceiling(fit.second, cfg);

    VerificationReport report = start_report("prop2", pair.id, orders, samples_grid, cfg);
    report.annotations.emplace_back("bound_sequence", transformed.name());
    for (const auto& s : query.samples) {
        Real bound = fit.first * pow(b, Real(s.n)) * transformed.value(s.n);
        report.rows.push_back({s.n, std::nullopt, s.x, s.value, bound, safe_ratio(s.value, bound), "plain"});
    }
    auto [identity_ok, identity_note] = check_zero_identity(pair, orders, cfg);
    report.annotations.emplace_back("deriv0_identity", identity_note);
    report.annotations.emplace_back("within_ceiling", yes_no(fit.second <= cfg.ceiling));
    report.fit = std::move(fit);
    finalize(report, cfg.tolerance(), identity_ok && report.fit->second <= cfg.ceiling);
    return report;
}

VerificationReport verify_zero_bound(const SubstitutionPair& pair, std::size_t orders, const HarnessConfig& cfg) {
    validate_pair(pair, orders, cfg);
    const unsigned k = pair.k;
    WeightSequence m = resolve_bound_sequence(pair, orders * k, cfg.budget);
    // Effective weights M_{kn} / (kn)!^{1-1/k}.
    std::vector<Real> weights;
    const Real exponent = Real(1) - Real(1) / Real(k);
    const std::size_t upto = std::max<std::size_t>(orders, 2);
    for (std::size_t n = 0; n <= upto; ++n) {
        Real mv = m.has_index(n * k) ? m.value(n * k) : Real(1);
        weights.push_back(mv / pow(factorial_real(n * k), exponent));
    }
    WeightSequence effective = WeightSequence::from_reals(m.name() + "[kn]/(kn)!^(1-1/k)", std::move(weights));

    Jet<Real> jet = pair.g.jet<Real>(Real(0), orders, cfg.budget);
    ClassMembershipQuery query{effective, Real(0), {}};
    for (std::size_t n = 0; n <= orders; ++n) {
        query.samples.push_back({n, Real(0), abs(jet.derivative(n))});
    }
    FitResult fit = fit_class_constants(query);
    Real b = clamp_to_ceiling(fit.second, cfg);

    Grid zero{"0", {Real(0)}};
    VerificationReport report = start_report("zero_bound", pair.id, orders, zero, cfg);
    for (const auto& s : query.samples) {
        Real bound = fit.first * pow(b, Real(s.n)) * effective.value(s.n);
        report.rows.push_back({s.n, std::nullopt, s.x, s.value, bound, safe_ratio(s.value, bound), "plain"});
    }
    auto [identity_ok, identity_note] = check_zero_identity(pair, orders, cfg);
    report.annotations.emplace_back("deriv0_identity", identity_note);
    report.fit = std::move(fit);
    finalize(report, cfg.tolerance(), identity_ok && report.fit->second <= cfg.ceiling);
    return report;
}

WeightSequence lemma41_premise(const SubstitutionPair& pair, std::size_t orders, const OrderBudget& budget) {
    const std::size_t upto = std::max<std::size_t>(orders, 2);
    WeightSequence m = resolve_bound_sequence(pair, upto, budget);
    WeightSequence doubled = [&] {
        if (m.is_exact()) {
            std::vector<Rational> v;
            for (std::size_t n = 0; n <= upto; ++n) {
                v.push_back(*m.exact_value(n) * pow_int(Rational(2), static_cast<unsigned>(n)));
            }
            return WeightSequence::from_rationals("2^n*" + m.name(), std::move(v));
        }
        std::vector<Real> v;
        for (std::size_t n = 0; n <= upto; ++n) {
            v.push_back(ldexp(m.value(n), static_cast<int>(n)));
        }
        return WeightSequence::from_reals("2^n*" + m.name(), std::move(v));
    }();
    return hat_regularize(doubled, upto);
}

VerificationReport verify_lemma41(const Function& g, unsigned k, const WeightSequence& m, std::size_t orders,
                                  const Grid& grid, const HarnessConfig& cfg) {
    require_open_unit(grid, "lemma41");
    if (k < 2) {
        throw InputError("lemma41: k must be at least 2");
    }
    if (!m.has_index(orders)) {
        throw InputError("lemma41: premise sequence is shorter than the orders requested");
    }
    if (!check_factorial_monotone(m, std::max<std::size_t>(orders, 2))) {
        throw InputError("lemma41: premise sequence has M_n/n! decreasing");
    }
    const Real tol = cfg.tolerance();
    const Real a = Real(1) - Real(1) / Real(k);

    // Premise certification on the same grid as the conclusion.
    for (const Real& x : grid.points) {
        Jet<Real> gj = g.jet<Real>(x, orders, cfg.budget);
        for (std::size_t n = 0; n <= orders; ++n) {
            Real bound = m.value(n) / pow(x, a * Real(n));
            if (!within_bound(abs(gj.derivative(n)), bound, tol)) {
                throw InputError("lemma41: premise |g^(n)(x)| <= M_n x^{-(1-1/k)n} fails at n=" +
                                 std::to_string(n) + ", x=" + format_real(x));
            }
        }
    }

    struct Sample {
        std::size_t n;
        Real x;
        Real value;
        Real weight;
        BoundBranch branch;
    };
    std::vector<Sample> samples;
    std::vector<Real> d(orders + 1, Real(0));
    for (const Real& x : grid.points) {
        Jet<Real> outer = g.jet<Real>(pow(x, Real(k)), orders, cfg.budget);
        Jet<Real> f = compose(outer, power_map_jet<Real>(x, k, orders));
        for (std::size_t n = 0; n <= orders; ++n) {
            bool log_branch = n > 0 && n % k == 0;
            Real weight = log_branch ? Real(1 - log(x)) : Real(1);
            Real value = abs(f.derivative(n));
            samples.push_back({n, x, value, weight, log_branch ? BoundBranch::log_factor : BoundBranch::plain});
            Real dn = value / (m.value(n) * weight);
            if (dn > d[n]) {
                d[n] = dn;
            }
        }
    }
    FitResult fit;
    fit.second_name = "C";
    fit.d = d;
    fit.first = std::max(d[0], Real(1));
    fit.second = 0;
    for (std::size_t n = 1; n <= orders; ++n) {
        if (d[n] > 0) {
            fit.second = std::max(fit.second, Real(pow(d[n] / fit.first, Real(1) / Real(n))));
        }
    }
    // Lemma constants must be positive; a vanishing fit is reported as 0 but
    // evaluated with the smallest positive stand-in.
    Real c_used = clamp_to_ceiling(fit.second, cfg);
    if (c_used == 0) {
        c_used = ldexp(Real(1), -static_cast<int>(precision_bits()));
    }

    VerificationReport report = start_report("lemma41", g.describe() + "(x^" + std::to_string(k) + ")", orders, grid,
                                             cfg);
    report.annotations.emplace_back("premise", "certified on grid: |g^(n)(x)| <= M_n x^{-(1-1/k)n}");
    report.annotations.emplace_back("premise_sequence", m.name());
    for (const auto& s : samples) {
        BoundValue bound = lemma_log_bound(m, k, s.n, s.x, fit.first, c_used);
        report.rows.push_back({s.n, std::nullopt, s.x, s.value, bound.value, safe_ratio(s.value, bound.value),
                               to_string(bound.branch)});
    }
    report.annotations.emplace_back("within_ceiling", yes_no(fit.second <= cfg.ceiling));
    report.fit = std::move(fit);
    finalize(report, tol, report.fit->second <= cfg.ceiling);
    return report;
}

VerificationReport verify_lemma32(const Function& g, const Rational& sigma, const WeightSequence& m,
                                  std::size_t orders, const Grid& grid, const HarnessConfig& cfg) {
    require_open_unit(grid, "lemma32");
    if (!m.has_index(orders)) {
        throw InputError("lemma32: sequence is shorter than the orders requested");
    }
    const Real premise_exponent = Real(1) - to_real(sigma);
    std::vector<Jet<Real>> jets;
    Real scale = 1;
    for (const Real& x : grid.points) {
        jets.push_back(g.jet<Real>(x, orders, cfg.budget));
        for (std::size_t n = 0; n <= orders; ++n) {
            Real needed = abs(jets.back().derivative(n)) * pow(x, premise_exponent * Real(n)) / m.value(n);
            if (needed > scale) {
                scale = needed;
            }
        }
    }

    VerificationReport report = start_report("lemma32", g.describe(), orders, grid, cfg);
    report.annotations.emplace_back("sigma", format_rational(sigma));
    report.annotations.emplace_back("premise_scale", format_real(scale));
    bool above = false, equal = false, below = false;
    for (std::size_t n = 1; n <= orders; ++n) {
        for (std::size_t ell = 0; ell <= n; ++ell) {
            for (std::size_t p = 0; p < grid.points.size(); ++p) {
                const Real& x = grid.points[p];
                BoundValue b = lemma_add_smooth_bound(m, sigma, n, ell, x);
                above |= b.branch == BoundBranch::above;
                equal |= b.branch == BoundBranch::equal;
                below |= b.branch == BoundBranch::below;
                Real bound = scale * b.value;
                Real actual = abs(jets[p].derivative(ell));
                report.rows.push_back({n, ell, x, actual, bound, safe_ratio(actual, bound), to_string(b.branch)});
            }
        }
    }
    report.annotations.emplace_back("branches_covered",
                                    std::string(above ? "above " : "") + (equal ? "equal " : "") +
                                        (below ? "below" : ""));
    finalize(report, cfg.tolerance(), true);
    return report;
}

VerificationReport example1_report(std::size_t orders, const Grid& grid, const HarnessConfig& cfg) {
    require_open_unit(grid, "example1");
    Function g(fn::ExpNegInv{});
    VerificationReport report = start_report("example1", g.describe(), orders, grid, cfg);
    std::vector<Jet<Real>> jets;
    for (const Real& x : grid.points) {
        jets.push_back(g.jet<Real>(x, orders, cfg.budget));
    }
    auto smallest = std::min_element(grid.points.begin(), grid.points.end()) - grid.points.begin();
    for (std::size_t n = 0; n <= orders; ++n) {
        Real best_ratio = -1;
        std::size_t best_p = 0;
        for (std::size_t p = 0; p < grid.points.size(); ++p) {
            const Real& x = grid.points[p];
            Real actual = abs(jets[p].derivative(n));
            Real bound = factorial_real(n) * ldexp(Real(1), static_cast<int>(n)) / pow(x, Real(n));
            Real ratio = safe_ratio(actual, bound);
            report.rows.push_back({n, std::nullopt, x, actual, bound, ratio, "plain"});
            if (ratio > best_ratio) {
                best_ratio = ratio;
                best_p = p;
            }
        }
        bool interior = best_p != 0 && best_p + 1 != grid.points.size();
        report.annotations.emplace_back("argmax_ratio.n=" + std::to_string(n),
                                        format_real(grid.points[best_p]) + (interior ? " (interior)" : " (endpoint)"));
        report.annotations.emplace_back("flatness.n=" + std::to_string(n),
                                        format_real(abs(jets[smallest].derivative(n))));
    }
    finalize(report, cfg.tolerance(), true);
    return report;
}

// ---------------------------------------------------------------------------
// Truncated exponential sums

DecayFamily DecayFamily::parse(const std::string& spec) {
    DecayFamily d;
    if (spec == "single") {
        d.kind = Kind::single;
        d.parameter = 0;
        return d;
    }
    auto colon = spec.find(':');
    if (colon == std::string::npos) {
        throw InputError("malformed decay '" + spec + "' (expected power:p, geometric:r or single)");
    }
    std::string kind = spec.substr(0, colon);
    d.parameter = parse_rational(spec.substr(colon + 1));
    if (kind == "power") {
        d.kind = Kind::power;
        if (denominator(d.parameter) != 1 || d.parameter < 1) {
            throw InputError("power decay needs an integer exponent >= 1");
        }
    } else if (kind == "geometric") {
        d.kind = Kind::geometric;
        if (d.parameter < 1) {
            throw InputError("geometric decay needs a ratio >= 1");
        }
    } else {
        throw InputError("unknown decay kind '" + kind + "'");
    }
    return d;
}

std::string DecayFamily::describe() const {
    switch (kind) {
        case Kind::power:
            return "power:" + format_rational(parameter);
        case Kind::geometric:
            return "geometric:" + format_rational(parameter);
        case Kind::single:
            return "single";
    }
    return "single";
}

Rational DecayFamily::coefficient(long j) const {
    const auto m = static_cast<unsigned>(std::labs(j));
    switch (kind) {
        case Kind::power:
            return Rational(1) / pow_int(Rational(1 + m), static_cast<unsigned>(numerator(parameter)));
        case Kind::geometric:
            return Rational(1) / pow_int(parameter, m);
        case Kind::single:
            return j == 0 ? Rational(1) : Rational(0);
    }
    return 0;
}

namespace {

VerificationReport example2_fit(const std::string& label, const Function& h, std::size_t orders, const Grid& grid,
                                const HarnessConfig& cfg) {
    const std::size_t upto = std::max<std::size_t>(orders, 2);
    WeightSequence factorials =
        WeightSequence::from_family("n!", make_family({"gevrey", {{"s", "1"}}})).prefix(upto);
    ClassMembershipQuery query{factorials, Real(1), {}};
    for (const Real& x : grid.points) {
        Jet<Real> jet = h.jet<Real>(x, orders, cfg.budget);
        for (std::size_t n = 0; n <= orders; ++n) {
            query.samples.push_back({n, x, abs(jet.derivative(n))});
        }
    }
    FitResult fit = fit_class_constants(query);
    Real b = clamp_to_ceiling(fit.second, cfg);
    VerificationReport report = start_report("example2", label + ": " + h.describe(), orders, grid, cfg);
    for (const auto& s : query.samples) {
        Real bound = fit.first * pow(b, Real(s.n)) * factorials.value(s.n) / pow(s.x, Real(s.n));
        report.rows.push_back({s.n, std::nullopt, s.x, s.value, bound, safe_ratio(s.value, bound), "plain"});
    }
    report.annotations.emplace_back("class", "C^M_1 with M_n = n!");
    report.annotations.emplace_back("within_ceiling", yes_no(fit.second <= cfg.ceiling));
    report.fit = std::move(fit);
    finalize(report, cfg.tolerance(), report.fit->second <= cfg.ceiling);
    return report;
}

}  // namespace

Example2Result example2_build(const DecayFamily& decay, unsigned truncation, std::size_t orders, const Grid& grid,
                              const HarnessConfig& cfg) {
    if (truncation < 1) {
        throw InputError("example2: truncation J must be at least 1");
    }
    require_open_unit(grid, "example2");
    std::vector<Rational> plus, minus{Rational(0)};
    for (long j = 0; j <= static_cast<long>(truncation); ++j) {
        plus.push_back(decay.coefficient(j));
        if (j > 0) {
            minus.push_back(decay.coefficient(-j));
        }
    }
    // Decay sanity: nonnegative and nonincreasing in |j| on both sides.
    for (const auto* side : {&plus, &minus}) {
        for (std::size_t j = 1; j < side->size(); ++j) {
            if ((*side)[j] < 0 || (j > 1 && (*side)[j] > (*side)[j - 1])) {
                throw InputError("example2: coefficients must be nonnegative and nonincreasing in |j|");
            }
        }
    }
    Function h_plus(fn::ExpDecay{plus});
    Function h_minus(fn::ExpDecay{minus});
    VerificationReport plus_report = example2_fit("h+", h_plus, orders, grid, cfg);
    VerificationReport minus_report = example2_fit("h-", h_minus, orders, grid, cfg);
    for (auto* r : {&plus_report, &minus_report}) {
        r->annotations.emplace_back("decay", decay.describe());
        r->annotations.emplace_back("truncation", std::to_string(truncation));
    }
    return {std::move(h_plus), std::move(h_minus), std::move(plus_report), std::move(minus_report)};
}

}  // namespace carleman
