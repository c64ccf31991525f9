#include "carleman/harness.hpp"
#include "carleman/io.hpp"

#include "doctest.h"
#include "oracles.hpp"

using namespace carleman;

namespace {

SubstitutionPair corpus_pair(const std::string& id) {
    return io::default_corpus().find(id);
}

bool close(const Real& a, const Real& b, unsigned bits = 200) {
    Real scale = std::max(abs(a), abs(b));
    return abs(a - b) <= scale * relative_tolerance(bits);
}

Real factorial(std::size_t n) {
    return to_real(oracle::factorial(static_cast<unsigned>(n)));
}

// d^n/dy^n cosh(sqrt(y)) = sum_{m >= n} m!/(m-n)! y^{m-n} / (2m)!.
Real cosh_sqrt_derivative(std::size_t n, const Real& y) {
    Real sum = 0;
    for (std::size_t m = n; m <= n + 120; ++m) {
        sum += factorial(m) / factorial(m - n) * pow(y, Real(m - n)) / factorial(2 * m);
    }
    return sum;
}

Real cosh_derivative(std::size_t n, const Real& x) {
    return n % 2 == 0 ? cosh(x) : sinh(x);
}

const ReportRow* find_row(const VerificationReport& r, std::size_t n, const Real& x) {
    for (const auto& row : r.rows) {
        if (row.n == n && row.x == x) {
            return &row;
        }
    }
    return nullptr;
}

ClassMembershipQuery query_from_d(const std::vector<Real>& d) {
    ClassMembershipQuery q{WeightSequence::from_family("constant", make_family({"constant", {}})), 0, {}};
    for (std::size_t n = 0; n < d.size(); ++n) {
        q.samples.push_back({n, Real(1), d[n]});
    }
    return q;
}

}  // namespace

TEST_CASE("grids") {
    Grid g = parse_grid("dyadic:3");
    CHECK(g.points == std::vector<Real>{Real(1) / 2, Real(1) / 4, Real(1) / 8});
    Grid c = parse_grid("dyadic-closed:2");
    CHECK(c.points == std::vector<Real>{Real(1), Real(1) / 2, Real(1) / 4, Real(0)});
    Grid e = parse_grid("1/3,0.5");
    REQUIRE(e.points.size() == 2);
    CHECK(close(e.points[0], Real(1) / 3));
    CHECK(e.points[1] == Real(1) / 2);
    CHECK_THROWS_AS(parse_grid("dyadic:0"), InputError);
    CHECK_THROWS_AS(parse_grid("dyadic:x"), InputError);
    CHECK_THROWS_AS(parse_grid(""), InputError);
}

TEST_CASE("corpus pairs are consistent") {
    for (const auto& pair : io::default_corpus().pairs) {
        CAPTURE(pair.id);
        CHECK_NOTHROW(validate_pair(pair, 16));
    }
    SubstitutionPair bad = corpus_pair("cosh2");
    bad.g = Function(fn::Exp{});
    CHECK_THROWS_AS(validate_pair(bad, 4), InputError);
    SubstitutionPair no_jet = corpus_pair("cosh2");
    no_jet.g = Function(fn::ExpNegInv{});
    no_jet.f = power_substituted(Function(fn::ExpNegInv{}), 2);
    CHECK_THROWS_AS(validate_pair(no_jet, 4), InputError);
}

TEST_CASE("measured suprema") {
    const Grid grid = parse_grid("dyadic-closed:6");
    SUBCASE("cosh peaks at 1") {
        EmpiricalSup s = measure_sup_derivatives(Function(fn::Cosh{}), 6, grid);
        for (std::size_t n = 0; n <= 6; ++n) {
            CHECK(close(s.sup[n], cosh_derivative(n, Real(1))));
            CHECK(s.argmax[n] == 1);
        }
    }
    SUBCASE("a constant") {
        EmpiricalSup s = measure_sup_derivatives(Function(fn::Polynomial{{5}}), 3, grid);
        CHECK(s.sup == std::vector<Real>{Real(5), Real(0), Real(0), Real(0)});
    }
    SUBCASE("exp gives e at every order") {
        EmpiricalSup s = measure_sup_derivatives(Function(fn::Exp{}), 5, grid);
        for (const Real& v : s.sup) {
            CHECK(close(v, exp(Real(1))));
        }
    }
    SUBCASE("vanishing derivatives are floored at 1") {
        WeightSequence m = resolve_bound_sequence(corpus_pair("poly2_1"), 4);
        CHECK(close(m.value(0), Real(1)));
        CHECK(close(m.value(1), Real(2)));
        CHECK(close(m.value(2), Real(2)));
        CHECK(m.value(3) == 1);
        CHECK(m.value(4) == 1);
    }
}

TEST_CASE("class constant fit") {
    FitResult zero = fit_class_constants(query_from_d({Real(0), Real(0), Real(0)}));
    CHECK(zero.first == 1);
    CHECK(zero.second == 0);

    FitResult f = fit_class_constants(query_from_d({Real(1), Real(2), Real(8)}));
    CHECK(f.first == 1);
    CHECK(close(f.second, 2 * sqrt(Real(2))));

    FitResult five = fit_class_constants(query_from_d({Real(5), Real(0), Real(0)}));
    CHECK(five.first == 5);
    CHECK(five.second == 0);

    SUBCASE("x = 0 is skipped when a > 0") {
        ClassMembershipQuery q = query_from_d({Real(1), Real(1)});
        q.a = 1;
        q.samples.push_back({1, Real(0), Real(1000)});
        CHECK(fit_class_constants(q).second == 1);
    }
    SUBCASE("scaling the samples by c scales A and keeps D_n / A") {
        std::vector<Real> d{Real(2), Real(3), Real(7), Real(11)};
        FitResult base = fit_class_constants(query_from_d(d));
        const Real c = 3;
        for (Real& v : d) {
            v *= c;
        }
        FitResult scaled = fit_class_constants(query_from_d(d));
        CHECK(close(scaled.first, c * base.first));
        for (std::size_t n = 0; n < d.size(); ++n) {
            CHECK(close(scaled.d[n] / scaled.first, base.d[n] / base.first));
        }
        CHECK(close(scaled.second, base.second));
    }
}

TEST_CASE("theorem1 suite") {
    HarnessConfig cfg;
    SUBCASE("cosh pair with constant bound") {
        VerificationReport r = verify_theorem1(corpus_pair("cosh2"), 12, parse_grid("dyadic:12"), cfg);
        CHECK(r.pass);
        CHECK(r.rows.size() == 13 * 12);
        CHECK(r.annotation("sup_semantics") == "grid maxima; lower estimates of true suprema");
        for (std::size_t n : {0u, 3u, 12u}) {
            for (int j : {1, 6, 12}) {
                Real x = ldexp(Real(1), -j);
                const ReportRow* row = find_row(r, n, x);
                REQUIRE(row);
                CHECK(close(row->actual, cosh_sqrt_derivative(n, x), 180));
                Real bound = ldexp(cosh(Real(1)), static_cast<int>(n)) / pow(x, Real(n) / 2);
                CHECK(close(row->bound, bound, 180));
            }
        }
    }
    SUBCASE("negative control") {
        WeightSequence tenth = io::family_sequence("const:0.1");
        VerificationReport r = verify_theorem1(corpus_pair("cosh2"), 12, parse_grid("dyadic:12"), cfg, tenth);
        CHECK_FALSE(r.pass);
        REQUIRE(r.worst_row());
        CHECK(r.worst_row()->ratio > 1);
    }
    SUBCASE("polynomial and rational pairs") {
        for (const char* id : {"poly2_1", "poly2_2", "poly2_3", "exp3", "rat2", "rat3"}) {
            CAPTURE(id);
            CHECK(verify_theorem1(corpus_pair(id), 10, parse_grid("dyadic:10"), cfg).pass);
        }
    }
    SUBCASE("rejections") {
        CHECK_THROWS_AS(verify_theorem1(corpus_pair("cosh2"), 4, parse_grid("dyadic-closed:4"), cfg), InputError);
        WeightSequence short_m = WeightSequence::from_rationals("short", {1, 1, 1});
        CHECK_THROWS_AS(verify_theorem1(corpus_pair("cosh2"), 4, parse_grid("dyadic:4"), cfg, short_m), InputError);
    }
}

TEST_CASE("prop2 and zero suites") {
    HarnessConfig cfg;
    VerificationReport r = verify_prop2(corpus_pair("cosh2"), 10, parse_grid("dyadic:10"), cfg);
    CHECK(r.pass);
    REQUIRE(r.fit);
    CHECK(r.fit->first <= 4);
    CHECK(r.fit->second <= 16);
    CHECK(r.annotation("deriv0_identity").rfind("exact", 0) == 0);
    CHECK(std::any_of(r.rows.begin(), r.rows.end(), [](const ReportRow& row) { return row.x == 0; }));

    // g^(n)(0) = n!/(2n)!, checked against the rows at x = 0.
    for (std::size_t n = 0; n <= 10; ++n) {
        const ReportRow* row = find_row(r, n, Real(0));
        REQUIRE(row);
        CHECK(close(row->actual, factorial(n) / factorial(2 * n)));
    }

    for (const auto& pair : io::default_corpus().pairs) {
        CAPTURE(pair.id);
        CHECK(verify_prop2(pair, 8, parse_grid("dyadic:8"), cfg).pass);
        VerificationReport z = verify_zero_bound(pair, 8, cfg);
        CHECK(z.pass);
        CHECK(z.suite == "zero_bound");
    }
}

TEST_CASE("lemma41 suite") {
    HarnessConfig cfg;
    const Grid grid = parse_grid("dyadic:12");
    SUBCASE("cosh_sqrt with k = 2") {
        SubstitutionPair pair = corpus_pair("cosh2");
        WeightSequence premise = lemma41_premise(pair, 12);
        VerificationReport r = verify_lemma41(pair.g, 2, premise, 12, grid, cfg);
        CHECK(r.pass);
        REQUIRE(r.fit);
        CHECK(r.fit->second_name == "C");
        CHECK(r.fit->second <= 4);
        for (const auto& row : r.rows) {
            CHECK(row.branch == ((row.n > 0 && row.n % 2 == 0) ? "log" : "plain"));
            CHECK(close(row.actual, cosh_derivative(row.n, row.x), 180));
        }
    }
    SUBCASE("constant g") {
        Function g(fn::Polynomial{{3}});
        WeightSequence m = hat_regularize(io::family_sequence("const:3"), 8);
        VerificationReport r = verify_lemma41(g, 3, m, 8, grid, cfg);
        CHECK(r.pass);
        CHECK(r.fit->first == 1);
        CHECK(r.fit->second == 0);
    }
    SUBCASE("premise must hold") {
        Function g(fn::Exp{Rational(4)});
        CHECK_THROWS_AS(verify_lemma41(g, 2, io::family_sequence("gevrey:1"), 6, grid, cfg), InputError);
        CHECK_THROWS_AS(verify_lemma41(Function(fn::CoshSqrt{}), 2, io::family_sequence("const:100"), 6, grid, cfg),
                        InputError);
    }
}

TEST_CASE("lemma32 suite covers all branches") {
    HarnessConfig cfg;
    VerificationReport r = verify_lemma32(Function(fn::CoshSqrt{}), Rational(1, 2), io::family_sequence("gevrey:1").prefix(8),
                                          8, parse_grid("dyadic:12"), cfg);
    CHECK(r.pass);
    CHECK(r.annotation("branches_covered") == "above equal below");
    bool above = false, equal = false, below = false;
    for (const auto& row : r.rows) {
        REQUIRE(row.ell);
        const std::size_t twice_l = 2 * *row.ell;
        above |= twice_l > row.n && row.branch == "l>sigma*n";
        equal |= twice_l == row.n && row.branch == "l=sigma*n";
        below |= twice_l < row.n && row.branch == "l<sigma*n";
        CHECK(close(row.actual, abs(cosh_sqrt_derivative(*row.ell, row.x)), 180));
    }
    CHECK((above && equal && below));
}

TEST_CASE("example1 suite: e^{-1/x}") {
    VerificationReport r = example1_report(15, parse_grid("dyadic:15"));
    CHECK(r.pass);
    for (int j : {1, 4, 9}) {
        Real x = ldexp(Real(1), -j);
        Real e = exp(-1 / x);
        CHECK(close(find_row(r, 0, x)->actual, e));
        CHECK(close(find_row(r, 1, x)->actual, e / (x * x)));
        CHECK(close(find_row(r, 2, x)->actual, abs(e * (1 / pow(x, Real(4)) - 2 / pow(x, Real(3))))));
    }
    for (std::size_t n = 0; n <= 15; ++n) {
        const ReportRow* best = nullptr;
        for (const auto& row : r.rows) {
            if (row.n == n && (!best || row.ratio > best->ratio)) {
                best = &row;
            }
        }
        REQUIRE(best);
        const bool interior = best->x != Real(1) / 2 && best->x != ldexp(Real(1), -15);
        CHECK(r.annotation("argmax_ratio.n=" + std::to_string(n)) ==
              format_real(best->x) + (interior ? " (interior)" : " (endpoint)"));
    }
    CHECK(!r.annotation("flatness.n=15").empty());
}

TEST_CASE("example2 suite: truncated exponential sums") {
    HarnessConfig cfg;
    const Grid grid = parse_grid("dyadic:12");
    SUBCASE("power decay") {
        DecayFamily decay = DecayFamily::parse("power:10");
        Example2Result r = example2_build(decay, 40, 12, grid, cfg);
        CHECK(r.pass());
        REQUIRE(r.plus.fit);
        CHECK(r.plus.fit->second <= 1024);
        // h_+^(n)(x) = sum_j a_j (-j)^n e^{-jx}
        const Real x = Real(1) / 8;
        for (std::size_t n : {0u, 5u, 12u}) {
            Real sum = 0;
            for (int j = 0; j <= 40; ++j) {
                sum += pow(Real(1 + j), Real(-10)) * pow(Real(-j), Real(n)) * exp(-Real(j) * x);
            }
            CHECK(close(find_row(r.plus, n, x)->actual, abs(sum), 180));
        }
    }
    SUBCASE("single term") {
        Example2Result r = example2_build(DecayFamily::parse("single"), 3, 8, grid, cfg);
        CHECK(r.pass());
        CHECK(r.plus.fit->first == 1);
        CHECK(r.plus.fit->second == 0);
    }
    SUBCASE("geometric decay") {
        Example2Result r = example2_build(DecayFamily::parse("geometric:2"), 30, 12, grid, cfg);
        CHECK(r.pass());
        CHECK(r.plus.fit->second <= 4);
        CHECK(r.minus.fit->second <= 4);
    }
    SUBCASE("rejections") {
        CHECK_THROWS_AS(example2_build(DecayFamily::parse("power:10"), 0, 4, grid, cfg), InputError);
        CHECK_THROWS_AS(DecayFamily::parse("geometric:1/2"), InputError);
        CHECK_THROWS_AS(DecayFamily::parse("wave:3"), InputError);
    }
}

TEST_CASE("reports are deterministic") {
    auto render = [] {
        return io::dump(io::report_to_json(verify_prop2(corpus_pair("rat2"), 6, parse_grid("dyadic:6"))));
    };
    CHECK(render() == render());
}
