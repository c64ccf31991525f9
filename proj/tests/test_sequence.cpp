#include "carleman/sequence.hpp"

#include "doctest.h"
#include "oracles.hpp"

#include <random>

using namespace carleman;

namespace {

WeightSequence exact(std::vector<Rational> v, std::string name = "m") {
    return WeightSequence::from_rationals(std::move(name), std::move(v));
}

std::vector<Rational> factorials(unsigned upto, unsigned power = 1) {
    std::vector<Rational> v;
    for (unsigned n = 0; n <= upto; ++n) {
        v.push_back(oracle::rpow(oracle::factorial(n), power));
    }
    return v;
}

WeightSequence family(const std::string& id, std::map<std::string, std::string> params = {}) {
    return WeightSequence::from_family(id, make_family({id, std::move(params)}));
}

oracle::Candidate as_candidate(HullTerm t, std::size_t n) {
    if (t.is_support()) {
        return {n, n, 1, 0, 1};
    }
    return {t.left, t.right, static_cast<unsigned>(t.right - n), static_cast<unsigned>(n - t.left),
            static_cast<unsigned>(t.right - t.left)};
}

std::vector<Rational> exact_values(const WeightSequence& m, std::size_t upto) {
    std::vector<Rational> v;
    for (std::size_t n = 0; n <= upto; ++n) {
        v.push_back(*m.exact_value(n));
    }
    return v;
}

}  // namespace

TEST_CASE("loading explicit and family sequences") {
    WeightSequence m = exact({1, 1, 2, 6, 24});
    CHECK(m.size() == 5);
    CHECK(m.is_exact());
    CHECK(*m.last_index() == 4);

    WeightSequence g = family("gevrey", {{"s", "1"}});
    CHECK(g.kind() == SequenceKind::family);
    for (unsigned n = 0; n <= 12; ++n) {
        CHECK(*g.exact_value(n) == oracle::factorial(n));
    }
    CHECK_FALSE(g.last_index().has_value());

    try {
        exact({1, -2, 3});
        FAIL("expected rejection");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("index 1") != std::string::npos);
    }
    CHECK_THROWS_AS(exact({1, 2}), InputError);
    CHECK_THROWS_AS(family("nosuch"), InputError);
    CHECK_THROWS_AS(family("gevrey", {{"q", "1"}}), InputError);
}

TEST_CASE("family evaluator agrees with its materialized prefix") {
    for (const auto& [id, params] : std::vector<std::pair<std::string, std::map<std::string, std::string>>>{
             {"gevrey", {{"s", "2"}, {"rate", "3/2"}}},
             {"constant", {{"c", "7"}}},
             {"geometric", {{"r", "5"}, {"scale", "1/3"}}},
             {"log_gevrey", {{"beta", "1"}}}}) {
        WeightSequence f = family(id, params);
        WeightSequence p = f.prefix(15);
        for (std::size_t n = 0; n <= 15; ++n) {
            if (auto e = f.exact_value(n)) {
                CHECK(p.exact_value(n) == e);
            } else {
                CHECK(abs(p.value(n) - f.value(n)) <= f.value(n) * relative_tolerance(200));
            }
        }
    }
}

TEST_CASE("log-convex minorant examples") {
    SUBCASE("factorials are their own minorant") {
        auto r = log_convex_minorant(family("gevrey"), 10);
        auto v = r.exact_minorant();
        REQUIRE(v);
        CHECK(*v == factorials(10));
        CHECK(r.support.size() == 11);
    }
    SUBCASE("(1, 4, 4)") {
        auto r = log_convex_minorant(exact({1, 4, 4}), 2);
        REQUIRE(r.exact_minorant());
        CHECK(*r.exact_minorant() == std::vector<Rational>{1, 2, 4});
        CHECK(r.support == std::vector<std::size_t>{0, 2});
    }
    SUBCASE("constant sequence keeps every index as support") {
        auto r = log_convex_minorant(exact({1, 1, 1, 1, 1, 1}), 5);
        CHECK(*r.exact_minorant() == std::vector<Rational>(6, 1));
        CHECK(r.support.size() == 6);
    }
    SUBCASE("endpoints are always kept") {
        auto r = log_convex_minorant(exact({100, 1, 1, 100}), 3);
        CHECK(r.support.front() == 0);
        CHECK(r.support.back() == 3);
        CHECK(*r.exact_minorant() == std::vector<Rational>{100, 1, 1, 100});
    }
    CHECK_THROWS_AS(log_convex_minorant(exact({1, 2, 3}), 5), InputError);
}

TEST_CASE("hull minorant equals the min/inf formula") {
    std::mt19937_64 rng(20240611);
    std::uniform_int_distribution<int> len(3, 16);
    for (int trial = 0; trial < 60; ++trial) {
        auto values = oracle::random_log_uniform(rng, static_cast<std::size_t>(len(rng)));
        WeightSequence m = exact(values);
        auto reg = log_convex_minorant(m, values.size() - 1);
        auto expected = oracle::minorant_by_formula(values);
        for (std::size_t n = 0; n < values.size(); ++n) {
            CHECK(oracle::compare(values, as_candidate(reg.terms[n], n), expected[n]) == 0);
        }
    }
}

TEST_CASE("minorant properties") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        auto values = oracle::random_log_uniform(rng, 12);
        WeightSequence m = exact(values);
        auto reg = log_convex_minorant(m, 11);

        // Below M, equal on support, log-convex.
        for (std::size_t n = 0; n <= 11; ++n) {
            CHECK(oracle::compare(values, as_candidate(reg.terms[n], n), {n, n, 1, 0, 1}) <= 0);
        }
        for (std::size_t s : reg.support) {
            CHECK(reg.terms[s].is_support());
        }
        CHECK(check_log_convex(reg.as_sequence()));

        // Idempotence on the real-valued minorant.
        WeightSequence mc = reg.as_sequence();
        auto again = log_convex_minorant(mc, 11);
        for (std::size_t n = 0; n <= 11; ++n) {
            CHECK(again.terms[n].is_support());
        }

        // Maximality: L_n = min M is log-convex and below M, so below M^C.
        Rational lo = *std::min_element(values.begin(), values.end());
        for (std::size_t n = 0; n <= 11; ++n) {
            CHECK(to_real(lo) <= reg.minorant[n] * (1 + relative_tolerance(200)));
        }
        // A tangent-line minorant through two support points is also below.
        if (reg.support.size() >= 2) {
            std::size_t a = reg.support[0], b = reg.support[1];
            for (std::size_t n = 0; n <= 11; ++n) {
                Real slope = (m.log_value(b) - m.log_value(a)) / Real(b - a);
                Real line = m.log_value(a) + slope * (Real(n) - Real(a));
                CHECK(line <= reg.log_minorant[n] + relative_tolerance(150));
            }
        }
    }
}

TEST_CASE("real-valued sequences regularize with tolerance-based ties") {
    std::vector<Real> v{Real(1), exp(Real(3)), exp(Real(2)), exp(Real(3))};
    auto r = log_convex_minorant(WeightSequence::from_reals("r", v), 3);
    CHECK(r.support == std::vector<std::size_t>{0, 2, 3});
    CHECK(abs(r.log_minorant[1] - Real(1)) < relative_tolerance(200));
}

TEST_CASE("Denjoy-Carleman partial sums") {
    auto d = dc_partial_sums(family("gevrey"), 4);
    REQUIRE(d.exact_partial_sums);
    CHECK(d.exact_partial_sums->back() == Rational(25, 12));
    CHECK(d.verdict == Verdict::quasianalytic);
    CHECK(d.basis == VerdictBasis::closed_form);

    auto c = dc_partial_sums(exact({1, 1, 1, 1, 1, 1}), 5);
    CHECK(c.exact_partial_sums->back() == 5);
    CHECK(c.verdict == Verdict::inconclusive);
    CHECK(c.basis == VerdictBasis::prefix_only);

    auto s = dc_partial_sums(family("gevrey", {{"s", "2"}}), 2);
    CHECK(s.exact_partial_sums->back() == Rational(5, 4));
    CHECK(s.verdict == Verdict::not_quasianalytic);

    // Nondecreasing partial sums on a random explicit sequence.
    std::mt19937_64 rng(3);
    auto r = dc_partial_sums(exact(oracle::random_log_uniform(rng, 16)), 15);
    for (std::size_t i = 1; i < r.partial_sums.size(); ++i) {
        CHECK(r.partial_sums[i] >= r.partial_sums[i - 1]);
    }
}

TEST_CASE("closed-form verdicts") {
    CHECK(classify_quasianalytic({"gevrey", {{"s", "1"}}}).verdict == Verdict::quasianalytic);
    CHECK(classify_quasianalytic({"gevrey", {{"s", "2"}}}).verdict == Verdict::not_quasianalytic);
    CHECK(classify_quasianalytic({"gevrey", {{"s", "1/2"}}}).verdict == Verdict::quasianalytic);
    CHECK(classify_quasianalytic({"constant", {}}).verdict == Verdict::quasianalytic);
    CHECK(classify_quasianalytic({"geometric", {{"r", "3"}}}).verdict == Verdict::quasianalytic);
    CHECK(classify_quasianalytic({"log_gevrey", {{"beta", "1"}}}).verdict == Verdict::quasianalytic);
    CHECK(classify_quasianalytic({"log_gevrey", {{"beta", "2"}}}).verdict == Verdict::not_quasianalytic);
    CHECK(classify_quasianalytic({"mystery", {}}).verdict == Verdict::inconclusive);
    CHECK_FALSE(classify_quasianalytic({"gevrey", {{"s", "2"}}}).justification.empty());
}

TEST_CASE("power transform") {
    auto id = power_transform_sequence(family("gevrey"), 2, 8);
    CHECK(exact_values(id, 8) == factorials(8));

    auto sq = power_transform_sequence(family("gevrey", {{"s", "2"}}), 2, 6);
    for (unsigned n = 0; n <= 6; ++n) {
        CHECK(*sq.exact_value(n) == oracle::factorial(n) * oracle::factorial(2 * n + 1));
    }

    auto geo = power_transform_sequence(family("gevrey", {{"rate", "2"}}), 2, 6);
    for (unsigned n = 0; n <= 6; ++n) {
        CHECK(*geo.exact_value(n) == oracle::factorial(n) * oracle::rpow(2, 2 * n + 1));
    }

    try {
        power_transform_sequence(exact({1, 1, 1, 1, 1}), 2, 10);
        FAIL("expected rejection");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("need 21 values") != std::string::npos);
    }

    // Monotone in M.
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        auto a = oracle::random_log_uniform(rng, 14);
        auto b = a;
        for (auto& x : b) {
            x *= Rational(3, 2);
        }
        auto ta = power_transform_sequence(exact(a), 3, 4);
        auto tb = power_transform_sequence(exact(b), 3, 4);
        for (std::size_t n = 0; n <= 4; ++n) {
            CHECK(*ta.exact_value(n) <= *tb.exact_value(n));
        }
    }
}

TEST_CASE("hat regularization") {
    CHECK(exact_values(hat_regularize(family("gevrey"), 10), 10) == factorials(10));
    CHECK(exact_values(hat_regularize(exact(std::vector<Rational>(8, 1)), 7), 7) == factorials(7));
    CHECK(exact_values(hat_regularize(family("gevrey", {{"s", "2"}}), 8), 8) == factorials(8, 2));

    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 25; ++trial) {
        auto v = oracle::random_log_uniform(rng, 30);
        auto h = hat_regularize(exact(v), 29);
        CHECK(*h.exact_value(0) == v[0]);
        for (std::size_t n = 0; n < 30; ++n) {
            CHECK(*h.exact_value(n) >= v[n]);
            if (n + 1 < 30) {
                CHECK(*h.exact_value(n + 1) >= *h.exact_value(n) * Rational(n + 1));
            }
        }
        CHECK(check_factorial_monotone(h));

        // Log-convex input keeps a log-convex output.
        auto lc = log_convex_minorant(exact(v), 29).as_sequence();
        if (lc.is_exact()) {
            CHECK(check_log_convex(hat_regularize(lc, 29)));
        }
    }
}

TEST_CASE("shape predicates") {
    CHECK(check_log_convex(family("gevrey"), 20));
    CHECK(check_factorial_monotone(family("gevrey"), 20));
    CHECK_FALSE(check_log_convex(exact({1, 4, 4})));
    CHECK(check_log_convex(exact({1, 1, 1, 1})));
    CHECK_FALSE(check_factorial_monotone(exact({1, 1, 1, 1})));
    CHECK_THROWS_AS(check_log_convex(family("gevrey")), InputError);
}

TEST_CASE("condensation: hat of n! has partial sums above log(N)/2") {
    const std::size_t n = 10000;
    std::vector<Real> v{Real(1)};
    for (std::size_t i = 1; i <= n; ++i) {
        v.push_back(v.back() * Real(i));
    }
    auto hat = hat_regularize(WeightSequence::from_reals("n!", std::move(v)), n);
    auto d = dc_partial_sums(hat, n);
    CHECK(d.partial_sums.back() > log(Real(n)) / 2);
}
