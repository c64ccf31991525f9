#pragma once

// Grid-based certification of the derivative bounds for power substitutions.
//
// Every "sup over a compact set" here is a maximum over a finite grid, so a
// pass certifies grid inequalities, not true suprema. Reports say so.

#include "carleman/functions.hpp"
#include "carleman/sequence.hpp"
#include "carleman/substitution.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace carleman {

struct Grid {
    std::string spec;
    std::vector<Real> points;
};

/// "dyadic:J"         {2^-1, ..., 2^-J}
/// "dyadic-closed:J"  {1, 2^-1, ..., 2^-J, 0}
/// "x1,x2,..."        explicit decimal/rational points
Grid parse_grid(const std::string& spec);
Grid dyadic_grid(unsigned j_max, bool closed = false);

struct HarnessConfig {
    unsigned tolerance_exp = 100;
    /// Fitted B or C above this value fail the suite.
    Real ceiling = 1024;
    OrderBudget budget{};

    Real tolerance() const { return relative_tolerance(tolerance_exp); }
};

/// Where a pair's bound sequence for sup_[0,1] |f^(n)| comes from.
struct BoundSource {
    enum class Kind { sequence, measure };
    Kind kind = Kind::measure;
    std::optional<WeightSequence> sequence;
    /// Grid used when measuring (must reach the points where |f^(n)| peaks).
    std::string measure_grid = "dyadic-closed:16";
};

/// f(x) = g(x^k) on [0, 1].
struct SubstitutionPair {
    std::string id;
    unsigned k = 2;
    Function f;
    Function g;
    BoundSource m_source;
    std::string note;
};

/// f(x) = g(x^k) at 16 pseudo-random points of (0, 1] within relative
/// 2^-tolerance_exp, and g has a jet of the requested order at 0.
void validate_pair(const SubstitutionPair& pair, std::size_t order, const HarnessConfig& cfg = {});

struct EmpiricalSup {
    std::vector<Real> sup;     // grid max of |fn^(n)|, n = 0..N
    std::vector<Real> argmax;  // first grid point attaining it
};

/// Grid maxima of |fn^(n)|; a lower estimate of the true supremum.
EmpiricalSup measure_sup_derivatives(const Function& fn, std::size_t order, const Grid& grid,
                                     const OrderBudget& budget = {});

/// The pair's bound sequence M_0..M_upto. Measured entries that vanish are
/// replaced by 1 (f^(n) == 0 on the grid, so any positive bound holds).
WeightSequence resolve_bound_sequence(const SubstitutionPair& pair, std::size_t upto,
                                      const OrderBudget& budget = {});

struct ReportRow {
    std::size_t n = 0;
    std::optional<std::size_t> ell;
    Real x;
    Real actual;
    Real bound;
    Real ratio;
    std::string branch;
};

struct FitResult {
    std::string first_name = "A";
    std::string second_name = "B";
    Real first = 1;
    Real second = 0;
    /// D_n as defined by the fit, n = 0..N.
    std::vector<Real> d;
};

struct VerificationReport {
    std::string suite;
    std::string subject;
    std::size_t orders = 0;
    std::string grid_spec;
    std::vector<Real> grid;
    unsigned tolerance_exp = 100;
    std::vector<ReportRow> rows;
    std::optional<FitResult> fit;
    bool pass = false;
    std::optional<std::size_t> worst;  // row index with the largest ratio
    std::vector<std::pair<std::string, std::string>> annotations;

    const ReportRow* worst_row() const { return worst ? &rows[*worst] : nullptr; }
    std::string annotation(const std::string& key) const;
};

/// Samples of |g^(n)(x)| for a membership query in C^M_a.
struct ClassMembershipQuery {
    WeightSequence m;
    Real a = 0;
    struct Sample {
        std::size_t n;
        Real x;
        Real value;
    };
    std::vector<Sample> samples;
};

/// D_n = max |g^(n)(x)| |x|^{an} / M_n over samples (x = 0 skipped when
/// a > 0); A = max(D_0, 1); B = max_{n>=1} (D_n / A)^{1/n}.
FitResult fit_class_constants(const ClassMembershipQuery& query);

/// |g^(n)(x)| <= 2^n M_n x^{-(1-1/k) n} for n <= orders, x in grid.
/// `override_m` replaces the pair's bound source.
VerificationReport verify_theorem1(const SubstitutionPair& pair, std::size_t orders, const Grid& grid,
                                   const HarnessConfig& cfg = {},
                                   const std::optional<WeightSequence>& override_m = std::nullopt);

/// Membership of g in C^{M^(k)} on grid + {0}: fits (A, B) and checks
/// g^(n)(0)/n! = f^(kn)(0)/(kn)! (exactly when both jets are rational).
VerificationReport verify_prop2(const SubstitutionPair& pair, std::size_t orders, const Grid& grid,
                                const HarnessConfig& cfg = {});

/// |g^(n)(0)| <= A B^n M_{kn} / (kn)!^{1-1/k} with fitted (A, B).
VerificationReport verify_zero_bound(const SubstitutionPair& pair, std::size_t orders, const HarnessConfig& cfg = {});

/// Premise |g^(n)(x)| <= M_n x^{-(1-1/k) n} on the grid (throws InputError
/// if it fails or M_n/n! is not nondecreasing), then fits (A, C) with
/// |f^(n)(x)| <= A C^n M_n (1 + log(1/x) when k | n, n > 0) for f = g(x^k).
VerificationReport verify_lemma41(const Function& g, unsigned k, const WeightSequence& m, std::size_t orders,
                                  const Grid& grid, const HarnessConfig& cfg = {});

/// Premise sequence for a pair: hat_regularize(2^n M_n) with M the pair's
/// bound sequence.
WeightSequence lemma41_premise(const SubstitutionPair& pair, std::size_t orders, const OrderBudget& budget = {});

/// Checks |g^(l)(x)| <= A * lemma_add_smooth_bound(M, sigma, n, l, x) for
/// 1 <= n <= orders, 0 <= l <= n, x in grid. A is the smallest scale >= 1
/// certifying the premise |g^(n)(x)| <= A M_n x^{-(1-sigma) n} on the grid.
VerificationReport verify_lemma32(const Function& g, const Rational& sigma, const WeightSequence& m,
                                  std::size_t orders, const Grid& grid, const HarnessConfig& cfg = {});

/// |g^(n)(x)| <= n! 2^n / x^n for g = e^{-1/x}, with flatness evidence.
VerificationReport example1_report(std::size_t orders, const Grid& grid, const HarnessConfig& cfg = {});

/// Coefficients a_j for |j| <= J of the truncated two-sided series.
struct DecayFamily {
    enum class Kind { power, geometric, single };
    Kind kind = Kind::power;
    Rational parameter = 10;

    /// "power:p" (1+|j|)^-p, "geometric:r" r^-|j|, "single" (a_0 = 1).
    static DecayFamily parse(const std::string& spec);
    std::string describe() const;
    Rational coefficient(long j) const;
};

struct Example2Result {
    Function h_plus;
    Function h_minus;
    VerificationReport plus;
    VerificationReport minus;
    bool pass() const { return plus.pass && minus.pass; }
};

/// h_+(x) = sum_{j=0..J} a_j e^{-jx}, h_-(x) = sum_{j=1..J} a_{-j} e^{-jx};
/// fits C^M_1 constants with M_n = n! on the grid.
Example2Result example2_build(const DecayFamily& decay, unsigned truncation, std::size_t orders, const Grid& grid,
                              const HarnessConfig& cfg = {});

}  // namespace carleman
