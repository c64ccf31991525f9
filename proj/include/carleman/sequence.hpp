#pragma once

// Weight sequences M = (M_n), their largest log-convex minorant M^C, the
// Denjoy-Carleman partial sums, and the transforms M^(k) and M-hat.
//
// Every operation works on a finite prefix M_0..M_upto. Sequences built from
// rationals stay exact: hull predicates, transforms and partial sums are then
// decided with rational arithmetic. Otherwise values are MPFR reals and ties
// are resolved with a relative tolerance of 2^-200.

#include "carleman/numeric.hpp"

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace carleman {

/// A family as written in a sequence file: id plus string-valued parameters.
struct FamilyDescriptor {
    std::string id;
    std::map<std::string, std::string> params;
};

/// Registry family in normalized closed form
///   M_n = scale * rate^n * (n!)^s * prod_{j=1..n} log(j + e)^beta,
/// with s, beta >= 0 and scale, rate > 0. All registry members are log-convex.
struct Family {
    FamilyDescriptor descriptor;
    Number scale = Number::of(Rational(1));
    Number rate = Number::of(Rational(1));
    Rational s = 0;
    Rational beta = 0;

    /// Exact closed form: rational scale/rate, integer s, beta == 0.
    bool is_exact() const;
    Number value(std::size_t n) const;
    /// M_n / M_{n+1}.
    Number ratio(std::size_t n) const;
};

/// Builds a registry family. Unknown ids and invalid parameters throw InputError.
///   gevrey      s (default 1), scale, rate
///   constant    c
///   geometric   r, scale
///   log_gevrey  beta            (M_n = n! prod log(j+e)^beta)
Family make_family(const FamilyDescriptor& descriptor);

enum class SequenceKind { explicit_values, family };

class WeightSequence {
public:
    /// Rejects non-positive values (naming the index) and prefixes shorter
    /// than three terms.
    static WeightSequence from_rationals(std::string name, std::vector<Rational> values);
    static WeightSequence from_reals(std::string name, std::vector<Real> values);
    static WeightSequence from_family(std::string name, Family family);

    const std::string& name() const { return name_; }
    SequenceKind kind() const { return family_ ? SequenceKind::family : SequenceKind::explicit_values; }
    const Family* family() const { return family_ ? &*family_ : nullptr; }

    /// Largest available index; families are unbounded.
    std::optional<std::size_t> last_index() const;
    bool has_index(std::size_t n) const;
    bool is_exact() const;

    Real value(std::size_t n) const;
    Real log_value(std::size_t n) const;
    std::optional<Rational> exact_value(std::size_t n) const;

    /// Explicit sequence M_0..M_upto. Throws InputError when unavailable.
    WeightSequence prefix(std::size_t upto) const;
    /// Same values with the exact representation dropped (precision mode).
    WeightSequence inexact() const;

    std::size_t size() const;  // explicit only

private:
    struct Data {
        std::vector<Real> values;
        std::vector<Real> logs;
        std::optional<std::vector<Rational>> exact;
    };

    WeightSequence() = default;
    void require(std::size_t n) const;

    std::string name_;
    std::shared_ptr<const Data> data_;
    std::optional<Family> family_;
};

/// Minorant term M_left^{(right-n)/(right-left)} * M_right^{(n-left)/(right-left)};
/// on hull support left == right == n and the term is M_n itself.
struct HullTerm {
    std::size_t left;
    std::size_t right;

    bool is_support() const { return left == right; }
};

/// Orientation of point b relative to the chord a-c in the (n, log M_n)
/// plane: +1 strictly above, 0 on, -1 strictly below. Requires a < b < c.
int chord_side(const WeightSequence& m, std::size_t a, std::size_t b, std::size_t c);

/// Exact (rational mode) or tolerance-based comparison of two minorant terms
/// evaluated at index n: sign of term_a(n) - term_b(n).
int compare_terms(const WeightSequence& m, HullTerm a, HullTerm b, std::size_t n);

/// Value of a term at n.
Real term_value(const WeightSequence& m, HullTerm t, std::size_t n);
Real term_log(const WeightSequence& m, HullTerm t, std::size_t n);
/// Rational value of a term, when the fractional power is rational.
std::optional<Rational> term_exact(const WeightSequence& m, HullTerm t, std::size_t n);

struct RegularizedSequence {
    WeightSequence source;  // the prefix M_0..M_upto
    std::vector<HullTerm> terms;
    std::vector<Real> minorant;
    std::vector<Real> log_minorant;
    std::vector<std::size_t> support;

    std::size_t upto() const { return terms.size() - 1; }
    /// All minorant values as rationals, when every one of them is rational.
    std::optional<std::vector<Rational>> exact_minorant() const;
    /// The minorant as a weight sequence (exact when possible).
    WeightSequence as_sequence() const;
};

/// Lower convex hull of (n, log M_n), 0 <= n <= upto. Collinear points are
/// kept as support; the endpoints are always support.
RegularizedSequence log_convex_minorant(const WeightSequence& m, std::size_t upto);

enum class Verdict { quasianalytic, not_quasianalytic, inconclusive };
enum class VerdictBasis { closed_form, prefix_only };

const char* to_string(Verdict v);
const char* to_string(VerdictBasis b);

struct ClassVerdict {
    Verdict verdict = Verdict::inconclusive;
    std::string justification;
};

/// Closed-form Denjoy-Carleman verdict for registry families; anything else
/// (including unknown ids) is inconclusive.
ClassVerdict classify_quasianalytic(const FamilyDescriptor& family);

struct DcDiagnostics {
    /// partial_sums[N-1] = S_N = sum_{n<N} M^C_n / M^C_{n+1}, N = 1..upto.
    std::vector<Real> partial_sums;
    /// Exact sums when every ratio is rational and upto <= kExactSumLimit.
    std::optional<std::vector<Rational>> exact_partial_sums;
    Verdict verdict = Verdict::inconclusive;
    VerdictBasis basis = VerdictBasis::prefix_only;
    std::string justification;
};

inline constexpr std::size_t kExactSumLimit = 512;

DcDiagnostics dc_partial_sums(const WeightSequence& m, std::size_t upto);

/// M^(k)_n = n! * max_{j <= nk+1} M_j / j!, 0 <= n <= upto. Needs M up to
/// upto*k + 1.
WeightSequence power_transform_sequence(const WeightSequence& m, unsigned k, std::size_t upto);

/// M-hat_0 = M_0, M-hat_n = M-hat_{n-1} * max{M_n / M_{n-1}, n}.
WeightSequence hat_regularize(const WeightSequence& m, std::size_t upto);

/// All second differences of log M_n are >= 0 on the explicit prefix (or on
/// M_0..upto for families).
bool check_log_convex(const WeightSequence& m, std::optional<std::size_t> upto = std::nullopt);
/// M_{n+1} >= (n+1) M_n, i.e. M_n / n! nondecreasing.
bool check_factorial_monotone(const WeightSequence& m, std::optional<std::size_t> upto = std::nullopt);

}  // namespace carleman
