#pragma once

// File formats and run configuration.
//
// Reals are written as decimal strings at the current precision and every
// document carries "precision_bits"; exact values are written as integers or
// "p/q". JSON keys keep insertion order so output is byte-stable.

#include "carleman/harness.hpp"

#include "json.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace carleman::io {

using Json = nlohmann::ordered_json;

enum class Format { json, csv };

Format parse_format(const std::string& text);

struct RunConfig {
    unsigned precision_bits = kDefaultPrecisionBits;
    std::size_t max_order = kDefaultMaxOrder;
    std::string grid = "dyadic:16";
    unsigned tolerance_exp = 100;
    std::optional<Format> format;
    std::string out;

    /// precision_bits >= 64, tolerance_exp >= 10, and a parsable grid.
    void validate() const;
    HarnessConfig harness() const;
};

/// CARLEMAN_PRECISION_BITS if set (validated), else the library default.
unsigned default_precision_bits();

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
/// Dumps with two-space indent and a trailing newline.
std::string dump(const Json& doc);

// -- Sequences --------------------------------------------------------------

/// {"name", "kind": "explicit"|"family", "values": [...], "family": {"id", "params"}}.
/// Values and parameters are strings (or JSON integers); floats are rejected.
WeightSequence parse_sequence(const Json& doc);
WeightSequence parse_sequence_text(const std::string& text);
WeightSequence read_sequence_file(const std::string& path);

/// "gevrey:1", "gevrey:s=2,rate=3", "constant:0.1" (alias "const"),
/// "geometric:2", "log_gevrey:1". A bare value sets the family's main
/// parameter (s, c, r, beta).
FamilyDescriptor parse_family_spec(const std::string& spec);
WeightSequence family_sequence(const std::string& spec);

/// Explicit prefix M_0..M_upto with "exact" and "precision_bits".
Json sequence_to_json(const WeightSequence& m, std::size_t upto);
Json regularized_to_json(const RegularizedSequence& r);
Json dc_to_json(const WeightSequence& m, std::size_t upto, const DcDiagnostics& d);

/// Flat CSV views of the documents above (same strings, one row per index).
std::string sequence_csv(const Json& doc);
std::string dc_csv(const Json& doc);
std::string jet_csv(const Json& doc);

// -- Functions and jets -------------------------------------------------------

/// "cosh", "cosh_sqrt", "exp", "exp:2", "exp_neg_inv",
/// "polynomial:0,0,1", "rational:1|1,0,-1/2", "exp_decay_fourier:1,1/2",
/// with an optional "@k" suffix for x -> f(x^k), e.g. "exp@3".
Function parse_function_spec(const std::string& spec);

enum class JetMode { automatic, exact, precision };
JetMode parse_jet_mode(const std::string& text);

/// Jet at x0; automatic mode is exact when the coefficients are rational.
Json jet_to_json(const Function& f, const Rational& x0, std::size_t order, JetMode mode,
                 const OrderBudget& budget = {});

// -- B-tables -----------------------------------------------------------------

/// Header "n,k,i,j,B", one row per admissible entry, i ascending.
std::string btable_csv(const BTable& table);
Json btable_to_json(const BTable& table);

// -- Reports ------------------------------------------------------------------

Json report_to_json(const VerificationReport& report);
std::string report_csv_header();
std::string report_csv_rows(const VerificationReport& report);
std::string report_to_csv(const VerificationReport& report);
Json example2_to_json(const Example2Result& result, const DecayFamily& decay, unsigned truncation);

// -- Corpus registry ----------------------------------------------------------

struct Corpus {
    int version = 0;
    std::vector<SubstitutionPair> pairs;

    const SubstitutionPair& find(const std::string& id) const;
};

Corpus parse_corpus(const Json& doc);
Corpus read_corpus_file(const std::string& path);
/// The registry shipped in data/corpus.json. Parsed on each call so that
/// named constants follow the current precision.
Corpus default_corpus();
std::string default_corpus_path();

}  // namespace carleman::io
