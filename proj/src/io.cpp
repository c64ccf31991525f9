#include "carleman/io.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#ifndef CARLEMAN_DATA_DIR
#define CARLEMAN_DATA_DIR "data"
#endif

namespace carleman::io {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep)) {
        out.push_back(item);
    }
    if (!text.empty() && text.back() == sep) {
        out.emplace_back();
    }
    return out;
}

std::vector<Rational> parse_rational_list(const std::string& text) {
    std::vector<Rational> out;
    for (const auto& item : split(text, ',')) {
        out.push_back(parse_rational(item));
    }
    if (out.empty()) {
        throw InputError("empty coefficient list");
    }
    return out;
}

// Strings and JSON integers only; binary floats are rejected.
std::string scalar_text(const Json& v, const std::string& where) {
    if (v.is_string()) {
        return v.get<std::string>();
    }
    if (v.is_number_integer()) {
        return v.dump();
    }
    throw InputError(where + ": expected a decimal string");
}

const Json& member(const Json& doc, const char* key, const std::string& where) {
    auto it = doc.find(key);
    if (it == doc.end()) {
        throw InputError(where + ": missing \"" + key + "\"");
    }
    return *it;
}

Json parse_json(const std::string& text, const std::string& what) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw InputError("malformed JSON in " + what + ": " + e.what());
    }
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        out += c;
        if (c == '"') {
            out += '"';
        }
    }
    return out + "\"";
}

Json row_to_json(const ReportRow& row) {
    Json j;
    j["n"] = row.n;
    if (row.ell) {
        j["l"] = *row.ell;
    }
    j["x"] = format_real(row.x);
    j["actual"] = format_real(row.actual);
    j["bound"] = format_real(row.bound);
    j["ratio"] = format_real(row.ratio);
    j["branch"] = row.branch;
    return j;
}

}  // namespace

Format parse_format(const std::string& text) {
    if (text == "json") {
        return Format::json;
    }
    if (text == "csv") {
        return Format::csv;
    }
    throw InputError("unknown format '" + text + "' (json or csv)");
}

void RunConfig::validate() const {
    if (precision_bits < kMinPrecisionBits) {
        throw InputError("precision must be at least " + std::to_string(kMinPrecisionBits) + " bits");
    }
    if (tolerance_exp < 10) {
        throw InputError("tolerance exponent must be at least 10");
    }
    (void)parse_grid(grid);
}

HarnessConfig RunConfig::harness() const {
    HarnessConfig cfg;
    cfg.tolerance_exp = tolerance_exp;
    cfg.budget.max_order = max_order;
    return cfg;
}

unsigned default_precision_bits() {
    const char* env = std::getenv("CARLEMAN_PRECISION_BITS");
    if (env == nullptr || *env == '\0') {
        return kDefaultPrecisionBits;
    }
    try {
        std::size_t used = 0;
        long bits = std::stol(env, &used);
        if (used != std::string(env).size() || bits < static_cast<long>(kMinPrecisionBits) || bits > 1 << 20) {
            throw InputError("");
        }
        return static_cast<unsigned>(bits);
    } catch (const std::exception&) {
        throw InputError(std::string("CARLEMAN_PRECISION_BITS must be an integer >= ") +
                         std::to_string(kMinPrecisionBits) + ", got '" + env + "'");
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot read '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InputError("cannot write '" + path + "'");
    }
    out << text;
}

std::string dump(const Json& doc) {
    return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Sequences

WeightSequence parse_sequence(const Json& doc) {
    if (!doc.is_object()) {
        throw InputError("sequence file: expected a JSON object");
    }
    std::string name = doc.contains("name") ? scalar_text(doc["name"], "sequence name") : "sequence";
    std::string kind = doc.contains("kind") ? scalar_text(doc["kind"], "sequence kind")
                                            : (doc.contains("family") ? "family" : "explicit");
    if (kind == "family") {
        const Json& fam = member(doc, "family", "family sequence");
        FamilyDescriptor d;
        d.id = scalar_text(member(fam, "id", "family"), "family id");
        if (fam.contains("params")) {
            if (!fam["params"].is_object()) {
                throw InputError("family params must be an object");
            }
            for (const auto& [key, value] : fam["params"].items()) {
                d.params[key] = scalar_text(value, "family parameter '" + key + "'");
            }
        }
        return WeightSequence::from_family(name, make_family(d));
    }
    if (kind != "explicit") {
        throw InputError("sequence kind must be \"explicit\" or \"family\"");
    }
    const Json& values = member(doc, "values", "explicit sequence");
    if (!values.is_array()) {
        throw InputError("\"values\" must be an array");
    }
    std::vector<Number> parsed;
    bool exact = true;
    for (std::size_t i = 0; i < values.size(); ++i) {
        parsed.push_back(parse_number(scalar_text(values[i], "value " + std::to_string(i))));
        exact = exact && parsed.back().is_exact();
    }
    if (exact) {
        std::vector<Rational> r;
        for (auto& p : parsed) {
            r.push_back(*p.exact);
        }
        return WeightSequence::from_rationals(name, std::move(r));
    }
    std::vector<Real> r;
    for (auto& p : parsed) {
        r.push_back(p.approx);
    }
    return WeightSequence::from_reals(name, std::move(r));
}

WeightSequence parse_sequence_text(const std::string& text) {
    return parse_sequence(parse_json(text, "sequence file"));
}

WeightSequence read_sequence_file(const std::string& path) {
    return parse_sequence(parse_json(read_text_file(path), "'" + path + "'"));
}

FamilyDescriptor parse_family_spec(const std::string& spec) {
    FamilyDescriptor d;
    auto colon = spec.find(':');
    d.id = spec.substr(0, colon);
    if (d.id == "const") {
        d.id = "constant";
    }
    if (colon == std::string::npos) {
        return d;
    }
    static const std::map<std::string, std::string> main_param{
        {"gevrey", "s"}, {"constant", "c"}, {"geometric", "r"}, {"log_gevrey", "beta"}};
    for (const auto& item : split(spec.substr(colon + 1), ',')) {
        auto eq = item.find('=');
        if (eq != std::string::npos) {
            d.params[item.substr(0, eq)] = item.substr(eq + 1);
            continue;
        }
        auto it = main_param.find(d.id);
        if (it == main_param.end()) {
            throw InputError("unknown family id '" + d.id + "'");
        }
        d.params[it->second] = item;
    }
    return d;
}

WeightSequence family_sequence(const std::string& spec) {
    return WeightSequence::from_family(spec, make_family(parse_family_spec(spec)));
}

Json sequence_to_json(const WeightSequence& m, std::size_t upto) {
    if (!m.has_index(upto)) {
        throw InputError("sequence '" + m.name() + "' has no term " + std::to_string(upto));
    }
    bool exact = true;
    for (std::size_t n = 0; n <= upto && exact; ++n) {
        exact = m.exact_value(n).has_value();
    }
    Json values = Json::array();
    for (std::size_t n = 0; n <= upto; ++n) {
        values.push_back(exact ? format_rational(*m.exact_value(n)) : format_real(m.value(n)));
    }
    Json doc;
    doc["name"] = m.name();
    doc["kind"] = "explicit";
    doc["values"] = std::move(values);
    doc["exact"] = exact;
    doc["precision_bits"] = precision_bits();
    return doc;
}

Json regularized_to_json(const RegularizedSequence& r) {
    Json doc;
    doc["name"] = r.source.name();
    doc["kind"] = "explicit";
    Json values = Json::array();
    auto exact = r.exact_minorant();
    for (std::size_t n = 0; n <= r.upto(); ++n) {
        values.push_back(exact ? format_rational((*exact)[n]) : format_real(r.minorant[n]));
    }
    doc["values"] = std::move(values);
    doc["support"] = r.support;
    doc["exact"] = exact.has_value();
    doc["precision_bits"] = precision_bits();
    return doc;
}

Json dc_to_json(const WeightSequence& m, std::size_t upto, const DcDiagnostics& d) {
    Json doc;
    doc["name"] = m.name();
    doc["upto"] = upto;
    Json sums = Json::array();
    for (std::size_t i = 0; i < d.partial_sums.size(); ++i) {
        sums.push_back(d.exact_partial_sums ? format_rational((*d.exact_partial_sums)[i])
                                            : format_real(d.partial_sums[i]));
    }
    doc["partial_sums"] = std::move(sums);
    doc["verdict"] = to_string(d.verdict);
    doc["basis"] = to_string(d.basis);
    doc["justification"] = d.justification;
    doc["exact"] = d.exact_partial_sums.has_value();
    doc["precision_bits"] = precision_bits();
    return doc;
}

std::string sequence_csv(const Json& doc) {
    const bool has_support = doc.contains("support");
    std::vector<bool> support(doc["values"].size(), false);
    if (has_support) {
        for (const auto& i : doc["support"]) {
            support.at(i.get<std::size_t>()) = true;
        }
    }
    std::ostringstream out;
    out << "n,value" << (has_support ? ",support" : "") << ",exact,precision_bits\n";
    for (std::size_t n = 0; n < doc["values"].size(); ++n) {
        out << n << ',' << doc["values"][n].get<std::string>();
        if (has_support) {
            out << ',' << (support[n] ? 1 : 0);
        }
        out << ',' << (doc["exact"].get<bool>() ? "true" : "false") << ',' << doc["precision_bits"].dump() << '\n';
    }
    return out.str();
}

std::string dc_csv(const Json& doc) {
    std::ostringstream out;
    out << "N,partial_sum,verdict,basis,exact,precision_bits\n";
    for (std::size_t i = 0; i < doc["partial_sums"].size(); ++i) {
        out << i + 1 << ',' << doc["partial_sums"][i].get<std::string>() << ',' << doc["verdict"].get<std::string>()
            << ',' << doc["basis"].get<std::string>() << ',' << (doc["exact"].get<bool>() ? "true" : "false") << ','
            << doc["precision_bits"].dump() << '\n';
    }
    return out.str();
}

std::string jet_csv(const Json& doc) {
    std::ostringstream out;
    out << "n,coefficient,derivative,mode,precision_bits\n";
    for (std::size_t n = 0; n < doc["coefficients"].size(); ++n) {
        out << n << ',' << doc["coefficients"][n].get<std::string>() << ','
            << doc["derivatives"][n].get<std::string>() << ',' << doc["mode"].get<std::string>() << ','
            << doc["precision_bits"].dump() << '\n';
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Functions and jets

Function parse_function_spec(const std::string& spec) {
    auto at = spec.rfind('@');
    if (at != std::string::npos) {
        long k = 0;
        try {
            std::size_t used = 0;
            k = std::stol(spec.substr(at + 1), &used);
            if (used != spec.size() - at - 1) {
                k = 0;
            }
        } catch (const std::exception&) {
            k = 0;
        }
        if (k < 2) {
            throw InputError("malformed power suffix in '" + spec + "' (expected @k with k >= 2)");
        }
        return power_substituted(parse_function_spec(spec.substr(0, at)), static_cast<unsigned>(k));
    }
    auto colon = spec.find(':');
    const std::string id = spec.substr(0, colon);
    const bool has_args = colon != std::string::npos;
    const std::string args = has_args ? spec.substr(colon + 1) : "";
    auto no_args = [&](Function f) {
        if (has_args) {
            throw InputError("function '" + id + "' takes no parameters");
        }
        return f;
    };
    if (id == "cosh") {
        return no_args(Function(fn::Cosh{}));
    }
    if (id == "cosh_sqrt") {
        return no_args(Function(fn::CoshSqrt{}));
    }
    if (id == "exp_neg_inv") {
        return no_args(Function(fn::ExpNegInv{}));
    }
    if (id == "exp") {
        return Function(fn::Exp{has_args ? parse_rational(args) : Rational(1)});
    }
    if (id == "polynomial") {
        return Function(fn::Polynomial{parse_rational_list(args)});
    }
    if (id == "exp_decay_fourier") {
        return Function(fn::ExpDecay{parse_rational_list(args)});
    }
    if (id == "rational") {
        auto bar = args.find('|');
        if (bar == std::string::npos) {
            throw InputError("rational function spec needs 'numerator|denominator'");
        }
        return Function(fn::RationalFunction{parse_rational_list(args.substr(0, bar)),
                                             parse_rational_list(args.substr(bar + 1))});
    }
    throw InputError("unknown function '" + id + "'");
}

JetMode parse_jet_mode(const std::string& text) {
    if (text == "auto") {
        return JetMode::automatic;
    }
    if (text == "exact") {
        return JetMode::exact;
    }
    if (text == "precision") {
        return JetMode::precision;
    }
    throw InputError("unknown jet mode '" + text + "' (auto, exact or precision)");
}

Json jet_to_json(const Function& f, const Rational& x0, std::size_t order, JetMode mode, const OrderBudget& budget) {
    Json doc;
    doc["function"] = f.describe();
    doc["base_point"] = format_rational(x0);
    doc["order"] = order;
    Json coeffs = Json::array();
    Json derivs = Json::array();
    std::optional<Jet<Rational>> exact;
    if (mode != JetMode::precision) {
        try {
            exact = f.jet<Rational>(x0, order, budget);
        } catch (const NotExactError&) {
            if (mode == JetMode::exact) {
                throw;
            }
        }
    }
    if (exact) {
        for (std::size_t n = 0; n <= order; ++n) {
            coeffs.push_back(format_rational((*exact)[n]));
            derivs.push_back(format_rational(exact->derivative(n)));
        }
    } else {
        Jet<Real> jet = f.jet<Real>(to_real(x0), order, budget);
        for (std::size_t n = 0; n <= order; ++n) {
            coeffs.push_back(format_real(jet[n]));
            derivs.push_back(format_real(jet.derivative(n)));
        }
    }
    doc["mode"] = exact ? "exact" : "precision";
    doc["precision_bits"] = precision_bits();
    doc["coefficients"] = std::move(coeffs);
    doc["derivatives"] = std::move(derivs);
    return doc;
}

// ---------------------------------------------------------------------------
// B-tables

std::string btable_csv(const BTable& table) {
    std::ostringstream out;
    out << "n,k,i,j,B\n";
    for (const auto& e : table.entries()) {
        out << table.order() << ',' << table.power() << ',' << e.i << ',' << e.j << ',' << e.value.str() << '\n';
    }
    return out.str();
}

Json btable_to_json(const BTable& table) {
    Json doc;
    doc["n"] = table.order();
    doc["k"] = table.power();
    Json entries = Json::array();
    for (const auto& e : table.entries()) {
        Json row;
        row["i"] = e.i;
        row["j"] = e.j;
        row["B"] = e.value.str();
        entries.push_back(std::move(row));
    }
    doc["entries"] = std::move(entries);
    return doc;
}

// ---------------------------------------------------------------------------
// Reports

Json report_to_json(const VerificationReport& report) {
    Json doc;
    doc["suite"] = report.suite;
    doc["pair"] = report.subject;
    Json grid;
    grid["spec"] = report.grid_spec;
    Json points = Json::array();
    for (const Real& x : report.grid) {
        points.push_back(format_real(x));
    }
    grid["points"] = std::move(points);
    doc["grid"] = std::move(grid);
    doc["orders"] = report.orders;
    doc["tolerance_exp"] = report.tolerance_exp;
    doc["precision_bits"] = precision_bits();
    Json rows = Json::array();
    for (const auto& row : report.rows) {
        rows.push_back(row_to_json(row));
    }
    doc["rows"] = std::move(rows);
    if (report.fit) {
        Json fit;
        fit[report.fit->first_name] = format_real(report.fit->first);
        fit[report.fit->second_name] = format_real(report.fit->second);
        Json d = Json::array();
        for (const Real& v : report.fit->d) {
            d.push_back(format_real(v));
        }
        fit["D"] = std::move(d);
        doc["fit"] = std::move(fit);
    } else {
        doc["fit"] = nullptr;
    }
    doc["verdict"] = report.pass ? "pass" : "fail";
    doc["worst"] = report.worst_row() ? row_to_json(*report.worst_row()) : Json(nullptr);
    Json notes = Json::object();
    for (const auto& [k, v] : report.annotations) {
        notes[k] = v;
    }
    doc["annotations"] = std::move(notes);
    return doc;
}

std::string report_csv_header() {
    return "suite,pair,n,l,x,actual,bound,ratio,branch,precision_bits\n";
}

std::string report_csv_rows(const VerificationReport& report) {
    std::ostringstream out;
    const unsigned bits = precision_bits();
    for (const auto& row : report.rows) {
        out << csv_field(report.suite) << ',' << csv_field(report.subject) << ',' << row.n << ','
            << (row.ell ? std::to_string(*row.ell) : "") << ',' << format_real(row.x) << ','
            << format_real(row.actual) << ',' << format_real(row.bound) << ',' << format_real(row.ratio) << ','
            << csv_field(row.branch) << ',' << bits << '\n';
    }
    return out.str();
}

std::string report_to_csv(const VerificationReport& report) {
    return report_csv_header() + report_csv_rows(report);
}

Json example2_to_json(const Example2Result& result, const DecayFamily& decay, unsigned truncation) {
    Json doc;
    doc["suite"] = "example2";
    doc["decay"] = decay.describe();
    doc["truncation"] = truncation;
    doc["h_plus"] = report_to_json(result.plus);
    doc["h_minus"] = report_to_json(result.minus);
    doc["verdict"] = result.pass() ? "pass" : "fail";
    doc["precision_bits"] = precision_bits();
    return doc;
}

// ---------------------------------------------------------------------------
// Corpus

const SubstitutionPair& Corpus::find(const std::string& id) const {
    for (const auto& p : pairs) {
        if (p.id == id) {
            return p;
        }
    }
    std::string known;
    for (const auto& p : pairs) {
        known += (known.empty() ? "" : ", ") + p.id;
    }
    throw InputError("unknown pair '" + id + "' (known: " + known + ")");
}

Corpus parse_corpus(const Json& doc) {
    if (!doc.is_object() || !doc.contains("pairs") || !doc["pairs"].is_array()) {
        throw InputError("corpus: expected {\"version\", \"pairs\": [...]}");
    }
    Corpus corpus;
    corpus.version = doc.value("version", 0);
    for (const Json& p : doc["pairs"]) {
        const std::string id = scalar_text(member(p, "id", "corpus pair"), "pair id");
        const std::string where = "corpus pair '" + id + "'";
        for (const auto& seen : corpus.pairs) {
            if (seen.id == id) {
                throw InputError(where + " is defined twice");
            }
        }
        const Json& kj = member(p, "k", where);
        if (!kj.is_number_integer() || kj.get<long>() < 2) {
            throw InputError(where + ": k must be an integer >= 2");
        }
        BoundSource source;
        const Json& mj = member(p, "M", where);
        if (mj.contains("sequence")) {
            source.kind = BoundSource::Kind::sequence;
            source.sequence = parse_sequence(mj["sequence"]);
        } else if (mj.contains("measure")) {
            source.kind = BoundSource::Kind::measure;
            source.measure_grid = scalar_text(mj["measure"], where + " measure grid");
        } else {
            throw InputError(where + ": M needs \"sequence\" or \"measure\"");
        }
        corpus.pairs.push_back(SubstitutionPair{
            id, static_cast<unsigned>(kj.get<long>()),
            parse_function_spec(scalar_text(member(p, "f", where), where + " f")),
            parse_function_spec(scalar_text(member(p, "g", where), where + " g")), std::move(source),
            p.contains("note") ? scalar_text(p["note"], where + " note") : ""});
    }
    return corpus;
}

Corpus read_corpus_file(const std::string& path) {
    return parse_corpus(parse_json(read_text_file(path), "'" + path + "'"));
}

Corpus default_corpus() {
    return read_corpus_file(default_corpus_path());
}

std::string default_corpus_path() {
    return std::string(CARLEMAN_DATA_DIR) + "/corpus.json";
}

}  // namespace carleman::io
