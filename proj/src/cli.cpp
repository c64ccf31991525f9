#include "carleman/cli.hpp"

#include "carleman/io.hpp"

#include "CLI11.hpp"

#include <optional>
#include <ostream>

namespace carleman::cli {

namespace {

using io::Format;
using io::Json;

struct Output {
    std::string text;
    int code = kExitPass;
};

WeightSequence load_sequence(const std::string& in, const std::string& family) {
    if (in.empty() == family.empty()) {
        throw InputError("give exactly one of --in and --family");
    }
    return in.empty() ? io::family_sequence(family) : io::read_sequence_file(in);
}

std::size_t default_upto(const WeightSequence& m, const std::optional<std::size_t>& upto, const char* command,
                         std::optional<std::size_t> family_default = std::nullopt) {
    if (upto) {
        return *upto;
    }
    if (auto last = m.last_index()) {
        return *last;
    }
    if (family_default) {
        return *family_default;
    }
    throw InputError(std::string(command) + ": --upto is required for family sequences");
}

std::string render_sequence(const Json& doc, Format format) {
    return format == Format::csv ? io::sequence_csv(doc) : io::dump(doc);
}

WeightSequence bound_override(const std::string& spec) {
    if (spec.size() > 5 && spec.ends_with(".json")) {
        return io::read_sequence_file(spec);
    }
    return io::family_sequence(spec);
}

Output report_output(const VerificationReport& report, Format format, std::ostream& err) {
    err << report.suite << ' ' << report.subject << ": " << (report.pass ? "pass" : "FAIL");
    if (const ReportRow* w = report.worst_row()) {
        err << " (worst ratio " << format_real(w->ratio) << " at n=" << w->n << ", x=" << format_real(w->x) << ')';
    }
    err << '\n';
    return {format == Format::csv ? io::report_to_csv(report) : io::dump(io::report_to_json(report)),
            report.pass ? kExitPass : kExitViolation};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Weight sequences, jets and derivative bounds for power substitutions", "carleman"};
    app.fallthrough();
    app.require_subcommand(1);

    std::optional<unsigned> precision;
    std::size_t max_order = kDefaultMaxOrder;
    unsigned tolerance_exp = 100;
    std::string out_path;
    std::string format_name;
    app.add_option("--precision-bits", precision, "MPFR mantissa bits (default 256, or CARLEMAN_PRECISION_BITS)");
    app.add_option("--max-order", max_order, "Largest jet order allowed")->capture_default_str();
    app.add_option("--tolerance-exp", tolerance_exp, "Relative tolerance 2^-E for bound checks")
        ->capture_default_str();
    app.add_option("--out", out_path, "Write output here instead of stdout");
    app.add_option("--format", format_name, "json or csv")->check(CLI::IsMember({"json", "csv"}));

    std::string in, family;
    std::optional<std::size_t> upto;

    auto* regularize = app.add_subcommand("regularize", "Largest log-convex minorant and its support");
    regularize->add_option("--in", in, "Sequence file");
    regularize->add_option("--family", family, "Registry family, e.g. gevrey:1");
    regularize->add_option("--upto", upto, "Last index");

    auto* dc = app.add_subcommand("dc", "Denjoy-Carleman partial sums and verdict");
    dc->add_option("--in", in, "Sequence file");
    dc->add_option("--family", family, "Registry family, e.g. gevrey:1");
    dc->add_option("--upto", upto, "Number of terms (default: file length, or 100 for families)");

    unsigned transform_k = 0;
    bool hat = false;
    auto* transform = app.add_subcommand("transform", "M^(k) or M-hat");
    transform->add_option("--in", in, "Sequence file");
    transform->add_option("--family", family, "Registry family, e.g. gevrey:1");
    transform->add_option("--upto", upto, "Last index of the output");
    auto* k_opt = transform->add_option("--k", transform_k, "Power k >= 2");
    auto* hat_opt = transform->add_flag("--hat", hat, "Regularize so that M_{n+1} >= (n+1) M_n");
    k_opt->excludes(hat_opt);

    std::size_t table_n = 0;
    unsigned table_k = 0;
    auto* btable = app.add_subcommand("btable", "Chain-rule coefficients for g(x^k)");
    btable->add_option("--n", table_n, "Order n >= 1")->required();
    btable->add_option("--k", table_k, "Power k >= 2")->required();

    std::string fn_spec, x0_text = "0", mode_name = "auto";
    std::size_t jet_order = 8;
    auto* jets = app.add_subcommand("jets", "Taylor jet of a registry function");
    jets->add_option("--fn", fn_spec, "Function, e.g. cosh_sqrt, exp:2, polynomial:0,0,1, exp@3")->required();
    jets->add_option("--x0", x0_text, "Base point (decimal or p/q)")->capture_default_str();
    jets->add_option("--order", jet_order, "Jet order")->capture_default_str();
    jets->add_option("--mode", mode_name, "auto, exact or precision")
        ->check(CLI::IsMember({"auto", "exact", "precision"}))
        ->capture_default_str();

    std::string suite, pair_id, grid_spec = "dyadic:16", override_m, weights = "gevrey:1", sigma_text;
    std::string decay_spec = "power:10", ceiling_text = "1024", corpus_path;
    std::size_t orders = 16;
    unsigned truncation = 40;
    auto* verify = app.add_subcommand("verify", "Certify a bound on a grid");
    verify->add_option("suite", suite, "theorem1, prop2, zero, lemma41, lemma32, example1 or example2")
        ->required()
        ->check(CLI::IsMember({"theorem1", "prop2", "zero", "lemma41", "lemma32", "example1", "example2"}));
    verify->add_option("--pair", pair_id, "Corpus pair id");
    verify->add_option("--orders", orders, "Largest derivative order")->capture_default_str();
    verify->add_option("--grid", grid_spec, "dyadic:J, dyadic-closed:J or x1,x2,...")->capture_default_str();
    verify->add_option("--override-M", override_m, "Replace the pair's bound sequence (family spec or .json file)");
    verify->add_option("--weights", weights, "Weight sequence for lemma32")->capture_default_str();
    verify->add_option("--sigma", sigma_text, "sigma for lemma32 (default 1/k)");
    verify->add_option("--decay", decay_spec, "example2 coefficients: power:p, geometric:r or single")
        ->capture_default_str();
    verify->add_option("--J", truncation, "example2 truncation")->capture_default_str();
    verify->add_option("--ceiling", ceiling_text, "Largest accepted fitted B or C")->capture_default_str();
    verify->add_option("--corpus", corpus_path, "Pair registry (default: the shipped data/corpus.json)");

    std::vector<std::string> argv_store{"carleman"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitPass : kExitInputError;
    }

    try {
        io::RunConfig cfg;
        cfg.precision_bits = precision ? *precision : io::default_precision_bits();
        cfg.max_order = max_order;
        cfg.tolerance_exp = tolerance_exp;
        cfg.grid = grid_spec;
        cfg.out = out_path;
        if (!format_name.empty()) {
            cfg.format = io::parse_format(format_name);
        }
        cfg.validate();
        PrecisionScope scope(cfg.precision_bits);
        const Format format = cfg.format.value_or(Format::json);

        Output result;
        if (regularize->parsed()) {
            WeightSequence m = load_sequence(in, family);
            RegularizedSequence r = log_convex_minorant(m, default_upto(m, upto, "regularize"));
            result.text = render_sequence(io::regularized_to_json(r), format);
        } else if (dc->parsed()) {
            WeightSequence m = load_sequence(in, family);
            const std::size_t n = default_upto(m, upto, "dc", 100);
            Json doc = io::dc_to_json(m, n, dc_partial_sums(m, n));
            result.text = format == Format::csv ? io::dc_csv(doc) : io::dump(doc);
        } else if (transform->parsed()) {
            WeightSequence m = load_sequence(in, family);
            if (!hat && transform_k == 0) {
                throw InputError("transform: give --k or --hat");
            }
            std::size_t n = 0;
            WeightSequence t = [&] {
                if (hat) {
                    n = default_upto(m, upto, "transform");
                    return hat_regularize(m, n);
                }
                if (upto) {
                    n = *upto;
                } else if (auto last = m.last_index()) {
                    n = *last >= 1 ? (*last - 1) / transform_k : 0;
                } else {
                    throw InputError("transform: --upto is required for family sequences");
                }
                return power_transform_sequence(m, transform_k, n);
            }();
            result.text = render_sequence(io::sequence_to_json(t, n), format);
        } else if (btable->parsed()) {
            BTable table(table_n, table_k);
            result.text = cfg.format.value_or(Format::csv) == Format::csv ? io::btable_csv(table)
                                                                           : io::dump(io::btable_to_json(table));
        } else if (jets->parsed()) {
            Json doc = io::jet_to_json(io::parse_function_spec(fn_spec), parse_rational(x0_text), jet_order,
                                       io::parse_jet_mode(mode_name), cfg.harness().budget);
            result.text = format == Format::csv ? io::jet_csv(doc) : io::dump(doc);
        } else if (verify->parsed()) {
            HarnessConfig hcfg = cfg.harness();
            hcfg.ceiling = to_real(parse_rational(ceiling_text));
            const Grid grid = parse_grid(grid_spec);
            auto pair = [&]() -> SubstitutionPair {
                if (pair_id.empty()) {
                    throw InputError("verify " + suite + ": --pair is required");
                }
                io::Corpus corpus = corpus_path.empty() ? io::default_corpus() : io::read_corpus_file(corpus_path);
                return corpus.find(pair_id);
            };
            std::optional<WeightSequence> override_seq;
            if (!override_m.empty()) {
                override_seq = bound_override(override_m);
            }
            if (suite == "theorem1") {
                result = report_output(verify_theorem1(pair(), orders, grid, hcfg, override_seq), format, err);
            } else if (suite == "prop2") {
                result = report_output(verify_prop2(pair(), orders, grid, hcfg), format, err);
            } else if (suite == "zero") {
                result = report_output(verify_zero_bound(pair(), orders, hcfg), format, err);
            } else if (suite == "lemma41") {
                SubstitutionPair p = pair();
                WeightSequence premise = override_seq ? *override_seq : lemma41_premise(p, orders, hcfg.budget);
                result = report_output(verify_lemma41(p.g, p.k, premise, orders, grid, hcfg), format, err);
            } else if (suite == "lemma32") {
                SubstitutionPair p = pair();
                Rational sigma = sigma_text.empty() ? Rational(1, p.k) : parse_rational(sigma_text);
                WeightSequence m = io::family_sequence(weights);
                result = report_output(verify_lemma32(p.g, sigma, m.prefix(std::max<std::size_t>(orders, 2)),
                                                      orders, grid, hcfg),
                                       format, err);
            } else if (suite == "example1") {
                result = report_output(example1_report(orders, grid, hcfg), format, err);
            } else {
                DecayFamily decay = DecayFamily::parse(decay_spec);
                Example2Result r = example2_build(decay, truncation, orders, grid, hcfg);
                (void)report_output(r.plus, format, err);
                (void)report_output(r.minus, format, err);
                result.text = format == Format::csv
                                  ? io::report_csv_header() + io::report_csv_rows(r.plus) + io::report_csv_rows(r.minus)
                                  : io::dump(io::example2_to_json(r, decay, truncation));
                result.code = r.pass() ? kExitPass : kExitViolation;
            }
        }

        if (cfg.out.empty()) {
            out << result.text;
        } else {
            io::write_text_file(cfg.out, result.text);
        }
        return result.code;
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const NotExactError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    }
}

}  // namespace carleman::cli
