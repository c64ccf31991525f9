#include "carleman/cli.hpp"
#include "carleman/io.hpp"

#include "cli_cases.hpp"
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <sstream>

using namespace carleman;
using namespace cli_cases;
namespace fs = std::filesystem;

namespace {

struct EnvGuard {
    explicit EnvGuard(const char* value) { setenv("CARLEMAN_PRECISION_BITS", value, 1); }
    ~EnvGuard() { unsetenv("CARLEMAN_PRECISION_BITS"); }
};

}  // namespace

TEST_CASE("golden files") {
    unsetenv("CARLEMAN_PRECISION_BITS");
    const bool update = std::getenv("CARLEMAN_UPDATE_GOLDEN") != nullptr;
    for (const auto& c : golden_cases()) {
        CAPTURE(c.name);
        Result r = run(c.args);
        CHECK(r.code == c.code);
        const std::string path = kGolden + c.name + ".txt";
        if (update) {
            io::write_text_file(path, r.out);
        }
        CHECK(r.out == io::read_text_file(path));
    }
}

TEST_CASE("reruns are byte-identical") {
    for (const auto& c : golden_cases()) {
        CAPTURE(c.name);
        Result a = run(c.args), b = run(c.args);
        CHECK(a.out == b.out);
        CHECK(a.err == b.err);
        CHECK(a.code == b.code);
    }
}

TEST_CASE("exit codes") {
    SUBCASE("documented examples") {
        CHECK(run({"verify", "theorem1", "--pair", "cosh2", "--orders", "20", "--grid", "dyadic:20"}).code == 0);
        CHECK(run({"verify", "theorem1", "--pair", "cosh2", "--override-M", "const:0.1"}).code == 1);
        Result s = run({"transform", "--k", "2", "--in", kData + "short.json", "--upto", "10"});
        CHECK(s.code == 2);
        CHECK(s.out.empty());
        CHECK(s.err.find("need 21 values") != std::string::npos);
    }
    SUBCASE("input errors") {
        Result m = run({"regularize", "--in", kData + "malformed.json"});
        CHECK(m.code == 2);
        CHECK(m.err.find("malformed JSON") != std::string::npos);
        CHECK(run({"regularize", "--in", kData + "missing.json"}).code == 2);
        CHECK(run({"regularize", "--family", "gevrey:1"}).code == 2);
        CHECK(run({"regularize", "--in", kData + "m144.json", "--family", "gevrey:1"}).code == 2);
        CHECK(run({"frobnicate"}).code == 2);
        CHECK(run({}).code == 2);
        CHECK(run({"btable", "--n", "3"}).code == 2);
        CHECK(run({"btable", "--n", "3", "--k", "1"}).code == 2);
        CHECK(run({"transform", "--k", "2", "--hat", "--in", kData + "m144.json"}).code == 2);
        CHECK(run({"--precision-bits", "32", "btable", "--n", "2", "--k", "2"}).code == 2);
        CHECK(run({"btable", "--n", "2", "--k", "2", "--tolerance-exp", "5"}).code == 2);
        CHECK(run({"btable", "--n", "2", "--k", "2", "--format", "xml"}).code == 2);
        CHECK(run({"jets", "--fn", "exp", "--x0", "1/2", "--mode", "exact"}).code == 2);
        CHECK(run({"jets", "--fn", "exp", "--order", "100"}).code == 2);
        CHECK(run({"verify", "theorem1", "--pair", "nosuch"}).code == 2);
        CHECK(run({"verify", "theorem1"}).code == 2);
        CHECK(run({"verify", "theorem1", "--pair", "cosh2", "--grid", "dyadic:0"}).code == 2);
        CHECK(run({"verify", "example2", "--J", "0"}).code == 2);
    }
    SUBCASE("help") {
        Result h = run({"--help"});
        CHECK(h.code == 0);
        CHECK(h.out.find("regularize") != std::string::npos);
    }
}

TEST_CASE("global flags") {
    unsetenv("CARLEMAN_PRECISION_BITS");
    const std::vector<std::string> jets{"jets", "--fn", "exp", "--x0", "1/3", "--order", "1"};
    auto bits_of = [](const std::string& text) { return io::Json::parse(text)["precision_bits"].get<unsigned>(); };

    SUBCASE("environment precision") {
        const unsigned base = bits_of(run(jets).out);
        EnvGuard env("128");
        Result r = run(jets);
        CHECK(r.code == 0);
        CHECK(bits_of(r.out) < base);
        std::vector<std::string> flagged = jets;
        flagged.insert(flagged.end(), {"--precision-bits", "256"});
        CHECK(bits_of(run(flagged).out) == base);
    }
    SUBCASE("bad environment value") {
        EnvGuard env("many");
        CHECK(run(jets).code == 2);
    }
    SUBCASE("--out writes the file and nothing to stdout") {
        const fs::path dir = fs::temp_directory_path() / "carleman_cli_test";
        fs::create_directories(dir);
        const std::string path = (dir / "table.csv").string();
        Result direct = run({"btable", "--n", "5", "--k", "3"});
        Result r = run({"--out", path, "btable", "--n", "5", "--k", "3"});
        CHECK(r.code == 0);
        CHECK(r.out.empty());
        CHECK(io::read_text_file(path) == direct.out);
        fs::remove_all(dir);
    }
    SUBCASE("flags before or after the subcommand") {
        CHECK(run({"--format", "json", "btable", "--n", "3", "--k", "2"}).out ==
              run({"btable", "--n", "3", "--k", "2", "--format", "json"}).out);
    }
    SUBCASE("--max-order bounds jets") {
        CHECK(run({"--max-order", "4", "jets", "--fn", "exp", "--order", "5"}).code == 2);
        CHECK(run({"--max-order", "4", "jets", "--fn", "exp", "--order", "4"}).code == 0);
    }
    SUBCASE("--tolerance-exp reaches the report") {
        Result r = run({"verify", "example1", "--orders", "1", "--grid", "dyadic:1", "--tolerance-exp", "40"});
        CHECK(io::Json::parse(r.out)["tolerance_exp"] == 40);
    }
}

TEST_CASE("CLI output equals direct library calls") {
    unsetenv("CARLEMAN_PRECISION_BITS");
    SUBCASE("regularize") {
        WeightSequence m = io::read_sequence_file(kData + "m144.json");
        CHECK(run({"regularize", "--in", kData + "m144.json"}).out ==
              io::dump(io::regularized_to_json(log_convex_minorant(m, 2))));
    }
    SUBCASE("dc") {
        WeightSequence m = io::family_sequence("gevrey:2");
        CHECK(run({"dc", "--family", "gevrey:2", "--upto", "9"}).out ==
              io::dump(io::dc_to_json(m, 9, dc_partial_sums(m, 9))));
    }
    SUBCASE("transform") {
        WeightSequence m = io::read_sequence_file(kData + "nfact.json");
        CHECK(run({"transform", "--k", "3", "--in", kData + "nfact.json"}).out ==
              io::dump(io::sequence_to_json(power_transform_sequence(m, 3, 3), 3)));
        CHECK(run({"transform", "--hat", "--in", kData + "const1.json", "--upto", "5"}).out ==
              io::dump(io::sequence_to_json(hat_regularize(io::read_sequence_file(kData + "const1.json"), 5), 5)));
    }
    SUBCASE("btable") {
        CHECK(run({"btable", "--n", "6", "--k", "4"}).out == io::btable_csv(BTable(6, 4)));
    }
    SUBCASE("jets") {
        CHECK(run({"jets", "--fn", "exp@3", "--x0", "1/2", "--order", "6"}).out ==
              io::dump(io::jet_to_json(io::parse_function_spec("exp@3"), Rational(1, 2), 6, io::JetMode::automatic)));
    }
    SUBCASE("verify") {
        const SubstitutionPair pair = io::default_corpus().find("exp3");
        CHECK(run({"verify", "theorem1", "--pair", "exp3", "--orders", "5", "--grid", "dyadic:5"}).out ==
              io::dump(io::report_to_json(verify_theorem1(pair, 5, parse_grid("dyadic:5")))));
        CHECK(run({"verify", "prop2", "--pair", "exp3", "--orders", "4", "--grid", "dyadic:4", "--format", "csv"}).out ==
              io::report_to_csv(verify_prop2(pair, 4, parse_grid("dyadic:4"))));
        CHECK(run({"verify", "example1", "--orders", "4", "--grid", "dyadic:6"}).out ==
              io::dump(io::report_to_json(example1_report(4, parse_grid("dyadic:6")))));
    }
}
