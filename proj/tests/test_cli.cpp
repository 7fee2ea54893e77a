#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "eaqc/cli.hpp"
#include "eaqc/error.hpp"
#include "eaqc/io.hpp"
#include "eaqc/region.hpp"
#include "support.hpp"

using namespace eaqc;
using namespace testing_support;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "eaqc_cli_tests";
    fs::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("ensemble JSON parsing") {
    const Ensemble d = load_ensemble(fixture("discussion_t0.05.json"));
    CHECK(d.dimC == 2);
    CHECK(d.items[2].label == "++");
    CHECK(d.items[2].prob == doctest::Approx(0.1));

    const Ensemble v = load_ensemble(fixture("visible_pair.json"));
    CHECK(v.dimC == 2);
    CHECK((v.items[1].sigma - ket1()).norm() == 0.0);

    const Ensemble b = load_ensemble(fixture("blind_pair.json"));
    CHECK(b.dimC == 1);

    const Ensemble real = parse_ensemble_json(R"({"dimA": 2, "states": [{"prob": 1, "psi": [0, 1]}]})");
    CHECK(real.items[0].label == "0");
    CHECK(real.items[0].psi(1) == cplx(1.0));

    CHECK_THROWS_AS(parse_ensemble_json(R"({"dimA": 2, "states": [})"), IoError);
    CHECK_THROWS_AS(parse_ensemble_json(R"({"dimA": 2, "extra": 1, "states": []})"), IoError);
    CHECK_THROWS_AS(parse_ensemble_json(R"({"dimA": 2, "states": [{"prob": 1, "psi": [0, 1], "x": 0}]})"),
                    IoError);
    CHECK_THROWS_AS(parse_ensemble_json(R"({"dimA": 0, "states": []})"), IoError);
    CHECK_THROWS_AS(parse_ensemble_json(R"({"dimA": 2, "states": [{"prob": "1", "psi": [0, 1]}]})"), IoError);
    CHECK_THROWS_AS(parse_ensemble_json(R"({"dimA": 2, "dimC": 2, "states": [{"prob": 1, "psi": [0, 1]}]})"),
                    IoError);
    CHECK_THROWS_AS(parse_ensemble_json(R"([1, 2])"), IoError);
    CHECK_THROWS_AS(load_ensemble(fixture("missing.json")), IoError);

    try {
        parse_ensemble_json(read_text_file(fixture("truncated.json")));
        FAIL("expected a parse error");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("byte") != std::string::npos);
    }

    // Round trip through the writer.
    const Ensemble again = parse_ensemble_json(ensemble_to_json(d));
    CHECK(again.size() == d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        CHECK((again.items[i].psi - d.items[i].psi).norm() == 0.0);
        CHECK((again.items[i].sigma - d.items[i].sigma).norm() == 0.0);
        CHECK(again.items[i].prob == d.items[i].prob);
    }
}

TEST_CASE("matrix JSON and atomic writes") {
    const CMatrix cnot = load_matrix(fixture("cnot.json"));
    CHECK((cnot - controlled_shift(2, 2)).norm() == 0.0);
    CHECK_THROWS_AS(parse_matrix_json(R"({"matrix": [[[1,0]], [[0,0],[1,0]]]})"), IoError);
    CHECK_THROWS_AS(parse_matrix_json(R"({"matrix": []})"), IoError);

    const fs::path p = scratch("atomic.txt");
    write_file_atomic(p, "first\n");
    write_file_atomic(p, "second\n");
    CHECK(read_text_file(p) == "second\n");
    for (const auto& entry : fs::directory_iterator(p.parent_path()))
        CHECK(entry.path().filename().string().find(".tmp.") == std::string::npos);
    CHECK_THROWS_AS(write_file_atomic(scratch("no/such/dir/x.txt"), "x"), IoError);
}

TEST_CASE("validate command") {
    CHECK(run({"validate", fixture("blind_pair.json")}).code == 0);

    const Run bad = run({"validate", fixture("bad_sum.json")});
    CHECK(bad.code == 1);
    CHECK(std::count(bad.out.begin(), bad.out.end(), '\n') == 1);
    CHECK(run({"validate", "--renormalize", fixture("bad_sum.json")}).code == 0);

    const Run trunc = run({"validate", fixture("truncated.json")});
    CHECK(trunc.code == 2);
    CHECK(trunc.err.find("byte") != std::string::npos);
    CHECK(run({"validate", fixture("missing.json")}).code == 2);
}

TEST_CASE("usage errors") {
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"rates"}).code == 2);
    CHECK(run({"rates", fixture("blind_pair.json"), "--no-such-flag"}).code == 2);
    CHECK(run({"region", fixture("blind_pair.json"), "--kind", "xy"}).code == 2);
    const Run help = run({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("rates") != std::string::npos);
}

TEST_CASE("rates command") {
    const Run r = run({"rates", fixture("discussion_t0.05.json")});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["schema_version"] == kSchemaVersion);
    CHECK(j["decomposition"]["count"] == 1);
    CHECK(j["rates"]["optimal"]["Q"].get<double>() == doctest::Approx(0.967014964570561).epsilon(1e-12));
    CHECK(j["preprocessing"] == "none");

    const Run c = run({"rates", "--apply-cnot", fixture("discussion_t0.05.json")});
    REQUIRE(c.code == 0);
    const auto jc = nlohmann::json::parse(c.out);
    CHECK(jc["rates"]["optimal"]["Q"].get<double>() == doctest::Approx(0.607885137036591).epsilon(1e-12));
    CHECK(jc["preprocessing"] == "cnot");

    const Run u = run({"rates", "--pre-unitary", fixture("cnot.json"), fixture("discussion_t0.05.json")});
    REQUIRE(u.code == 0);
    CHECK(nlohmann::json::parse(u.out)["rates"]["optimal"] == jc["rates"]["optimal"]);

    const auto o = nlohmann::json::parse(run({"rates", fixture("blind_orthogonal.json")}).out);
    CHECK(o["rates"]["optimal"]["Q"].get<double>() == doctest::Approx(0.5));
    CHECK(o["rates"]["optimal"]["E"].get<double>() == doctest::Approx(0.5));
    CHECK(o["rates"].contains("blind"));
    CHECK(o["rates"].contains("classical_entanglement"));

    CHECK(run({"rates", fixture("bad_sum.json")}).code == 1);
    CHECK(run({"rates", "--pre-unitary", fixture("missing.json"), fixture("blind_pair.json")}).code == 2);
}

TEST_CASE("decompose command") {
    const Run r = run({"decompose", fixture("blind_orthogonal.json")});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["count"] == 2);
    CHECK(j["irreducible"] == false);
    CHECK(j["components"][1]["labels"][0] == "1");
}

TEST_CASE("region command") {
    const Run eq = run({"region", fixture("visible_pair.json")});
    REQUIRE(eq.code == 0);
    CHECK(eq.out.rfind("E,Q\n", 0) == 0);
    CHECK(eq.out.find("0.500000,0.500000\n") != std::string::npos);

    const Run ce = run({"region", "--kind", "ce", fixture("blind_orthogonal.json")});
    REQUIRE(ce.code == 0);
    CHECK(ce.out.find("1.000000,0.000000\n") != std::string::npos);
    CHECK(run({"region", "--kind", "ce", fixture("visible_pair.json")}).code == 1);

    const fs::path csv = scratch("region.csv"), spec = scratch("region.json");
    const Run files = run({"region", fixture("discussion_t0.05.json"), "--csv", csv.string(), "--spec", spec.string(),
                           "--x-range", "0,2", "--y-range", "0,2", "--samples", "9"});
    REQUIRE(files.code == 0);
    const auto j = nlohmann::json::parse(read_text_file(spec));
    CHECK(j["region"] == "EQ");
    RegionSpec s;
    s.q_min = j["q_min"];
    s.sum_min = j["sum_min"];
    std::istringstream in(read_text_file(csv));
    std::string line;
    std::getline(in, line);
    CHECK(line == "E,Q");
    int rows = 0;
    while (std::getline(in, line)) {
        double e = 0, q = 0;
        REQUIRE(std::sscanf(line.c_str(), "%lf,%lf", &e, &q) == 2);
        CHECK(eq_contains(s, e, q, 1e-6));
        ++rows;
    }
    CHECK(rows > 0);
    CHECK(run({"region", fixture("visible_pair.json"), "--x-range", "2,1"}).code == 1);
}

TEST_CASE("simulate command") {
    const Run up = run({"simulate", fixture("blind_pair.json"), "--rate-offset", "0.1"});
    REQUIRE(up.code == 0);
    CHECK(up.out.rfind("n,Q,fidelity\n2,0.700876,0.913918795308\n", 0) == 0);

    const Run one = run({"simulate", fixture("blind_pair.json"), "--rate", "1", "--n", "3,5", "--format", "json"});
    REQUIRE(one.code == 0);
    const auto j = nlohmann::json::parse(one.out);
    CHECK(j["points"][1]["fidelity"].get<double>() == 1.0);

    const Run capped = run({"simulate", fixture("blind_pair.json"), "--rate", "1", "--n", "20"});
    CHECK(capped.code == 1);
    CHECK(capped.err.find("n=20") != std::string::npos);
    CHECK(run({"simulate", fixture("blind_pair.json"), "--rate", "1", "--n", "12", "--max-block-log2-dim", "10"}).code ==
          1);
    CHECK(run({"simulate", fixture("blind_pair.json")}).code == 1);
    CHECK(run({"simulate", fixture("discussion_t0.05.json"), "--rate", "1"}).code == 1);
}

TEST_CASE("caps from the environment") {
    ::setenv("EAQC_MAX_BLOCK_LOG2_DIM", "3", 1);
    const Run env = run({"simulate", fixture("blind_pair.json"), "--rate", "1", "--n", "4"});
    const Run flag =
        run({"simulate", fixture("blind_pair.json"), "--rate", "1", "--n", "4", "--max-block-log2-dim", "6"});
    ::unsetenv("EAQC_MAX_BLOCK_LOG2_DIM");
    CHECK(env.code == 1);
    CHECK(flag.code == 0);
}

TEST_CASE("iepsilon command") {
    const std::vector<std::string> args{"iepsilon", fixture("blind_pair.json"), "--eps", "0,0.1", "--restarts", "2",
                                        "--max-iterations", "100", "--seed", "5", "--no-subadditivity"};
    const Run a = run(args);
    REQUIRE(a.code == 0);
    const Run b = run(args);
    CHECK(a.out == b.out);
    auto serial = args;
    serial.push_back("--serial");
    CHECK(run(serial).out == a.out);

    const auto j = nlohmann::json::parse(a.out);
    CHECK(j["kind"] == "i_epsilon_report");
    CHECK(j["estimates"][0]["value"].get<double>() <= 1e-3);
    CHECK(j["checks"]["ok"] == true);
    CHECK(run({"iepsilon", fixture("blind_pair.json"), "--eps", "1.5"}).code == 1);

    const fs::path out = scratch("ieps.json");
    auto to_file = args;
    to_file.insert(to_file.end(), {"--output", out.string()});
    REQUIRE(run(to_file).code == 0);
    CHECK(read_text_file(out) == a.out);
}
