#include <doctest.h>

#include "cli.hpp"

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using nlohmann::json;
using hypdim::cli::run;

namespace {

struct Outcome {
    int code = -1;
    std::string out;
    std::string err;
    json doc() const { return json::parse(out); }
};

Outcome cli(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    Outcome o;
    o.code = run(args, out, err);
    o.out = out.str();
    o.err = err.str();
    return o;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::filesystem::path scratch_dir() {
    auto dir = std::filesystem::temp_directory_path() / "hypdim_cli_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("pressure command") {
    auto r = cli({"pressure", "--model", "horseshoe:3,0.25", "--potential", "phi_u", "--method", "spectral"});
    REQUIRE(r.code == 0);
    CHECK(r.doc()["result"]["estimate"]["value"].get<double>() == doctest::Approx(-0.405465108108164).epsilon(1e-12));

    r = cli({"pressure", "--model", "doubling:2", "--method", "volume", "--eps", "0.1", "--kmax", "8", "--grid", "4096"});
    REQUIRE(r.code == 0);
    const double v = r.doc()["result"]["estimate"]["value"].get<double>();
    CHECK(v >= -0.05);
    CHECK(v <= 0.0);

    r = cli({"pressure", "--model", "horseshoe:3,0.25", "--method", "partition", "--kmax", "12"});
    REQUIRE(r.code == 0);
    CHECK(std::abs(r.doc()["result"]["estimate"]["value"].get<double>() - std::log(2.0 / 3.0)) <= 1e-9);
}

TEST_CASE("bound command") {
    auto r = cli({"bound", "--model", "horseshoe:3,0.25"});
    REQUIRE(r.code == 0);
    CHECK(r.doc()["result"]["bound"].get<double>() == doctest::Approx(1.630930).epsilon(1e-6));

    r = cli({"bound", "--model", "catmap"});
    REQUIRE(r.code == 0);
    CHECK(r.doc()["result"]["bound"].get<double>() == 2.0);
    CHECK(r.doc()["result"]["classification"] == "attractor");

    r = cli({"bound", "--model", "cantor:3,02"});
    REQUIRE(r.code == 0);
    CHECK(r.doc()["result"]["bound"].get<double>() == doctest::Approx(0.630930).epsilon(1e-6));

    r = cli({"bound", "--model", "catmap", "--check-srb"});
    REQUIRE(r.code == 0);
    for (const auto& c : r.doc()["result"]["equivalence_checks"]) CHECK(c["verdict"] == "pass");

    r = cli({"bound", "--model-file", std::string(HYPDIM_TEST_DATA) + "/shear.json"});
    REQUIRE(r.code == 0);
    // Two branches of determinant 4: P(phi) = log(2 / 4).
    CHECK(r.doc()["result"]["model"] == "shear");
    CHECK(r.doc()["result"]["pressure"]["value"].get<double>() == doctest::Approx(std::log(0.5)).epsilon(1e-12));
    CHECK(r.doc()["result"]["classification"] == "non_attractor");
}

TEST_CASE("dimension command") {
    auto r = cli({"dimension", "--model", "cantor:3,02", "--scales", "3^-2..3^-9"});
    REQUIRE(r.code == 0);
    CHECK(std::abs(r.doc()["result"]["dimension"].get<double>() - 0.6309) <= 0.02);

    r = cli({"dimension", "--model", "horseshoe:3,0.25", "--set", "invariant"});
    REQUIRE(r.code == 0);
    CHECK(std::abs(r.doc()["result"]["dimension"].get<double>() - 1.1309) <= 0.05);

    r = cli({"dimension", "--model", "horseshoe:3,0.25", "--set", "stable", "--eps", "0.05", "--depth", "10"});
    REQUIRE(r.code == 0);
    CHECK(std::abs(r.doc()["result"]["dimension"].get<double>() - 1.6309) <= 0.1);

    r = cli({"dimension", "--model", "doubling:2", "--set", "stable"});
    CHECK(r.code == 2);
}

TEST_CASE("report command") {
    const auto dir = scratch_dir();
    auto r = cli({"report", "--sweep", "lambda_u=2.2:4.0:0.2", "--grid", "512", "--csv", (dir / "rows.csv").string(),
                  "--plot-data", (dir / "plot.csv").string()});
    REQUIRE(r.code == 0);
    const auto rows = r.doc()["rows"];
    REQUIRE(rows.size() == 10);
    for (const auto& row : rows) {
        const double lu = row["lambda_u"].get<double>();
        CHECK(std::abs(row["bound"].get<double>() - (1.0 + std::log(2.0) / std::log(lu))) <= 1e-9);
        CHECK(std::abs(row["pressure"].get<double>() - std::log(2.0 / lu)) <= 1e-9);
        CHECK(std::abs(row["s"].get<double>() - std::log(lu)) <= 1e-9);
        CHECK(row["measured_dimension"].get<double>() <= row["bound"].get<double>() + 0.1);
    }
    CHECK(r.err.find("lambda_u") != std::string::npos);
    const auto csv = slurp(dir / "rows.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 11);
    CHECK(slurp(dir / "plot.csv").rfind("series,x,y\n", 0) == 0);

    r = cli({"report", "--model", "horseshoe", "--target-dim", "1.9", "--grid", "1024"});
    REQUIRE(r.code == 0);
    CHECK(r.doc()["target"]["lambda_u"].get<double>() == doctest::Approx(2.1601).epsilon(1e-4));
    CHECK(std::abs(r.doc()["rows"][0]["bound"].get<double>() - 1.9) <= 1e-12);
}

TEST_CASE("exit codes and diagnostics") {
    auto r = cli({"bound", "--model-file", "/no/such/model.json"});
    CHECK(r.code == 2);
    CHECK(r.out.empty());
    CHECK(r.err.find("model.json") != std::string::npos);

    CHECK(cli({"bound", "--model", "klein:2"}).code == 2);
    CHECK(cli({"bound", "--model", "horseshoe:1.5"}).code == 2);
    CHECK(cli({"bound", "--bogus"}).code == 2);
    CHECK(cli({}).code == 2);
    CHECK(cli({"pressure", "--model", "doubling:2", "--method", "magic"}).code == 2);
    CHECK(cli({"pressure", "--model", "horseshoe", "--method", "partition", "--kmax", "30"}).code == 3);
    CHECK(cli({"pressure", "--model", "golden", "--method", "volume", "--grid", "8"}).code == 2);
    CHECK(cli({"dimension", "--model", "cantor", "--scales", "3^-2..3^-40"}).code == 3);
    CHECK(cli({"--help"}).code == 0);

    // a value inside the band between the tolerance and tolerance + residual has no verdict
    auto base = cli({"pressure", "--model", "cantor:3,02", "--method", "volume", "--eps", "0.05", "--grid", "2048"});
    REQUIRE(base.code == 0);
    const double value = base.doc()["result"]["estimate"]["value"].get<double>();
    const double residual = base.doc()["result"]["estimate"]["residual"].get<double>();
    REQUIRE(residual > 0.0);
    std::ostringstream tol;
    tol.precision(17);
    tol << std::abs(value) - residual / 2;
    auto undecided = cli({"pressure", "--model", "cantor:3,02", "--method", "volume", "--eps", "0.05", "--grid", "2048",
                          "--tol", tol.str(), "--require-verdict"});
    CHECK(undecided.code == 4);
    CHECK(undecided.doc()["result"]["classification"] == "inconclusive");
    auto decided = cli({"bound", "--model", "horseshoe", "--require-verdict"});
    CHECK(decided.code == 0);
}

TEST_CASE("outputs are reproducible and independent of threads") {
    const std::vector<std::string> stable{"dimension", "--model", "horseshoe:3,0.25", "--set", "stable", "--grid",
                                          "512", "--jitter", "--seed", "7"};
    auto a = cli(stable);
    auto with_threads = stable;
    with_threads.insert(with_threads.end(), {"--threads", "4"});
    auto b = cli(with_threads);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out == cli(stable).out);
    auto reseeded = stable;
    reseeded.back() = "8";
    CHECK(cli(reseeded).doc()["provenance"]["config"]["seed"] == 8);

    const std::vector<std::string> volume{"pressure", "--model", "cantor", "--method", "volume", "--eps", "0.05"};
    auto v1 = cli(volume);
    auto v4 = volume;
    v4.insert(v4.end(), {"--threads", "4"});
    CHECK(v1.out == cli(v4).out);
}

TEST_CASE("provenance and file outputs") {
    const auto dir = scratch_dir();
    const auto out = dir / "bound.json";
    auto r = cli({"pressure", "--model", "cantor", "--method", "volume", "--eps", "0.05", "--out", out.string(), "--csv",
                  (dir / "curve.csv").string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    const auto doc = json::parse(slurp(out));
    CHECK(doc["provenance"]["tool"] == "hypdim");
    CHECK(doc["provenance"]["version"].is_string());
    CHECK(doc["provenance"]["config"]["eps"] == 0.05);
    CHECK(doc["provenance"]["tolerances"]["classification"] == 0.02);
    CHECK(doc["provenance"]["caps"]["word_bits"] == 24);
    CHECK(doc["provenance"]["model_definition"]["kind"] == "expanding");
    const auto csv = slurp(dir / "curve.csv");
    CHECK(csv.rfind("k,vol,log_vol\n", 0) == 0);
    CHECK(csv.find('\r') == std::string::npos);
    CHECK(csv.find(',') != std::string::npos);
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        CHECK(entry.path().extension() != ".tmp");
    }

    // a failing run leaves no files behind
    const auto failed = dir / "failed.csv";
    r = cli({"pressure", "--model", "horseshoe", "--method", "partition", "--kmax", "30", "--csv", failed.string()});
    CHECK(r.code == 3);
    CHECK_FALSE(std::filesystem::exists(failed));
    CHECK_FALSE(std::filesystem::exists(failed.string() + ".tmp"));
}

TEST_CASE("volume method records its default epsilon") {
    auto r = cli({"pressure", "--model", "cantor:3,02", "--method", "volume"});
    REQUIRE(r.code == 0);
    CHECK(r.doc()["result"]["volume_curve"]["epsilon"].get<double>() == doctest::Approx(1.0 / 6.0));
    CHECK(std::abs(r.doc()["result"]["estimate"]["value"].get<double>() - std::log(2.0 / 3.0)) <= 0.1);
    r = cli({"pressure", "--model", "catmap", "--method", "volume"});
    REQUIRE(r.code == 0);
    CHECK(r.doc()["result"]["volume_curve"]["epsilon"].get<double>() == 0.1);
    CHECK(r.doc()["result"]["classification"] == "attractor");
}
