#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "aglab/cli.hpp"
#include "aglab/config.hpp"
#include "aglab/errors.hpp"

using namespace aglab;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "aglab");
    std::ostringstream out;
    std::ostringstream err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "aglab_cli_tests";
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("missing config is a configuration error") {
    const auto r = invoke({"id-rate", "--config", "missing.json"});
    CHECK(r.code == 2);
    CHECK_FALSE(r.err.empty());
}

TEST_CASE("usage errors") {
    CHECK(invoke({}).code == 2);
    CHECK(invoke({"frobnicate"}).code == 2);
    CHECK(invoke({"nfl", "--bogus"}).code == 2);
    CHECK(invoke({"nfl", "--format", "xml"}).code == 2);
    CHECK(invoke({"id-rate", "--n-grid", "0..x"}).code == 2);
    CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("lemma512 reports all properties for inverse-log at depth 10") {
    const auto r = invoke({"lemma512", "--rate", "inverse-log", "--depth", "10", "--format", "json"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["properties"]["tail_bound"] == true);
    CHECK(j["properties"]["mass_ratio"] == true);
    CHECK(j["properties"]["rate_match"] == true);
    CHECK(j["sequence"].size() == 10);
}

TEST_CASE("construction failure exits with 1") {
    CHECK(invoke({"lemma512", "--rate", "constant:0.5", "--depth", "5"}).code == 1);
}

TEST_CASE("appendix example lands inside the interval") {
    const auto r = invoke({"appendix-example", "--n", "1000", "--format", "json"});
    REQUIRE(r.code == 0);
    const auto row = nlohmann::json::parse(r.out)["rows"][0];
    CHECK(row["inside"] == true);
    const double x = 1000 * std::log(2.0);
    CHECK(row["index"].get<double>() >= std::log2(x));
    CHECK(row["index"].get<double>() <= std::log2(x * x + 1));
}

TEST_CASE("CSV output has the documented header") {
    const auto r = invoke({"id-lower", "--n-grid", "2..3"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("n,metric,estimate,std_error,bound,method,trials\n", 0) == 0);
}

TEST_CASE("repeated runs are byte-identical") {
    const std::vector<std::vector<std::string>> runs = {
        {"nfl", "--trials", "500", "--n-grid", "1..4", "--seed", "3"},
        {"slow-rate", "--trials", "100", "--seed", "9"},
        {"id-rate", "--method", "mc", "--trials", "300", "--n-grid", "16,64", "--seed", "5"},
        {"gen-rate", "--n-grid", "1..5"},
        {"gen-lower", "--m", "1", "--format", "json"},
    };
    for (const auto& args : runs) {
        const auto a = invoke(args);
        const auto b = invoke(args);
        CAPTURE(args.front());
        CHECK(a.code == 0);
        CHECK(a.out == b.out);
    }
}

TEST_CASE("file output writes a manifest whose config replays the run") {
    const auto out = scratch("nfl.csv");
    const auto r = invoke({"nfl", "--trials", "200", "--n-grid", "1..3", "--seed", "4", "--out", out.string()});
    REQUIRE(r.code == 0);
    const auto manifest = nlohmann::json::parse(slurp(out.string() + ".manifest.json"));
    CHECK(manifest["version"] == kToolVersion);
    CHECK(manifest["assertions"]["consistency_failures"] == 0);
    const auto cfg = scratch("replay.json");
    std::ofstream(cfg) << manifest["config"].dump();
    const auto replay = invoke({"nfl", "--config", cfg.string()});
    REQUIRE(replay.code == 0);
    CHECK(replay.out == slurp(out));
}

TEST_CASE("output directory from the environment") {
    const auto dir = scratch("envdir");
    fs::create_directories(dir);
    ::setenv(kOutDirEnv, dir.string().c_str(), 1);
    const auto r = invoke({"appendix-example", "--n", "10", "--out", "ex.csv"});
    ::unsetenv(kOutDirEnv);
    REQUIRE(r.code == 0);
    CHECK(fs::exists(dir / "ex.csv"));
}

TEST_CASE("config parsing") {
    const auto c = parse_config(nlohmann::json::parse(
        R"({"schema": 1, "instance": {"name": "id-lower", "params": {"distractors": 2}, "variant": "D1"},
            "algorithm": {"name": "erm", "window": "log2"}, "n_grid": "pow2:1..3", "trials": 5, "seed": 2})"));
    CHECK(c.instance == std::optional<std::string>("id-lower"));
    CHECK(c.variant == std::optional<std::string>("D1"));
    CHECK(c.n_grid == std::vector<std::uint64_t>{2, 4, 8});
    CHECK(c.window->kind() == WindowFn::Kind::Log2);
    CHECK(parse_config(to_json(c)).n_grid == c.n_grid);
    CHECK_THROWS_AS(parse_config(nlohmann::json::parse(R"({"schema": 1, "trails": 5})")), ConfigError);
    CHECK_THROWS_AS(parse_config(nlohmann::json::parse(R"({"schema": 2})")), ConfigError);
    CHECK(parse_n_grid("1,2,4") == std::vector<std::uint64_t>{1, 2, 4});
    CHECK(parse_n_grid("2..5") == std::vector<std::uint64_t>{2, 3, 4, 5});
    CHECK(parse_window(nlohmann::json("root:4"))(4096) == 8);
    CHECK(parse_window(nlohmann::json("constant:3"))(99) == 3);
}

TEST_CASE("custom collection and distribution from a config") {
    const auto path = scratch("custom.json");
    std::ofstream(path) << R"({"schema": 1, "collection": {"name": "residue", "params": {"q": 2}},
        "distribution": {"name": "finite", "atoms": [[2, 0.5], [4, 0.3], [1, 0.2]]},
        "algorithm": {"name": "erm", "window": "constant:2"}, "n_grid": [1, 2, 3], "method": "exact"})";
    const auto r = invoke({"id-rate", "--config", path.string()});
    CHECK(r.code == 0);
    CHECK(r.out.find(",IdErr,") != std::string::npos);
}
