#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "bohm/scenario.hpp"
#include "bohm/svg.hpp"

using namespace bohm;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// A free-packet run small enough for a unit test.
ScenarioConfig small_free(const fs::path& dir) {
    ScenarioConfig c = default_config(ScenarioKind::free_gaussian);
    c.numerics.lower = {-40.0};
    c.numerics.upper = {60.0};
    c.numerics.points = {512};
    c.numerics.dt = 0.01;
    c.numerics.t_final = 4.0;
    c.numerics.n_times = 41;
    c.numerics.n_trajectories = 9;
    c.numerics.snapshot_stride = 50;
    c.outputs.directory = dir.string();
    return c;
}

}  // namespace

TEST_CASE("scenario names round-trip") {
    for (auto k : {ScenarioKind::free_gaussian, ScenarioKind::superposition, ScenarioKind::effective_well,
                   ScenarioKind::reaction_2d})
        CHECK(scenario_from_string(to_string(k)) == k);
    CHECK_THROWS_AS(scenario_from_string("talbot"), ConfigError);
}

TEST_CASE("defaults survive a JSON round trip and validate") {
    for (auto k : {ScenarioKind::free_gaussian, ScenarioKind::superposition, ScenarioKind::effective_well,
                   ScenarioKind::reaction_2d}) {
        const ScenarioConfig c = default_config(k);
        CHECK_NOTHROW(c.validate());
        const auto doc = config_to_json(c);
        CHECK(config_to_json(config_from_json(doc)) == doc);
    }
}

TEST_CASE("unknown keys and bad values are configuration errors") {
    auto doc = config_to_json(default_config(ScenarioKind::free_gaussian));
    auto bad = doc;
    bad["physics"]["sigma"] = 1.0;
    CHECK_THROWS_AS(config_from_json(bad), ConfigError);
    bad = doc;
    bad["extra"] = 1;
    CHECK_THROWS_AS(config_from_json(bad), ConfigError);
    bad = doc;
    bad["numerics"]["dt"] = "small";
    CHECK_THROWS_AS(config_from_json(bad), ConfigError);
    bad = doc;
    bad.erase("scenario");
    CHECK_THROWS_AS(config_from_json(bad), ConfigError);

    ScenarioConfig c = default_config(ScenarioKind::free_gaussian);
    c.numerics.dt = -1.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = default_config(ScenarioKind::free_gaussian);
    c.numerics.t_final = 0.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = default_config(ScenarioKind::reaction_2d);
    c.numerics.points = {256};
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = default_config(ScenarioKind::superposition);
    c.outputs.formats = {"png"};
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("dotted overrides patch the document") {
    auto doc = config_to_json(default_config(ScenarioKind::superposition));
    apply_override(doc, "physics.v0", "0.5");
    apply_override(doc, "outputs.directory", "elsewhere");
    apply_override(doc, "numerics.points", "[256]");
    const auto c = config_from_json(doc);
    CHECK(c.physics.v0 == 0.5);
    CHECK(c.outputs.directory == "elsewhere");
    CHECK(c.numerics.points == std::vector<std::size_t>{256});
    CHECK_THROWS_AS(apply_override(doc, "physics..v0", "1"), ConfigError);
    apply_override(doc, "physics.speed", "1");
    CHECK_THROWS_AS(config_from_json(doc), ConfigError);
}

TEST_CASE("a free run writes a manifest and is byte-for-byte reproducible") {
    const fs::path base = fs::temp_directory_path() / "bohm_scenario_test";
    fs::remove_all(base);
    const auto a = run_scenario(small_free(base / "a"));
    const auto b = run_scenario(small_free(base / "b"));
    CHECK(a.checks_passed());
    CHECK(a.report["checks"]["noncrossing"] == true);
    REQUIRE(fs::exists(base / "a" / "manifest.json"));
    const auto manifest = nlohmann::json::parse(slurp(base / "a" / "manifest.json"));
    CHECK(manifest["config"]["scenario"] == "free_gaussian");
    CHECK(manifest.contains("versions"));
    REQUIRE(manifest["outputs"].is_array());
    CHECK(manifest["outputs"].size() == a.artifacts.size());
    REQUIRE(fs::exists(base / "a" / "trajectories.json"));
    const auto side = nlohmann::json::parse(slurp(base / "a" / "trajectories.json"));
    CHECK(side["tolerances"]["rel_tol"] == 1e-10);
    CHECK(side["seed"] == 1);
    CHECK(side["n_paths"] == 9);
    CHECK(side["provider"].is_string());
    CHECK(side["parameters"]["sigma0"] == 1.0);
    for (const auto& entry : manifest["outputs"]) {
        const std::string name = entry["file"];
        CHECK(entry["sha256"] == sha256_file(base / "a" / name));
        CHECK(slurp(base / "a" / name) == slurp(base / "b" / name));
    }
    fs::remove_all(base);
}

TEST_CASE("sha256 of a known string") {
    const fs::path p = fs::temp_directory_path() / "bohm_sha_test.txt";
    std::ofstream(p, std::ios::binary) << "abc";
    CHECK(sha256_file(p) == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    fs::remove(p);
}

TEST_CASE("svg output is well formed and splits at gaps") {
    SvgPlot plot(0, 10, -1, 1);
    plot.title("a < b");
    const std::vector<double> x{0, 1, 2, 3, 4}, y{0, 0.5, NAN, 0.5, 0};
    plot.polyline(x, y, SvgStyle{});
    const std::string s = plot.str();
    CHECK(s.find("<svg") != std::string::npos);
    CHECK(s.find("a &lt; b") != std::string::npos);
    std::size_t lines = 0;
    for (std::size_t pos = 0; (pos = s.find("<polyline", pos)) != std::string::npos; ++pos) ++lines;
    CHECK(lines == 2);
    CHECK_THROWS(SvgPlot(1, 1, 0, 1));
}
