#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "dnlslab/harness.hpp"

using namespace dnlslab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch_dir(const std::string& leaf) {
    fs::path d = fs::temp_directory_path() / "dnlslab_tests" / leaf;
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::vector<std::string> small_sim_overrides() {
    return {"grid.points=256", "grid.length=64", "time.T=1",
            "time.dt=0.01",    "time.monitor_cadence=0.1"};
}

}  // namespace

TEST_SUITE_BEGIN("harness");

TEST_CASE("load_config validation") {
    CHECK_THROWS_AS(load_config("warp-drive", {}, {}), ConfigError);

    // hypothesis gate: even power in M11 mode
    CHECK_THROWS_WITH_AS(load_config("simulate", {}, {"model.power=4"}),
                         doctest::Contains("odd"), ConfigError);
    CHECK_NOTHROW(load_config("simulate", {}, {"model.power=4", "mode=Sigma"}));

    CHECK_THROWS_AS(load_config("simulate", {}, {"model.damping=0"}), ConfigError);
    CHECK_THROWS_AS(load_config("simulate", {}, {"time.dt=0.03"}), ConfigError);
    CHECK_THROWS_AS(load_config("simulate", fs::path("/nonexistent/cfg.json"), {}),
                    ConfigError);

    // overrides land in the echoed document, typed
    ExperimentConfig cfg = load_config("simulate", {}, {"model.power=5", "mode=Sigma"});
    CHECK(cfg.raw.at("model").at("power").get<double>() == 5.0);
    CHECK(cfg.raw.at("mode").get<std::string>() == "Sigma");
}

TEST_CASE("config file merges under overrides") {
    fs::path dir = scratch_dir("cfgfile");
    fs::path cfg_file = dir / "cfg.json";
    {
        std::ofstream out(cfg_file);
        out << R"({"time": {"T": 2.0}, "model": {"damping": 0.5}})";
    }
    ExperimentConfig cfg = load_config("simulate", cfg_file, {"model.damping=2.0"});
    CHECK(cfg.raw.at("time").at("T").get<double>() == 2.0);
    CHECK(cfg.raw.at("model").at("damping").get<double>() == 2.0);  // override wins
}

TEST_CASE("simulate on zero data produces a zero series") {
    auto ov = small_sim_overrides();
    ov.push_back("initial_data.type=zero");
    ExperimentConfig cfg = load_config("simulate", {}, ov);
    RunArtifact art = run_experiment(cfg);

    CHECK(art.summary.at("schema_version").get<int>() == 1);
    CHECK(art.summary.at("experiment").get<std::string>() == "simulate");
    CHECK(art.summary.at("config") == cfg.raw);
    CHECK(criteria_exit_code(art) == 0);

    REQUIRE(!art.series_rows.empty());
    REQUIRE(art.series_columns.front() == "t");
    for (const auto& row : art.series_rows)
        for (std::size_t c = 1; c < row.size(); ++c) CHECK(row[c] == 0.0);
}

TEST_CASE("emit_report layout and byte-identical re-emission") {
    ExperimentConfig cfg = load_config("elemlem-check", {}, {});
    RunArtifact art = run_experiment(cfg);

    fs::path dir = scratch_dir("emit");
    emit_report(art, dir / "a");
    emit_report(art, dir / "b");
    CHECK(slurp(dir / "a" / "series.tsv") == slurp(dir / "b" / "series.tsv"));
    CHECK(slurp(dir / "a" / "summary.json") == slurp(dir / "b" / "summary.json"));

    std::string tsv = slurp(dir / "a" / "series.tsv");
    CHECK(tsv.front() == '#');
    CHECK(tsv.find('\t') != std::string::npos);

    // an artifact without rows still writes the header line
    RunArtifact empty = art;
    empty.series_rows.clear();
    emit_report(empty, dir / "c");
    std::string header_only = slurp(dir / "c" / "series.tsv");
    CHECK(header_only.front() == '#');
    CHECK(std::count(header_only.begin(), header_only.end(), '\n') == 1);
}

TEST_CASE("seeded runs are deterministic") {
    auto ov = small_sim_overrides();
    ov.push_back("initial_data.type=modulated_gaussian");
    ExperimentConfig cfg = load_config("simulate", {}, ov);
    RunArtifact a = run_experiment(cfg);
    RunArtifact b = run_experiment(cfg);
    CHECK(a.summary == b.summary);
    REQUIRE(a.series_rows.size() == b.series_rows.size());
    for (std::size_t r = 0; r < a.series_rows.size(); ++r)
        CHECK(a.series_rows[r] == b.series_rows[r]);
}

TEST_CASE("criteria_exit_code") {
    RunArtifact art;
    CHECK(criteria_exit_code(art) == 0);
    art.summary["criteria"]["alpha"] = {{"pass", true}, {"value", 1.0}};
    CHECK(criteria_exit_code(art) == 0);
    art.summary["criteria"]["beta"] = {{"pass", false}, {"value", 2.0}};
    CHECK(criteria_exit_code(art) == 1);
}

TEST_SUITE_END();
