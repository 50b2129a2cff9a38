#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "netspect/cli.hpp"
#include "netspect/errors.hpp"
#include "netspect/svgplot.hpp"

using namespace netspect;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

RunConfig demo_config(const fs::path& dir) {
    RunConfig cfg;
    cfg.output_dir = dir.string();
    cfg.prices_path = (dir / "prices.csv").string();
    cfg.sectors_path = (dir / "sectors.csv").string();
    cfg.events_path = (dir / "events.csv").string();
    cfg.controls_path = (dir / "controls.csv").string();
    cfg.synth_stocks = 24;
    cfg.synth_sectors = 4;
    cfg.synth_days = 140;
    cfg.synth_events = 4;
    cfg.synth_event_spacing = 20;
    cfg.min_window_stocks = 10;
    cfg.k = 7;
    cfg.k_min = 6;
    cfg.k_max = 8;
    cfg.min_beta_obs = 40;
    cfg.threads = 1;
    return cfg;
}

std::size_t count_occurrences(const std::string& hay, const std::string& needle) {
    std::size_t count = 0, pos = 0;
    while ((pos = hay.find(needle, pos)) != std::string::npos) {
        ++count;
        pos += needle.size();
    }
    return count;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config round-trips losslessly through serialization") {
    RunConfig cfg;
    cfg.theta_intra = 0.3141592653589793;
    cfg.clean_bound = 0.123456789012345678;
    cfg.k = 13;
    cfg.prices_path = "/data/my prices.csv";
    cfg.split_oversize = true;
    cfg.seed = 18446744073709551557ULL;

    const std::string text = serialize_config(cfg);
    const fs::path path = fs::temp_directory_path() / "roundtrip.conf";
    {
        std::ofstream out(path);
        out << text;
    }
    const RunConfig back = parse_config_file(path.string());
    CHECK(serialize_config(back) == text);
    CHECK(back.theta_intra == cfg.theta_intra);
    CHECK(back.clean_bound == cfg.clean_bound);
    CHECK(back.seed == cfg.seed);
    CHECK(back.prices_path == cfg.prices_path);
}

TEST_CASE("config: unknown keys, bad values, comments, overrides") {
    const fs::path path = fs::temp_directory_path() / "bad.conf";
    {
        std::ofstream out(path);
        out << "# comment line\n\nk = 9   # trailing comment\n";
    }
    const RunConfig ok = parse_config_file(path.string());
    CHECK(ok.k == 9);

    {
        std::ofstream out(path);
        out << "no_such_key = 1\n";
    }
    CHECK_THROWS_AS(parse_config_file(path.string()), Error);

    RunConfig cfg;
    apply_overrides(cfg, {"k=11", "measure=graph", "theta_inter=0.6"});
    CHECK(cfg.k == 11);
    CHECK(cfg.measure == "graph");
    CHECK(cfg.theta_inter == 0.6);
    CHECK_THROWS_AS(apply_overrides(cfg, {"k"}), Error);
    CHECK_THROWS_AS(apply_overrides(cfg, {"k=banana"}), Error);
}

TEST_CASE("config hash is stable and sensitive to every field change") {
    RunConfig a, b;
    CHECK(config_hash(a) == config_hash(b));
    b.theta_intra = 0.31;
    CHECK(config_hash(a) != config_hash(b));
    RunConfig c;
    c.seed = 999;
    CHECK(config_hash(a) != config_hash(c));
}

TEST_CASE("config validation rejects out-of-range settings") {
    RunConfig cfg;
    cfg.k = 4;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = RunConfig{};
    cfg.theta_intra = 0.8;
    cfg.theta_inter = 0.5;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = RunConfig{};
    cfg.measure = "banana";
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = RunConfig{};
    cfg.start_date = "not-a-date";
    CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("svg: one significant point gets exactly one filled marker") {
    PlotSeries s{"event", {{5, -0.1, false}, {6, -0.4, true}, {7, -0.2, false}}};
    const std::string svg = svg_marker_chart("t", "k", "coef", {s}, "cafebabe");
    CHECK(count_occurrences(svg, "fill=\"black\"") == 1);
    CHECK(count_occurrences(svg, "fill=\"white\"") == 2 + 1);  // hollow markers + background
    CHECK(svg.find("config_hash: cafebabe") != std::string::npos);

    const std::string again = svg_marker_chart("t", "k", "coef", {s}, "cafebabe");
    CHECK(svg == again);  // deterministic bytes
}

TEST_CASE("svg: empty input raises MissingResults; two series give two polylines") {
    CHECK_THROWS_AS(svg_line_chart("t", "x", "y", {}, "h"), MissingResults);
    CHECK_THROWS_AS(svg_line_chart("t", "x", "y", {PlotSeries{"a", {}}}, "h"), MissingResults);

    PlotSeries a{"baseline", {{5, 0.01, false}, {6, 0.02, false}}};
    PlotSeries b{"tone", {{5, 0.02, false}, {6, 0.03, false}}};
    const std::string svg = svg_line_chart("r2", "k", "r2", {a, b}, "h");
    CHECK(count_occurrences(svg, "<polyline") == 2);
}

TEST_CASE("synth-demo bundle validates and runs end to end") {
    const fs::path dir = fresh_dir("netspect_demo_test");
    RunConfig cfg = demo_config(dir);
    std::ostringstream out;
    REQUIRE(cmd_synth_demo(cfg, out) == kExitOk);
    CHECK(fs::exists(dir / "prices.csv"));
    CHECK(fs::exists(dir / "sectors.csv"));
    CHECK(fs::exists(dir / "events.csv"));
    CHECK(fs::exists(dir / "controls.csv"));

    std::ostringstream vout;
    CHECK(cmd_validate(cfg, vout) == kExitOk);
    CHECK(vout.str().find("OK") != std::string::npos);

    std::ostringstream rout;
    REQUIRE(cmd_run(cfg, DesignMode::baseline, rout) == kExitOk);
    const fs::path results = dir / "results_baseline_k7.json";
    REQUIRE(fs::exists(results));

    // Table-1 statistic fields all present
    nlohmann::json j = nlohmann::json::parse(slurp(results));
    CHECK(j.contains("config_hash"));
    CHECK(j.contains("config"));
    const auto& res = j["result"];
    for (const char* field : {"f_stat", "f_pvalue", "r2", "adj_r2", "aic", "bic", "n"})
        CHECK(res.contains(field));
    REQUIRE(res["coefficients"].is_array());
    bool has_event = false;
    for (const auto& c : res["coefficients"]) {
        CHECK(c.contains("coef"));
        CHECK(c.contains("se"));
        CHECK(c.contains("p"));
        has_event |= c["name"] == "event";
    }
    CHECK(has_event);
    CHECK(fs::exists(dir / "exclusion_log.csv"));
    CHECK(fs::exists(dir / "deltas_k7.csv"));
}

TEST_CASE("tone mode emits three event coefficients; measure=graph echoes config") {
    const fs::path dir = fresh_dir("netspect_tone_test");
    RunConfig cfg = demo_config(dir);
    std::ostringstream out;
    REQUIRE(cmd_synth_demo(cfg, out) == kExitOk);
    REQUIRE(cmd_run(cfg, DesignMode::tone, out) == kExitOk);
    nlohmann::json j = nlohmann::json::parse(slurp(dir / "results_tone_k7.json"));
    std::set<std::string> names;
    for (const auto& c : j["result"]["coefficients"]) names.insert(c["name"].get<std::string>());
    CHECK(names.count("hawkish") == 1);
    CHECK(names.count("dovish") == 1);
    CHECK(names.count("neutral") == 1);

    cfg.measure = "graph";
    REQUIRE(cmd_run(cfg, DesignMode::baseline, out) == kExitOk);
    nlohmann::json jg = nlohmann::json::parse(slurp(dir / "results_baseline_k7.json"));
    CHECK(jg["measure"] == "graph");
    CHECK(jg["config"]["measure"] == "graph");
}

TEST_CASE("weekend event is mapped forward with a warning") {
    const fs::path dir = fresh_dir("netspect_weekend_test");
    RunConfig cfg = demo_config(dir);
    std::ostringstream out;
    REQUIRE(cmd_synth_demo(cfg, out) == kExitOk);
    // append a Saturday event; the demo calendar starts Monday 2015-01-05
    {
        std::ofstream ev(dir / "events.csv", std::ios::app);
        ev << "2015-01-10,neutral\n";  // Saturday
    }
    std::ostringstream vout;
    CHECK(cmd_validate(cfg, vout) == kExitOk);
    CHECK(vout.str().find("mapped forward") != std::string::npos);
    CHECK(vout.str().find("2015-01-10 -> 2015-01-12") != std::string::npos);
}

TEST_CASE("missing inputs and misconfigured runs map to the documented exit codes") {
    const fs::path dir = fresh_dir("netspect_exit_test");
    RunConfig cfg = demo_config(dir);
    std::ostringstream out;
    REQUIRE(cmd_synth_demo(cfg, out) == kExitOk);
    fs::remove(dir / "sectors.csv");

    std::ostringstream err;
    try {
        cmd_validate(cfg, err);
        FAIL("expected a throw");
    } catch (const std::exception& e) {
        CHECK(exit_code_for(e, err) == kExitInput);
    }

    // alignment failure: controls that never overlap the price calendar
    RunConfig cfg2 = demo_config(dir);
    std::ostringstream out2;
    REQUIRE(cmd_synth_demo(cfg2, out2) == kExitOk);
    {
        std::ofstream ctl(dir / "controls.csv");
        ctl << "date,vix,spx_ret,y2,y10,twi\n1999-01-04,20,0,1,2,100\n";
    }
    try {
        cmd_validate(cfg2, err);
        FAIL("expected a throw");
    } catch (const std::exception& e) {
        CHECK(exit_code_for(e, err) == kExitAlignment);
    }
}

TEST_CASE("sweep writes the table plus per-k results, and plot renders it") {
    const fs::path dir = fresh_dir("netspect_sweep_test");
    RunConfig cfg = demo_config(dir);
    cfg.k_min = 6;
    cfg.k_max = 7;
    std::ostringstream out;
    REQUIRE(cmd_synth_demo(cfg, out) == kExitOk);
    REQUIRE(cmd_sweep(cfg, out) == kExitOk);
    CHECK(fs::exists(dir / "sweep_table.csv"));
    CHECK(fs::exists(dir / "sweep_table.txt"));
    CHECK(fs::exists(dir / "sweep.json"));
    CHECK(fs::exists(dir / "results_baseline_k6.json"));
    CHECK(fs::exists(dir / "results_tone_k7.json"));

    const std::string csv = slurp(dir / "sweep_table.csv");
    CHECK(csv.find("k,mode,variable,coef,p,signif_5pct,r2,adj_r2,n,error") != std::string::npos);
    CHECK(csv.find("# config_hash=") != std::string::npos);

    const std::string txt = slurp(dir / "sweep_table.txt");
    CHECK(txt.find("(") != std::string::npos);  // p-values in parentheses

    REQUIRE(cmd_plot(cfg, out) == kExitOk);
    CHECK(fs::exists(dir / "fig_coeff_baseline.svg"));
    CHECK(fs::exists(dir / "fig_coeff_tone.svg"));
    CHECK(fs::exists(dir / "fig_r2.svg"));
    const std::string r2svg = slurp(dir / "fig_r2.svg");
    CHECK(count_occurrences(r2svg, "<polyline") == 2);  // baseline vs tone

    // plot without results is a MissingResults failure
    RunConfig empty = cfg;
    empty.output_dir = fresh_dir("netspect_empty_plot").string();
    CHECK_THROWS_AS(cmd_plot(empty, out), MissingResults);
}

TEST_CASE("identical runs produce byte-identical outputs regardless of threads") {
    const fs::path dir = fresh_dir("netspect_det_test");
    RunConfig cfg = demo_config(dir);
    std::ostringstream out;
    REQUIRE(cmd_synth_demo(cfg, out) == kExitOk);

    RunConfig run1 = cfg;
    run1.output_dir = (dir / "out1").string();
    run1.threads = 1;
    RunConfig run2 = cfg;
    run2.output_dir = (dir / "out2").string();
    run2.threads = 2;
    REQUIRE(cmd_run(run1, DesignMode::baseline, out) == kExitOk);
    REQUIRE(cmd_run(run2, DesignMode::baseline, out) == kExitOk);

    // threads and output_dir stay out of the echo/hash, so the files must
    // be byte-identical
    CHECK(slurp(dir / "out1" / "results_baseline_k7.json") ==
          slurp(dir / "out2" / "results_baseline_k7.json"));
    CHECK(slurp(dir / "out1" / "results_baseline_k7.csv") ==
          slurp(dir / "out2" / "results_baseline_k7.csv"));
    CHECK(slurp(dir / "out1" / "deltas_k7.csv") == slurp(dir / "out2" / "deltas_k7.csv"));
    CHECK(slurp(dir / "out1" / "exclusion_log.csv") == slurp(dir / "out2" / "exclusion_log.csv"));
}

}  // TEST_SUITE
