#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "doctest.h"
#include "lzd/experiments.hpp"
#include "lzd/worker_pool.hpp"

using namespace lzd::cli;
using nlohmann::json;

TEST_CASE("sweep axes") {
    SweepAxis lin{"T", 1.0, 10.0, 10, SweepScale::linear};
    const auto v = lin.values();
    REQUIRE(v.size() == 10);
    CHECK(v.front() == 1.0);
    CHECK(v[4] == doctest::Approx(5.0));
    CHECK(v.back() == 10.0);

    SweepAxis lg{"ratio", 1e-2, 1e4, 7, SweepScale::log};
    const auto w = lg.values();
    CHECK(w[1] == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(w.back() == 1e4);

    CHECK_THROWS_AS((SweepAxis{"x", 0, 1, 3, SweepScale::linear}.validate()), config_error);
    CHECK_THROWS_AS((SweepAxis{"t", 0, 1, 1, SweepScale::linear}.validate()), config_error);
    CHECK_THROWS_AS((SweepAxis{"t", 1, 0, 3, SweepScale::linear}.validate()), config_error);
    CHECK_THROWS_AS((SweepAxis{"ratio", 0, 1, 3, SweepScale::log}.validate()), config_error);
    CHECK_THROWS_AS((SweepAxis{"theta", 0, 120, 3, SweepScale::linear}.validate()), config_error);
    CHECK_THROWS_AS((SweepAxis{"T", -1, 1, 3, SweepScale::linear}.validate()), config_error);
}

TEST_CASE("presets are valid and distinct") {
    for (const auto& name : preset_names()) CHECK_NOTHROW(preset(name).validate());
    CHECK_THROWS_AS(preset("fig9"), config_error);
    CHECK(preset("fig2").solver.frame == lzd::Frame::corotating);
    CHECK(preset("fig3").lz.v == 1e-4);
    CHECK(preset("fig4").sweep.points == 401);
    CHECK(preset("fig5").sweep.scale == SweepScale::log);
}

TEST_CASE("settings are applied and checked") {
    ExperimentConfig cfg = preset("custom");
    apply_settings(cfg, json{{"delta", 2.0},
                             {"theta-deg", 90},
                             {"eta", 22.5},
                             {"sweep", "T"},
                             {"sweep-min", 0.0},
                             {"sweep-max", 1.0},
                             {"sweep-points", 3},
                             {"format", "json"},
                             {"frame", "corotating"},
                             {"dephasing", "vanishing"},
                             {"lamb-shift", true}});
    CHECK(cfg.lz.delta == 2.0);
    CHECK(cfg.bath.angle == doctest::Approx(std::numbers::pi / 2));
    CHECK(cfg.eta == doctest::Approx(std::numbers::pi / 8));
    CHECK(cfg.sweep.variable == "T");
    CHECK(cfg.format == OutputFormat::json);
    CHECK(cfg.solver.frame == lzd::Frame::corotating);
    CHECK(cfg.bath.dephasing == lzd::DephasingModel::vanishing);
    CHECK(cfg.bath.lamb_shift_enabled);
    CHECK(cfg.bath_for(2.0).cutoff == doctest::Approx(2.0 / 3.0));
    CHECK_NOTHROW(cfg.validate());

    ExperimentConfig c2 = preset("custom");
    CHECK_THROWS_AS(apply_settings(c2, json{{"bogus", 1}}), config_error);
    CHECK_THROWS_AS(apply_settings(c2, json{{"delta", "big"}}), config_error);
    CHECK_THROWS_AS(apply_settings(c2, json{{"sweep-points", -3}}), config_error);
    CHECK_THROWS_AS(apply_settings(c2, json{{"method", "euler"}}), config_error);
    CHECK_THROWS_AS(apply_settings(c2, json::array()), config_error);

    ExperimentConfig f2 = preset("fig2");
    CHECK_THROWS_AS(apply_settings(f2, json{{"temperature", 1.0}}), config_error);
    ExperimentConfig f5 = preset("fig5");
    CHECK_THROWS_AS(apply_settings(f5, json{{"delta", 1.0}}), config_error);
    ExperimentConfig f4 = preset("fig4");
    apply_settings(f4, json{{"sweep", "T"}});
    CHECK_THROWS_AS(f4.validate(), config_error);
}

TEST_CASE("configuration invariants") {
    ExperimentConfig cfg = preset("custom");
    cfg.t_end = cfg.t_int;
    CHECK_THROWS_AS(cfg.validate(), config_error);
    cfg = preset("custom");
    cfg.lz.v = -1.0;
    CHECK_THROWS_AS(cfg.validate(), config_error);
    cfg = preset("custom");
    cfg.sweep.max = 100.0;
    CHECK_THROWS_AS(cfg.validate(), config_error);
    cfg = preset("custom");
    cfg.crossing_threshold = 0.6;
    CHECK_THROWS_AS(cfg.validate(), config_error);
    cfg = preset("fig3");
    cfg.bath.temperature = 1.0;
    CHECK_THROWS_AS(cfg.validate(), config_error);
}

TEST_CASE("number formatting") {
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(-2.0) == "-2");
    CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(format_number(std::nan("")) == "nan");
    CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("plateau detection") {
    const std::vector<double> t{0, 1, 2, 3, 4};
    CHECK(plateau_time(t, {1.0, 0.5, 0.4, 0.4, 0.4}, 1e-5) == 2.0);
    CHECK(plateau_time(t, {0.5, 0.5, 0.5, 0.5, 0.5}, 1e-5) == 0.0);
    CHECK(std::isinf(plateau_time(t, {1.0, 0.9, 0.8, 0.7, 0.6}, 1e-5)));
    CHECK_THROWS_AS(plateau_time(t, {1.0}, 1e-5), std::invalid_argument);
}

TEST_CASE("parallel map keeps index order and reports the first failure") {
    const auto sq = parallel_map(50, 4, [](std::size_t i) { return i * i; });
    for (std::size_t i = 0; i < sq.size(); ++i) CHECK(sq[i] == i * i);
    CHECK(resolve_jobs(3) == 3);
    CHECK(resolve_jobs(0) >= 1);
    try {
        parallel_map(20, 4, [](std::size_t i) -> int {
            if (i == 7 || i == 13) throw std::runtime_error("task " + std::to_string(i));
            return 0;
        });
        FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()) == "task 7");
    }
}

TEST_CASE("custom trajectory table and rendering") {
    ExperimentConfig cfg = preset("custom");
    apply_settings(cfg, json{{"t-int", -5.0}, {"t-end", 5.0}, {"sweep-min", -5.0}, {"sweep-max", 5.0},
                             {"sweep-points", 5}, {"delta", 2.0}, {"temperature", 0.5}, {"jobs", 1}});
    const Table table = run(cfg);
    REQUIRE(table.rows.size() == 5);
    CHECK(table.columns.front() == "t");
    CHECK(table.columns.size() == table.rows.front().size());
    CHECK(std::get<double>(table.rows.front()[0]) == -5.0);
    CHECK(table.secular.samples == 5);

    const std::string csv = render(cfg, table);
    CHECK(csv.rfind("# {", 0) == 0);
    const auto first_nl = csv.find('\n');
    const json meta = json::parse(csv.substr(2, first_nl - 2));
    CHECK(meta["tool"] == "lz-dissipate");
    CHECK(meta["preset"] == "custom");
    CHECK(meta["status"] == "ok");
    CHECK(meta["columns"].size() == table.columns.size());
    CHECK(csv.find("timestamp") == std::string::npos);
    CHECK(render(cfg, table) == csv);

    cfg.format = OutputFormat::json;
    const json doc = json::parse(render(cfg, table));
    CHECK(doc["rows"].size() == 5);
    CHECK(doc["metadata"]["solver"]["method"] == "dopri5");
}

TEST_CASE("oracle columns") {
    ExperimentConfig cfg = preset("custom");
    apply_settings(cfg, json{{"t-int", -3.0}, {"t-end", 3.0}, {"sweep-min", -3.0}, {"sweep-max", 3.0},
                             {"sweep-points", 4}, {"oracle", true}, {"rtol", 1e-10}, {"atol", 1e-12}});
    const Table table = run(cfg);
    CHECK(table.columns.back() == "max_deviation");
    CHECK(table.summary["oracle_ok"] == true);
    CHECK(table.summary["oracle_max_deviation"].get<double>() < 1e-6);
}

TEST_CASE("parameter sweeps") {
    ExperimentConfig cfg = preset("custom");
    apply_settings(cfg, json{{"t-int", -2.0}, {"t-end", 2.0}, {"sweep", "theta"}, {"sweep-min", 0.0},
                             {"sweep-max", 90.0}, {"sweep-points", 3}, {"delta", 1.0}});
    const Table table = run(cfg);
    CHECK(table.columns.front() == "theta");
    REQUIRE(table.rows.size() == 3);
    for (const auto& row : table.rows) {
        const double n = std::get<double>(row[1]);
        CHECK(n >= 0.0);
        CHECK(n <= 0.5);
    }
}

TEST_CASE("failure metadata carries the error") {
    const ExperimentConfig cfg = preset("custom");
    const json meta = failure_metadata(cfg, lzd::solver_error("step size underflow", 1.5));
    CHECK(meta["status"] == "solver_failure");
    CHECK(meta["error"]["time"] == 1.5);
}

TEST_CASE("experiment names") {
    CHECK(experiment_name(Experiment::tau_ent_vs_T) == "tau-ent-vs-T");
    CHECK(experiment_name(Experiment::custom_trajectory) == "custom-trajectory");
}
