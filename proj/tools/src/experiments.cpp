#include "lzd/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "lzd/entanglement.hpp"
#include "lzd/generator.hpp"
#include "lzd/pauli_state.hpp"
#include "lzd/worker_pool.hpp"

namespace lzd::cli {

using nlohmann::json;

namespace {

constexpr double deg = std::numbers::pi / 180.0;
constexpr double plateau_tolerance = 1e-5;
constexpr std::array<double, 2> fig4_deltas{0.1, 100.0};
constexpr std::size_t sweep_samples = 17;

const std::set<std::string>& known_variables() {
    static const std::set<std::string> v{"T", "theta", "t", "delta", "v", "ratio"};
    return v;
}

std::set<std::string> allowed_variables(Experiment e) {
    switch (e) {
        case Experiment::tau_ent_vs_T: return {"T"};
        case Experiment::neg_vs_theta: return {"theta"};
        case Experiment::neg_vs_time: return {"t"};
        case Experiment::neg_vs_ratio: return {"ratio", "delta"};
        case Experiment::custom_trajectory: return known_variables();
    }
    return {};
}

// Settings owned by a preset's sweep or curve family.
std::set<std::string> owned_settings(Experiment e) {
    switch (e) {
        case Experiment::tau_ent_vs_T: return {"temperature", "theta-deg", "eta"};
        case Experiment::neg_vs_theta: return {"theta-deg", "temperature"};
        case Experiment::neg_vs_time: return {"delta"};
        case Experiment::neg_vs_ratio: return {"delta", "theta-deg"};
        case Experiment::custom_trajectory: return {};
    }
    return {};
}

double number(const std::string& key, const json& v) {
    if (!v.is_number()) throw config_error("setting '" + key + "' must be a number");
    return v.get<double>();
}

bool boolean(const std::string& key, const json& v) {
    if (!v.is_boolean()) throw config_error("setting '" + key + "' must be true or false");
    return v.get<bool>();
}

std::string text(const std::string& key, const json& v) {
    if (!v.is_string()) throw config_error("setting '" + key + "' must be a string");
    return v.get<std::string>();
}

std::size_t count(const std::string& key, const json& v) {
    if (!v.is_number_integer() || v.get<long long>() < 0)
        throw config_error("setting '" + key + "' must be a non-negative integer");
    return static_cast<std::size_t>(v.get<long long>());
}

std::string warning_for(bool secular_ok) { return secular_ok ? "" : "secular"; }

PauliState initial_state(const ExperimentConfig& cfg) { return schmidt_initial(cfg.eta); }

std::string dephasing_name(DephasingModel m) {
    return m == DephasingModel::vanishing ? "vanishing" : "ohmic-limit";
}

std::string method_name(SolverMethod m) { return m == SolverMethod::rk4_fixed ? "rk4" : "dopri5"; }

std::string scale_name(SweepScale s) { return s == SweepScale::log ? "log" : "linear"; }

double relative_difference(double a, double ref) {
    if (std::isinf(a) && std::isinf(ref)) return 0.0;
    return std::abs(a - ref) / std::abs(ref);
}

std::string label(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

}  // namespace

void SweepAxis::validate() const {
    if (!known_variables().contains(variable))
        throw config_error("sweep variable '" + variable + "' must be one of T, theta, t, delta, v, ratio");
    if (points < 2) throw config_error("sweep needs at least two points");
    if (!std::isfinite(min) || !std::isfinite(max) || !(max > min))
        throw config_error("sweep range must satisfy min < max");
    if (scale == SweepScale::log && !(min > 0.0)) throw config_error("log sweep needs a positive range");
    if (variable == "T" && min < 0.0) throw config_error("temperature sweep must be non-negative");
    if (variable == "theta" && (min < 0.0 || max > 90.0)) throw config_error("theta sweep must lie in [0, 90] degrees");
    if ((variable == "delta" || variable == "v" || variable == "ratio") && !(min > 0.0))
        throw config_error("sweep of " + variable + " must be positive");
}

std::vector<double> SweepAxis::values() const {
    std::vector<double> out(points);
    const double n = static_cast<double>(points - 1);
    if (scale == SweepScale::linear) {
        for (std::size_t i = 0; i < points; ++i) out[i] = min + (max - min) * (static_cast<double>(i) / n);
    } else {
        const double lo = std::log(min);
        const double hi = std::log(max);
        for (std::size_t i = 0; i < points; ++i) out[i] = std::exp(lo + (hi - lo) * (static_cast<double>(i) / n));
    }
    out.front() = min;
    out.back() = max;
    return out;
}

BathParams ExperimentConfig::bath_for(double delta) const {
    BathParams b = bath;
    b.cutoff = omega_c.value_or(delta / 3.0);
    return b;
}

void ExperimentConfig::validate() const {
    try {
        lz.validate();
        bath_for(lz.delta).validate();
    } catch (const std::invalid_argument& e) {
        throw config_error(e.what());
    }
    if (omega_c && !(*omega_c > 0.0)) throw config_error("omega-c must be positive");
    if (!(t_end > t_int)) throw config_error("t-end must exceed t-int");
    if (!(eta >= 0.0 && eta <= 0.5 * std::numbers::pi)) throw config_error("eta must lie in [0, 90] degrees");
    if (!(solver.tolerances.rtol > 0.0) || !(solver.tolerances.atol > 0.0))
        throw config_error("rtol and atol must be positive");
    if (!(solver.secular_threshold > 0.0)) throw config_error("secular-threshold must be positive");
    if (!(crossing_threshold >= 0.0 && crossing_threshold < 0.5)) throw config_error("threshold must lie in [0, 0.5)");
    if (!(crossing_horizon > 1.0)) throw config_error("horizon must exceed 1");
    sweep.validate();
    if (!allowed_variables(experiment).contains(sweep.variable))
        throw config_error("preset " + preset + " cannot sweep '" + sweep.variable + "'");
    if (sweep.variable == "t" && (sweep.min < t_int || sweep.max > t_end))
        throw config_error("time sweep must lie inside [t-int, t-end]");

    switch (experiment) {
        case Experiment::tau_ent_vs_T:
            if (bath.angle != 0.0) throw config_error("fig2 requires longitudinal coupling (theta = 0)");
            break;
        case Experiment::neg_vs_theta:
            if (bath.temperature != 0.0) throw config_error("fig3 requires T = 0");
            break;
        default: break;
    }
}

std::vector<std::string> preset_names() { return {"fig2", "fig3", "fig4", "fig5", "custom"}; }

ExperimentConfig preset(std::string_view name) {
    ExperimentConfig cfg;
    cfg.preset = std::string(name);
    if (name == "fig2") {
        cfg.experiment = Experiment::tau_ent_vs_T;
        cfg.lz = {10.0, 1e-6};
        cfg.t_int = -100.0;
        cfg.t_end = 100.0;
        cfg.sweep = {"T", 1.0, 10.0, 10, SweepScale::linear};
        cfg.solver.frame = Frame::corotating;
    } else if (name == "fig3") {
        cfg.experiment = Experiment::neg_vs_theta;
        cfg.lz = {10.0, 1e-4};
        cfg.t_int = -100.0;
        cfg.t_end = 100.0;
        cfg.sweep = {"theta", 0.0, 90.0, 19, SweepScale::linear};
    } else if (name == "fig4") {
        cfg.experiment = Experiment::neg_vs_time;
        cfg.lz = {10.0, 1.0};
        cfg.t_int = -40.0;
        cfg.t_end = 40.0;
        cfg.sweep = {"t", -40.0, 40.0, 401, SweepScale::linear};
    } else if (name == "fig5") {
        cfg.experiment = Experiment::neg_vs_ratio;
        cfg.lz = {10.0, 1.0};
        cfg.t_int = -40.0;
        cfg.t_end = 40.0;
        cfg.sweep = {"ratio", 1e-2, 1e4, 25, SweepScale::log};
    } else if (name == "custom") {
        cfg.experiment = Experiment::custom_trajectory;
    } else {
        throw config_error("unknown preset '" + std::string(name) + "' (expected fig2, fig3, fig4, fig5 or custom)");
    }
    return cfg;
}

void apply_settings(ExperimentConfig& cfg, const json& settings) {
    if (!settings.is_object()) throw config_error("configuration must be a JSON object");
    const auto owned = owned_settings(cfg.experiment);
    for (const auto& [key, v] : settings.items()) {
        if (owned.contains(key)) throw config_error("setting '" + key + "' is fixed by preset " + cfg.preset);
        if (key == "delta") cfg.lz.delta = number(key, v);
        else if (key == "v") cfg.lz.v = number(key, v);
        else if (key == "theta-deg") cfg.bath.angle = number(key, v) * deg;
        else if (key == "temperature") cfg.bath.temperature = number(key, v);
        else if (key == "lambda") cfg.bath.coupling = number(key, v);
        else if (key == "omega-c") cfg.omega_c = number(key, v);
        else if (key == "eta") cfg.eta = number(key, v) * deg;
        else if (key == "t-int") cfg.t_int = number(key, v);
        else if (key == "t-end") cfg.t_end = number(key, v);
        else if (key == "sweep") cfg.sweep.variable = text(key, v);
        else if (key == "sweep-min") cfg.sweep.min = number(key, v);
        else if (key == "sweep-max") cfg.sweep.max = number(key, v);
        else if (key == "sweep-points") cfg.sweep.points = count(key, v);
        else if (key == "sweep-scale") {
            const std::string s = text(key, v);
            if (s == "linear") cfg.sweep.scale = SweepScale::linear;
            else if (s == "log") cfg.sweep.scale = SweepScale::log;
            else throw config_error("sweep-scale must be linear or log");
        } else if (key == "out") cfg.output_path = text(key, v);
        else if (key == "format") {
            const std::string s = text(key, v);
            if (s == "csv") cfg.format = OutputFormat::csv;
            else if (s == "json") cfg.format = OutputFormat::json;
            else throw config_error("format must be csv or json");
        } else if (key == "rtol") cfg.solver.tolerances.rtol = number(key, v);
        else if (key == "atol") cfg.solver.tolerances.atol = number(key, v);
        else if (key == "jobs") cfg.jobs = static_cast<unsigned>(count(key, v));
        else if (key == "oracle") cfg.oracle = boolean(key, v);
        else if (key == "strict-secular") cfg.strict_secular = boolean(key, v);
        else if (key == "lamb-shift") cfg.bath.lamb_shift_enabled = boolean(key, v);
        else if (key == "pv-window") cfg.bath.pv_upper_limit = number(key, v);
        else if (key == "dephasing") {
            const std::string s = text(key, v);
            if (s == "ohmic-limit") cfg.bath.dephasing = DephasingModel::ohmic_limit;
            else if (s == "vanishing") cfg.bath.dephasing = DephasingModel::vanishing;
            else throw config_error("dephasing must be ohmic-limit or vanishing");
        } else if (key == "method") {
            const std::string s = text(key, v);
            if (s == "dopri5") cfg.solver.method = SolverMethod::dopri5;
            else if (s == "rk4") cfg.solver.method = SolverMethod::rk4_fixed;
            else throw config_error("method must be dopri5 or rk4");
        } else if (key == "frame") {
            const std::string s = text(key, v);
            if (s == "lab") cfg.solver.frame = Frame::lab;
            else if (s == "corotating") cfg.solver.frame = Frame::corotating;
            else throw config_error("frame must be lab or corotating");
        } else if (key == "secular-threshold") cfg.solver.secular_threshold = number(key, v);
        else if (key == "threshold") cfg.crossing_threshold = number(key, v);
        else if (key == "horizon") cfg.crossing_horizon = number(key, v);
        else throw config_error("unknown setting '" + key + "'");
    }
}

void SecularTally::add(const TimescaleReport& r) {
    ++samples;
    if (!r.secular_ok) ++violations;
    min_margin = std::min(min_margin, r.margin);
}

void SecularTally::merge(const SecularTally& o) {
    samples += o.samples;
    violations += o.violations;
    min_margin = std::min(min_margin, o.min_margin);
}

namespace {

SecularTally tally(const Trajectory& traj) {
    SecularTally t;
    for (const auto& r : traj.timescales) t.add(r);
    return t;
}

struct PointResult {
    std::vector<Cell> row;
    SecularTally secular;
};

Table assemble(std::vector<std::string> columns, std::vector<PointResult> points) {
    Table table;
    table.columns = std::move(columns);
    for (auto& p : points) {
        table.secular.merge(p.secular);
        table.rows.push_back(std::move(p.row));
    }
    return table;
}

}  // namespace

Table run_tau_ent_vs_T(const ExperimentConfig& cfg) {
    const auto temps = cfg.sweep.values();
    const PauliState init = initial_state(cfg);
    auto points = parallel_map(temps.size(), cfg.jobs, [&](std::size_t i) {
        BathParams b = cfg.bath_for(cfg.lz.delta);
        b.temperature = temps[i];
        const double formula = survival_time(b, cfg.lz);
        double ode = std::numeric_limits<double>::infinity();
        double sign_change = ode;
        SecularTally sec;
        sec.add(timescales(cfg.t_int, cfg.lz, b, cfg.solver.secular_threshold));
        if (std::isfinite(formula)) {
            const double t_max = cfg.t_int + cfg.crossing_horizon * formula;
            if (auto hit = first_negativity_crossing(init, cfg.t_int, t_max, cfg.lz, b, cfg.crossing_threshold,
                                                     cfg.solver))
                ode = *hit - cfg.t_int;
            if (auto hit = first_negativity_crossing(init, cfg.t_int, t_max, cfg.lz, b, 0.0, cfg.solver))
                sign_change = *hit - cfg.t_int;
            sec.add(timescales(t_max, cfg.lz, b, cfg.solver.secular_threshold));
        }
        return PointResult{{temps[i], formula, ode, sign_change, relative_difference(ode, formula),
                            relative_difference(sign_change, formula), sec.all_ok() ? 1.0 : 0.0,
                            warning_for(sec.all_ok())},
                           sec};
    });
    Table table = assemble({"T", "tau_ent_formula", "tau_ent_ode", "tau_ent_ode_sign_change", "relative_difference",
                            "relative_difference_sign_change", "secular_ok", "warning"},
                           std::move(points));

    bool decreasing = true;
    double worst = 0.0;
    double worst_sign = 0.0;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const double f = std::get<double>(table.rows[i][1]);
        if (i > 0 && !(f < std::get<double>(table.rows[i - 1][1]))) decreasing = false;
        if (std::isfinite(f)) {
            worst = std::max(worst, std::get<double>(table.rows[i][4]));
            worst_sign = std::max(worst_sign, std::get<double>(table.rows[i][5]));
        }
    }
    table.summary = {{"crossing_threshold", cfg.crossing_threshold},
                     {"search_horizon", cfg.crossing_horizon},
                     {"formula_strictly_decreasing", decreasing},
                     {"max_relative_difference", worst},
                     {"max_relative_difference_sign_change", worst_sign}};
    return table;
}

Table run_neg_vs_theta(const ExperimentConfig& cfg) {
    const auto thetas = cfg.sweep.values();
    const PauliState init = initial_state(cfg);
    const auto grid = uniform_grid(cfg.t_int, cfg.t_end, sweep_samples);
    auto points = parallel_map(thetas.size(), cfg.jobs, [&](std::size_t i) {
        BathParams b = cfg.bath_for(cfg.lz.delta);
        b.angle = thetas[i] * deg;
        const Trajectory traj = evolve_numeric(init, cfg.t_int, cfg.t_end, cfg.lz, b, grid, cfg.solver);
        const SlowDecayLaw law = negativity_slow_T0(cfg.t_end, cfg.t_int, cfg.lz, b, cfg.eta);
        const SecularTally sec = tally(traj);
        return PointResult{{thetas[i], traj.negativity.back(), law.value, law.printed_value,
                            sec.all_ok() ? 1.0 : 0.0, warning_for(sec.all_ok())},
                           sec};
    });
    const bool slow = evolve_slow_analytic(init, cfg.t_int, cfg.t_end, cfg.lz, cfg.bath_for(cfg.lz.delta)).slow_regime_valid;
    Table table = assemble({"theta_deg", "negativity", "negativity_closed_form", "negativity_printed_law",
                            "secular_ok", "warning"},
                           std::move(points));
    const SlowDecayLaw law0 = negativity_slow_T0(cfg.t_end, cfg.t_int, cfg.lz, cfg.bath_for(cfg.lz.delta), cfg.eta);
    table.summary = {{"slow_regime_valid", slow},
                     {"decay_rate_theta0", law0.rate},
                     {"printed_decay_rate_theta0", law0.printed_rate},
                     {"decay_rates_differ", law0.rates_differ}};
    return table;
}

Table run_neg_vs_time(const ExperimentConfig& cfg) {
    const auto grid = cfg.sweep.values();
    const PauliState init = initial_state(cfg);
    auto trajs = parallel_map(fig4_deltas.size(), cfg.jobs, [&](std::size_t i) {
        LZParams p = cfg.lz;
        p.delta = fig4_deltas[i];
        return evolve_numeric(init, cfg.t_int, cfg.t_end, p, cfg.bath_for(p.delta), grid, cfg.solver);
    });

    Table table;
    table.columns = {"t"};
    for (double d : fig4_deltas) table.columns.push_back("negativity_delta_" + label(d));
    table.columns.insert(table.columns.end(), {"secular_ok", "warning"});
    for (std::size_t k = 0; k < grid.size(); ++k) {
        std::vector<Cell> row{grid[k]};
        bool ok = true;
        for (const auto& tr : trajs) {
            row.emplace_back(tr.negativity[k]);
            table.secular.add(tr.timescales[k]);
            ok = ok && tr.timescales[k].secular_ok;
        }
        row.emplace_back(ok ? 1.0 : 0.0);
        row.emplace_back(warning_for(ok));
        table.rows.push_back(std::move(row));
    }
    json curves = json::object();
    for (std::size_t i = 0; i < trajs.size(); ++i) {
        const double plateau = plateau_time(trajs[i].times, trajs[i].negativity, plateau_tolerance);
        curves["delta_" + label(fig4_deltas[i])] = {{"final_negativity", trajs[i].negativity.back()},
                                                    {"plateau_time", std::isfinite(plateau) ? json(plateau) : json("inf")}};
    }
    table.summary = {{"plateau_slope_tolerance", plateau_tolerance}, {"curves", curves}};
    return table;
}

Table run_neg_vs_ratio(const ExperimentConfig& cfg) {
    const auto axis = cfg.sweep.values();
    const PauliState init = initial_state(cfg);
    const auto grid = uniform_grid(cfg.t_int, cfg.t_end, sweep_samples);
    const bool by_ratio = cfg.sweep.variable == "ratio";
    auto points = parallel_map(axis.size(), cfg.jobs, [&](std::size_t i) {
        LZParams p = cfg.lz;
        p.delta = by_ratio ? std::sqrt(axis[i] * p.v) : axis[i];
        const double ratio = by_ratio ? axis[i] : p.delta * p.delta / p.v;
        SecularTally sec;
        std::vector<Cell> row{ratio, p.delta};
        for (double theta : {0.0, 90.0}) {
            BathParams b = cfg.bath_for(p.delta);
            b.angle = theta * deg;
            const Trajectory traj = evolve_numeric(init, cfg.t_int, cfg.t_end, p, b, grid, cfg.solver);
            row.emplace_back(traj.negativity.back());
            sec.merge(tally(traj));
        }
        row.emplace_back(sec.all_ok() ? 1.0 : 0.0);
        row.emplace_back(warning_for(sec.all_ok()));
        return PointResult{std::move(row), sec};
    });
    return assemble({"ratio", "delta", "negativity_theta_0", "negativity_theta_90", "secular_ok", "warning"},
                    std::move(points));
}

namespace {

std::vector<std::string> state_columns() {
    std::vector<std::string> c{"s1", "s2", "s3", "r1", "r2", "r3"};
    for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j) c.push_back("chi" + std::to_string(i) + std::to_string(j));
    return c;
}

void push_state(std::vector<Cell>& row, const PauliState& st) {
    for (double x : st.s) row.emplace_back(x);
    for (double x : st.r) row.emplace_back(x);
    for (const auto& line : st.chi)
        for (double x : line) row.emplace_back(x);
}

double trajectory_deviation(const Trajectory& a, const Trajectory& b, std::size_t k) {
    return max_abs_difference(a.states[k], b.states[k]);
}

Table custom_time_series(const ExperimentConfig& cfg) {
    const auto grid = cfg.sweep.values();
    const PauliState init = initial_state(cfg);
    const BathParams b = cfg.bath_for(cfg.lz.delta);
    auto trajs = parallel_map(cfg.oracle ? 2 : 1, cfg.jobs, [&](std::size_t i) {
        return i == 0 ? evolve_numeric(init, cfg.t_int, cfg.t_end, cfg.lz, b, grid, cfg.solver)
                      : evolve_full_master(init, cfg.t_int, cfg.t_end, cfg.lz, b, grid, cfg.solver);
    });
    const Trajectory& tr = trajs[0];

    Table table;
    table.columns = {"t"};
    for (auto& c : state_columns()) table.columns.push_back(c);
    table.columns.insert(table.columns.end(), {"negativity", "min_eigenvalue", "tau_s", "tau_r", "tau_a",
                                               "secular_margin", "secular_ok", "warning"});
    if (cfg.oracle) table.columns.insert(table.columns.end(), {"negativity_master", "max_deviation"});

    double worst = 0.0;
    for (std::size_t k = 0; k < tr.size(); ++k) {
        std::vector<Cell> row{tr.times[k]};
        push_state(row, tr.states[k]);
        const TimescaleReport& ts = tr.timescales[k];
        table.secular.add(ts);
        row.insert(row.end(), {tr.negativity[k], tr.min_eigenvalue[k], ts.tau_s, ts.tau_r, ts.tau_a, ts.margin,
                               ts.secular_ok ? 1.0 : 0.0});
        row.emplace_back(warning_for(ts.secular_ok));
        if (cfg.oracle) {
            const double dev = trajectory_deviation(tr, trajs[1], k);
            worst = std::max(worst, dev);
            row.emplace_back(trajs[1].negativity[k]);
            row.emplace_back(dev);
        }
        table.rows.push_back(std::move(row));
    }
    table.summary = {{"solver_accepted_steps", tr.solver_stats.accepted},
                     {"solver_rejected_steps", tr.solver_stats.rejected}};
    if (cfg.oracle) {
        table.summary["oracle_max_deviation"] = worst;
        table.summary["oracle_ok"] = worst <= 1e-6;
    }
    return table;
}

Table custom_sweep(const ExperimentConfig& cfg) {
    const auto axis = cfg.sweep.values();
    const PauliState init = initial_state(cfg);
    const auto grid = uniform_grid(cfg.t_int, cfg.t_end, sweep_samples);
    const std::string& var = cfg.sweep.variable;
    auto points = parallel_map(axis.size(), cfg.jobs, [&](std::size_t i) {
        LZParams p = cfg.lz;
        if (var == "delta") p.delta = axis[i];
        else if (var == "v") p.v = axis[i];
        else if (var == "ratio") p.delta = std::sqrt(axis[i] * p.v);
        BathParams b = cfg.bath_for(p.delta);
        if (var == "T") b.temperature = axis[i];
        else if (var == "theta") b.angle = axis[i] * deg;

        const Trajectory tr = evolve_numeric(init, cfg.t_int, cfg.t_end, p, b, grid, cfg.solver);
        const SecularTally sec = tally(tr);
        std::vector<Cell> row{axis[i], tr.negativity.back(), tr.min_eigenvalue.back(), sec.all_ok() ? 1.0 : 0.0,
                              warning_for(sec.all_ok())};
        if (cfg.oracle) {
            const Trajectory master = evolve_full_master(init, cfg.t_int, cfg.t_end, p, b, grid, cfg.solver);
            double dev = 0.0;
            for (std::size_t k = 0; k < tr.size(); ++k) dev = std::max(dev, trajectory_deviation(tr, master, k));
            row.emplace_back(master.negativity.back());
            row.emplace_back(dev);
        }
        return PointResult{std::move(row), sec};
    });
    std::vector<std::string> columns{var, "negativity", "min_eigenvalue", "secular_ok", "warning"};
    if (cfg.oracle) columns.insert(columns.end(), {"negativity_master", "max_deviation"});
    Table table = assemble(std::move(columns), std::move(points));
    if (cfg.oracle) {
        double worst = 0.0;
        for (const auto& row : table.rows) worst = std::max(worst, std::get<double>(row.back()));
        table.summary = {{"oracle_max_deviation", worst}, {"oracle_ok", worst <= 1e-6}};
    }
    return table;
}

}  // namespace

Table run_custom_trajectory(const ExperimentConfig& cfg) {
    return cfg.sweep.variable == "t" ? custom_time_series(cfg) : custom_sweep(cfg);
}

Table run(const ExperimentConfig& cfg) {
    cfg.validate();
    switch (cfg.experiment) {
        case Experiment::tau_ent_vs_T: return run_tau_ent_vs_T(cfg);
        case Experiment::neg_vs_theta: return run_neg_vs_theta(cfg);
        case Experiment::neg_vs_time: return run_neg_vs_time(cfg);
        case Experiment::neg_vs_ratio: return run_neg_vs_ratio(cfg);
        case Experiment::custom_trajectory: return run_custom_trajectory(cfg);
    }
    throw config_error("unknown experiment");
}

double plateau_time(const std::vector<double>& t, const std::vector<double>& n, double tol) {
    if (t.size() != n.size() || t.size() < 2) throw std::invalid_argument("plateau_time: need matching samples");
    // Walk back from the end while the slope stays small.
    std::size_t k = t.size() - 1;
    while (k > 0 && std::abs((n[k] - n[k - 1]) / (t[k] - t[k - 1])) < tol) --k;
    return k == t.size() - 1 ? std::numeric_limits<double>::infinity() : t[k];
}

std::string experiment_name(Experiment e) {
    switch (e) {
        case Experiment::tau_ent_vs_T: return "tau-ent-vs-T";
        case Experiment::neg_vs_theta: return "neg-vs-theta";
        case Experiment::neg_vs_time: return "neg-vs-time";
        case Experiment::neg_vs_ratio: return "neg-vs-ratio";
        case Experiment::custom_trajectory: return "custom-trajectory";
    }
    return "unknown";
}

namespace {

json finite_or_text(double x) { return std::isfinite(x) ? json(x) : json(format_number(x)); }

json base_metadata(const ExperimentConfig& cfg) {
    json params = {{"delta", cfg.lz.delta},
                   {"v", cfg.lz.v},
                   {"theta_deg", cfg.bath.angle / deg},
                   {"temperature", cfg.bath.temperature},
                   {"lambda", cfg.bath.coupling},
                   {"omega_c", cfg.omega_c ? json(*cfg.omega_c) : json("delta/3")},
                   {"eta_deg", cfg.eta / deg},
                   {"t_int", cfg.t_int},
                   {"t_end", cfg.t_end},
                   {"lamb_shift", cfg.bath.lamb_shift_enabled},
                   {"pv_window", cfg.bath.pv_upper_limit > 0.0 ? json(cfg.bath.pv_upper_limit) : json("50*omega_c")},
                   {"dephasing", dephasing_name(cfg.bath.dephasing)},
                   {"crossing_threshold", cfg.crossing_threshold},
                   {"crossing_horizon", cfg.crossing_horizon},
                   {"oracle", cfg.oracle}};
    json sweep = {{"variable", cfg.sweep.variable},
                  {"min", cfg.sweep.min},
                  {"max", cfg.sweep.max},
                  {"points", cfg.sweep.points},
                  {"scale", scale_name(cfg.sweep.scale)}};
    json solver = {{"method", method_name(cfg.solver.method)},
                   {"frame", cfg.solver.frame == Frame::corotating ? "corotating" : "lab"},
                   {"rtol", cfg.solver.tolerances.rtol},
                   {"atol", cfg.solver.tolerances.atol},
                   {"invariant_tolerance", cfg.solver.invariant_tolerance}};
    return {{"tool", tool_name},
            {"version", tool_version},
            {"preset", cfg.preset},
            {"experiment", experiment_name(cfg.experiment)},
            {"parameters", params},
            {"sweep", sweep},
            {"solver", solver}};
}

}  // namespace

json metadata(const ExperimentConfig& cfg, const Table& table) {
    json meta = base_metadata(cfg);
    meta["status"] = "ok";
    meta["secular"] = {{"threshold", cfg.solver.secular_threshold},
                       {"strict", cfg.strict_secular},
                       {"samples", table.secular.samples},
                       {"violations", table.secular.violations},
                       {"all_ok", table.secular.all_ok()},
                       {"min_margin", finite_or_text(table.secular.min_margin)}};
    meta["summary"] = table.summary;
    meta["columns"] = table.columns;
    return meta;
}

json failure_metadata(const ExperimentConfig& cfg, const solver_error& e) {
    json meta = base_metadata(cfg);
    meta["status"] = "solver_failure";
    meta["error"] = {{"message", e.what()}, {"time", finite_or_text(e.time())}};
    return meta;
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string render_csv(const json& meta, const Table& table) {
    std::string out = "# " + meta.dump() + "\n";
    for (std::size_t i = 0; i < table.columns.size(); ++i) out += (i ? "," : "") + table.columns[i];
    out += "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ",";
            out += std::visit([](const auto& c) -> std::string {
                if constexpr (std::is_same_v<std::decay_t<decltype(c)>, double>) return format_number(c);
                else return c;
            }, row[i]);
        }
        out += "\n";
    }
    return out;
}

std::string render_json(const json& meta, const Table& table) {
    json rows = json::array();
    for (const auto& row : table.rows) {
        json r = json::array();
        for (const auto& cell : row) {
            if (const double* d = std::get_if<double>(&cell)) r.push_back(finite_or_text(*d));
            else r.push_back(std::get<std::string>(cell));
        }
        rows.push_back(std::move(r));
    }
    json doc = {{"metadata", meta}, {"columns", table.columns}, {"rows", rows}};
    return doc.dump(2) + "\n";
}

std::string render(const ExperimentConfig& cfg, const Table& table) {
    const json meta = metadata(cfg, table);
    return cfg.format == OutputFormat::json ? render_json(meta, table) : render_csv(meta, table);
}

}  // namespace lzd::cli
