#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "lzd/experiments.hpp"

namespace {

using nlohmann::json;
using namespace lzd::cli;

enum ExitCode { ok = 0, bad_config = 1, solver_failed = 2, secular_gate = 3 };

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw config_error("config file '" + path + "': " + e.what());
    }
}

void write_output(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::fwrite(text.data(), 1, text.size(), stdout);
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw config_error("cannot write '" + path + "'");
    out << text;
}

template <class T>
void put(json& j, const char* key, const std::optional<T>& v) {
    if (v) j[key] = *v;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Entanglement of a reference/system qubit pair under a dissipative Landau-Zener drive",
                 std::string(tool_name)};
    app.set_version_flag("--version", std::string(tool_version));

    std::string preset_name;
    app.add_option("preset", preset_name, "fig2, fig3, fig4, fig5 or custom")->required();

    std::optional<double> delta, v, theta, temperature, lambda, omega_c, eta, t_int, t_end;
    std::optional<double> sweep_min, sweep_max, rtol, atol, secular_threshold, threshold, horizon, pv_window;
    std::optional<long long> sweep_points, jobs;
    std::optional<std::string> sweep, sweep_scale, out, format, dephasing, method, frame, config;
    bool oracle = false, strict = false, lamb = false;

    app.add_option("--delta", delta, "Minimum half-gap");
    app.add_option("--v", v, "Sweep rate");
    app.add_option("--theta-deg", theta, "Coupling angle in degrees (0 longitudinal, 90 transversal)");
    app.add_option("--temperature", temperature, "Bath temperature");
    app.add_option("--lambda", lambda, "System-bath coupling");
    app.add_option("--omega-c", omega_c, "Ohmic cutoff (default delta/3)");
    app.add_option("--eta", eta, "Schmidt angle of the initial state in degrees (45 is the Bell state)");
    app.add_option("--t-int", t_int, "Initial time");
    app.add_option("--t-end", t_end, "Final time");
    app.add_option("--sweep", sweep, "Sweep variable: T, theta, t, delta, v or ratio");
    app.add_option("--sweep-min", sweep_min, "Sweep start");
    app.add_option("--sweep-max", sweep_max, "Sweep end");
    app.add_option("--sweep-points", sweep_points, "Number of sweep points (>= 2)");
    app.add_option("--sweep-scale", sweep_scale, "linear or log");
    app.add_option("--out", out, "Output file ('-' for stdout)");
    app.add_option("--format", format, "csv or json");
    app.add_option("--config", config, "JSON file with settings; flags take precedence");
    app.add_option("--rtol", rtol, "Relative tolerance of the adaptive integrator");
    app.add_option("--atol", atol, "Absolute tolerance of the adaptive integrator");
    app.add_option("--jobs", jobs, "Worker threads (0 = all cores)");
    app.add_flag("--oracle", oracle, "Also propagate the full 4x4 master equation and report deviations");
    app.add_flag("--strict-secular", strict, "Exit with code 3 when any sample violates the secular condition");
    app.add_flag("--lamb-shift", lamb, "Include the Lamb shift in the generator");
    app.add_option("--pv-window", pv_window, "Half-width of the principal-value window (default 50 omega_c)");
    app.add_option("--dephasing", dephasing, "Zero-frequency rate: ohmic-limit or vanishing");
    app.add_option("--method", method, "dopri5 or rk4");
    app.add_option("--frame", frame, "Pauli-route coordinates: lab or corotating");
    app.add_option("--secular-threshold", secular_threshold, "Minimum timescale separation");
    app.add_option("--threshold", threshold, "Negativity threshold for survival-time crossings");
    app.add_option("--horizon", horizon, "Crossing search window in units of the formula survival time");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : bad_config;
    }

    ExperimentConfig cfg;
    try {
        cfg = preset(preset_name);
        json settings = config ? load_config(*config) : json::object();
        if (!settings.is_object()) throw config_error("config file must hold a JSON object");
        json flags = json::object();
        put(flags, "delta", delta);
        put(flags, "v", v);
        put(flags, "theta-deg", theta);
        put(flags, "temperature", temperature);
        put(flags, "lambda", lambda);
        put(flags, "omega-c", omega_c);
        put(flags, "eta", eta);
        put(flags, "t-int", t_int);
        put(flags, "t-end", t_end);
        put(flags, "sweep", sweep);
        put(flags, "sweep-min", sweep_min);
        put(flags, "sweep-max", sweep_max);
        put(flags, "sweep-points", sweep_points);
        put(flags, "sweep-scale", sweep_scale);
        put(flags, "out", out);
        put(flags, "format", format);
        put(flags, "rtol", rtol);
        put(flags, "atol", atol);
        put(flags, "jobs", jobs);
        put(flags, "pv-window", pv_window);
        put(flags, "dephasing", dephasing);
        put(flags, "method", method);
        put(flags, "frame", frame);
        put(flags, "secular-threshold", secular_threshold);
        put(flags, "threshold", threshold);
        put(flags, "horizon", horizon);
        if (oracle) flags["oracle"] = true;
        if (strict) flags["strict-secular"] = true;
        if (lamb) flags["lamb-shift"] = true;
        settings.update(flags);
        apply_settings(cfg, settings);
        cfg.validate();
    } catch (const config_error& e) {
        std::cerr << tool_name << ": configuration error: " << e.what() << "\n";
        return bad_config;
    }

    try {
        const Table table = run(cfg);
        write_output(cfg.output_path, render(cfg, table));
        if (!table.secular.all_ok()) {
            std::cerr << tool_name << ": warning: " << table.secular.violations << " of " << table.secular.samples
                      << " samples violate the secular condition\n";
            if (cfg.strict_secular) return secular_gate;
        }
        return ok;
    } catch (const lzd::solver_error& e) {
        std::cerr << tool_name << ": solver failure: " << e.what() << "\n";
        const json meta = failure_metadata(cfg, e);
        try {
            write_output(cfg.output_path, cfg.format == OutputFormat::json
                                              ? meta.dump(2) + "\n"
                                              : "# " + meta.dump() + "\n# solver_error," +
                                                    format_number(e.time()) + "\n");
        } catch (const config_error&) {
        }
        return solver_failed;
    } catch (const config_error& e) {
        std::cerr << tool_name << ": configuration error: " << e.what() << "\n";
        return bad_config;
    } catch (const std::exception& e) {
        std::cerr << tool_name << ": error: " << e.what() << "\n";
        return solver_failed;
    }
}
