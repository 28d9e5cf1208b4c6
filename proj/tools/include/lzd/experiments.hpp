// experiments.hpp: presets, sweeps and serialization behind the lz-dissipate tool

#pragma once

#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

#include "lzd/bath.hpp"
#include "lzd/dynamics.hpp"
#include "lzd/lz_model.hpp"

namespace lzd::cli {

inline constexpr std::string_view tool_name = "lz-dissipate";
inline constexpr std::string_view tool_version = "1.0.0";

enum class Experiment { tau_ent_vs_T, neg_vs_theta, neg_vs_time, neg_vs_ratio, custom_trajectory };
enum class SweepScale { linear, log };
enum class OutputFormat { csv, json };

/// Bad configuration: unknown key, wrong type, invariant violated. Maps to exit code 1.
class config_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct SweepAxis {
    std::string variable{"t"};  ///< one of T, theta, t, delta, v, ratio (theta in degrees)
    double min{-40.0};
    double max{40.0};
    std::size_t points{401};
    SweepScale scale{SweepScale::linear};

    void validate() const;
    std::vector<double> values() const;
};

struct ExperimentConfig {
    Experiment experiment{Experiment::custom_trajectory};
    std::string preset{"custom"};
    LZParams lz{};
    BathParams bath{};
    std::optional<double> omega_c;  ///< unset: cutoff follows delta / 3 for every run
    double eta{0.25 * std::numbers::pi};
    double t_int{-40.0};
    double t_end{40.0};
    SweepAxis sweep{};
    std::string output_path{"-"};
    OutputFormat format{OutputFormat::csv};
    SolverOptions solver{};
    bool oracle{false};
    bool strict_secular{false};
    unsigned jobs{0};  ///< 0: hardware concurrency
    double crossing_threshold{1e-6};
    double crossing_horizon{2.0};  ///< ODE search window in units of the formula survival time

    void validate() const;
    /// Bath for a given gap parameter: the cutoff tracks delta / 3 unless pinned.
    BathParams bath_for(double delta) const;
};

std::vector<std::string> preset_names();
/// fig2..fig5 or custom; throws config_error for anything else.
ExperimentConfig preset(std::string_view name);

/// Apply a flat object of overrides (keys are the long flag names without dashes prefix).
/// Unknown keys, wrong types and keys owned by the preset's sweep throw config_error.
void apply_settings(ExperimentConfig& cfg, const nlohmann::json& settings);

using Cell = std::variant<double, std::string>;

struct SecularTally {
    std::size_t samples{0};
    std::size_t violations{0};
    double min_margin{std::numeric_limits<double>::infinity()};

    void add(const TimescaleReport& r);
    void merge(const SecularTally& o);
    bool all_ok() const { return violations == 0; }
};

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    nlohmann::json summary = nlohmann::json::object();
    SecularTally secular;
};

/// Runs the configured experiment. Solver failures propagate as solver_error.
Table run(const ExperimentConfig& cfg);

Table run_tau_ent_vs_T(const ExperimentConfig& cfg);
Table run_neg_vs_theta(const ExperimentConfig& cfg);
Table run_neg_vs_time(const ExperimentConfig& cfg);
Table run_neg_vs_ratio(const ExperimentConfig& cfg);
Table run_custom_trajectory(const ExperimentConfig& cfg);

/// Earliest sample time after which every finite-difference slope stays below `tol`
/// in magnitude; +inf when the curve is still moving at the last sample.
double plateau_time(const std::vector<double>& t, const std::vector<double>& n, double tol);

nlohmann::json metadata(const ExperimentConfig& cfg, const Table& table);
nlohmann::json failure_metadata(const ExperimentConfig& cfg, const solver_error& e);

/// 17 significant digits; infinities as "inf"/"-inf", NaN as "nan".
std::string format_number(double x);

/// `# <metadata json>` line, a header row, then one line per row.
std::string render_csv(const nlohmann::json& meta, const Table& table);
std::string render_json(const nlohmann::json& meta, const Table& table);
std::string render(const ExperimentConfig& cfg, const Table& table);

std::string experiment_name(Experiment e);

}  // namespace lzd::cli
