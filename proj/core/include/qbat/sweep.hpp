#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qbat/bloch.hpp"
#include "qbat/ensemble.hpp"
#include "qbat/model_file.hpp"

namespace qbat {

/// Everything a sweep can tabulate. Density/rate observables vary with
/// (parameter, t); saturation and critical data vary with the parameter
/// only; mode-resolved observables require the momentum axis.
enum class Observable {
    EDensity,
    PDensity,
    VarDensity,
    SnrDensity,
    RateLambda,
    RateLambdaSnr,
    EInf,
    VarInf,
    SnrInfDensity,
    KStar,
    TC0,
    ModeDeltaE,
    ModePower,
    ModeLoschmidtAbs,
    ModeExcProb,
    ModeVariance,
    ModeSnr,
};

const char* observable_name(Observable o);
std::optional<Observable> observable_from_name(const std::string& name);
bool observable_time_dependent(Observable o);
bool observable_mode_resolved(Observable o);
bool observable_saturation(Observable o);

/// Uniform time grid including both endpoints (nt = 1 collapses to {t0}).
struct TimeAxis {
    double t0 = 0.0;
    double t1 = 0.0;
    int nt = 1;

    std::vector<double> times() const;
};

/// Fully resolved execution plan. `quench_for` rebuilds the setup for one
/// axis value; on the momentum axis the argument is ignored and the quench
/// is fixed.
struct SweepPlan {
    std::string axis_name;
    std::vector<double> axis_values;
    bool momentum_axis = false;
    std::function<QuenchSetup(double)> quench_for;
    TimeAxis time;
    std::vector<Observable> observables;
    EvaluationScheme scheme;
    std::vector<std::pair<std::string, std::string>> echo;
};

/// Raw, unvalidated sweep request as assembled from config file + flags.
struct SweepConfig {
    std::string axis_name;
    std::vector<double> axis_values;
    double t0 = 0.0;
    double t1 = 0.0;
    int nt = 1;
    std::vector<std::string> observables;
    std::string scheme_kind = "quad";  // "quad" | "finite"
    int panels_base = 64;
    int nodes_per_panel = 16;
    int modes = 2000;
    std::optional<double> g_i;
    std::optional<double> g_f;
    std::optional<std::pair<ModelDefinition, ModelDefinition>> model;
};

/// Validates and resolves a SweepConfig. Throws ConfigError whose message
/// lists every invalid field.
SweepPlan build_plan(const SweepConfig& config);

/// Row-major numeric table.
struct Table {
    std::vector<std::string> columns;
    std::vector<double> data;

    std::size_t rows() const {
        return columns.empty() ? 0 : data.size() / columns.size();
    }
    double at(std::size_t row, std::size_t col) const {
        return data[row * columns.size() + col];
    }
    std::optional<std::size_t> column_index(const std::string& name) const;
};

struct SweepResult {
    Table table;
    /// ordered key/value pairs; serialized verbatim, so no volatile entries
    std::vector<std::pair<std::string, std::string>> meta;
    /// wall-clock cost of run_sweep; never serialized
    double wall_seconds = 0.0;
};

/// Executes the plan. Rows are ordered by (parameter index, time index) and
/// each cell is computed independently, so output is identical for every
/// worker count. workers < 1 means one worker per hardware thread.
SweepResult run_sweep(const SweepPlan& plan, int workers = 1);

}  // namespace qbat
