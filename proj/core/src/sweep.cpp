#include "qbat/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "qbat/dqpt.hpp"
#include "qbat/mode_dynamics.hpp"

namespace qbat {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct ObservableInfo {
    Observable id;
    const char* name;
    bool time_dependent;
    bool mode_resolved;
    bool saturation;
};

constexpr ObservableInfo kObservables[] = {
    {Observable::EDensity, "e_density", true, false, false},
    {Observable::PDensity, "p_density", true, false, false},
    {Observable::VarDensity, "var_density", true, false, false},
    {Observable::SnrDensity, "snr_density", true, false, false},
    {Observable::RateLambda, "rate_lambda", true, false, false},
    {Observable::RateLambdaSnr, "rate_lambda_snr", true, false, false},
    {Observable::EInf, "e_inf", false, false, true},
    {Observable::VarInf, "var_inf", false, false, true},
    {Observable::SnrInfDensity, "snr_inf_density", false, false, true},
    {Observable::KStar, "k_star", false, false, false},
    {Observable::TC0, "t_c0", false, false, false},
    {Observable::ModeDeltaE, "delta_e", true, true, false},
    {Observable::ModePower, "power", true, true, false},
    {Observable::ModeLoschmidtAbs, "loschmidt_abs", true, true, false},
    {Observable::ModeExcProb, "exc_prob", true, true, false},
    {Observable::ModeVariance, "variance", true, true, false},
    {Observable::ModeSnr, "snr", true, true, false},
};

const ObservableInfo& info(Observable o) {
    for (const auto& i : kObservables) {
        if (i.id == o) return i;
    }
    return kObservables[0];
}

}  // namespace

const char* observable_name(Observable o) { return info(o).name; }

std::optional<Observable> observable_from_name(const std::string& name) {
    for (const auto& i : kObservables) {
        if (name == i.name) return i.id;
    }
    return std::nullopt;
}

bool observable_time_dependent(Observable o) { return info(o).time_dependent; }
bool observable_mode_resolved(Observable o) { return info(o).mode_resolved; }
bool observable_saturation(Observable o) { return info(o).saturation; }

std::vector<double> TimeAxis::times() const {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(nt));
    if (nt == 1) {
        out.push_back(t0);
        return out;
    }
    double step = (t1 - t0) / (nt - 1);
    for (int i = 0; i < nt; ++i) out.push_back(t0 + i * step);
    return out;
}

std::optional<std::size_t> Table::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == name) return i;
    }
    return std::nullopt;
}

namespace {

std::string format_value(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

SweepPlan build_plan(const SweepConfig& config) {
    std::vector<std::string> problems;
    auto complain = [&problems](const std::string& field, const std::string& why) {
        problems.push_back(field + ": " + why);
    };

    SweepPlan plan;

    // ---- axis ----
    std::string axis = config.axis_name;
    if (axis == "gf") axis = "g_f";
    if (axis == "gi") axis = "g_i";
    if (axis.empty()) complain("axis", "parameter name required");
    if (config.axis_values.empty()) {
        complain("values", "at least one axis value required");
    }
    for (double v : config.axis_values) {
        if (!std::isfinite(v)) {
            complain("values", "axis values must be finite");
            break;
        }
    }
    plan.axis_name = axis;
    plan.axis_values = config.axis_values;
    plan.momentum_axis = (axis == "k");
    if (plan.momentum_axis) {
        for (double v : config.axis_values) {
            if (!(v > 0.0 && v < std::numbers::pi)) {
                complain("values", "momenta must lie in (0, pi)");
                break;
            }
        }
    }

    // ---- time axis ----
    if (config.nt < 1) complain("nt", "need at least one time sample");
    if (!std::isfinite(config.t0) || !std::isfinite(config.t1)) {
        complain("t0/t1", "time bounds must be finite");
    } else {
        if (config.t0 < 0.0) complain("t0", "charging times are non-negative");
        if (config.nt > 1 && !(config.t1 > config.t0)) {
            complain("t1", "must exceed t0 when nt > 1");
        }
    }
    plan.time = TimeAxis{config.t0, config.t1, config.nt};

    // ---- scheme ----
    bool finite_scheme = false;
    if (config.scheme_kind == "quad") {
        if (config.panels_base < 1) complain("panels", "must be >= 1");
        if (config.nodes_per_panel < 1) complain("nodes", "must be >= 1");
        plan.scheme = QuadratureScheme{config.panels_base, config.nodes_per_panel};
    } else if (config.scheme_kind == "finite") {
        finite_scheme = true;
        if (config.modes < 1) complain("N", "mode count must be >= 1");
        plan.scheme = FiniteN{config.modes};
    } else {
        complain("scheme", "unknown kind '" + config.scheme_kind + "' (quad|finite)");
    }

    // ---- observables ----
    if (config.observables.empty()) complain("observables", "select at least one");
    for (const auto& name : config.observables) {
        auto obs = observable_from_name(name);
        if (!obs) {
            complain("observables", "unknown observable '" + name + "'");
            continue;
        }
        if (observable_mode_resolved(*obs) != plan.momentum_axis) {
            complain("observables",
                     plan.momentum_axis
                         ? "'" + name + "' is not mode-resolved; not valid on the k axis"
                         : "'" + name + "' is mode-resolved; requires axis k");
            continue;
        }
        if (*obs == Observable::RateLambdaSnr && !finite_scheme) {
            complain("observables", "'rate_lambda_snr' is defined on finite grids only");
            continue;
        }
        if (observable_saturation(*obs) && finite_scheme) {
            complain("observables", "'" + name + "' needs the quadrature scheme");
            continue;
        }
        plan.observables.push_back(*obs);
    }

    // ---- quench source ----
    bool tfim_source = config.g_i.has_value() || config.g_f.has_value();
    if (tfim_source && config.model) {
        complain("model", "give either g_i/g_f or a model definition, not both");
    } else if (config.model) {
        auto initial_def = config.model->first;
        auto final_def = config.model->second;
        if (plan.momentum_axis) {
            try {
                QuenchSetup fixed{compile_model(initial_def), compile_model(final_def)};
                plan.quench_for = [fixed](double) { return fixed; };
            } catch (const Error& e) {
                complain("model", e.what());
            }
        } else {
            bool in_initial = initial_def.params.contains(axis);
            bool in_final = final_def.params.contains(axis);
            if (!in_initial && !in_final) {
                complain("axis", "parameter '" + axis + "' is not declared by the model");
            } else {
                plan.quench_for = [initial_def, final_def, axis, in_initial,
                                   in_final](double v) {
                    ModelDefinition i = initial_def;
                    ModelDefinition f = final_def;
                    if (in_initial) i.params[axis] = v;
                    if (in_final) f.params[axis] = v;
                    return QuenchSetup{compile_model(i), compile_model(f)};
                };
            }
        }
    } else if (tfim_source) {
        if (plan.momentum_axis || axis == "g_f" || axis == "g_i") {
            double gi = config.g_i.value_or(0.0);
            double gf = config.g_f.value_or(0.0);
            if (plan.momentum_axis) {
                if (!config.g_i || !config.g_f) {
                    complain("g_i/g_f", "both fields required for a momentum sweep");
                } else {
                    QuenchSetup fixed = tfim_quench(gi, gf);
                    plan.quench_for = [fixed](double) { return fixed; };
                }
            } else if (axis == "g_f") {
                if (!config.g_i) complain("g_i", "required when sweeping g_f");
                plan.quench_for = [gi](double v) { return tfim_quench(gi, v); };
            } else {
                if (!config.g_f) complain("g_f", "required when sweeping g_i");
                plan.quench_for = [gf](double v) { return tfim_quench(v, gf); };
            }
        } else {
            complain("axis", "axis '" + axis + "' requires a model definition");
        }
    } else {
        complain("model", "no quench source (g_i/g_f fields or model definition)");
    }

    if (!problems.empty()) {
        std::string msg = "invalid sweep configuration:";
        for (const auto& p : problems) msg += "\n  - " + p;
        throw ConfigError(msg);
    }

    // ---- plan echo ----
    plan.echo.emplace_back("axis", plan.axis_name);
    plan.echo.emplace_back("axis_points", std::to_string(plan.axis_values.size()));
    plan.echo.emplace_back("t0", format_value(plan.time.t0));
    plan.echo.emplace_back("t1", format_value(plan.time.t1));
    plan.echo.emplace_back("nt", std::to_string(plan.time.nt));
    if (finite_scheme) {
        plan.echo.emplace_back("scheme", "finite(N=" + std::to_string(config.modes) + ")");
    } else {
        plan.echo.emplace_back("scheme",
                               "quad(panels=" + std::to_string(config.panels_base) +
                                   ",nodes=" + std::to_string(config.nodes_per_panel) + ")");
    }
    std::string obs_names;
    for (std::size_t i = 0; i < plan.observables.size(); ++i) {
        if (i) obs_names += ',';
        obs_names += observable_name(plan.observables[i]);
    }
    plan.echo.emplace_back("observables", obs_names);
    return plan;
}

namespace {

/// Per-axis-value state shared by all cells of that value.
struct AxisSlot {
    QuenchSetup quench;
    double e_inf = kNaN;
    double var_inf = kNaN;
    double snr_inf = kNaN;
    double k_star = kNaN;
    double t_c0 = kNaN;
};

double mode_cell(const ModeGeometry& geom, double t, Observable o) {
    ModeObservables m = mode_observables(geom, t);
    switch (o) {
        case Observable::ModeDeltaE: return m.delta_e;
        case Observable::ModePower: return m.power;
        case Observable::ModeLoschmidtAbs: return std::abs(m.loschmidt);
        case Observable::ModeExcProb: return m.exc_prob;
        case Observable::ModeVariance: return m.variance;
        case Observable::ModeSnr: return m.snr;
        default: return kNaN;
    }
}

double density_cell(const DensityObservables& d, const AxisSlot& slot, Observable o) {
    switch (o) {
        case Observable::EDensity: return d.e_density;
        case Observable::PDensity: return d.p_density;
        case Observable::VarDensity: return d.var_density;
        case Observable::SnrDensity: return d.snr_density;
        case Observable::RateLambda: return d.rate_lambda;
        case Observable::RateLambdaSnr: return d.rate_lambda_snr.value_or(kNaN);
        case Observable::EInf: return slot.e_inf;
        case Observable::VarInf: return slot.var_inf;
        case Observable::SnrInfDensity: return slot.snr_inf;
        case Observable::KStar: return slot.k_star;
        case Observable::TC0: return slot.t_c0;
        default: return kNaN;
    }
}

}  // namespace

SweepResult run_sweep(const SweepPlan& plan, int workers) {
    auto start = std::chrono::steady_clock::now();

    bool any_time_dep = false;
    bool any_density = false;
    bool need_saturation = false;
    bool need_critical = false;
    for (Observable o : plan.observables) {
        any_time_dep |= observable_time_dependent(o);
        any_density |= observable_time_dependent(o) && !observable_mode_resolved(o);
        need_saturation |= observable_saturation(o);
        need_critical |= (o == Observable::KStar || o == Observable::TC0);
    }

    std::vector<double> times =
        any_time_dep ? plan.time.times() : std::vector<double>{plan.time.t0};
    std::size_t n_times = any_time_dep ? times.size() : 1;
    std::size_t n_values = plan.axis_values.size();

    SweepResult result;
    result.table.columns.push_back(plan.axis_name);
    if (any_time_dep) result.table.columns.push_back("t");
    for (Observable o : plan.observables) {
        result.table.columns.push_back(observable_name(o));
    }

    std::size_t n_cols = result.table.columns.size();
    std::size_t n_rows = n_values * n_times;
    result.table.data.assign(n_rows * n_cols, kNaN);

    // Per-value setup (quench construction, saturation, critical data) runs
    // sequentially up front; the (value, t) cells then fill in parallel.
    std::vector<AxisSlot> slots;
    slots.reserve(n_values);
    std::optional<QuenchSetup> shared;
    if (plan.momentum_axis) shared = plan.quench_for(0.0);
    for (std::size_t vi = 0; vi < n_values; ++vi) {
        AxisSlot slot{plan.momentum_axis ? *shared : plan.quench_for(plan.axis_values[vi])};
        if (need_saturation) {
            const auto& quad = std::get<QuadratureScheme>(plan.scheme);
            SaturationObservables s = saturation_observables(slot.quench, quad);
            slot.e_inf = s.e_inf;
            slot.var_inf = s.var_inf;
            slot.snr_inf = s.snr_inf_density;
        }
        if (need_critical) {
            if (auto ks = critical_momentum(slot.quench)) {
                slot.k_star = *ks;
                slot.t_c0 = critical_times(slot.quench, 0).t_c.front();
            }
        }
        slots.push_back(std::move(slot));
    }

    std::atomic<std::size_t> next_cell{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;

    auto work = [&]() {
        for (;;) {
            std::size_t cell = next_cell.fetch_add(1);
            if (cell >= n_rows) return;
            std::size_t vi = cell / n_times;
            std::size_t ti = cell % n_times;
            double value = plan.axis_values[vi];
            double t = times[ti];
            const AxisSlot& slot = slots[vi];

            try {
                double* row = &result.table.data[cell * n_cols];
                std::size_t col = 0;
                row[col++] = value;
                if (any_time_dep) row[col++] = t;

                if (plan.momentum_axis) {
                    ModeGeometry geom = quench_geometry(slot.quench, value);
                    for (Observable o : plan.observables) {
                        row[col++] = mode_cell(geom, t, o);
                    }
                } else {
                    DensityObservables d{};
                    if (any_density) d = density_observables(slot.quench, t, plan.scheme);
                    for (Observable o : plan.observables) {
                        row[col++] = density_cell(d, slot, o);
                    }
                }
            } catch (const NonFiniteError& e) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) {
                    first_error = std::make_exception_ptr(NonFiniteError(
                        std::string(e.what()) + " (" + plan.axis_name + " = " +
                        format_value(value) + ", t = " + format_value(t) + ")"));
                }
                return;
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    int n_workers = workers;
    if (n_workers < 1) {
        n_workers = static_cast<int>(std::thread::hardware_concurrency());
        if (n_workers < 1) n_workers = 1;
    }
    if (static_cast<std::size_t>(n_workers) > n_rows) {
        n_workers = static_cast<int>(n_rows > 0 ? n_rows : 1);
    }

    if (n_workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_workers));
        for (int i = 0; i < n_workers; ++i) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    result.meta.emplace_back("tool", "qbat");
    result.meta.emplace_back("version", "0.1.0");
    for (const auto& kv : plan.echo) result.meta.push_back(kv);
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

}  // namespace qbat
