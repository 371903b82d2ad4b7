// qbsim — momentum-resolved simulator for quench-driven two-band quantum
// batteries: stored energy, charging power, Loschmidt rate functions, SNR,
// and dynamical-criticality diagnostics, written as CSV/JSON tables and
// SVG line plots.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qbat/dqpt.hpp"
#include "qbat/ensemble.hpp"
#include "qbat/mode_dynamics.hpp"
#include "qbat/model_file.hpp"
#include "qbat/svg.hpp"
#include "qbat/sweep.hpp"
#include "qbat/table_io.hpp"

namespace {

using namespace qbat;

constexpr const char* kVersion = "0.1.0";

std::string short_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string long_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n));
    if (n == 1) {
        out.push_back(lo);
        return out;
    }
    for (int i = 0; i < n; ++i) out.push_back(lo + (hi - lo) * i / (n - 1));
    return out;
}

/// Flags shared by the physics subcommands.
struct QuenchOpts {
    std::optional<double> gi;
    std::optional<double> gf;
    std::string model_path;

    void attach(CLI::App* cmd, bool with_gf = true) {
        cmd->add_option("--gi", gi, "initial transverse field (TFIM shortcut)");
        if (with_gf) cmd->add_option("--gf", gf, "final transverse field (TFIM shortcut)");
        cmd->add_option("--model", model_path,
                        "model definition file with [initial] and [final] sections");
    }

    QuenchSetup make() const {
        if (!model_path.empty()) {
            if (gi || gf) {
                throw ConfigError("give either --model or --gi/--gf, not both");
            }
            return quench_from_config(load_config(model_path));
        }
        if (!gi || !gf) {
            throw CLI::RequiredError("--gi and --gf (or --model)");
        }
        return tfim_quench(*gi, *gf);
    }

    void echo(std::vector<std::pair<std::string, std::string>>& meta) const {
        if (gi) meta.emplace_back("gi", short_num(*gi));
        if (gf) meta.emplace_back("gf", short_num(*gf));
        if (!model_path.empty()) meta.emplace_back("model", model_path);
    }
};

struct SchemeOpts {
    std::string kind = "quad";
    int panels = 64;
    int nodes = 16;
    int modes = 2000;

    void attach(CLI::App* cmd) {
        cmd->add_option("--scheme", kind, "evaluation scheme")
            ->check(CLI::IsMember({"quad", "finite"}));
        cmd->add_option("--panels", panels, "base panel count for quadrature");
        cmd->add_option("--nodes", nodes, "Gauss-Legendre nodes per panel");
        cmd->add_option("--N", modes, "half-Brillouin-zone mode count (finite scheme)");
    }

    EvaluationScheme make() const {
        if (kind == "finite") return FiniteN{modes};
        return QuadratureScheme{panels, nodes};
    }

    void echo(std::vector<std::pair<std::string, std::string>>& meta) const {
        meta.emplace_back("scheme", kind);
        if (kind == "finite") {
            meta.emplace_back("N", std::to_string(modes));
        } else {
            meta.emplace_back("panels", std::to_string(panels));
            meta.emplace_back("nodes", std::to_string(nodes));
        }
    }
};

struct OutputOpts {
    std::string out;
    std::string format = "csv";
    bool svg = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--out", out, "output path stem")->required();
        cmd->add_option("--format", format, "table format")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_flag("--svg", svg, "also render SVG line plots");
    }

    std::string table_path() const {
        return out + (format == "csv" ? ".csv" : ".json");
    }

    void write(const SweepResult& result) const {
        if (format == "csv") {
            write_table(result, TableFormat::Csv, out + ".csv");
            // CSV carries no metadata; park the echo in a sidecar
            SweepResult meta_only;
            meta_only.meta = result.meta;
            write_table(meta_only, TableFormat::Json, out + ".meta.json");
        } else {
            write_table(result, TableFormat::Json, out + ".json");
        }
    }

    void plot(const SweepResult& result, const std::string& x,
              const std::vector<std::string>& ys, const std::string& suffix = "") const {
        if (!svg) return;
        render_svg(result, x, ys, out + suffix + ".svg");
    }
};

/// Long (param, t, obs...) table -> wide table keyed by t with one column
/// per (observable, param value). A single param value keeps plain names.
SweepResult pivot_by_param(const SweepResult& in, const std::string& axis,
                           std::size_t n_obs) {
    const Table& t = in.table;
    std::size_t axis_col = *t.column_index(axis);
    std::size_t t_col = *t.column_index("t");

    std::vector<double> values;
    for (std::size_t r = 0; r < t.rows(); ++r) {
        double v = t.at(r, axis_col);
        if (values.empty() || values.back() != v) values.push_back(v);
    }
    std::size_t nt = t.rows() / values.size();

    SweepResult out;
    out.meta = in.meta;
    out.table.columns.push_back("t");
    for (std::size_t vi = 0; vi < values.size(); ++vi) {
        for (std::size_t o = 0; o < n_obs; ++o) {
            std::string name = t.columns[t_col + 1 + o];
            if (values.size() > 1) name += "(" + axis + "=" + short_num(values[vi]) + ")";
            out.table.columns.push_back(name);
        }
    }
    for (std::size_t ti = 0; ti < nt; ++ti) {
        out.table.data.push_back(t.at(ti, t_col));
        for (std::size_t vi = 0; vi < values.size(); ++vi) {
            std::size_t r = vi * nt + ti;
            for (std::size_t o = 0; o < n_obs; ++o) {
                out.table.data.push_back(t.at(r, t_col + 1 + o));
            }
        }
    }
    return out;
}

/// Fixed-quench plan over a time grid; the single-value axis column is
/// dropped from the output by the callers.
SweepPlan fixed_quench_plan(const QuenchSetup& q, const TimeAxis& time,
                            std::vector<Observable> obs, EvaluationScheme scheme) {
    SweepPlan plan;
    plan.axis_name = "case";
    plan.axis_values = {0.0};
    plan.quench_for = [q](double) { return q; };
    plan.time = time;
    plan.observables = std::move(obs);
    plan.scheme = std::move(scheme);
    return plan;
}

SweepResult drop_column(const SweepResult& in, const std::string& name) {
    auto idx = in.table.column_index(name);
    if (!idx) return in;
    SweepResult out;
    out.meta = in.meta;
    out.wall_seconds = in.wall_seconds;
    for (std::size_t c = 0; c < in.table.columns.size(); ++c) {
        if (c != *idx) out.table.columns.push_back(in.table.columns[c]);
    }
    for (std::size_t r = 0; r < in.table.rows(); ++r) {
        for (std::size_t c = 0; c < in.table.columns.size(); ++c) {
            if (c != *idx) out.table.data.push_back(in.table.at(r, c));
        }
    }
    return out;
}

void append_column(SweepResult& result, const std::string& name,
                   const std::vector<double>& values) {
    Table wide;
    wide.columns = result.table.columns;
    wide.columns.push_back(name);
    for (std::size_t r = 0; r < result.table.rows(); ++r) {
        for (std::size_t c = 0; c < result.table.columns.size(); ++c) {
            wide.data.push_back(result.table.at(r, c));
        }
        wide.data.push_back(values[r]);
    }
    result.table = std::move(wide);
}

double resolve_tc(const QuenchSetup& q, const std::string& time_unit) {
    if (time_unit != "tc") return 1.0;
    auto ks = critical_momentum(q);
    if (!ks) {
        throw NoDqptError("--time-unit tc requires a quench with a critical momentum");
    }
    return critical_times(q, 0).t_c.front();
}

// ---------------------------------------------------------------- evolve --

int cmd_evolve(const QuenchOpts& quench, const SchemeOpts& scheme,
               const OutputOpts& output, const std::vector<double>& gf_list,
               double tmax, int nt, int workers) {
    std::vector<std::pair<std::string, std::string>> echo;
    quench.echo(echo);
    echo.emplace_back("tmax", short_num(tmax));
    echo.emplace_back("nt", std::to_string(nt));
    scheme.echo(echo);

    SweepResult result;
    std::size_t n_obs = 2;
    if (!gf_list.empty()) {
        if (!quench.model_path.empty()) {
            throw ConfigError("give either --model or --gi/--gf, not both");
        }
        if (!quench.gi) throw CLI::RequiredError("--gi");
        SweepConfig config;
        config.axis_name = "g_f";
        config.axis_values = gf_list;
        config.g_i = quench.gi;
        config.t0 = 0.0;
        config.t1 = tmax;
        config.nt = nt;
        config.observables = {"e_density", "p_density"};
        config.scheme_kind = scheme.kind;
        config.panels_base = scheme.panels;
        config.nodes_per_panel = scheme.nodes;
        config.modes = scheme.modes;
        result = pivot_by_param(run_sweep(build_plan(config), workers), "g_f", n_obs);
    } else {
        QuenchSetup q = quench.make();
        SweepPlan plan = fixed_quench_plan(
            q, TimeAxis{0.0, tmax, nt},
            {Observable::EDensity, Observable::PDensity}, scheme.make());
        result = drop_column(run_sweep(plan, workers), "case");
    }

    result.meta.insert(result.meta.end(), echo.begin(), echo.end());
    output.write(result);
    if (output.svg) {
        std::vector<std::string> e_cols;
        std::vector<std::string> p_cols;
        for (const auto& c : result.table.columns) {
            if (c.rfind("e_density", 0) == 0) e_cols.push_back(c);
            if (c.rfind("p_density", 0) == 0) p_cols.push_back(c);
        }
        output.plot(result, "t", e_cols, ".e_density");
        output.plot(result, "t", p_cols, ".p_density");
    }
    return 0;
}

// ----------------------------------------------------------------- modes --

int cmd_modes(const QuenchOpts& quench, const OutputOpts& output, int nk, double tmax,
              int nt, const std::string& time_unit, int workers) {
    QuenchSetup q = quench.make();
    double tc = resolve_tc(q, time_unit);

    SweepPlan plan;
    plan.axis_name = "k";
    plan.axis_values = momentum_grid(nk).points;
    plan.momentum_axis = true;
    plan.quench_for = [q](double) { return q; };
    plan.time = TimeAxis{0.0, tmax * tc, nt};
    plan.observables = {Observable::ModeDeltaE, Observable::ModePower,
                        Observable::ModeLoschmidtAbs, Observable::ModeExcProb,
                        Observable::ModeVariance, Observable::ModeSnr};
    plan.scheme = QuadratureScheme{};

    SweepResult result = run_sweep(plan, workers);
    if (time_unit == "tc") {
        std::vector<double> scaled;
        std::size_t t_col = *result.table.column_index("t");
        for (std::size_t r = 0; r < result.table.rows(); ++r) {
            scaled.push_back(result.table.at(r, t_col) / tc);
        }
        append_column(result, "t_over_tc", scaled);
    }

    quench.echo(result.meta);
    result.meta.emplace_back("nk", std::to_string(nk));
    result.meta.emplace_back("tmax", short_num(tmax));
    result.meta.emplace_back("nt", std::to_string(nt));
    result.meta.emplace_back("time_unit", time_unit);
    output.write(result);
    return 0;
}

// -------------------------------------------------------------- critical --

int cmd_critical(const QuenchOpts& quench, const SchemeOpts& scheme,
                 const OutputOpts& output, double tmax, int nt,
                 const std::string& time_unit, double cusp_threshold, int cusp_window,
                 int workers) {
    QuenchSetup q = quench.make();
    double tc = resolve_tc(q, time_unit);
    TimeAxis time{0.0, tmax * tc, nt};

    SweepPlan plan =
        fixed_quench_plan(q, time, {Observable::RateLambda}, scheme.make());
    SweepResult result = drop_column(run_sweep(plan, workers), "case");

    auto ks = critical_momentum(q);
    if (ks) {
        ModeGeometry geom = quench_geometry(q, *ks);
        std::vector<double> de;
        std::vector<double> power;
        std::vector<double> gk;
        for (double t : time.times()) {
            ModeObservables m = mode_observables(geom, t);
            de.push_back(m.delta_e);
            power.push_back(m.power);
            gk.push_back(std::abs(m.loschmidt));
        }
        append_column(result, "delta_e_kstar", de);
        append_column(result, "power_kstar", power);
        append_column(result, "loschmidt_abs_kstar", gk);
    }

    // cusp detection on the sampled rate function
    std::vector<double> ts;
    std::vector<double> lambda;
    std::size_t t_col = *result.table.column_index("t");
    std::size_t l_col = *result.table.column_index("rate_lambda");
    for (std::size_t r = 0; r < result.table.rows(); ++r) {
        ts.push_back(result.table.at(r, t_col));
        lambda.push_back(result.table.at(r, l_col));
    }
    std::vector<double> cusps;
    if (ts.size() >= 16) cusps = detect_cusps(ts, lambda, cusp_threshold, cusp_window);
    std::string cusp_list;
    for (std::size_t i = 0; i < cusps.size(); ++i) {
        if (i) cusp_list += ',';
        cusp_list += format_double17(cusps[i]);
        std::cout << "cusp at t = " << long_num(cusps[i]) << "\n";
    }
    result.meta.emplace_back("cusps", cusp_list);
    if (ks) result.meta.emplace_back("k_star", format_double17(*ks));

    quench.echo(result.meta);
    result.meta.emplace_back("tmax", short_num(tmax));
    result.meta.emplace_back("nt", std::to_string(nt));
    result.meta.emplace_back("time_unit", time_unit);
    scheme.echo(result.meta);
    output.write(result);
    if (output.svg) {
        std::vector<std::string> ys = {"rate_lambda"};
        if (ks) ys.push_back("delta_e_kstar");
        output.plot(result, "t", ys);
    }
    return 0;
}

// ------------------------------------------------------------ saturation --

int cmd_saturation(const QuenchOpts& quench, const SchemeOpts& scheme,
                   const OutputOpts& output, const std::vector<double>& gf_list,
                   double gf_min, double gf_max, int num, bool weights, int nk,
                   int workers) {
    std::vector<double> gf_values = gf_list.empty() ? linspace(gf_min, gf_max, num) : gf_list;

    if (weights) {
        // momentum-resolved weight of the plateau for each quench strength
        if (!quench.gi) throw CLI::RequiredError("--gi");
        MomentumGrid grid = momentum_grid(nk);
        SweepResult result;
        result.table.columns.push_back("k");
        for (double gf : gf_values) {
            result.table.columns.push_back("W(g_f=" + short_num(gf) + ")");
        }
        std::vector<QuenchSetup> quenches;
        for (double gf : gf_values) quenches.push_back(tfim_quench(*quench.gi, gf));
        for (double k : grid.points) {
            result.table.data.push_back(k);
            for (const auto& qs : quenches) {
                result.table.data.push_back(plateau_weight(qs, k));
            }
        }
        result.meta.emplace_back("tool", "qbat");
        result.meta.emplace_back("version", kVersion);
        quench.echo(result.meta);
        result.meta.emplace_back("nk", std::to_string(nk));
        output.write(result);
        if (output.svg) {
            std::vector<std::string> ys(result.table.columns.begin() + 1,
                                        result.table.columns.end());
            output.plot(result, "k", ys);
        }
        return 0;
    }

    if (!quench.gi) throw CLI::RequiredError("--gi");
    SweepConfig config;
    config.axis_name = "g_f";
    config.axis_values = gf_values;
    config.g_i = quench.gi;
    config.observables = {"e_inf", "var_inf", "snr_inf_density", "k_star", "t_c0"};
    config.scheme_kind = "quad";
    config.panels_base = scheme.panels;
    config.nodes_per_panel = scheme.nodes;

    SweepResult result = run_sweep(build_plan(config), workers);
    quench.echo(result.meta);
    scheme.echo(result.meta);
    output.write(result);
    if (output.svg) output.plot(result, "g_f", {"e_inf"});
    return 0;
}

// ------------------------------------------------------------------- snr --

int cmd_snr(const QuenchOpts& quench, const SchemeOpts& scheme, const OutputOpts& output,
            double tmax, int nt, int workers) {
    QuenchSetup q = quench.make();
    TimeAxis time{0.0, tmax, nt};

    SweepPlan lambda_plan = fixed_quench_plan(
        q, time, {Observable::RateLambda},
        QuadratureScheme{scheme.panels, scheme.nodes});
    SweepResult result = drop_column(run_sweep(lambda_plan, workers), "case");

    SweepPlan snr_plan = fixed_quench_plan(q, time, {Observable::RateLambdaSnr},
                                           FiniteN{scheme.modes});
    SweepResult snr_result = run_sweep(snr_plan, workers);
    std::vector<double> lambda_snr;
    std::size_t col = *snr_result.table.column_index("rate_lambda_snr");
    for (std::size_t r = 0; r < snr_result.table.rows(); ++r) {
        lambda_snr.push_back(snr_result.table.at(r, col));
    }
    append_column(result, "rate_lambda_snr", lambda_snr);

    if (auto ks = critical_momentum(q)) {
        ModeGeometry geom = quench_geometry(q, *ks);
        std::vector<double> var;
        std::vector<double> snr;
        for (double t : time.times()) {
            ModeObservables m = mode_observables(geom, t);
            var.push_back(m.variance);
            snr.push_back(m.snr);
        }
        append_column(result, "variance_kstar", var);
        append_column(result, "snr_kstar", snr);
        result.meta.emplace_back("k_star", format_double17(*ks));
    }

    quench.echo(result.meta);
    result.meta.emplace_back("tmax", short_num(tmax));
    result.meta.emplace_back("nt", std::to_string(nt));
    result.meta.emplace_back("N", std::to_string(scheme.modes));
    output.write(result);
    if (output.svg) output.plot(result, "t", {"rate_lambda", "rate_lambda_snr"});
    return 0;
}

// ----------------------------------------------------------------- sweep --

std::vector<double> parse_value_list(const std::string& text) {
    // "linspace(a, b, n)" or a comma-separated list
    if (text.rfind("linspace", 0) == 0) {
        auto open = text.find('(');
        auto close = text.rfind(')');
        if (open == std::string::npos || close == std::string::npos || close < open) {
            throw ConfigError("malformed linspace in values: '" + text + "'");
        }
        std::string args = text.substr(open + 1, close - open - 1);
        std::vector<std::string> parts;
        std::size_t start = 0;
        for (;;) {
            auto comma = args.find(',', start);
            if (comma == std::string::npos) {
                parts.push_back(args.substr(start));
                break;
            }
            parts.push_back(args.substr(start, comma - start));
            start = comma + 1;
        }
        if (parts.size() != 3) throw ConfigError("linspace needs (first, last, count)");
        double lo = parse_double(parts[0]);
        double hi = parse_double(parts[1]);
        int n = static_cast<int>(parse_double(parts[2]));
        if (n < 1) throw ConfigError("linspace count must be >= 1");
        return linspace(lo, hi, n);
    }
    std::vector<double> out;
    std::size_t start = 0;
    for (;;) {
        auto comma = text.find(',', start);
        std::string cell = text.substr(start, comma == std::string::npos
                                                  ? std::string::npos
                                                  : comma - start);
        out.push_back(parse_double(cell));
        if (comma == std::string::npos) return out;
        start = comma + 1;
    }
}

struct SchemeFlagPresence {
    bool scheme = false;
    bool panels = false;
    bool nodes = false;
    bool modes = false;
};

int cmd_sweep(const QuenchOpts& quench, const SchemeOpts& scheme, const OutputOpts& output,
              const SchemeFlagPresence& flags, int workers) {
    if (quench.model_path.empty()) {
        throw CLI::RequiredError("--model (sweep definition file)");
    }
    ConfigFile file = load_config(quench.model_path);
    const ConfigSection* sweep_section = file.find("sweep");
    if (sweep_section == nullptr) {
        throw ConfigError("sweep definition file has no [sweep] section");
    }

    SweepConfig config;
    for (const auto& e : sweep_section->entries) {
        if (e.key == "parameter") {
            config.axis_name = e.value;
        } else if (e.key == "values") {
            config.axis_values = parse_value_list(e.value);
        } else if (e.key == "t0") {
            config.t0 = parse_double(e.value);
        } else if (e.key == "t1") {
            config.t1 = parse_double(e.value);
        } else if (e.key == "nt") {
            config.nt = static_cast<int>(parse_double(e.value));
        } else if (e.key == "observables") {
            std::size_t start = 0;
            for (;;) {
                auto comma = e.value.find(',', start);
                std::string name = e.value.substr(
                    start, comma == std::string::npos ? std::string::npos : comma - start);
                name.erase(0, name.find_first_not_of(' '));
                name.erase(name.find_last_not_of(' ') + 1);
                config.observables.push_back(name);
                if (comma == std::string::npos) break;
                start = comma + 1;
            }
        } else {
            throw ConfigError("unknown [sweep] key '" + e.key + "' (line " +
                              std::to_string(e.line) + ")");
        }
    }

    // precedence: explicit flags > [scheme] section > defaults
    if (const ConfigSection* s = file.find("scheme"); s != nullptr) {
        for (const auto& e : s->entries) {
            if (e.key == "kind") {
                config.scheme_kind = e.value;
            } else if (e.key == "panels") {
                config.panels_base = static_cast<int>(parse_double(e.value));
            } else if (e.key == "nodes") {
                config.nodes_per_panel = static_cast<int>(parse_double(e.value));
            } else if (e.key == "N") {
                config.modes = static_cast<int>(parse_double(e.value));
            } else {
                throw ConfigError("unknown [scheme] key '" + e.key + "' (line " +
                                  std::to_string(e.line) + ")");
            }
        }
    }
    if (flags.scheme) config.scheme_kind = scheme.kind;
    if (flags.panels) config.panels_base = scheme.panels;
    if (flags.nodes) config.nodes_per_panel = scheme.nodes;
    if (flags.modes) config.modes = scheme.modes;

    if (file.find("initial") != nullptr && file.find("final") != nullptr) {
        config.model = {model_from_section(*file.find("initial")),
                        model_from_section(*file.find("final"))};
    } else {
        config.g_i = quench.gi;
        config.g_f = quench.gf;
    }

    SweepResult result = run_sweep(build_plan(config), workers);
    quench.echo(result.meta);
    output.write(result);
    return 0;
}

// ------------------------------------------------------------- dqpt-info --

int cmd_dqpt_info(const QuenchOpts& quench, int n_max) {
    QuenchSetup q = quench.make();
    auto ks = critical_momentum(q);
    if (!ks) {
        std::cout << "no dynamical critical momentum for this quench\n";
        return 0;
    }
    CriticalData data = critical_times(q, n_max);
    std::cout << "k_star      = " << long_num(data.k_star) << "\n";
    std::cout << "eps_f(k*)   = " << long_num(data.eps_f_star) << "\n";
    for (std::size_t n = 0; n < data.t_c.size(); ++n) {
        std::cout << "t_c(" << n << ")      = " << long_num(data.t_c[n]) << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quench-driven two-band quantum battery simulator"};
    app.set_version_flag("--version", std::string("qbsim ") + kVersion);
    app.require_subcommand(1);

    int workers = 0;  // 0 = one per hardware thread
    app.add_option("--workers", workers, "worker threads for sweeps (0 = auto)")
        ->capture_default_str();

    int exit_code = 0;
    auto guard = [&exit_code](auto&& fn) {
        return [&exit_code, fn]() { exit_code = fn(); };
    };

    // evolve
    auto* evolve = app.add_subcommand(
        "evolve", "stored-energy and power densities over time");
    evolve->fallthrough();
    QuenchOpts evolve_quench;
    SchemeOpts evolve_scheme;
    OutputOpts evolve_output;
    std::vector<double> evolve_gf;
    double evolve_tmax = 8.0;
    int evolve_nt = 801;
    evolve_quench.attach(evolve, false);
    evolve->add_option("--gf", evolve_gf, "final field; repeat for one curve per value");
    evolve_scheme.attach(evolve);
    evolve_output.attach(evolve);
    evolve->add_option("--tmax", evolve_tmax, "last time")->capture_default_str();
    evolve->add_option("--nt", evolve_nt, "time samples")->capture_default_str();
    evolve->callback(guard([&]() {
        return cmd_evolve(evolve_quench, evolve_scheme, evolve_output, evolve_gf,
                          evolve_tmax, evolve_nt, workers);
    }));

    // modes
    auto* modes = app.add_subcommand(
        "modes", "momentum-resolved observables on a (k, t) grid");
    modes->fallthrough();
    QuenchOpts modes_quench;
    OutputOpts modes_output;
    int modes_nk = 400;
    double modes_tmax = 4.0;
    int modes_nt = 401;
    std::string modes_unit = "abs";
    modes_quench.attach(modes);
    modes_output.attach(modes);
    modes->add_option("--nk", modes_nk, "momentum grid size")->capture_default_str();
    modes->add_option("--tmax", modes_tmax, "last time (in --time-unit units)")
        ->capture_default_str();
    modes->add_option("--nt", modes_nt, "time samples")->capture_default_str();
    modes->add_option("--time-unit", modes_unit, "time axis unit")
        ->check(CLI::IsMember({"abs", "tc"}))
        ->capture_default_str();
    modes->callback(guard([&]() {
        return cmd_modes(modes_quench, modes_output, modes_nk, modes_tmax, modes_nt,
                         modes_unit, workers);
    }));

    // critical
    auto* critical = app.add_subcommand(
        "critical", "Loschmidt rate function, critical-mode series, cusps");
    critical->fallthrough();
    QuenchOpts critical_quench;
    SchemeOpts critical_scheme;
    critical_scheme.panels = 512;  // cusp structure needs a well-resolved integral
    OutputOpts critical_output;
    double critical_tmax = 5.0;
    int critical_nt = 2001;
    std::string critical_unit = "abs";
    double cusp_threshold = 5.0;
    int cusp_window = 5;
    critical_quench.attach(critical);
    critical_scheme.attach(critical);
    critical_output.attach(critical);
    critical->add_option("--tmax", critical_tmax, "last time (in --time-unit units)")
        ->capture_default_str();
    critical->add_option("--nt", critical_nt, "time samples")->capture_default_str();
    critical->add_option("--time-unit", critical_unit, "time axis unit")
        ->check(CLI::IsMember({"abs", "tc"}))
        ->capture_default_str();
    critical->add_option("--cusp-threshold", cusp_threshold,
                         "slope-jump factor over the median")
        ->capture_default_str();
    critical->add_option("--cusp-window", cusp_window, "local-maximum window (samples)")
        ->capture_default_str();
    critical->callback(guard([&]() {
        return cmd_critical(critical_quench, critical_scheme, critical_output,
                            critical_tmax, critical_nt, critical_unit, cusp_threshold,
                            cusp_window, workers);
    }));

    // saturation
    auto* saturation = app.add_subcommand(
        "saturation", "long-time plateau values over quench strength");
    saturation->fallthrough();
    QuenchOpts saturation_quench;
    SchemeOpts saturation_scheme;
    OutputOpts saturation_output;
    std::vector<double> saturation_gf;
    double gf_min = 0.2;
    double gf_max = 2.0;
    int gf_num = 19;
    bool weights = false;
    int saturation_nk = 512;
    saturation_quench.attach(saturation, false);
    saturation->add_option("--gf", saturation_gf, "explicit final-field list");
    saturation_scheme.attach(saturation);
    saturation_output.attach(saturation);
    saturation->add_option("--gf-min", gf_min, "sweep start")->capture_default_str();
    saturation->add_option("--gf-max", gf_max, "sweep end")->capture_default_str();
    saturation->add_option("--num", gf_num, "sweep points")->capture_default_str();
    saturation->add_flag("--weights", weights,
                         "emit the momentum-resolved plateau weight W(k) instead");
    saturation->add_option("--nk", saturation_nk, "momentum samples for --weights")
        ->capture_default_str();
    saturation->callback(guard([&]() {
        return cmd_saturation(saturation_quench, saturation_scheme, saturation_output,
                              saturation_gf, gf_min, gf_max, gf_num, weights,
                              saturation_nk, workers);
    }));

    // snr
    auto* snr = app.add_subcommand(
        "snr", "rate function vs SNR rate function and critical-mode SNR");
    snr->fallthrough();
    QuenchOpts snr_quench;
    SchemeOpts snr_scheme;
    snr_scheme.panels = 512;
    OutputOpts snr_output;
    double snr_tmax = 5.0;
    int snr_nt = 2001;
    snr_quench.attach(snr);
    snr_scheme.attach(snr);
    snr_output.attach(snr);
    snr->add_option("--tmax", snr_tmax, "last time")->capture_default_str();
    snr->add_option("--nt", snr_nt, "time samples")->capture_default_str();
    snr->callback(guard([&]() {
        return cmd_snr(snr_quench, snr_scheme, snr_output, snr_tmax, snr_nt, workers);
    }));

    // sweep
    auto* sweep = app.add_subcommand(
        "sweep", "run a sweep described by a [sweep] config section");
    sweep->fallthrough();
    QuenchOpts sweep_quench;
    SchemeOpts sweep_scheme;
    OutputOpts sweep_output;
    sweep_quench.attach(sweep);
    sweep_scheme.attach(sweep);
    sweep_output.attach(sweep);
    sweep->callback(guard([&]() {
        SchemeFlagPresence flags;
        flags.scheme = sweep->count("--scheme") > 0;
        flags.panels = sweep->count("--panels") > 0;
        flags.nodes = sweep->count("--nodes") > 0;
        flags.modes = sweep->count("--N") > 0;
        return cmd_sweep(sweep_quench, sweep_scheme, sweep_output, flags, workers);
    }));

    // dqpt-info
    auto* dqpt_info = app.add_subcommand(
        "dqpt-info", "critical momentum, gap at k*, and critical times");
    dqpt_info->fallthrough();
    QuenchOpts dqpt_quench;
    int n_max = 4;
    dqpt_quench.attach(dqpt_info);
    dqpt_info->add_option("--n-max", n_max, "highest critical-time index")
        ->capture_default_str();
    dqpt_info->callback(guard([&]() { return cmd_dqpt_info(dqpt_quench, n_max); }));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const qbat::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return exit_code;
}
