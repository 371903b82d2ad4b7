#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include "qbat/dqpt.hpp"
#include "qbat/sweep.hpp"
#include "qbat/table_io.hpp"

using namespace qbat;

namespace {

constexpr double kPi = std::numbers::pi;

SweepConfig gf_sweep_config() {
    SweepConfig config;
    config.axis_name = "g_f";
    config.g_i = 0.0;
    for (int i = 0; i < 19; ++i) config.axis_values.push_back(0.2 + 0.1 * i);
    config.observables = {"e_inf"};
    return config;
}

}  // namespace

TEST_CASE("build_plan resolves a parameter sweep") {
    SweepPlan plan = build_plan(gf_sweep_config());
    CHECK(plan.axis_name == "g_f");
    CHECK(plan.axis_values.size() == 19);
    CHECK_FALSE(plan.momentum_axis);
    REQUIRE(plan.observables.size() == 1);
    CHECK(plan.observables[0] == Observable::EInf);
}

TEST_CASE("time axis includes both endpoints") {
    TimeAxis axis{0.0, 8.0, 801};
    auto times = axis.times();
    REQUIRE(times.size() == 801);
    CHECK(times.front() == 0.0);
    CHECK(times.back() == 8.0);
    double step = times[1] - times[0];
    for (std::size_t i = 1; i < times.size(); ++i) {
        CHECK(times[i] - times[i - 1] == doctest::Approx(step).epsilon(1e-12));
    }
}

TEST_CASE("build_plan lists every invalid field") {
    SweepConfig config;  // empty axis, no observables, no source
    config.nt = 0;
    config.scheme_kind = "bogus";
    try {
        build_plan(config);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        std::string msg = e.what();
        CHECK(msg.find("axis") != std::string::npos);
        CHECK(msg.find("values") != std::string::npos);
        CHECK(msg.find("nt") != std::string::npos);
        CHECK(msg.find("scheme") != std::string::npos);
        CHECK(msg.find("observables") != std::string::npos);
        CHECK(msg.find("model") != std::string::npos);
    }
}

TEST_CASE("build_plan rejects bad observable selections") {
    SweepConfig config = gf_sweep_config();
    config.observables = {};
    CHECK_THROWS_AS(build_plan(config), ConfigError);

    config.observables = {"no_such_thing"};
    CHECK_THROWS_AS(build_plan(config), ConfigError);

    config.observables = {"delta_e"};  // mode-resolved on a parameter axis
    CHECK_THROWS_AS(build_plan(config), ConfigError);

    config.observables = {"rate_lambda_snr"};  // needs the finite scheme
    CHECK_THROWS_AS(build_plan(config), ConfigError);

    config.observables = {"e_inf"};  // needs quadrature
    config.scheme_kind = "finite";
    CHECK_THROWS_AS(build_plan(config), ConfigError);
}

TEST_CASE("saturation sweep matches the closed form") {
    SweepResult result = run_sweep(build_plan(gf_sweep_config()), 2);
    const Table& t = result.table;
    REQUIRE(t.rows() == 19);
    std::size_t gf_col = *t.column_index("g_f");
    std::size_t e_col = *t.column_index("e_inf");
    CHECK_FALSE(t.column_index("t").has_value());
    for (std::size_t r = 0; r < t.rows(); ++r) {
        double gf = t.at(r, gf_col);
        CHECK(std::abs(t.at(r, e_col) - std::min(gf * gf, 1.0) / 2.0) < 1e-8);
    }
}

TEST_CASE("single-cell plan") {
    SweepConfig config = gf_sweep_config();
    config.axis_values = {1.3};
    SweepResult result = run_sweep(build_plan(config), 1);
    CHECK(result.table.rows() == 1);
    CHECK(result.table.columns.size() == 2);
}

TEST_CASE("mode-resolved grid hits the critical cell exactly") {
    auto q = tfim_quench(0.0, 1.3);
    CriticalData crit = critical_times(q, 0);

    SweepPlan plan;
    plan.axis_name = "k";
    plan.momentum_axis = true;
    plan.axis_values = momentum_grid(399).points;
    plan.axis_values.push_back(crit.k_star);
    std::sort(plan.axis_values.begin(), plan.axis_values.end());
    plan.quench_for = [q](double) { return q; };
    plan.time = TimeAxis{0.0, 4.0 * crit.t_c[0], 401};  // t_c lands on sample 100
    plan.observables = {Observable::ModeDeltaE, Observable::ModePower};
    plan.scheme = QuadratureScheme{};

    SweepResult result = run_sweep(plan, 4);
    const Table& t = result.table;
    REQUIRE(t.rows() == 400 * 401);

    std::size_t k_col = *t.column_index("k");
    std::size_t t_col = *t.column_index("t");
    std::size_t de_col = *t.column_index("delta_e");
    auto it = std::find(plan.axis_values.begin(), plan.axis_values.end(), crit.k_star);
    std::size_t vi = static_cast<std::size_t>(it - plan.axis_values.begin());
    std::size_t row = vi * 401 + 100;
    CHECK(t.at(row, k_col) == crit.k_star);
    CHECK(t.at(row, t_col) == doctest::Approx(crit.t_c[0]).epsilon(1e-12));
    CHECK(t.at(row, de_col) == doctest::Approx(4.0).epsilon(1e-6));
}

TEST_CASE("worker count does not change the bytes") {
    SweepConfig config;
    config.axis_name = "g_f";
    config.axis_values = {0.4, 0.9, 1.3, 1.8};
    config.g_i = 0.0;
    config.t0 = 0.0;
    config.t1 = 4.0;
    config.nt = 21;
    config.observables = {"e_density", "p_density", "var_density", "snr_density",
                          "rate_lambda"};
    config.panels_base = 32;

    SweepResult serial = run_sweep(build_plan(config), 1);
    SweepResult parallel = run_sweep(build_plan(config), 8);
    CHECK(to_csv(serial) == to_csv(parallel));
    CHECK(to_json(serial) == to_json(parallel));
    CHECK(tables_equal(serial.table, parallel.table));
}

TEST_CASE("k_star column is NaN below the transition") {
    SweepConfig config;
    config.axis_name = "g_f";
    config.axis_values = {0.5, 1.5};
    config.g_i = 0.0;
    config.observables = {"k_star", "t_c0"};
    SweepResult result = run_sweep(build_plan(config), 1);
    std::size_t ks_col = *result.table.column_index("k_star");
    CHECK(std::isnan(result.table.at(0, ks_col)));
    CHECK(result.table.at(1, ks_col) ==
          doctest::Approx(std::acos((1.0) / 1.5)).epsilon(1e-12));
}

TEST_CASE("non-finite cells report their coordinates") {
    ModelDefinition def;
    def.d0 = expr::parse_expression("0");
    def.d1 = expr::parse_expression("0");
    def.d2 = expr::parse_expression("sin(k)");
    def.d3 = expr::parse_expression("exp(a*400)");  // overflows for a >= 2
    def.params["a"] = 0.0;

    SweepConfig config;
    config.axis_name = "a";
    config.axis_values = {0.5, 2.0};
    config.model = {def, def};
    config.t0 = 0.0;
    config.t1 = 1.0;
    config.nt = 3;
    config.observables = {"e_density"};
    try {
        run_sweep(build_plan(config), 1);
        FAIL("expected NonFiniteError");
    } catch (const NonFiniteError& e) {
        std::string msg = e.what();
        CHECK(msg.find("a = 2") != std::string::npos);
        CHECK(msg.find("t = ") != std::string::npos);
    }
}

TEST_CASE("wall time grows no worse than linearly in rows") {
    SweepConfig config;
    config.axis_name = "g_f";
    config.axis_values = {1.3};
    config.g_i = 0.0;
    config.t0 = 0.0;
    config.t1 = 2.0;
    config.observables = {"e_density"};
    config.panels_base = 64;

    auto timed_rows = [&config](int nt) {
        config.nt = nt;
        SweepPlan plan = build_plan(config);
        auto begin = std::chrono::steady_clock::now();
        run_sweep(plan, 1);
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - begin)
            .count();
    };
    timed_rows(50);  // warm caches
    double t_small = timed_rows(300);
    double t_large = timed_rows(600);
    CHECK(t_large <= 4.0 * t_small + 0.05);  // 2x rows, factor-2 tolerance
}
