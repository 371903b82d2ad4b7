#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qbat/ensemble.hpp"
#include "support/oracles.hpp"

using namespace qbat;

namespace {
constexpr double kPi = std::numbers::pi;
const QuadratureScheme kQuad{};
}  // namespace

TEST_CASE("half-zone integration") {
    double s2 = integrate_halfbz([](double k) { return std::sin(k) * std::sin(k); }, 0.0,
                                 kQuad);
    CHECK(std::abs(s2 - kPi / 2) < 1e-12);

    double one = integrate_halfbz([](double) { return 1.0; }, 0.0, kQuad);
    CHECK(std::abs(one - kPi) < 1e-13);

    // charging weight for a shallow quench: g^2/2 * pi via the kernel integral
    auto q = tfim_quench(0.0, 0.5);
    auto weight = [&](double k) { return quench_geometry(q, k).weight_a; };
    double a_int = integrate_halfbz(weight, 0.0, kQuad);
    CHECK(std::abs(a_int - kPi / 8) < 1e-10);
    CHECK(std::abs(a_int - test::trapezoid_halfbz(
                               [](double k) { return test::tfim_weight_gi0(0.5, k); })) <
          1e-10);
}

TEST_CASE("non-finite integrand rejected") {
    CHECK_THROWS_AS(
        integrate_halfbz([](double k) { return k < 1.0 ? 1.0 : std::nan(""); }, 0.0,
                         kQuad),
        NonFiniteError);
}

TEST_CASE("densities vanish at t = 0") {
    for (const EvaluationScheme& scheme :
         {EvaluationScheme{kQuad}, EvaluationScheme{FiniteN{500}}}) {
        DensityObservables d = density_observables(tfim_quench(0.0, 1.3), 0.0, scheme);
        CHECK(d.e_density == 0.0);
        CHECK(d.p_density == 0.0);
        CHECK(d.var_density == 0.0);
        CHECK(d.snr_density == 0.0);
        CHECK(d.rate_lambda == 0.0);
    }
}

TEST_CASE("short-time growth laws") {
    double t = 1e-4;
    for (double gf : {0.5, 1.3, 2.0}) {
        DensityObservables d = density_observables(tfim_quench(0.0, gf), t, kQuad);
        CHECK(d.e_density / (t * t) ==
              doctest::Approx(4.0 * gf * gf).epsilon(1e-3));
        CHECK(d.var_density / (t * t) ==
              doctest::Approx(16.0 * gf * gf).epsilon(1e-3));
        // the ratio definition ties the three densities together
        CHECK(d.snr_density ==
              doctest::Approx(d.e_density / std::sqrt(d.var_density)).epsilon(1e-12));
    }
}

TEST_CASE("saturation values") {
    auto s_half = saturation_observables(tfim_quench(0.0, 0.5), kQuad);
    CHECK(s_half.e_inf == doctest::Approx(0.125).epsilon(1e-10));

    auto s_13 = saturation_observables(tfim_quench(0.0, 1.3), kQuad);
    CHECK(s_13.e_inf == doctest::Approx(0.5).epsilon(1e-10));

    auto s_same = saturation_observables(tfim_quench(0.9, 0.9), kQuad);
    CHECK(std::abs(s_same.e_inf) < 1e-14);
    CHECK(std::abs(s_same.var_inf) < 1e-14);
    CHECK(s_same.snr_inf_density == 0.0);
}

TEST_CASE("saturation variance against an independent quadrature") {
    for (double gf : {0.5, 1.3}) {
        auto s = saturation_observables(tfim_quench(0.0, gf), kQuad);
        double oracle = test::trapezoid_halfbz([gf](double k) {
            double a = test::tfim_weight_gi0(gf, k);
            return 16.0 * (0.5 * a - 0.375 * a * a) / (2.0 * kPi);
        });
        CHECK(s.var_inf == doctest::Approx(oracle).epsilon(1e-9));
        CHECK(s.snr_inf_density ==
              doctest::Approx(s.e_inf / std::sqrt(s.var_inf)).epsilon(1e-12));
    }
}

TEST_CASE("plateau weight integrates to the saturation energy") {
    auto q = tfim_quench(0.0, 1.3);
    double w_int =
        integrate_halfbz([&](double k) { return plateau_weight(q, k); }, 0.0, kQuad);
    auto s = saturation_observables(q, kQuad);
    CHECK(std::abs(w_int / kPi - s.e_inf) < 1e-12);
}

TEST_CASE("stored energy never exceeds twice the plateau") {
    for (double gf : {0.5, 1.3}) {
        auto q = tfim_quench(0.0, gf);
        double bound = 2.0 * saturation_observables(q, kQuad).e_inf;
        for (int i = 0; i <= 40; ++i) {
            double t = 20.0 * i / 40.0;
            CHECK(density_observables(q, t, kQuad).e_density <= bound + 1e-10);
        }
    }
}

TEST_CASE("dephasing plateau") {
    auto q = tfim_quench(0.0, 1.3);
    auto s = saturation_observables(q, kQuad);
    double sum_e = 0.0;
    double sum_var = 0.0;
    int n = 101;
    for (int i = 0; i < n; ++i) {
        DensityObservables d =
            density_observables(q, 50.0 + 50.0 * i / (n - 1), kQuad);
        sum_e += d.e_density;
        sum_var += d.var_density;
    }
    CHECK(sum_e / n == doctest::Approx(s.e_inf).epsilon(0.01));
    CHECK(sum_var / n == doctest::Approx(s.var_inf).epsilon(0.01));
}

TEST_CASE("power density is the derivative of the energy density") {
    auto q = tfim_quench(0.0, 1.3);
    double h = 1e-5;
    for (double t : {0.25, 1.0, 2.6, 5.0, 8.0}) {
        double p = density_observables(q, t, kQuad).p_density;
        double fd = (density_observables(q, t + h, kQuad).e_density -
                     density_observables(q, t - h, kQuad).e_density) /
                    (2.0 * h);
        CHECK(std::abs(p - fd) < 1e-5);
    }
}

TEST_CASE("finite-size sums converge to the thermodynamic limit") {
    auto q = tfim_quench(0.0, 1.3);
    EvaluationScheme finite{FiniteN{4000}};
    for (double t : {1.0, 3.7, 8.0}) {
        double a = density_observables(q, t, finite).e_density;
        double b = density_observables(q, t, kQuad).e_density;
        CHECK(std::abs(a - b) < 1e-4);
    }
}

TEST_CASE("saturation kink at the critical field") {
    QuadratureScheme fine{4096, 16};
    auto e_inf = [&](double gf) {
        return saturation_observables(tfim_quench(0.0, gf), fine).e_inf;
    };
    double d = 1e-3;
    double left = (e_inf(1.0) - e_inf(1.0 - d)) / d;
    double right = (e_inf(1.0 + d) - e_inf(1.0)) / d;
    CHECK(std::abs(left - 1.0) < 1e-2);
    CHECK(std::abs(right) < 1e-2);
}

TEST_CASE("rate function basics") {
    auto q = tfim_quench(0.0, 1.3);
    CHECK(rate_function(q, 0.0, EvaluationScheme{kQuad}) == 0.0);

    auto same = tfim_quench(0.8, 0.8);
    for (double t : {0.5, 2.0, 7.0}) {
        CHECK(std::abs(rate_function(same, t, EvaluationScheme{kQuad})) < 1e-12);
        CHECK(std::abs(rate_function(same, t, EvaluationScheme{FiniteN{256}})) < 1e-12);
    }

    // finite-N normalization approaches the integral form
    double fin = rate_function(q, 1.0, EvaluationScheme{FiniteN{4000}});
    double quad = rate_function(q, 1.0, EvaluationScheme{kQuad});
    CHECK(std::abs(fin - quad) < 1e-4);
}

TEST_CASE("snr rate function basics") {
    FiniteN fin{512};
    CHECK(snr_rate_function(tfim_quench(0.0, 1.3), 0.0, fin) == 0.0);
    for (double t : {0.5, 3.0}) {
        CHECK(std::abs(snr_rate_function(tfim_quench(0.8, 0.8), t, fin)) < 1e-12);
    }
    // matches the density bundle's finite-grid value
    auto q = tfim_quench(0.0, 1.3);
    DensityObservables d = density_observables(q, 1.0, EvaluationScheme{fin});
    REQUIRE(d.rate_lambda_snr.has_value());
    CHECK(*d.rate_lambda_snr ==
          doctest::Approx(snr_rate_function(q, 1.0, fin)).epsilon(1e-14));
}

TEST_CASE("quadrature bundle leaves the snr rate unset") {
    DensityObservables d = density_observables(tfim_quench(0.0, 1.3), 1.0, kQuad);
    CHECK_FALSE(d.rate_lambda_snr.has_value());
}
