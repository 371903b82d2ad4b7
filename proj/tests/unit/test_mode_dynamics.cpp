#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qbat/dqpt.hpp"
#include "qbat/mode_dynamics.hpp"
#include "support/oracles.hpp"

using namespace qbat;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("closed-form propagator limits") {
    auto q = tfim_quench(0.0, 1.3);
    double k = 1.1;

    CHECK(propagator_closed(q, k, 0.0).distance(Mat2::identity()) == 0.0);

    double eps = evaluate_mode(q.final, k).eps;
    Mat2 minus_identity{-1.0, 0.0, 0.0, -1.0};
    CHECK(propagator_closed(q, k, kPi / eps).distance(minus_identity) < 1e-12);
}

TEST_CASE("propagator unitarity") {
    auto q = tfim_quench(0.3, 1.7);
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> ks(1e-3, kPi - 1e-3);
    std::uniform_real_distribution<double> ts(0.0, 20.0);
    for (int i = 0; i < 1000; ++i) {
        CHECK(propagator_closed(q, ks(rng), ts(rng)).unitarity_defect() < 1e-12);
    }
}

TEST_CASE("RK4 oracle agrees with the closed form") {
    auto q = tfim_quench(0.0, 1.3);

    CHECK(propagator_ode_oracle(q, 0.8, 0.0, 1e-4).distance(Mat2::identity()) == 0.0);

    double k = kPi / 2;
    double eps = evaluate_mode(q.final, k).eps;
    Mat2 ode = propagator_ode_oracle(q, k, 0.3, 0.001 / eps);
    CHECK(ode.distance(propagator_closed(q, k, 0.3)) < 1e-8);
    CHECK(ode.unitarity_defect() < 1e-8);

    // small grid here; the acceptance suite runs the full 20x20 version
    for (double kk : {0.4, 1.3, 2.8}) {
        double ee = evaluate_mode(q.final, kk).eps;
        for (double t : {0.5, 1.5}) {
            CHECK(propagator_ode_oracle(q, kk, t, 0.001 / ee)
                      .distance(propagator_closed(q, kk, t)) < 1e-8);
        }
    }
}

TEST_CASE("RK4 step precondition") {
    auto q = tfim_quench(0.0, 1.3);
    double eps = evaluate_mode(q.final, 1.0).eps;
    CHECK_THROWS_AS(propagator_ode_oracle(q, 1.0, 1.0, 0.02 / eps), StepTooLargeError);
    CHECK_THROWS_AS(propagator_ode_oracle(q, 1.0, 1.0, 0.0), StepTooLargeError);
}

TEST_CASE("loschmidt amplitude") {
    auto q = tfim_quench(0.0, 1.3);
    CHECK(loschmidt_amplitude(q, 0.9, 0.0) == Complex{1.0, 0.0});

    // vanishes at the critical mode and time
    auto crit = critical_times(q, 0);
    CHECK(std::abs(loschmidt_amplitude(q, crit.k_star, crit.t_c[0])) < 1e-10);

    // pure phase when nothing is quenched
    auto same = tfim_quench(0.8, 0.8);
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> ks(1e-3, kPi - 1e-3);
    std::uniform_real_distribution<double> ts(0.0, 10.0);
    for (int i = 0; i < 100; ++i) {
        CHECK(std::abs(std::abs(loschmidt_amplitude(same, ks(rng), ts(rng))) - 1.0) <
              1e-12);
    }
}

TEST_CASE("loschmidt amplitude equals the ground-state overlap") {
    auto q = tfim_quench(0.2, 1.6);
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> ks(1e-3, kPi - 1e-3);
    std::uniform_real_distribution<double> ts(0.0, 10.0);
    for (int i = 0; i < 200; ++i) {
        double k = ks(rng);
        double t = ts(rng);
        State2 psi0 = ground_state(evaluate_mode(q.initial, k).d);
        State2 psi_t = apply(propagator_closed(q, k, t), psi0);
        Complex overlap = inner(psi0, psi_t);
        CHECK(std::abs(overlap - loschmidt_amplitude(q, k, t)) < 1e-12);
    }
}

TEST_CASE("ground state") {
    BlochVector down{0.0, 0.0, -1.0};
    State2 s = ground_state(down);
    CHECK(s.up == Complex{1.0, 0.0});
    CHECK(s.down == Complex{0.0, 0.0});

    BlochVector up{0.0, 0.0, 1.0};
    s = ground_state(up);
    CHECK(std::abs(s.up) == 0.0);
    CHECK(s.down == Complex{1.0, 0.0});

    // eigenvalue equation and phase convention on random vectors
    std::mt19937 rng(21);
    std::uniform_real_distribution<double> c(-3.0, 3.0);
    for (int i = 0; i < 200; ++i) {
        BlochVector d{c(rng), c(rng), c(rng)};
        if (d.norm() < 1e-6) continue;
        State2 g = ground_state(d);
        CHECK(std::abs(inner(g, g) - Complex{1.0, 0.0}) < 1e-12);
        State2 hg = apply(pauli_combination(d), g);
        CHECK(std::abs(hg.up - (-d.norm()) * g.up) < 1e-12);
        CHECK(std::abs(hg.down - (-d.norm()) * g.down) < 1e-12);
        Complex lead = std::abs(g.up) > 1e-14 ? g.up : g.down;
        CHECK(lead.real() > 0.0);
        CHECK(std::abs(lead.imag()) < 1e-14);
    }

    CHECK_THROWS_AS(ground_state(BlochVector{0.0, 0.0, 0.0}), GapClosingError);
}

TEST_CASE("mode observables at the critical point") {
    auto q = tfim_quench(0.0, 1.3);
    auto crit = critical_times(q, 1);
    for (double tc : crit.t_c) {
        ModeObservables m = mode_observables(q, crit.k_star, tc);
        CHECK(m.delta_e == doctest::Approx(4.0).epsilon(1e-9));
        CHECK(std::abs(m.power) < 1e-9);
        CHECK(std::abs(m.variance) < 1e-9);
        CHECK(m.snr > 1e9);  // clamped denominator keeps it finite
    }
}

TEST_CASE("mode observables at t = 0") {
    ModeObservables m = mode_observables(tfim_quench(0.0, 2.0), 1.0, 0.0);
    CHECK(m.delta_e == 0.0);
    CHECK(m.power == 0.0);
    CHECK(m.exc_prob == 0.0);
    CHECK(m.surv_prob == 1.0);
    CHECK(m.variance == 0.0);
    CHECK(m.snr == 0.0);
}

TEST_CASE("half-excited mode") {
    // g_i=0 -> g_f=1 at k=pi/2: A = 1/2; at eps_f t = pi/2 the closed forms
    // give delta_e = 2, variance = 4, snr = 1.
    auto q = tfim_quench(0.0, 1.0);
    double k = kPi / 2;
    double eps_f = evaluate_mode(q.final, k).eps;
    ModeObservables m = mode_observables(q, k, (kPi / 2) / eps_f);
    CHECK(m.delta_e == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(m.variance == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(m.snr == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("identities on random modes") {
    auto q = tfim_quench(0.4, 1.5);
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> ks(1e-3, kPi - 1e-3);
    std::uniform_real_distribution<double> ts(0.0, 12.0);
    for (int i = 0; i < 500; ++i) {
        double k = ks(rng);
        double t = ts(rng);
        ModeObservables m = mode_observables(q, k, t);
        double eps_i = quench_geometry(q, k).eps_i;

        CHECK(std::abs(m.surv_prob + m.exc_prob - 1.0) < 1e-12);
        CHECK(std::abs(m.delta_e - 2.0 * eps_i * m.exc_prob) < 1e-12);
        double g2 = std::norm(m.loschmidt);
        CHECK(std::abs(m.delta_e - 2.0 * eps_i * (1.0 - g2)) < 1e-12);
        CHECK(std::abs(m.surv_prob - g2) < 1e-12);
    }
}

TEST_CASE("stored energy reduces to 4(1-|G|^2) for the flat initial band") {
    auto q = tfim_quench(0.0, 1.3);
    for (double k : {0.3, 1.0, 2.5}) {
        for (double t : {0.2, 1.0, 4.0}) {
            ModeObservables m = mode_observables(q, k, t);
            CHECK(std::abs(m.delta_e - 4.0 * (1.0 - std::norm(m.loschmidt))) < 1e-12);
        }
    }
}

TEST_CASE("power is the time derivative of the stored energy") {
    auto q = tfim_quench(0.0, 1.3);
    double h = 1e-6;
    for (double k : {0.5, 1.2, 2.4}) {
        for (double t : {0.3, 1.1, 3.7}) {
            ModeObservables m = mode_observables(q, k, t);
            double fd = test::centered_diff(
                [&](double tt) { return mode_observables(q, k, tt).delta_e; }, t, h);
            CHECK(std::abs(m.power - fd) < 1e-6);

            double eps_i = quench_geometry(q, k).eps_i;
            double fd_g = test::centered_diff(
                [&](double tt) {
                    return std::norm(mode_observables(q, k, tt).loschmidt);
                },
                t, h);
            CHECK(std::abs(m.power - (-2.0 * eps_i) * fd_g) < 1e-6);
        }
    }
}

TEST_CASE("energy under the charging Hamiltonian is conserved") {
    auto q = tfim_quench(0.0, 1.3);
    for (double k : {0.4, 1.5, 2.9}) {
        BlochVector df = evaluate_mode(q.final, k).d;
        State2 psi0 = ground_state(evaluate_mode(q.initial, k).d);
        double e0 = pauli_expectation(df, psi0);
        for (double t : {0.1, 0.9, 2.2, 7.3}) {
            State2 psi_t = apply(propagator_closed(q, k, t), psi0);
            CHECK(std::abs(pauli_expectation(df, psi_t) - e0) < 1e-10);
        }
    }
}

TEST_CASE("mode period") {
    auto q = tfim_quench(0.0, 1.7);
    for (double k : {0.7, 1.9}) {
        double period = kPi / evaluate_mode(q.final, k).eps;
        for (double t : {0.2, 1.4, 5.0}) {
            double a = mode_observables(q, k, t).delta_e;
            double b = mode_observables(q, k, t + period).delta_e;
            CHECK(std::abs(a - b) < 1e-12);
        }
    }
}

TEST_CASE("snr closed form") {
    auto q = tfim_quench(0.0, 1.3);
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> ks(1e-2, kPi - 1e-2);
    std::uniform_real_distribution<double> ts(0.05, 10.0);
    for (int i = 0; i < 300; ++i) {
        ModeObservables m = mode_observables(q, ks(rng), ts(rng));
        double p = m.exc_prob;
        if (p < 1e-8 || 1.0 - p < 1e-8) continue;  // clamp region
        CHECK(std::abs(m.snr - std::sqrt(p / (1.0 - p))) < 1e-9);
    }
}
