#pragma once

#include <array>
#include <complex>

#include "qbat/bloch.hpp"

namespace qbat {

using Complex = std::complex<double>;

/// Row-major 2x2 complex matrix, just enough algebra for sector dynamics.
struct Mat2 {
    Complex a{}, b{}, c{}, d{};  // [[a, b], [c, d]]

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    Mat2 adjoint() const;

    friend Mat2 operator+(const Mat2& x, const Mat2& y);
    friend Mat2 operator*(const Mat2& x, const Mat2& y);
    friend Mat2 operator*(Complex s, const Mat2& x);

    /// max elementwise |this - other|
    double distance(const Mat2& other) const;
    /// max elementwise deviation of U^dagger U from the identity
    double unitarity_defect() const;
};

/// n . sigma for a (not necessarily unit) coefficient vector n.
Mat2 pauli_combination(const BlochVector& n);

using Unitary2 = Mat2;

/// Normalized two-component state of one momentum sector.
struct State2 {
    Complex up{};
    Complex down{};
};

State2 apply(const Mat2& m, const State2& s);
Complex inner(const State2& x, const State2& y);  // <x|y>

/// Ground state of d.sigma (eigenvalue -|d|), with the phase fixed so the
/// first nonzero component is real positive. Throws GapClosingError when
/// |d| is below the gap threshold.
State2 ground_state(const BlochVector& d);

/// Real expectation <s| d.sigma |s>.
double pauli_expectation(const BlochVector& d, const State2& s);

/// Sector propagator generated by the final Hamiltonian:
/// U = cos(eps_f t) I - i sin(eps_f t) (unit_d_f . sigma).
Unitary2 propagator_closed(const QuenchSetup& q, double k, double t);

/// Independent check on the closed-form propagator: fixed-step classical
/// RK4 integration of i dU/dt = (d_f . sigma) U from U(0) = I. No
/// renormalization is applied; unitarity drift stays inside the step-size
/// error budget. Requires dt <= 0.01 / eps_f(k), else StepTooLargeError.
Unitary2 propagator_ode_oracle(const QuenchSetup& q, double k, double t, double dt);

/// G_k(t) = cos(eps_f t) + i sin(eps_f t) (unit_d_i . unit_d_f).
Complex loschmidt_amplitude(const QuenchSetup& q, double k, double t);

/// Everything the charging protocol produces for one (k, t):
/// stored energy, instantaneous power, Loschmidt amplitude, survival and
/// excitation probabilities, charging-energy variance, and per-mode SNR.
struct ModeObservables {
    double k = 0.0;
    double t = 0.0;
    double delta_e = 0.0;   // energy
    double power = 0.0;     // energy^2
    Complex loschmidt{};
    double surv_prob = 1.0;
    double exc_prob = 0.0;
    double variance = 0.0;  // energy^2
    double snr = 0.0;       // dimensionless
};

/// Floor applied to sqrt(variance) in the SNR denominator so the fully
/// excited critical mode reports a large finite ratio instead of Inf.
inline constexpr double kSnrFloor = 1e-12;

ModeObservables mode_observables(const QuenchSetup& q, double k, double t);

/// Same closed forms, computed from a precomputed geometry. Hot path for
/// grid sweeps and quadrature.
ModeObservables mode_observables(const ModeGeometry& geom, double t);

}  // namespace qbat
