#include "qbat/mode_dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace qbat {

namespace {
constexpr Complex kI{0.0, 1.0};
}

Mat2 Mat2::adjoint() const {
    return {std::conj(a), std::conj(c), std::conj(b), std::conj(d)};
}

Mat2 operator+(const Mat2& x, const Mat2& y) {
    return {x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d};
}

Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
            x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

Mat2 operator*(Complex s, const Mat2& x) {
    return {s * x.a, s * x.b, s * x.c, s * x.d};
}

double Mat2::distance(const Mat2& other) const {
    return std::max({std::abs(a - other.a), std::abs(b - other.b),
                     std::abs(c - other.c), std::abs(d - other.d)});
}

double Mat2::unitarity_defect() const {
    return (adjoint() * *this).distance(Mat2::identity());
}

Mat2 pauli_combination(const BlochVector& n) {
    // n1 sigma_x + n2 sigma_y + n3 sigma_z
    return {Complex{n.d3, 0.0}, Complex{n.d1, -n.d2},
            Complex{n.d1, n.d2}, Complex{-n.d3, 0.0}};
}

State2 apply(const Mat2& m, const State2& s) {
    return {m.a * s.up + m.b * s.down, m.c * s.up + m.d * s.down};
}

Complex inner(const State2& x, const State2& y) {
    return std::conj(x.up) * y.up + std::conj(x.down) * y.down;
}

State2 ground_state(const BlochVector& d) {
    double eps = d.norm();
    if (eps < kGapThreshold) throw GapClosingError(0.0);

    // Two algebraically equivalent eigenvectors of d.sigma with eigenvalue
    // -eps; pick the branch whose normalization stays away from zero.
    State2 s;
    if (d.d3 <= 0.0) {
        double n = std::sqrt(2.0 * eps * (eps - d.d3));
        s = {Complex{(d.d3 - eps) / n, 0.0}, Complex{d.d1 / n, d.d2 / n}};
    } else {
        double n = std::sqrt(2.0 * eps * (eps + d.d3));
        s = {Complex{-d.d1 / n, d.d2 / n}, Complex{(d.d3 + eps) / n, 0.0}};
    }

    // Phase convention: first nonzero component real positive.
    Complex lead = (std::abs(s.up) > 0.0) ? s.up : s.down;
    Complex phase = std::conj(lead) / std::abs(lead);
    return {phase * s.up, phase * s.down};
}

double pauli_expectation(const BlochVector& d, const State2& s) {
    State2 hs = apply(pauli_combination(d), s);
    return inner(s, hs).real();
}

Unitary2 propagator_closed(const QuenchSetup& q, double k, double t) {
    ModeEval mf = evaluate_mode(q.final, k);
    double phase = mf.eps * t;
    Complex cos_part{std::cos(phase), 0.0};
    return cos_part * Mat2::identity() +
           (-kI * std::sin(phase)) * pauli_combination(mf.unit_d);
}

Unitary2 propagator_ode_oracle(const QuenchSetup& q, double k, double t, double dt) {
    ModeEval mf = evaluate_mode(q.final, k);
    if (!(dt > 0.0) || dt > 0.01 / mf.eps) {
        throw StepTooLargeError("RK4 step must satisfy 0 < dt <= 0.01/eps_f");
    }

    Mat2 h = pauli_combination(mf.d);
    auto rhs = [&h](const Mat2& u) { return (-kI) * (h * u); };

    Mat2 u = Mat2::identity();
    if (t <= 0.0) return u;

    auto steps = static_cast<long>(std::ceil(t / dt));
    double h_step = t / static_cast<double>(steps);
    for (long i = 0; i < steps; ++i) {
        Mat2 k1 = rhs(u);
        Mat2 k2 = rhs(u + Complex{0.5 * h_step, 0.0} * k1);
        Mat2 k3 = rhs(u + Complex{0.5 * h_step, 0.0} * k2);
        Mat2 k4 = rhs(u + Complex{h_step, 0.0} * k3);
        u = u + Complex{h_step / 6.0, 0.0} *
                    (k1 + Complex{2.0, 0.0} * k2 + Complex{2.0, 0.0} * k3 + k4);
    }
    return u;
}

Complex loschmidt_amplitude(const QuenchSetup& q, double k, double t) {
    ModeGeometry g = quench_geometry(q, k);
    double phase = g.eps_f * t;
    return {std::cos(phase), std::sin(phase) * g.cos_theta};
}

ModeObservables mode_observables(const ModeGeometry& g, double t) {
    double phase = g.eps_f * t;
    double sc = std::sin(phase);
    double s2 = sc * sc;
    double excitation = g.weight_a * s2;  // A sin^2(eps_f t), in [0, 1]

    ModeObservables out;
    out.k = g.k;
    out.t = t;
    out.exc_prob = excitation;
    out.surv_prob = 1.0 - excitation;
    out.loschmidt = {std::cos(phase), sc * g.cos_theta};
    out.delta_e = 2.0 * g.eps_i * excitation;
    out.power = 2.0 * g.eps_i * g.eps_f * g.weight_a * std::sin(2.0 * phase);
    out.variance = 4.0 * g.eps_i * g.eps_i * excitation * (1.0 - excitation);
    out.snr = out.delta_e / std::max(std::sqrt(std::max(out.variance, 0.0)), kSnrFloor);
    return out;
}

ModeObservables mode_observables(const QuenchSetup& q, double k, double t) {
    return mode_observables(quench_geometry(q, k), t);
}

}  // namespace qbat
