#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qbat/errors.hpp"

namespace qbat {

/// Threshold below which a band energy counts as a gap closing.
inline constexpr double kGapThreshold = 1e-12;

/// The coefficient vector d(k) of the Pauli part of a 2x2 Bloch Hamiltonian,
/// in energy units.
struct BlochVector {
    double d1 = 0.0;
    double d2 = 0.0;
    double d3 = 0.0;

    double norm() const;
    bool finite() const;
};

double dot(const BlochVector& a, const BlochVector& b);
BlochVector operator*(double s, const BlochVector& v);

using ParamTable = std::map<std::string, double>;

/// A two-band Bloch Hamiltonian H(k) = d0(k) I + d(k).sigma, given as
/// momentum-resolved callables. Immutable after construction; evaluation is
/// pure and thread-safe. The scalar shift d0 is stored but enters none of
/// the dynamics (it drops out of every energy difference).
class TwoBandSpec {
public:
    using ScalarFn = std::function<double(double)>;
    using VectorFn = std::function<BlochVector(double)>;

    TwoBandSpec(ScalarFn d0, VectorFn d, ParamTable params, std::string kind = "custom");

    double d0(double k) const { return d0_(k); }
    BlochVector d(double k) const { return d_(k); }

    const ParamTable& params() const { return params_; }
    std::optional<double> param(const std::string& name) const;

    /// Model family tag ("tfim" for specs built by tfim_spec, else "custom").
    const std::string& kind() const { return kind_; }

private:
    ScalarFn d0_;
    VectorFn d_;
    ParamTable params_;
    std::string kind_;
};

/// Transverse-field Ising chain at field g:
/// d(k) = (0, 2 sin k, 2(g - cos k)), d0(k) = 0.
TwoBandSpec tfim_spec(double g);

/// A sudden quench from the spectrum of `initial` to evolution under `final`.
struct QuenchSetup {
    TwoBandSpec initial;
    TwoBandSpec final;
};

QuenchSetup tfim_quench(double g_i, double g_f);

/// d(k), band energy eps = |d(k)| and the unit Bloch vector at one momentum.
struct ModeEval {
    BlochVector d;
    double eps;
    BlochVector unit_d;
};

/// Evaluates one spec at momentum k in (0, pi).
/// Throws GapClosingError when eps < kGapThreshold, NonFiniteError when the
/// d-vector has NaN/Inf components.
ModeEval evaluate_mode(const TwoBandSpec& spec, double k);

/// Per-mode geometry of a quench: the two band energies, the Bloch-vector
/// overlap cos_theta = unit_d_i . unit_d_f and the charging weight
/// A = 1 - cos_theta^2.
struct ModeGeometry {
    double k;
    double eps_i;
    double eps_f;
    double cos_theta;  // in [-1, 1]
    double weight_a;   // in [0, 1]
};

ModeGeometry quench_geometry(const QuenchSetup& q, double k);

/// Half-Brillouin-zone midpoint grid: k_n = pi (n + 1/2) / M, n = 0..M-1.
/// Endpoints 0 and pi are never sampled.
struct MomentumGrid {
    int count = 0;
    std::vector<double> points;
};

MomentumGrid momentum_grid(int m);

}  // namespace qbat
