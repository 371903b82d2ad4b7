#pragma once

#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "qbat/bloch.hpp"

namespace qbat {

/// Finite chain of N = 2*modes sites: momentum sums over the half-BZ
/// midpoint grid with `modes` points.
struct FiniteN {
    int modes = 2000;
};

/// Thermodynamic limit: composite Gauss-Legendre quadrature over (0, pi).
/// The panel count grows with the time hint so oscillatory integrands stay
/// resolved: P = max(panels_base, ceil(10 t eps_max / (2 pi))).
struct QuadratureScheme {
    int panels_base = 64;
    int nodes_per_panel = 16;
};

using EvaluationScheme = std::variant<FiniteN, QuadratureScheme>;

/// Gauss-Legendre abscissas/weights on [-1, 1].
struct QuadNode {
    double x;
    double w;
};
const std::vector<QuadNode>& gauss_legendre(int n);

/// Integrates f over the half Brillouin zone (0, pi) with the composite
/// rule described on QuadratureScheme. eps_max is the largest oscillation
/// frequency present in f (0 for non-oscillatory integrands). Throws
/// NonFiniteError if f evaluates to NaN/Inf on any node.
double integrate_halfbz(const std::function<double(double)>& f, double t_hint,
                        const QuadratureScheme& scheme, double eps_max = 0.0);

/// Largest final-band energy over a dense momentum scan; used to scale
/// oscillatory panel counts.
double final_band_max(const QuenchSetup& q);

/// Intensive (per-site) observables at one time.
struct DensityObservables {
    double t = 0.0;
    double e_density = 0.0;    // energy per site
    double p_density = 0.0;    // energy^2 per site
    double var_density = 0.0;
    double snr_density = 0.0;
    double rate_lambda = 0.0;
    /// Defined only on finite grids; the thermodynamic-limit counterpart is
    /// not a well-posed quantity.
    std::optional<double> rate_lambda_snr;
};

DensityObservables density_observables(const QuenchSetup& q, double t,
                                       const EvaluationScheme& scheme);

/// Long-time (dephased) values: time averages sin^2 -> 1/2, sin^4 -> 3/8.
struct SaturationObservables {
    double e_inf = 0.0;
    double var_inf = 0.0;
    double snr_inf_density = 0.0;
};

SaturationObservables saturation_observables(const QuenchSetup& q,
                                             const QuadratureScheme& scheme);

/// Mode-resolved weight of the saturation plateau, e_inf = (1/pi) int W dk.
double plateau_weight(const QuenchSetup& q, double k);

/// Loschmidt rate function. Quadrature: -(1/pi) int ln|G_k|^2 dk;
/// finite N: -(2/N) sum ln|G_k|^2 over the half-BZ grid, N = 2 modes.
/// |G_k|^2 is floored at 1e-30 before the logarithm.
double rate_function(const QuenchSetup& q, double t, const EvaluationScheme& scheme);

/// SNR analogue of the rate function, (2/N) sum ln(1 + snr_k) over the
/// half-BZ grid. Defined for finite chains only.
double snr_rate_function(const QuenchSetup& q, double t, const FiniteN& scheme);

}  // namespace qbat
