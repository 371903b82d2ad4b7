#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qbat/bloch.hpp"

namespace qbat {

/// Critical momentum plus the odd ladder of critical times
/// t_c^(n) = (2n+1) pi / (2 eps_f(k*)).
struct CriticalData {
    double k_star = 0.0;
    double eps_f_star = 0.0;
    std::vector<double> t_c;
};

/// Momentum where the initial and final unit Bloch vectors are orthogonal,
/// if one exists in (0, pi). For TFIM pairs this is the closed form
/// arccos[(1 + g_i g_f)/(g_i + g_f)]; boundary arguments of magnitude
/// exactly 1 count as no-DQPT (the endpoint momenta carry zero weight).
/// Generic specs fall back to a sign scan plus bisection on cos_theta(k).
std::optional<double> critical_momentum(const QuenchSetup& q);

/// Result of the generic root scan: smallest bracketed root of cos_theta
/// and the number of sign changes seen (multi-critical models have more
/// than one; re-scan subintervals to enumerate them).
struct MomentumRootScan {
    std::optional<double> k_star;
    int sign_changes = 0;
};

/// Sign scan over 1024 intervals of (0, pi) followed by bisection to
/// 1e-12 in k. Works for any spec pair; also the independent cross-check
/// for the TFIM closed form.
MomentumRootScan critical_momentum_scan(const QuenchSetup& q);

/// Throws NoDqptError when critical_momentum is empty.
CriticalData critical_times(const QuenchSetup& q, int n_max);

/// Scans TFIM quenches g_i -> g_f over [lo, hi] (inclusive, `steps` samples)
/// for DQPT existence and refines every existence flip by bisection to
/// 1e-10. Returns the boundary field values, in increasing order.
std::vector<double> onset_scan(double g_i, double lo, double hi, int steps);

/// Kink detector for a uniformly sampled rate function: flags sample i when
/// the forward-difference slope jumps by more than threshold_factor times
/// the median jump and lambda_i is the maximum over a `window`-sample
/// neighborhood. Needs at least 16 samples.
std::vector<double> detect_cusps(std::span<const double> t,
                                 std::span<const double> lambda,
                                 double threshold_factor = 5.0, int window = 5);

}  // namespace qbat
