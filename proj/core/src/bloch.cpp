#include "qbat/bloch.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

namespace qbat {

double BlochVector::norm() const {
    return std::sqrt(d1 * d1 + d2 * d2 + d3 * d3);
}

bool BlochVector::finite() const {
    return std::isfinite(d1) && std::isfinite(d2) && std::isfinite(d3);
}

double dot(const BlochVector& a, const BlochVector& b) {
    return a.d1 * b.d1 + a.d2 * b.d2 + a.d3 * b.d3;
}

BlochVector operator*(double s, const BlochVector& v) {
    return {s * v.d1, s * v.d2, s * v.d3};
}

TwoBandSpec::TwoBandSpec(ScalarFn d0, VectorFn d, ParamTable params, std::string kind)
    : d0_(std::move(d0)), d_(std::move(d)), params_(std::move(params)), kind_(std::move(kind)) {}

std::optional<double> TwoBandSpec::param(const std::string& name) const {
    auto it = params_.find(name);
    if (it == params_.end()) return std::nullopt;
    return it->second;
}

TwoBandSpec tfim_spec(double g) {
    return TwoBandSpec(
        [](double) { return 0.0; },
        [g](double k) {
            return BlochVector{0.0, 2.0 * std::sin(k), 2.0 * (g - std::cos(k))};
        },
        ParamTable{{"g", g}}, "tfim");
}

QuenchSetup tfim_quench(double g_i, double g_f) {
    return QuenchSetup{tfim_spec(g_i), tfim_spec(g_f)};
}

ModeEval evaluate_mode(const TwoBandSpec& spec, double k) {
    BlochVector d = spec.d(k);
    if (!d.finite()) {
        throw NonFiniteError("d-vector is not finite at k = " + std::to_string(k));
    }
    double eps = d.norm();
    if (eps < kGapThreshold) throw GapClosingError(k);
    return ModeEval{d, eps, (1.0 / eps) * d};
}

ModeGeometry quench_geometry(const QuenchSetup& q, double k) {
    ModeEval mi = evaluate_mode(q.initial, k);
    ModeEval mf = evaluate_mode(q.final, k);
    double c = std::clamp(dot(mi.unit_d, mf.unit_d), -1.0, 1.0);
    return ModeGeometry{k, mi.eps, mf.eps, c, 1.0 - c * c};
}

MomentumGrid momentum_grid(int m) {
    if (m < 1) throw InvalidCountError("momentum grid needs at least one mode");
    MomentumGrid grid;
    grid.count = m;
    grid.points.reserve(static_cast<std::size_t>(m));
    for (int n = 0; n < m; ++n) {
        grid.points.push_back(std::numbers::pi * (n + 0.5) / m);
    }
    return grid;
}

}  // namespace qbat
