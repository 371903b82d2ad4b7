#include "qbat/ensemble.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "qbat/mode_dynamics.hpp"

namespace qbat {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLogFloor = 1e-30;  // floor for |G_k|^2 under the logarithm

std::vector<QuadNode> compute_gauss_legendre(int n) {
    // Newton iteration on Legendre polynomial roots.
    std::vector<QuadNode> nodes(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int j = 2; j <= n; ++j) {
                double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        // recompute p' at the converged point for the weight
        double p0 = 1.0;
        double p1 = x;
        for (int j = 2; j <= n; ++j) {
            double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        nodes[static_cast<std::size_t>(n - 1 - i)] = {x, 2.0 / ((1.0 - x * x) * dp * dp)};
    }
    return nodes;
}

}  // namespace

const std::vector<QuadNode>& gauss_legendre(int n) {
    if (n < 1) throw InvalidCountError("Gauss-Legendre order must be >= 1");
    static std::map<int, std::vector<QuadNode>> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
    return it->second;
}

namespace {

int panel_count(double t_hint, double eps_max, const QuadratureScheme& scheme) {
    double scaled = 10.0 * t_hint * eps_max / (2.0 * kPi);
    int p = scheme.panels_base;
    if (scaled > static_cast<double>(p)) p = static_cast<int>(std::ceil(scaled));
    return p;
}

/// Runs `accumulate(k, weight)` over every node of the composite rule.
template <typename F>
void for_each_quad_node(double t_hint, double eps_max, const QuadratureScheme& scheme,
                        F&& accumulate) {
    int panels = panel_count(t_hint, eps_max, scheme);
    const auto& base = gauss_legendre(scheme.nodes_per_panel);
    double width = kPi / panels;
    for (int p = 0; p < panels; ++p) {
        double a = p * width;
        double mid = a + 0.5 * width;
        double half = 0.5 * width;
        for (const QuadNode& node : base) {
            accumulate(mid + half * node.x, half * node.w);
        }
    }
}

}  // namespace

double integrate_halfbz(const std::function<double(double)>& f, double t_hint,
                        const QuadratureScheme& scheme, double eps_max) {
    double sum = 0.0;
    for_each_quad_node(t_hint, eps_max, scheme, [&](double k, double w) {
        double v = f(k);
        if (!std::isfinite(v)) {
            throw NonFiniteError("integrand is not finite at k = " + std::to_string(k));
        }
        sum += w * v;
    });
    return sum;
}

double final_band_max(const QuenchSetup& q) {
    constexpr int kScan = 512;
    double eps_max = 0.0;
    for (int n = 0; n < kScan; ++n) {
        double k = kPi * (n + 0.5) / kScan;
        double eps = evaluate_mode(q.final, k).eps;
        if (eps > eps_max) eps_max = eps;
    }
    return eps_max;
}

double plateau_weight(const QuenchSetup& q, double k) {
    ModeGeometry g = quench_geometry(q, k);
    return 0.5 * g.eps_i * g.weight_a;
}

namespace {

struct DensityAccumulator {
    double e = 0.0;
    double p = 0.0;
    double var = 0.0;
    double log_surv = 0.0;

    void add(const ModeGeometry& g, double t, double w) {
        double sn = std::sin(g.eps_f * t);
        double excitation = g.weight_a * sn * sn;
        double surv = 1.0 - excitation;
        e += w * 2.0 * g.eps_i * excitation;
        p += w * 2.0 * g.eps_i * g.eps_f * g.weight_a * std::sin(2.0 * g.eps_f * t);
        var += w * 4.0 * g.eps_i * g.eps_i * excitation * surv;
        log_surv += w * std::log(std::max(surv, kLogFloor));
        if (!std::isfinite(e) || !std::isfinite(p) || !std::isfinite(var)) {
            throw NonFiniteError("density integrand is not finite at k = " +
                                 std::to_string(g.k));
        }
    }
};

}  // namespace

DensityObservables density_observables(const QuenchSetup& q, double t,
                                       const EvaluationScheme& scheme) {
    DensityObservables out;
    out.t = t;
    DensityAccumulator acc;

    if (const auto* quad = std::get_if<QuadratureScheme>(&scheme)) {
        double eps_max = final_band_max(q);
        for_each_quad_node(t, eps_max, *quad, [&](double k, double w) {
            acc.add(quench_geometry(q, k), t, w);
        });
        // per-site normalization: sum over (k,-k) sectors / (2 pi)
        out.e_density = acc.e / (2.0 * kPi);
        out.p_density = acc.p / (2.0 * kPi);
        out.var_density = acc.var / (2.0 * kPi);
        out.rate_lambda = -acc.log_surv / kPi;
    } else {
        const auto& fin = std::get<FiniteN>(scheme);
        MomentumGrid grid = momentum_grid(fin.modes);
        double lambda_snr = 0.0;
        for (double k : grid.points) {
            ModeGeometry g = quench_geometry(q, k);
            acc.add(g, t, 1.0);
            ModeObservables m = mode_observables(g, t);
            lambda_snr += std::log1p(m.snr);
        }
        double n_sites = 2.0 * fin.modes;
        out.e_density = acc.e / n_sites;
        out.p_density = acc.p / n_sites;
        out.var_density = acc.var / n_sites;
        out.rate_lambda = -2.0 * acc.log_surv / n_sites;
        out.rate_lambda_snr = 2.0 * lambda_snr / n_sites;
    }

    out.snr_density = (out.var_density > 0.0)
                          ? out.e_density / std::sqrt(out.var_density)
                          : 0.0;
    return out;
}

SaturationObservables saturation_observables(const QuenchSetup& q,
                                             const QuadratureScheme& scheme) {
    double e_sum = 0.0;
    double var_sum = 0.0;
    for_each_quad_node(0.0, 0.0, scheme, [&](double k, double w) {
        ModeGeometry g = quench_geometry(q, k);
        double a = g.weight_a;
        e_sum += w * g.eps_i * a;
        var_sum += w * 4.0 * g.eps_i * g.eps_i * (0.5 * a - 0.375 * a * a);
        if (!std::isfinite(e_sum) || !std::isfinite(var_sum)) {
            throw NonFiniteError("saturation integrand is not finite at k = " +
                                 std::to_string(k));
        }
    });

    SaturationObservables out;
    out.e_inf = e_sum / (2.0 * kPi);
    out.var_inf = var_sum / (2.0 * kPi);
    out.snr_inf_density = (out.var_inf > 0.0) ? out.e_inf / std::sqrt(out.var_inf) : 0.0;
    return out;
}

double rate_function(const QuenchSetup& q, double t, const EvaluationScheme& scheme) {
    if (const auto* quad = std::get_if<QuadratureScheme>(&scheme)) {
        double eps_max = final_band_max(q);
        double integral = integrate_halfbz(
            [&](double k) {
                ModeGeometry g = quench_geometry(q, k);
                double sn = std::sin(g.eps_f * t);
                double surv = 1.0 - g.weight_a * sn * sn;
                return std::log(std::max(surv, kLogFloor));
            },
            t, *quad, eps_max);
        return -integral / kPi;
    }
    const auto& fin = std::get<FiniteN>(scheme);
    MomentumGrid grid = momentum_grid(fin.modes);
    double sum = 0.0;
    for (double k : grid.points) {
        ModeGeometry g = quench_geometry(q, k);
        double sn = std::sin(g.eps_f * t);
        double surv = 1.0 - g.weight_a * sn * sn;
        sum += std::log(std::max(surv, kLogFloor));
    }
    return -2.0 * sum / (2.0 * fin.modes);
}

double snr_rate_function(const QuenchSetup& q, double t, const FiniteN& scheme) {
    MomentumGrid grid = momentum_grid(scheme.modes);
    double sum = 0.0;
    for (double k : grid.points) {
        sum += std::log1p(mode_observables(quench_geometry(q, k), t).snr);
    }
    return 2.0 * sum / (2.0 * scheme.modes);
}

}  // namespace qbat
