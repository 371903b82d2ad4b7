#include "qbat/dqpt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qbat {

namespace {

constexpr double kPi = std::numbers::pi;

double cos_theta_at(const QuenchSetup& q, double k) {
    return quench_geometry(q, k).cos_theta;
}

std::optional<double> tfim_closed_form(double g_i, double g_f) {
    double denom = g_i + g_f;
    if (denom == 0.0) return std::nullopt;
    double arg = (1.0 + g_i * g_f) / denom;
    // |arg| == 1 maps to k* in {0, pi}: outside the open momentum domain.
    if (!(std::abs(arg) < 1.0)) return std::nullopt;
    return std::acos(arg);
}

}  // namespace

MomentumRootScan critical_momentum_scan(const QuenchSetup& q) {
    constexpr int kIntervals = 1024;
    constexpr double kTol = 1e-12;

    MomentumRootScan out;
    // Stay strictly inside (0, pi); the endpoints are excluded by domain.
    double lo = kPi / (2.0 * kIntervals);
    double hi = kPi - kPi / (2.0 * kIntervals);
    double step = (hi - lo) / kIntervals;

    double prev_k = lo;
    double prev_v = cos_theta_at(q, prev_k);
    for (int i = 1; i <= kIntervals; ++i) {
        double k = lo + i * step;
        double v = cos_theta_at(q, k);
        if ((prev_v < 0.0) != (v < 0.0)) {
            ++out.sign_changes;
            if (!out.k_star) {
                double a = prev_k;
                double b = k;
                double fa = prev_v;
                while (b - a > kTol) {
                    double m = 0.5 * (a + b);
                    double fm = cos_theta_at(q, m);
                    if ((fa < 0.0) != (fm < 0.0)) {
                        b = m;
                    } else {
                        a = m;
                        fa = fm;
                    }
                }
                out.k_star = 0.5 * (a + b);
            }
        }
        prev_k = k;
        prev_v = v;
    }
    return out;
}

std::optional<double> critical_momentum(const QuenchSetup& q) {
    if (q.initial.kind() == "tfim" && q.final.kind() == "tfim") {
        auto gi = q.initial.param("g");
        auto gf = q.final.param("g");
        if (gi && gf) return tfim_closed_form(*gi, *gf);
    }
    return critical_momentum_scan(q).k_star;
}

CriticalData critical_times(const QuenchSetup& q, int n_max) {
    auto k_star = critical_momentum(q);
    if (!k_star) throw NoDqptError("no critical momentum for this quench");

    CriticalData out;
    out.k_star = *k_star;
    out.eps_f_star = evaluate_mode(q.final, *k_star).eps;
    out.t_c.reserve(static_cast<std::size_t>(n_max) + 1);
    double base = kPi / (2.0 * out.eps_f_star);
    for (int n = 0; n <= n_max; ++n) {
        out.t_c.push_back((2.0 * n + 1.0) * base);
    }
    return out;
}

std::vector<double> onset_scan(double g_i, double lo, double hi, int steps) {
    if (steps < 2) throw InvalidCountError("onset scan needs at least 2 steps");

    auto has_dqpt = [g_i](double g_f) {
        return tfim_closed_form(g_i, g_f).has_value();
    };

    std::vector<double> boundaries;
    double step = (hi - lo) / (steps - 1);
    double prev_g = lo;
    bool prev_flag = has_dqpt(prev_g);
    for (int i = 1; i < steps; ++i) {
        double g = lo + i * step;
        bool flag = has_dqpt(g);
        if (flag != prev_flag) {
            double a = prev_g;
            double b = g;
            bool fa = prev_flag;
            while (b - a > 1e-10) {
                double m = 0.5 * (a + b);
                if (has_dqpt(m) == fa) {
                    a = m;
                } else {
                    b = m;
                }
            }
            boundaries.push_back(0.5 * (a + b));
        }
        prev_g = g;
        prev_flag = flag;
    }
    return boundaries;
}

std::vector<double> detect_cusps(std::span<const double> t,
                                 std::span<const double> lambda,
                                 double threshold_factor, int window) {
    std::size_t n = t.size();
    if (lambda.size() != n) throw InvalidCountError("t and lambda lengths differ");
    if (n < 16) throw TooFewSamplesError("cusp detection needs at least 16 samples");

    // forward-difference slopes; the spacing cancels out of the threshold
    std::vector<double> slope(n - 1);
    double dt = t[1] - t[0];
    for (std::size_t i = 0; i + 1 < n; ++i) slope[i] = (lambda[i + 1] - lambda[i]) / dt;

    std::vector<double> jump(n - 2);
    for (std::size_t i = 0; i + 2 < n; ++i) jump[i] = std::abs(slope[i + 1] - slope[i]);

    std::vector<double> sorted = jump;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    double median = sorted[sorted.size() / 2];
    double threshold = threshold_factor * median;

    int half = window / 2;
    std::vector<double> cusps;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (!(jump[i - 1] > threshold)) continue;
        if (i < static_cast<std::size_t>(half) || i + half >= n) continue;
        bool is_max = true;
        for (int j = -half; j <= half; ++j) {
            if (lambda[i + j] > lambda[i]) {
                is_max = false;
                break;
            }
        }
        if (is_max) cusps.push_back(t[i]);
    }
    return cusps;
}

}  // namespace qbat
