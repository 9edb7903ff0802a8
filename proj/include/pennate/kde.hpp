#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "pennate/errors.hpp"
#include "pennate/image.hpp"
#include "pennate/vesselness.hpp"

namespace pennate {

/// Kernel density over an angle window, evaluated on a 0.1-degree grid and
/// normalized so the trapezoid integral over the grid is 1.
struct AngleDensity {
    std::vector<double> grid_deg;
    std::vector<double> density;
    double bandwidth_deg = 0.0;

    double trapezoid_integral() const {
        double acc = 0.0;
        for (size_t i = 1; i < grid_deg.size(); ++i)
            acc += 0.5 * (density[i - 1] + density[i]) * (grid_deg[i] - grid_deg[i - 1]);
        return acc;
    }
};

struct KdeMode {
    double angle_deg = 0.0;
    AngleDensity density;
};

namespace detail {

inline double weighted_quantile(std::vector<std::pair<double, double>>& sorted_vw,
                                double total_weight, double q) {
    const double target = q * total_weight;
    double cum = 0.0;
    for (const auto& [v, w] : sorted_vw) {
        cum += w;
        if (cum >= target) return v;
    }
    return sorted_vw.back().first;
}

} // namespace detail

/// Gaussian-kernel density mode of weighted angle samples. Bandwidth follows
/// Silverman's rule, 1.06 * min(sd, IQR/1.34) * n^(-1/5), floored at 0.5
/// degrees so zero-spread samples still produce a usable kernel. Ties at the
/// maximum resolve to the smallest grid angle.
inline KdeMode kde_mode(const std::vector<double>& angles_deg,
                        const std::vector<double>& weights,
                        AngleWindow window = kFascicleWindow) {
    if (angles_deg.size() != weights.size())
        throw ParameterError("kde_mode: sample/weight size mismatch");
    if (angles_deg.size() < 10)
        throw InsufficientDataError("kde_mode: need at least 10 samples");
    const double total_w = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (total_w <= 0.0)
        throw InsufficientDataError("kde_mode: total weight must be positive");
    for (double w : weights)
        if (w < 0.0) throw ParameterError("kde_mode: negative weight");

    const double n = static_cast<double>(angles_deg.size());
    double mean = 0.0;
    for (size_t i = 0; i < angles_deg.size(); ++i) mean += weights[i] * angles_deg[i];
    mean /= total_w;
    double var = 0.0;
    for (size_t i = 0; i < angles_deg.size(); ++i)
        var += weights[i] * (angles_deg[i] - mean) * (angles_deg[i] - mean);
    var /= total_w;
    const double sd = std::sqrt(std::max(var, 0.0));

    std::vector<std::pair<double, double>> vw(angles_deg.size());
    for (size_t i = 0; i < angles_deg.size(); ++i) vw[i] = {angles_deg[i], weights[i]};
    std::sort(vw.begin(), vw.end());
    const double iqr = detail::weighted_quantile(vw, total_w, 0.75) -
                       detail::weighted_quantile(vw, total_w, 0.25);

    double bw = 1.06 * std::min(sd, iqr / 1.34) * std::pow(n, -0.2);
    bw = std::max(bw, 0.5);

    KdeMode out;
    out.density.bandwidth_deg = bw;
    const int steps = static_cast<int>(std::round((window.hi - window.lo) / 0.1));
    out.density.grid_deg.resize(static_cast<size_t>(steps) + 1);
    out.density.density.assign(static_cast<size_t>(steps) + 1, 0.0);
    const double inv_2bw2 = 1.0 / (2.0 * bw * bw);
    for (int g = 0; g <= steps; ++g) {
        const double angle = window.lo + 0.1 * g;
        out.density.grid_deg[static_cast<size_t>(g)] = angle;
        double acc = 0.0;
        for (size_t i = 0; i < vw.size(); ++i) {
            const double d = angle - vw[i].first;
            acc += vw[i].second * std::exp(-d * d * inv_2bw2);
        }
        out.density.density[static_cast<size_t>(g)] = acc;
    }

    const double integral = out.density.trapezoid_integral();
    if (integral <= 0.0)
        throw InsufficientDataError("kde_mode: no density mass inside the window");
    for (double& d : out.density.density) d /= integral;

    size_t best = 0;
    for (size_t g = 1; g < out.density.density.size(); ++g)
        if (out.density.density[g] > out.density.density[best]) best = g;
    out.angle_deg = out.density.grid_deg[best];
    return out;
}

} // namespace pennate
