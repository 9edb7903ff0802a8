#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "pennate/errors.hpp"
#include "pennate/image.hpp"

namespace pennate {

/// Inclusive angular window in degrees (y-up convention).
struct AngleWindow {
    double lo = 15.0;
    double hi = 70.0;

    bool contains(double deg) const { return deg >= lo && deg <= hi; }
};

constexpr AngleWindow kFascicleWindow{15.0, 70.0};

/// Scales used when enhancing fascicles (thin tubes).
inline const std::vector<double>& fascicle_scales() {
    static const std::vector<double> s{1.0, 1.5, 2.0, 3.0};
    return s;
}

/// Scales used when reinforcing aponeuroses (thick bands).
inline const std::vector<double>& aponeurosis_scales() {
    static const std::vector<double> s{2.0, 4.0, 6.0};
    return s;
}

struct VesselnessResult {
    int width = 0;
    int height = 0;
    std::vector<double> response;        // in [0, 1]
    std::vector<double> orientation_deg; // ridge direction, (-90, 90]
    std::vector<double> scale;           // winning sigma

    GrayImage response_image() const {
        GrayImage img(width, height);
        img.data = response;
        return img;
    }
};

namespace detail {

struct Hessian2x2 {
    std::vector<double> xx, yy, xy;
};

/// sigma^2-normalized Hessian of the Gaussian-smoothed image, central
/// differences with replicated edges.
inline Hessian2x2 scaled_hessian(const GrayImage& img, double sigma) {
    const GrayImage g = convolve_gaussian(img, sigma);
    const double s2 = sigma * sigma;
    const int w = g.width, h = g.height;
    Hessian2x2 out;
    out.xx.resize(g.size());
    out.yy.resize(g.size());
    out.xy.resize(g.size());
    auto v = [&](int x, int y) {
        return g.at(clampi(x, 0, w - 1), clampi(y, 0, h - 1));
    };
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const size_t i = static_cast<size_t>(y) * w + x;
            out.xx[i] = s2 * (v(x + 1, y) - 2.0 * v(x, y) + v(x - 1, y));
            out.yy[i] = s2 * (v(x, y + 1) - 2.0 * v(x, y) + v(x, y - 1));
            out.xy[i] = s2 * 0.25 *
                        (v(x + 1, y + 1) - v(x + 1, y - 1) - v(x - 1, y + 1) + v(x - 1, y - 1));
        }
    return out;
}

/// Angle of the eigenvector for the smaller-|eigenvalue| of [a b; b c],
/// reported y-up and folded into (-90, 90].
inline double ridge_orientation_deg(double a, double b, double c, double lam1) {
    const double v1x = lam1 - c, v1y = b;
    const double v2x = b, v2y = lam1 - a;
    double vx, vy;
    if (v1x * v1x + v1y * v1y >= v2x * v2x + v2y * v2y) {
        vx = v1x;
        vy = v1y;
    } else {
        vx = v2x;
        vy = v2y;
    }
    if (vx == 0.0 && vy == 0.0) return 0.0;
    double deg = rad2deg(std::atan2(-vy, vx));
    if (deg > 90.0) deg -= 180.0;
    if (deg <= -90.0) deg += 180.0;
    return deg;
}

} // namespace detail

/// Multiscale bright-ridge vesselness. Per scale the response follows
/// Frangi's 2-D formula with beta = 0.5 and the noise scale c set to half the
/// maximum Hessian Frobenius norm at that scale; pixels keep the strongest
/// response over all scales. When an angular window is given, responses whose
/// ridge orientation falls outside it are set to zero.
inline VesselnessResult frangi_vesselness(const GrayImage& img,
                                          const std::vector<double>& scales,
                                          std::optional<AngleWindow> window) {
    if (scales.empty())
        throw ParameterError("frangi_vesselness: empty scale list");
    for (double s : scales)
        if (s <= 0.0) throw ParameterError("frangi_vesselness: scales must be > 0");

    constexpr double beta = 0.5;
    VesselnessResult res;
    res.width = img.width;
    res.height = img.height;
    res.response.assign(img.size(), 0.0);
    res.orientation_deg.assign(img.size(), 0.0);
    res.scale.assign(img.size(), scales.front());

    for (double sigma : scales) {
        const auto hess = detail::scaled_hessian(img, sigma);

        double max_s2 = 0.0;
        for (size_t i = 0; i < img.size(); ++i) {
            const double s2 = hess.xx[i] * hess.xx[i] + 2.0 * hess.xy[i] * hess.xy[i] +
                              hess.yy[i] * hess.yy[i];
            max_s2 = std::max(max_s2, s2);
        }
        if (max_s2 == 0.0) continue; // flat at this scale
        const double c2 = 0.25 * max_s2; // c = 0.5 * max Frobenius norm

        for (size_t i = 0; i < img.size(); ++i) {
            const double a = hess.xx[i], b = hess.xy[i], c = hess.yy[i];
            const double mean = 0.5 * (a + c);
            const double root = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
            double lam1 = mean + root, lam2 = mean - root;
            if (std::abs(lam1) > std::abs(lam2)) std::swap(lam1, lam2);
            if (lam2 >= 0.0) continue; // not a bright ridge
            const double rb = lam1 / lam2;
            const double s2 = lam1 * lam1 + lam2 * lam2;
            const double v = std::exp(-rb * rb / (2.0 * beta * beta)) *
                             (1.0 - std::exp(-s2 / (2.0 * c2)));
            if (v > res.response[i]) {
                res.response[i] = v;
                res.orientation_deg[i] = detail::ridge_orientation_deg(a, b, c, lam1);
                res.scale[i] = sigma;
            }
        }
    }

    if (window) {
        for (size_t i = 0; i < img.size(); ++i)
            if (!window->contains(res.orientation_deg[i])) res.response[i] = 0.0;
    }
    return res;
}

} // namespace pennate
