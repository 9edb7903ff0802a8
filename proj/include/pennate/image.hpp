#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <queue>
#include <utility>
#include <vector>

#include "pennate/errors.hpp"

namespace pennate {

constexpr double kDegPerRad = 180.0 / std::numbers::pi;

inline double deg2rad(double deg) { return deg / kDegPerRad; }
inline double rad2deg(double rad) { return rad * kDegPerRad; }

/// 2-D grayscale raster, row-major. Values are nominally in [0, 255] but
/// stored as doubles: intermediate results (enhancement, filter responses)
/// may leave the byte range.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<double> data;

    GrayImage() = default;

    GrayImage(int w, int h, double fill = 0.0) : width(w), height(h) {
        if (w < 1 || h < 1)
            throw ParameterError("GrayImage: width and height must be >= 1");
        data.assign(static_cast<size_t>(w) * h, fill);
    }

    double& at(int x, int y) { return data[static_cast<size_t>(y) * width + x]; }
    double at(int x, int y) const { return data[static_cast<size_t>(y) * width + x]; }

    bool inside(int x, int y) const {
        return x >= 0 && x < width && y >= 0 && y < height;
    }

    /// Value at (x, y), 0 outside the raster.
    double at_or_zero(int x, int y) const { return inside(x, y) ? at(x, y) : 0.0; }

    size_t size() const { return data.size(); }

    double sum() const {
        double s = 0.0;
        for (double v : data) s += v;
        return s;
    }

    double mean() const { return data.empty() ? 0.0 : sum() / static_cast<double>(data.size()); }

    std::pair<double, double> minmax() const {
        auto [lo, hi] = std::minmax_element(data.begin(), data.end());
        return {*lo, *hi};
    }
};

/// Axis-aligned rectangle, half-open: x in [x0, x1), y in [y0, y1).
struct Rect {
    int x0 = 0, y0 = 0, x1 = 0, y1 = 0;

    int width() const { return x1 - x0; }
    int height() const { return y1 - y0; }
    bool contains(int x, int y) const { return x >= x0 && x < x1 && y >= y0 && y < y1; }
    bool operator==(const Rect&) const = default;
};

inline GrayImage crop(const GrayImage& img, const Rect& r) {
    if (r.x0 < 0 || r.y0 < 0 || r.x1 > img.width || r.y1 > img.height ||
        r.width() < 1 || r.height() < 1)
        throw ParameterError("crop: rectangle outside image");
    GrayImage out(r.width(), r.height());
    for (int y = r.y0; y < r.y1; ++y)
        for (int x = r.x0; x < r.x1; ++x)
            out.at(x - r.x0, y - r.y0) = img.at(x, y);
    return out;
}

/// Straight line y = slope*x + intercept in image coordinates (rows grow
/// downward). Angles are reported in the y-up convention: a line that rises
/// left-to-right on screen (dy < 0 per +dx) has a positive angle.
struct LineFit {
    double slope = 0.0;     // dy/dx in image coordinates
    double intercept = 0.0; // pixels
    double angle_deg = 0.0; // -atan(slope), degrees, in [-90, 90]

    LineFit() = default;
    LineFit(double s, double b)
        : slope(s), intercept(b), angle_deg(rad2deg(std::atan(-s))) {}

    double y_at(double x) const { return slope * x + intercept; }
};

struct GradientField {
    int width = 0;
    int height = 0;
    std::vector<double> gx;
    std::vector<double> gy;
    std::vector<double> magnitude;
};

namespace detail {

inline int clampi(int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); }

/// 1-D convolution along rows or columns with edge replication.
inline GrayImage convolve_separable_1d(const GrayImage& img,
                                       const std::vector<double>& kernel,
                                       bool horizontal) {
    const int radius = static_cast<int>(kernel.size() / 2);
    GrayImage out(img.width, img.height);
    if (horizontal) {
        for (int y = 0; y < img.height; ++y)
            for (int x = 0; x < img.width; ++x) {
                double acc = 0.0;
                for (int k = -radius; k <= radius; ++k)
                    acc += kernel[k + radius] * img.at(clampi(x + k, 0, img.width - 1), y);
                out.at(x, y) = acc;
            }
    } else {
        for (int y = 0; y < img.height; ++y)
            for (int x = 0; x < img.width; ++x) {
                double acc = 0.0;
                for (int k = -radius; k <= radius; ++k)
                    acc += kernel[k + radius] * img.at(x, clampi(y + k, 0, img.height - 1));
                out.at(x, y) = acc;
            }
    }
    return out;
}

inline std::vector<double> gaussian_kernel(double sigma) {
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> k(2 * radius + 1);
    double total = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        k[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));
        total += k[i + radius];
    }
    for (double& v : k) v /= total;
    return k;
}

} // namespace detail

/// Separable Gaussian smoothing, kernel radius ceil(3*sigma), edges replicated.
inline GrayImage convolve_gaussian(const GrayImage& img, double sigma) {
    if (sigma <= 0.0)
        throw ParameterError("convolve_gaussian: sigma must be > 0");
    const auto kernel = detail::gaussian_kernel(sigma);
    return detail::convolve_separable_1d(
        detail::convolve_separable_1d(img, kernel, true), kernel, false);
}

/// 3x3 Sobel gradients; border pixels get zero gradient.
inline GradientField sobel_gradients(const GrayImage& img) {
    if (img.width < 3 || img.height < 3)
        throw ParameterError("sobel_gradients: image must be at least 3x3");
    GradientField g;
    g.width = img.width;
    g.height = img.height;
    g.gx.assign(img.size(), 0.0);
    g.gy.assign(img.size(), 0.0);
    g.magnitude.assign(img.size(), 0.0);
    for (int y = 1; y < img.height - 1; ++y) {
        for (int x = 1; x < img.width - 1; ++x) {
            const double gx = (img.at(x + 1, y - 1) - img.at(x - 1, y - 1)) +
                              2.0 * (img.at(x + 1, y) - img.at(x - 1, y)) +
                              (img.at(x + 1, y + 1) - img.at(x - 1, y + 1));
            const double gy = (img.at(x - 1, y + 1) - img.at(x - 1, y - 1)) +
                              2.0 * (img.at(x, y + 1) - img.at(x, y - 1)) +
                              (img.at(x + 1, y + 1) - img.at(x + 1, y - 1));
            const size_t i = static_cast<size_t>(y) * img.width + x;
            g.gx[i] = gx;
            g.gy[i] = gy;
            g.magnitude[i] = std::sqrt(gx * gx + gy * gy);
        }
    }
    return g;
}

/// 256-bin histogram of gray values; values are clamped to [0, 255] and
/// rounded to the nearest bin.
inline std::array<int64_t, 256> gray_histogram(const GrayImage& img) {
    std::array<int64_t, 256> hist{};
    for (double v : img.data) {
        int bin = static_cast<int>(std::lround(std::clamp(v, 0.0, 255.0)));
        ++hist[static_cast<size_t>(bin)];
    }
    return hist;
}

/// Otsu threshold on the 256-bin histogram. Pixels > t are foreground.
/// Ties are broken toward the smallest t.
inline double otsu_threshold(const GrayImage& img) {
    const auto hist = gray_histogram(img);
    const int64_t total = static_cast<int64_t>(img.size());

    int nonzero_bins = 0;
    for (int64_t c : hist)
        if (c > 0) ++nonzero_bins;
    if (nonzero_bins < 2)
        throw DegenerateInputError("otsu_threshold: image has fewer than 2 distinct gray values");

    double weighted_total = 0.0;
    for (int b = 0; b < 256; ++b) weighted_total += static_cast<double>(b) * hist[b];

    int best_t = 0;
    double best_var = -1.0;
    int64_t n0 = 0;
    double sum0 = 0.0;
    for (int t = 0; t < 256; ++t) {
        n0 += hist[t];
        sum0 += static_cast<double>(t) * hist[t];
        const int64_t n1 = total - n0;
        if (n0 == 0 || n1 == 0) continue;
        const double mu0 = sum0 / n0;
        const double mu1 = (weighted_total - sum0) / n1;
        const double var = static_cast<double>(n0) * static_cast<double>(n1) *
                           (mu0 - mu1) * (mu0 - mu1);
        if (var > best_var) {
            best_var = var;
            best_t = t;
        }
    }
    return static_cast<double>(best_t);
}

struct Component {
    std::vector<std::pair<int, int>> pixels; // (x, y)
    int64_t area = 0;
    int min_x = 0, min_y = 0, max_x = 0, max_y = 0;
    double mean_row = 0.0;
    std::pair<int, int> top_left{0, 0}; // first pixel in row-major order
};

/// 8-connectivity labeling of a {0, 255} image. Components are returned
/// sorted by area descending; equal areas order by top-left pixel.
inline std::vector<Component> connected_components(const GrayImage& binary) {
    for (double v : binary.data)
        if (v != 0.0 && v != 255.0)
            throw ParameterError("connected_components: image is not binary {0,255}");

    const int w = binary.width, h = binary.height;
    std::vector<int32_t> label(binary.size(), -1);
    std::vector<Component> comps;

    static constexpr int dx8[8] = {-1, 0, 1, -1, 1, -1, 0, 1};
    static constexpr int dy8[8] = {-1, -1, -1, 0, 0, 1, 1, 1};

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const size_t idx = static_cast<size_t>(y) * w + x;
            if (binary.data[idx] == 0.0 || label[idx] >= 0) continue;
            const int32_t id = static_cast<int32_t>(comps.size());
            Component c;
            c.top_left = {x, y};
            c.min_x = c.max_x = x;
            c.min_y = c.max_y = y;
            std::queue<std::pair<int, int>> q;
            label[idx] = id;
            q.push({x, y});
            int64_t row_sum = 0;
            while (!q.empty()) {
                auto [cx, cy] = q.front();
                q.pop();
                c.pixels.push_back({cx, cy});
                row_sum += cy;
                c.min_x = std::min(c.min_x, cx);
                c.max_x = std::max(c.max_x, cx);
                c.min_y = std::min(c.min_y, cy);
                c.max_y = std::max(c.max_y, cy);
                for (int k = 0; k < 8; ++k) {
                    const int nx = cx + dx8[k], ny = cy + dy8[k];
                    if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                    const size_t nidx = static_cast<size_t>(ny) * w + nx;
                    if (binary.data[nidx] == 0.0 || label[nidx] >= 0) continue;
                    label[nidx] = id;
                    q.push({nx, ny});
                }
            }
            c.area = static_cast<int64_t>(c.pixels.size());
            c.mean_row = static_cast<double>(row_sum) / static_cast<double>(c.area);
            comps.push_back(std::move(c));
        }
    }

    std::sort(comps.begin(), comps.end(), [](const Component& a, const Component& b) {
        if (a.area != b.area) return a.area > b.area;
        if (a.top_left.second != b.top_left.second) return a.top_left.second < b.top_left.second;
        return a.top_left.first < b.top_left.first;
    });
    return comps;
}

/// Ordinary least squares fit of y on x.
inline LineFit fit_line_least_squares(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 2)
        throw ParameterError("fit_line_least_squares: need at least 2 points");
    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : points) {
        mx += x;
        my += y;
    }
    mx /= static_cast<double>(points.size());
    my /= static_cast<double>(points.size());
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [x, y] : points) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if (sxx <= 0.0)
        throw DegenerateInputError("fit_line_least_squares: all points share one x");
    const double slope = sxy / sxx;
    return LineFit(slope, my - slope * mx);
}

} // namespace pennate
