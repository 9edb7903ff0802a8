#pragma once

#include <cmath>
#include <vector>

#include "pennate/errors.hpp"
#include "pennate/image.hpp"
#include "pennate/image_io.hpp"

namespace pennate {

/// Radon-domain representation of an image: one row of line integrals per
/// projection angle, indexed by signed offset from the image center.
///
/// Geometry: for angle a (degrees, y-up convention) the ray direction in
/// image coordinates is u = (cos a, -sin a) and the offset axis is
/// n = (sin a, cos a). The ray at offset s is {center + s*n + t*u}.
struct Sinogram {
    std::vector<double> angles_deg; // sorted ascending
    std::vector<double> offsets;    // unit spacing, symmetric around 0
    std::vector<double> values;     // row-major [angle][offset]

    size_t n_angles() const { return angles_deg.size(); }
    size_t n_offsets() const { return offsets.size(); }

    double& at(size_t ai, size_t oi) { return values[ai * n_offsets() + oi]; }
    double at(size_t ai, size_t oi) const { return values[ai * n_offsets() + oi]; }

    double angle_mass(size_t ai) const {
        double m = 0.0;
        for (size_t oi = 0; oi < n_offsets(); ++oi) m += at(ai, oi);
        return m;
    }
};

inline std::vector<double> angle_grid(double lo, double hi, double step) {
    std::vector<double> grid;
    const int n = static_cast<int>(std::round((hi - lo) / step));
    grid.reserve(static_cast<size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) grid.push_back(lo + i * step);
    return grid;
}

namespace detail {

inline int sinogram_half_extent(int width, int height) {
    return static_cast<int>(std::ceil(std::hypot((width - 1) / 2.0, (height - 1) / 2.0))) + 1;
}

} // namespace detail

/// Discrete Radon transform. Every pixel is projected onto the offset axis
/// of each angle and accumulated into the nearest unit-spaced offset bin, so
/// the per-angle mass equals the image mass exactly.
inline Sinogram radon_forward(const GrayImage& img, const std::vector<double>& angles_deg) {
    if (angles_deg.empty())
        throw ParameterError("radon_forward: empty angle grid");

    const int half = detail::sinogram_half_extent(img.width, img.height);
    Sinogram sino;
    sino.angles_deg = angles_deg;
    sino.offsets.resize(static_cast<size_t>(2 * half + 1));
    for (int s = -half; s <= half; ++s)
        sino.offsets[static_cast<size_t>(s + half)] = static_cast<double>(s);
    sino.values.assign(sino.n_angles() * sino.n_offsets(), 0.0);

    const double cx = (img.width - 1) / 2.0;
    const double cy = (img.height - 1) / 2.0;
    for (size_t ai = 0; ai < sino.n_angles(); ++ai) {
        const double a = deg2rad(sino.angles_deg[ai]);
        const double nx = std::sin(a), ny = std::cos(a);
        double* row = &sino.values[ai * sino.n_offsets()];
        for (int y = 0; y < img.height; ++y) {
            const double sy = (y - cy) * ny;
            for (int x = 0; x < img.width; ++x) {
                const double s = (x - cx) * nx + sy;
                row[static_cast<size_t>(std::lround(s)) + half] += img.at(x, y);
            }
        }
    }
    return sino;
}

/// Filtered back-projection with the standard discrete ramp filter
/// (quarter at lag 0, -1/(pi*k)^2 at odd lags). Output is clamped to >= 0.
inline GrayImage radon_inverse(const Sinogram& sino, int width, int height) {
    if (sino.n_angles() == 0 || sino.n_offsets() == 0)
        throw ParameterError("radon_inverse: empty sinogram");

    const int n_off = static_cast<int>(sino.n_offsets());
    std::vector<double> kernel(static_cast<size_t>(2 * n_off - 1), 0.0);
    for (int k = -(n_off - 1); k <= n_off - 1; ++k) {
        double v = 0.0;
        if (k == 0)
            v = 0.25;
        else if (k % 2 != 0)
            v = -1.0 / (std::numbers::pi * std::numbers::pi * k * k);
        kernel[static_cast<size_t>(k + n_off - 1)] = v;
    }

    std::vector<double> filtered(sino.values.size(), 0.0);
    for (size_t ai = 0; ai < sino.n_angles(); ++ai) {
        const double* row = &sino.values[ai * sino.n_offsets()];
        double* out = &filtered[ai * sino.n_offsets()];
        for (int i = 0; i < n_off; ++i) {
            double acc = 0.0;
            for (int j = 0; j < n_off; ++j)
                acc += row[j] * kernel[static_cast<size_t>(i - j + n_off - 1)];
            out[static_cast<size_t>(i)] = acc;
        }
    }

    GrayImage img(width, height, 0.0);
    const double cx = (width - 1) / 2.0;
    const double cy = (height - 1) / 2.0;
    const double offset0 = sino.offsets.front();
    const double scale = std::numbers::pi / static_cast<double>(sino.n_angles());
    for (size_t ai = 0; ai < sino.n_angles(); ++ai) {
        const double a = deg2rad(sino.angles_deg[ai]);
        const double nx = std::sin(a), ny = std::cos(a);
        const double* q = &filtered[ai * sino.n_offsets()];
        for (int y = 0; y < height; ++y) {
            for (int x = 0; x < width; ++x) {
                const double s = (x - cx) * nx + (y - cy) * ny - offset0;
                const int s0 = static_cast<int>(std::floor(s));
                if (s0 < 0 || s0 >= n_off - 1) continue;
                const double frac = s - s0;
                img.at(x, y) += scale * ((1.0 - frac) * q[s0] + frac * q[s0 + 1]);
            }
        }
    }
    for (double& v : img.data) v = std::max(v, 0.0);
    return img;
}

/// Linear-structure enhancement: back-project the signed square of the full
/// 0-179 degree sinogram and rescale the result to [0, 255].
inline GrayImage radon_enhance(const GrayImage& img) {
    Sinogram sino = radon_forward(img, angle_grid(0.0, 179.0, 1.0));
    for (double& v : sino.values) v = (v < 0.0 ? -1.0 : 1.0) * v * v;
    GrayImage back = radon_inverse(sino, img.width, img.height);
    return rescale_to_byte_range(back);
}

} // namespace pennate
