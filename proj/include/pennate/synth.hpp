#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "pennate/errors.hpp"
#include "pennate/image.hpp"
#include "pennate/image_io.hpp"

namespace pennate {

/// Deterministic Gaussian sampler (Box-Muller on mt19937). Kept explicit so
/// frames are bit-identical for a given seed independent of the standard
/// library's normal_distribution.
class GaussianSampler {
public:
    explicit GaussianSampler(uint64_t seed) : rng_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform01();
        } while (u1 <= 1e-300);
        const double u2 = uniform01();
        const double mag = std::sqrt(-2.0 * std::log(u1));
        spare_ = mag * std::sin(2.0 * std::numbers::pi * u2);
        have_spare_ = true;
        return mag * std::cos(2.0 * std::numbers::pi * u2);
    }

    double uniform01() {
        return (static_cast<double>(rng_()) + 0.5) / 4294967296.0;
    }

private:
    std::mt19937 rng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

struct ApoBand {
    double row = 0.0;     // top row of the band at x = 0
    int thickness = 5;    // rows
    double slope = 0.0;   // dy/dx in image coordinates
};

struct SynthSpec {
    int width = 512;
    int height = 448;
    double fascicle_angle_deg = 30.0; // y-up convention
    double fascicle_spacing = 12.0;   // perpendicular distance between line centers
    double fascicle_width = 3.0;      // line thickness, pixels
    ApoBand upper{48.0, 5, 0.0};
    ApoBand lower{398.0, 5, 0.0};
    double speckle_sigma = 0.0;       // additive Gaussian noise, gray levels
    uint64_t seed = 1;

    // Rendering levels. Fixed by the generator, not part of the ground truth.
    double background = 20.0;
    double fascicle_level = 150.0;
    double apo_level = 230.0;
};

struct SynthTruth {
    double fascicle_angle_deg = 0.0;
    LineFit upper_lower_border;  // lower border of the superficial band
    LineFit lower_upper_border;  // upper border of the deep band
    double pennation_deg = 0.0;  // fascicle angle minus deep-aponeurosis angle
};

namespace detail {

/// Coverage of a stripe of the given half-width at perpendicular distance
/// dist from its center line: 1 inside, 0 outside, 1-px linear ramp at the
/// border. The ramp avoids staircase aliasing that would bias
/// orientation estimators.
inline double stripe_coverage(double dist, double half_width) {
    return std::clamp(half_width + 0.5 - dist, 0.0, 1.0);
}

} // namespace detail

/// Periodic bright stripes at a given y-up angle on a constant background.
/// Stripe centers are the lines {p : p.n = k*spacing} with n = (sin a, cos a).
inline GrayImage generate_stripes(int width, int height, double angle_deg,
                                  double spacing, double line_width,
                                  double background = 20.0, double foreground = 150.0) {
    if (spacing <= 0.0 || line_width <= 0.0)
        throw ParameterError("generate_stripes: spacing and line_width must be > 0");
    GrayImage img(width, height, background);
    const double a = deg2rad(angle_deg);
    const double nx = std::sin(a), ny = std::cos(a);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const double s = nx * x + ny * y;
            const double phase = s - spacing * std::floor(s / spacing);
            const double dist = std::min(phase, spacing - phase);
            const double cov = detail::stripe_coverage(dist, line_width * 0.5);
            if (cov > 0.0)
                img.at(x, y) = background + cov * (foreground - background);
        }
    }
    return img;
}

/// Stripes whose profile is a raised sinusoid instead of a crisp line.
inline GrayImage generate_sinusoidal_stripes(int width, int height, double angle_deg,
                                             double period, double background = 40.0,
                                             double amplitude = 80.0) {
    GrayImage img(width, height);
    const double a = deg2rad(angle_deg);
    const double nx = std::sin(a), ny = std::cos(a);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            const double s = nx * x + ny * y;
            img.at(x, y) = background +
                           amplitude * (0.5 + 0.5 * std::cos(2.0 * std::numbers::pi * s / period));
        }
    return img;
}

namespace detail {

inline int band_top(const ApoBand& b, int x) {
    return static_cast<int>(std::lround(b.row + b.slope * x));
}

} // namespace detail

/// One synthetic B-mode-like frame: dark background, two bright aponeurosis
/// bands, periodic fascicle lines between them, optional additive speckle.
/// Deterministic: identical spec (including seed) gives bit-identical pixels.
inline std::pair<GrayImage, SynthTruth> generate_frame(const SynthSpec& spec) {
    if (spec.width < 8 || spec.height < 8)
        throw ParameterError("generate_frame: frame too small");
    if (spec.fascicle_spacing <= 0.0 || spec.fascicle_width <= 0.0)
        throw ParameterError("generate_frame: fascicle spacing/width must be > 0");

    for (int x = 0; x < spec.width; ++x) {
        const int upper_bottom = detail::band_top(spec.upper, x) + spec.upper.thickness - 1;
        const int lower_top = detail::band_top(spec.lower, x);
        if (upper_bottom + 2 >= lower_top)
            throw ParameterError("generate_frame: aponeurosis bands overlap or touch");
    }

    GrayImage img(spec.width, spec.height, spec.background);

    // Fascicle texture strictly between the bands, 1 px clearance.
    const double a = deg2rad(spec.fascicle_angle_deg);
    const double nx = std::sin(a), ny = std::cos(a);
    for (int x = 0; x < spec.width; ++x) {
        const int y_from = detail::band_top(spec.upper, x) + spec.upper.thickness + 1;
        const int y_to = detail::band_top(spec.lower, x) - 1; // exclusive
        for (int y = std::max(0, y_from); y < std::min(spec.height, y_to); ++y) {
            const double s = nx * x + ny * y;
            const double phase = s - spec.fascicle_spacing * std::floor(s / spec.fascicle_spacing);
            const double dist = std::min(phase, spec.fascicle_spacing - phase);
            const double cov = detail::stripe_coverage(dist, spec.fascicle_width * 0.5);
            if (cov > 0.0)
                img.at(x, y) = spec.background + cov * (spec.fascicle_level - spec.background);
        }
    }

    for (const ApoBand& band : {spec.upper, spec.lower}) {
        for (int x = 0; x < spec.width; ++x) {
            const int top = detail::band_top(band, x);
            for (int y = std::max(0, top);
                 y < std::min(spec.height, top + band.thickness); ++y)
                img.at(x, y) = spec.apo_level;
        }
    }

    if (spec.speckle_sigma > 0.0) {
        GaussianSampler noise(spec.seed);
        for (double& v : img.data)
            v = std::clamp(v + spec.speckle_sigma * noise.next(), 0.0, 255.0);
    }

    SynthTruth truth;
    truth.fascicle_angle_deg = spec.fascicle_angle_deg;
    truth.upper_lower_border =
        LineFit(spec.upper.slope, spec.upper.row + spec.upper.thickness - 1);
    truth.lower_upper_border = LineFit(spec.lower.slope, spec.lower.row);
    truth.pennation_deg = spec.fascicle_angle_deg - truth.lower_upper_border.angle_deg;
    return {std::move(img), truth};
}

/// Linear ramp from a to b over n samples (inclusive endpoints).
inline std::vector<double> angle_ramp(int n, double a, double b) {
    std::vector<double> out(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        out[static_cast<size_t>(i)] = n > 1 ? a + (b - a) * i / (n - 1) : a;
    return out;
}

/// mean + amplitude * sin(2*pi*i/period).
inline std::vector<double> angle_sinusoid(int n, double mean, double amplitude, double period) {
    std::vector<double> out(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        out[static_cast<size_t>(i)] =
            mean + amplitude * std::sin(2.0 * std::numbers::pi * i / period);
    return out;
}

/// Writes PNG frames (%04d.png) plus truth.csv to a directory. Frame i uses
/// the base spec with fascicle angle trajectory[i] and seed base+i.
/// Returns the per-frame truth records.
inline std::vector<SynthTruth> generate_video(const SynthSpec& base,
                                              const std::vector<double>& trajectory,
                                              const std::filesystem::path& out_dir) {
    for (double ang : trajectory)
        if (ang <= 0.0 || ang >= 90.0)
            throw ParameterError("generate_video: trajectory angle outside (0, 90)");

    std::filesystem::create_directories(out_dir);
    std::ofstream csv(out_dir / "truth.csv");
    if (!csv) throw IoError("generate_video: cannot write truth.csv");
    csv << "frame,fascicle_angle_deg,upper_apo_slope,lower_apo_slope\n";

    std::vector<SynthTruth> truths;
    truths.reserve(trajectory.size());
    char name[32];
    for (size_t i = 0; i < trajectory.size(); ++i) {
        SynthSpec spec = base;
        spec.fascicle_angle_deg = trajectory[i];
        spec.seed = base.seed + i;
        auto [img, truth] = generate_frame(spec);
        std::snprintf(name, sizeof(name), "%04zu.png", i);
        write_png(out_dir / name, img);
        char line[160];
        std::snprintf(line, sizeof(line), "%zu,%.6f,%.6f,%.6f\n", i,
                      truth.fascicle_angle_deg, spec.upper.slope, spec.lower.slope);
        csv << line;
        truths.push_back(truth);
    }
    if (!csv.flush())
        throw IoError("generate_video: write failed for truth.csv");
    return truths;
}

} // namespace pennate
