#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "pennate/kde.hpp"
#include "pennate/synth.hpp"
#include "pennate/vesselness.hpp"
#include "support/oracles.hpp"

using namespace pennate;

namespace {

// Orientation of the strongest-response pixels (weighted KDE mode).
double ridge_orientation_mode(const VesselnessResult& res) {
    std::vector<double> angles, weights;
    for (size_t i = 0; i < res.response.size(); ++i)
        if (res.response[i] > 0.0) {
            angles.push_back(res.orientation_deg[i]);
            weights.push_back(res.response[i]);
        }
    REQUIRE(angles.size() >= 10);
    return kde_mode(angles, weights).angle_deg;
}

} // namespace

TEST_CASE("vesselness of a constant image is zero everywhere") {
    auto res = frangi_vesselness(GrayImage(32, 32, 77.0), fascicle_scales(), kFascicleWindow);
    for (double v : res.response) CHECK(v == 0.0);
}

TEST_CASE("vesselness response stays in [0, 1]") {
    auto img = oracles::random_image(48, 40, 12);
    auto res = frangi_vesselness(img, fascicle_scales(), std::nullopt);
    for (double v : res.response) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("tube orientation is recovered at ridge pixels") {
    GrayImage img = generate_stripes(96, 96, 35.0, 32.0, 4.0, 10.0, 200.0);
    auto res = frangi_vesselness(img, fascicle_scales(), kFascicleWindow);
    CHECK(ridge_orientation_mode(res) == Catch::Approx(35.0).margin(2.0));
}

TEST_CASE("windowing zeroes responses of horizontal tubes") {
    GrayImage img = generate_stripes(96, 96, 0.0, 32.0, 4.0, 10.0, 200.0);
    auto windowed = frangi_vesselness(img, fascicle_scales(), kFascicleWindow);
    for (double v : windowed.response) CHECK(v == 0.0);

    // Without the window the same tubes do respond.
    auto open = frangi_vesselness(img, fascicle_scales(), std::nullopt);
    double peak = 0.0;
    for (double v : open.response) peak = std::max(peak, v);
    CHECK(peak > 0.1);
}

TEST_CASE("windowed responses imply in-window orientations") {
    GrayImage img = generate_stripes(80, 80, 20.0, 24.0, 3.0, 15.0, 190.0);
    auto res = frangi_vesselness(img, fascicle_scales(), kFascicleWindow);
    for (size_t i = 0; i < res.response.size(); ++i)
        if (res.response[i] > 0.0) {
            CHECK(res.orientation_deg[i] >= 15.0);
            CHECK(res.orientation_deg[i] <= 70.0);
        }
}

TEST_CASE("rotating tubes by +10 degrees shifts the orientation mode by +10") {
    GrayImage a = generate_stripes(96, 96, 30.0, 28.0, 4.0, 10.0, 200.0);
    GrayImage b = generate_stripes(96, 96, 40.0, 28.0, 4.0, 10.0, 200.0);
    const double mode_a =
        ridge_orientation_mode(frangi_vesselness(a, fascicle_scales(), kFascicleWindow));
    const double mode_b =
        ridge_orientation_mode(frangi_vesselness(b, fascicle_scales(), kFascicleWindow));
    CHECK(mode_b - mode_a == Catch::Approx(10.0).margin(1.0));
}

TEST_CASE("vesselness validates its scale list") {
    GrayImage img(16, 16, 0.0);
    CHECK_THROWS_AS(frangi_vesselness(img, {}, std::nullopt), ParameterError);
    CHECK_THROWS_AS(frangi_vesselness(img, {1.0, -2.0}, std::nullopt), ParameterError);
}

TEST_CASE("kde mode of identical samples is the sample itself") {
    std::vector<double> angles(20, 42.0), weights(20, 1.0);
    auto mode = kde_mode(angles, weights);
    CHECK(mode.angle_deg == Catch::Approx(42.0).margin(1e-6));
    CHECK(mode.density.bandwidth_deg == 0.5); // Silverman collapses, floor applies
    CHECK(mode.density.trapezoid_integral() == Catch::Approx(1.0).margin(1e-3));
}

TEST_CASE("kde mode recovers the center of a gaussian sample") {
    std::mt19937 rng(9);
    std::normal_distribution<double> dist(30.0, 2.0);
    std::vector<double> angles, weights;
    for (int i = 0; i < 1000; ++i) {
        angles.push_back(std::clamp(dist(rng), 15.0, 70.0));
        weights.push_back(1.0);
    }
    auto mode = kde_mode(angles, weights);
    CHECK(mode.angle_deg == Catch::Approx(30.0).margin(0.5));
    CHECK(mode.density.trapezoid_integral() == Catch::Approx(1.0).margin(1e-3));
}

TEST_CASE("kde mode picks the heavier component of a bimodal mixture") {
    std::mt19937 rng(13);
    std::normal_distribution<double> lo(25.0, 1.0), hi(60.0, 1.0);
    std::vector<double> angles, weights;
    for (int i = 0; i < 400; ++i) {
        angles.push_back(lo(rng));
        weights.push_back(1.0);
    }
    for (int i = 0; i < 200; ++i) {
        angles.push_back(hi(rng));
        weights.push_back(1.0);
    }
    auto mode = kde_mode(angles, weights);
    CHECK(mode.angle_deg == Catch::Approx(25.0).margin(0.5));
    CHECK(mode.density.trapezoid_integral() == Catch::Approx(1.0).margin(1e-3));
}

TEST_CASE("kde requires at least 10 samples with positive weight") {
    std::vector<double> angles(5, 30.0), weights(5, 1.0);
    CHECK_THROWS_AS(kde_mode(angles, weights), InsufficientDataError);
    std::vector<double> a10(10, 30.0), w0(10, 0.0);
    CHECK_THROWS_AS(kde_mode(a10, w0), InsufficientDataError);
}
