#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "pennate/image_io.hpp"
#include "support/oracles.hpp"

using namespace pennate;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
    auto dir = fs::temp_directory_path() / ("pennate_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("png round trip preserves byte-valued pixels") {
    auto dir = temp_dir("png");
    GrayImage img = oracles::random_image(37, 23, 1);
    for (double& v : img.data) v = std::floor(v); // byte-exact content
    write_png(dir / "a.png", img);
    GrayImage back = read_png(dir / "a.png");
    REQUIRE(back.width == img.width);
    REQUIRE(back.height == img.height);
    for (size_t i = 0; i < img.size(); ++i) CHECK(back.data[i] == img.data[i]);
    fs::remove_all(dir);
}

TEST_CASE("pgm round trip preserves byte-valued pixels") {
    auto dir = temp_dir("pgm");
    GrayImage img = oracles::random_image(19, 31, 2);
    for (double& v : img.data) v = std::floor(v);
    write_pgm(dir / "a.pgm", img);
    GrayImage back = read_pgm(dir / "a.pgm");
    REQUIRE(back.width == img.width);
    REQUIRE(back.height == img.height);
    for (size_t i = 0; i < img.size(); ++i) CHECK(back.data[i] == img.data[i]);
    fs::remove_all(dir);
}

TEST_CASE("pgm reader accepts comments and rejects ascii P2") {
    auto dir = temp_dir("pgm_hdr");
    {
        std::ofstream out(dir / "c.pgm", std::ios::binary);
        out << "P5\n# a comment\n2 2\n255\n";
        const unsigned char px[4] = {0, 64, 128, 255};
        out.write(reinterpret_cast<const char*>(px), 4);
    }
    GrayImage img = read_pgm(dir / "c.pgm");
    CHECK(img.at(1, 1) == 255.0);
    {
        std::ofstream out(dir / "bad.pgm");
        out << "P2\n2 2\n255\n0 1 2 3\n";
    }
    CHECK_THROWS_AS(read_pgm(dir / "bad.pgm"), IoError);
    fs::remove_all(dir);
}

TEST_CASE("missing or corrupt files raise io errors") {
    CHECK_THROWS_AS(read_png("/nonexistent/x.png"), IoError);
    CHECK_THROWS_AS(read_pgm("/nonexistent/x.pgm"), IoError);
    CHECK_THROWS_AS(read_frame("/tmp/unsupported.gif"), IoError);
}

TEST_CASE("frame listing is lexicographic and skips foreign files") {
    auto dir = temp_dir("list");
    GrayImage img(4, 4, 9.0);
    write_png(dir / "0002.png", img);
    write_pgm(dir / "0001.pgm", img);
    write_png(dir / "0000.png", img);
    std::ofstream(dir / "notes.txt") << "ignore me";
    auto frames = list_frames(dir);
    REQUIRE(frames.size() == 3);
    CHECK(frames[0].filename() == "0000.png");
    CHECK(frames[1].filename() == "0001.pgm");
    CHECK(frames[2].filename() == "0002.png");
    fs::remove_all(dir);
}

TEST_CASE("rescale maps min/max to 0/255 and constants to zero") {
    GrayImage img(3, 1);
    img.data = {-2.0, 0.0, 6.0};
    GrayImage out = rescale_to_byte_range(img);
    CHECK(out.data[0] == Catch::Approx(0.0));
    CHECK(out.data[1] == Catch::Approx(63.75));
    CHECK(out.data[2] == Catch::Approx(255.0));
    GrayImage flat(4, 4, 3.0);
    for (double v : rescale_to_byte_range(flat).data) CHECK(v == 0.0);
}
