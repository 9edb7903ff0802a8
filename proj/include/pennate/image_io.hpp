#pragma once

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <png.h>

#include "pennate/errors.hpp"
#include "pennate/image.hpp"

namespace pennate {

namespace detail {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

} // namespace detail

/// Reads an 8-bit grayscale PNG. Palette, RGB and 16-bit inputs are
/// converted to 8-bit gray; alpha is stripped.
inline GrayImage read_png(const std::filesystem::path& path) {
    detail::FilePtr f(std::fopen(path.string().c_str(), "rb"));
    if (!f) throw IoError("read_png: cannot open " + path.string());

    unsigned char sig[8];
    if (std::fread(sig, 1, 8, f.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0)
        throw IoError("read_png: not a PNG file: " + path.string());

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("read_png: png_create_read_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError("read_png: png_create_info_struct failed");
    }
    std::vector<unsigned char> pixels;
    std::vector<png_bytep> rows;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("read_png: decode failed for " + path.string());
    }
    png_init_io(png, f.get());
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);

    const png_uint_32 w = png_get_image_width(png, info);
    const png_uint_32 h = png_get_image_height(png, info);
    const int color = png_get_color_type(png, info);
    const int depth = png_get_bit_depth(png, info);

    if (depth == 16) png_set_strip_16(png);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (color & PNG_COLOR_MASK_COLOR)
        png_set_rgb_to_gray_fixed(png, 1, -1, -1);
    if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_strip_alpha(png);
    png_read_update_info(png, info);

    pixels.assign(static_cast<size_t>(w) * h, 0);
    rows.resize(h);
    for (png_uint_32 y = 0; y < h; ++y)
        rows[y] = pixels.data() + static_cast<size_t>(y) * w;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    GrayImage img(static_cast<int>(w), static_cast<int>(h));
    for (size_t i = 0; i < img.size(); ++i)
        img.data[i] = static_cast<double>(pixels[i]);
    return img;
}

/// Writes an 8-bit grayscale PNG; values are clamped to [0, 255] and rounded.
inline void write_png(const std::filesystem::path& path, const GrayImage& img) {
    detail::FilePtr f(std::fopen(path.string().c_str(), "wb"));
    if (!f) throw IoError("write_png: cannot open " + path.string());

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("write_png: png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("write_png: png_create_info_struct failed");
    }
    std::vector<unsigned char> pixels(img.size());
    std::vector<png_bytep> rows(img.height);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("write_png: encode failed for " + path.string());
    }
    png_init_io(png, f.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(img.width),
                 static_cast<png_uint_32>(img.height), 8, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    for (size_t i = 0; i < img.size(); ++i)
        pixels[i] = static_cast<unsigned char>(
            std::lround(std::clamp(img.data[i], 0.0, 255.0)));
    for (int y = 0; y < img.height; ++y)
        rows[static_cast<size_t>(y)] = pixels.data() + static_cast<size_t>(y) * img.width;
    png_write_info(png, info);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

/// Reads a binary (P5) PGM with maxval <= 255.
inline GrayImage read_pgm(const std::filesystem::path& path) {
    detail::FilePtr f(std::fopen(path.string().c_str(), "rb"));
    if (!f) throw IoError("read_pgm: cannot open " + path.string());

    auto next_token = [&]() -> std::string {
        std::string tok;
        int c;
        while ((c = std::fgetc(f.get())) != EOF) {
            if (c == '#') { // comment to end of line
                while ((c = std::fgetc(f.get())) != EOF && c != '\n') {}
                continue;
            }
            if (std::isspace(c)) {
                if (!tok.empty()) break;
                continue;
            }
            tok.push_back(static_cast<char>(c));
        }
        return tok;
    };

    if (next_token() != "P5")
        throw IoError("read_pgm: not a binary PGM (P5): " + path.string());
    int w = 0, h = 0, maxval = 0;
    try {
        w = std::stoi(next_token());
        h = std::stoi(next_token());
        maxval = std::stoi(next_token());
    } catch (const std::exception&) {
        throw IoError("read_pgm: malformed header in " + path.string());
    }
    if (w < 1 || h < 1 || maxval < 1 || maxval > 255)
        throw IoError("read_pgm: unsupported PGM header in " + path.string());

    std::vector<unsigned char> pixels(static_cast<size_t>(w) * h);
    if (std::fread(pixels.data(), 1, pixels.size(), f.get()) != pixels.size())
        throw IoError("read_pgm: truncated pixel data in " + path.string());

    GrayImage img(w, h);
    for (size_t i = 0; i < img.size(); ++i)
        img.data[i] = static_cast<double>(pixels[i]);
    return img;
}

/// Writes a binary (P5) PGM; values are clamped to [0, 255] and rounded.
inline void write_pgm(const std::filesystem::path& path, const GrayImage& img) {
    detail::FilePtr f(std::fopen(path.string().c_str(), "wb"));
    if (!f) throw IoError("write_pgm: cannot open " + path.string());
    const std::string header =
        "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
    if (std::fwrite(header.data(), 1, header.size(), f.get()) != header.size())
        throw IoError("write_pgm: write failed for " + path.string());
    std::vector<unsigned char> pixels(img.size());
    for (size_t i = 0; i < img.size(); ++i)
        pixels[i] = static_cast<unsigned char>(
            std::lround(std::clamp(img.data[i], 0.0, 255.0)));
    if (std::fwrite(pixels.data(), 1, pixels.size(), f.get()) != pixels.size())
        throw IoError("write_pgm: write failed for " + path.string());
}

/// Reads a frame by extension (.png or .pgm, case-insensitive).
inline GrayImage read_frame(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (ext == ".png") return read_png(path);
    if (ext == ".pgm") return read_pgm(path);
    throw IoError("read_frame: unsupported format " + path.string());
}

/// All readable frame files in a directory, lexicographic filename order.
inline std::vector<std::filesystem::path> list_frames(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir))
        throw IoError("list_frames: not a directory: " + dir.string());
    std::vector<std::filesystem::path> out;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        std::string ext = entry.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (ext == ".png" || ext == ".pgm") out.push_back(entry.path());
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.filename() < b.filename(); });
    return out;
}

/// Linearly rescales to [0, 255]; a constant image maps to all zeros.
inline GrayImage rescale_to_byte_range(const GrayImage& img) {
    auto [lo, hi] = img.minmax();
    GrayImage out(img.width, img.height);
    if (hi > lo) {
        const double scale = 255.0 / (hi - lo);
        for (size_t i = 0; i < img.size(); ++i)
            out.data[i] = (img.data[i] - lo) * scale;
    }
    return out;
}

} // namespace pennate
