#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include <png.h>

#include <nlohmann/json.hpp>

#include "geosynth/core/error.hpp"
#include "geosynth/core/raster.hpp"

namespace geosynth {

using json = nlohmann::json;

namespace detail {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f)
            std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

inline FilePtr open_file(const std::string& path, const char* mode) {
    FilePtr f(std::fopen(path.c_str(), mode));
    if (!f)
        throw IoError("cannot open " + path);
    return f;
}

} // namespace detail

// ---- PNG ----
// Compression settings are pinned so identical pixels always produce
// identical files.

inline void write_png_rgb(const std::string& path, const ImageRgb& img) {
    auto file = detail::open_file(path, "wb");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw IoError("libpng init failed for " + path);
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("png write failed: " + path);
    }
    png_init_io(png, file.get());
    png_set_compression_level(png, 6);
    png_set_IHDR(png, info, img.width(), img.height(), 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::vector<png_bytep> rows(img.height());
    for (int y = 0; y < img.height(); ++y)
        rows[y] = reinterpret_cast<png_bytep>(const_cast<Rgb8*>(img.row(y).data()));
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

inline void write_png_gray(const std::string& path, const Raster<std::uint8_t>& img) {
    auto file = detail::open_file(path, "wb");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw IoError("libpng init failed for " + path);
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("png write failed: " + path);
    }
    png_init_io(png, file.get());
    png_set_compression_level(png, 6);
    png_set_IHDR(png, info, img.width(), img.height(), 8, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::vector<png_bytep> rows(img.height());
    for (int y = 0; y < img.height(); ++y)
        rows[y] = const_cast<png_bytep>(img.row(y).data());
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

/// Single-channel palette-indexed PNG; pixel values are palette ids.
inline void write_png_palette(const std::string& path, const LabelRaster& img,
                              std::span<const Rgb8> palette) {
    auto file = detail::open_file(path, "wb");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw IoError("libpng init failed for " + path);
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("png write failed: " + path);
    }
    png_init_io(png, file.get());
    png_set_compression_level(png, 6);
    png_set_IHDR(png, info, img.width(), img.height(), 8, PNG_COLOR_TYPE_PALETTE,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    std::vector<png_color> plte(palette.size());
    for (std::size_t i = 0; i < palette.size(); ++i)
        plte[i] = {palette[i].r, palette[i].g, palette[i].b};
    png_set_PLTE(png, info, plte.data(), static_cast<int>(plte.size()));
    png_write_info(png, info);
    std::vector<png_bytep> rows(img.height());
    for (int y = 0; y < img.height(); ++y)
        rows[y] = const_cast<png_bytep>(img.row(y).data());
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

/// Reads any 8/16-bit PNG as packed RGB8.
inline ImageRgb read_png_rgb(const std::string& path) {
    auto file = detail::open_file(path, "rb");
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("libpng init failed for " + path);
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("png read failed: " + path);
    }
    png_init_io(png, file.get());
    png_read_info(png, info);
    png_set_expand(png);
    png_set_strip_16(png);
    png_set_strip_alpha(png);
    if (png_get_color_type(png, info) == PNG_COLOR_TYPE_GRAY ||
        png_get_color_type(png, info) == PNG_COLOR_TYPE_GRAY_ALPHA)
        png_set_gray_to_rgb(png);
    png_read_update_info(png, info);
    const int w = static_cast<int>(png_get_image_width(png, info));
    const int h = static_cast<int>(png_get_image_height(png, info));
    ImageRgb img(w, h);
    std::vector<png_bytep> rows(h);
    for (int y = 0; y < h; ++y)
        rows[y] = reinterpret_cast<png_bytep>(img.row(y).data());
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

/// Reads a palette or grayscale PNG without expansion: pixel values are the
/// raw 8-bit indices/levels. Used for label and mask rasters.
inline LabelRaster read_png_indexed(const std::string& path) {
    auto file = detail::open_file(path, "rb");
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("libpng init failed for " + path);
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("png read failed: " + path);
    }
    png_init_io(png, file.get());
    png_read_info(png, info);
    const int color = png_get_color_type(png, info);
    if (color != PNG_COLOR_TYPE_PALETTE && color != PNG_COLOR_TYPE_GRAY) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("expected palette or gray PNG: " + path);
    }
    if (png_get_bit_depth(png, info) < 8)
        png_set_packing(png);
    png_set_strip_16(png);
    png_read_update_info(png, info);
    const int w = static_cast<int>(png_get_image_width(png, info));
    const int h = static_cast<int>(png_get_image_height(png, info));
    LabelRaster img(w, h);
    std::vector<png_bytep> rows(h);
    for (int y = 0; y < h; ++y)
        rows[y] = img.row(y).data();
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

// ---- Raw float rasters ----
// Little-endian float32, row-major, one plane per channel, with a JSON
// sidecar <name>.json carrying at least {width, height}.

inline std::string sidecar_path(const std::string& raster_path) {
    std::filesystem::path p(raster_path);
    p.replace_extension(".json");
    return p.string();
}

inline void write_float_raster(const std::string& path, const HeightRaster& r,
                               json meta = json::object()) {
    auto file = detail::open_file(path, "wb");
    if (std::fwrite(r.data(), sizeof(float), r.size(), file.get()) != r.size())
        throw IoError("short write: " + path);
    file.reset();
    meta["width"] = r.width();
    meta["height"] = r.height();
    std::ofstream side(sidecar_path(path));
    if (!side)
        throw IoError("cannot write sidecar for " + path);
    side << meta.dump(2) << "\n";
}

inline json read_sidecar(const std::string& raster_path) {
    std::ifstream side(sidecar_path(raster_path));
    if (!side)
        throw IoError("missing sidecar for " + raster_path);
    json meta;
    side >> meta;
    return meta;
}

inline HeightRaster read_float_raster(const std::string& path) {
    const json meta = read_sidecar(path);
    const int w = meta.at("width").get<int>();
    const int h = meta.at("height").get<int>();
    HeightRaster r(w, h);
    auto file = detail::open_file(path, "rb");
    if (std::fread(r.data(), sizeof(float), r.size(), file.get()) != r.size())
        throw IoError("short read: " + path);
    return r;
}

inline void write_prob_map(const std::string& path, const ProbabilityMap& m,
                           json meta = json::object()) {
    auto file = detail::open_file(path, "wb");
    if (std::fwrite(m.data(), sizeof(float), m.size(), file.get()) != m.size())
        throw IoError("short write: " + path);
    file.reset();
    meta["width"] = m.width();
    meta["height"] = m.height();
    meta["channels"] = m.channels();
    std::ofstream side(sidecar_path(path));
    if (!side)
        throw IoError("cannot write sidecar for " + path);
    side << meta.dump(2) << "\n";
}

inline ProbabilityMap read_prob_map(const std::string& path) {
    const json meta = read_sidecar(path);
    const int w = meta.at("width").get<int>();
    const int h = meta.at("height").get<int>();
    const int c = meta.value("channels", 1);
    ProbabilityMap m(w, h, c);
    auto file = detail::open_file(path, "rb");
    if (std::fread(m.data(), sizeof(float), m.size(), file.get()) != m.size())
        throw IoError("short read: " + path);
    return m;
}

} // namespace geosynth
