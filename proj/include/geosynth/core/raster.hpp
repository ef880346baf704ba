#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "geosynth/core/error.hpp"

namespace geosynth {

/// Row-major 2D grid. (x, y) indexes column x of row y; row 0 is the top
/// image row.
template <typename T>
class Raster {
public:
    Raster() = default;
    Raster(int width, int height, T fill = T{})
        : w_(width), h_(height), data_(static_cast<std::size_t>(width) * height, fill) {}

    int width() const { return w_; }
    int height() const { return h_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    T& at(int x, int y) { return data_[static_cast<std::size_t>(y) * w_ + x]; }
    const T& at(int x, int y) const { return data_[static_cast<std::size_t>(y) * w_ + x]; }

    T& operator[](std::size_t i) { return data_[i]; }
    const T& operator[](std::size_t i) const { return data_[i]; }

    T* data() { return data_.data(); }
    const T* data() const { return data_.data(); }

    std::span<T> row(int y) { return {data_.data() + static_cast<std::size_t>(y) * w_, static_cast<std::size_t>(w_)}; }
    std::span<const T> row(int y) const {
        return {data_.data() + static_cast<std::size_t>(y) * w_, static_cast<std::size_t>(w_)};
    }

    std::span<T> pixels() { return {data_.data(), data_.size()}; }
    std::span<const T> pixels() const { return {data_.data(), data_.size()}; }

    void fill(T v) { data_.assign(data_.size(), v); }

    bool same_shape(int width, int height) const { return w_ == width && h_ == height; }
    template <typename U>
    bool same_shape(const Raster<U>& other) const {
        return w_ == other.width() && h_ == other.height();
    }

    friend bool operator==(const Raster& a, const Raster& b) {
        return a.w_ == b.w_ && a.h_ == b.h_ && a.data_ == b.data_;
    }

private:
    int w_ = 0;
    int h_ = 0;
    std::vector<T> data_;
};

struct Rgb8 {
    std::uint8_t r = 0, g = 0, b = 0;
    friend bool operator==(const Rgb8&, const Rgb8&) = default;
};

using ImageRgb = Raster<Rgb8>;
using LabelRaster = Raster<std::uint8_t>;
using MaskRaster = Raster<std::uint8_t>;
using HeightRaster = Raster<float>;

template <typename A, typename B>
inline void require_same_shape(const Raster<A>& a, const Raster<B>& b, const char* what) {
    if (!a.same_shape(b))
        throw ShapeMismatch(std::string(what) + ": raster shapes differ");
}

/// H x W x C planar stack of nonnegative per-class scores. Planes are stored
/// contiguously (channel-major), matching the raw float32 file layout.
class ProbabilityMap {
public:
    ProbabilityMap() = default;
    ProbabilityMap(int width, int height, int channels)
        : w_(width), h_(height), c_(channels),
          data_(static_cast<std::size_t>(width) * height * channels, 0.0f) {}

    int width() const { return w_; }
    int height() const { return h_; }
    int channels() const { return c_; }
    bool empty() const { return data_.empty(); }

    float& at(int x, int y, int ch) { return data_[plane(ch) + static_cast<std::size_t>(y) * w_ + x]; }
    float at(int x, int y, int ch) const { return data_[plane(ch) + static_cast<std::size_t>(y) * w_ + x]; }

    float* data() { return data_.data(); }
    const float* data() const { return data_.data(); }
    std::size_t size() const { return data_.size(); }

private:
    std::size_t plane(int ch) const { return static_cast<std::size_t>(ch) * w_ * h_; }

    int w_ = 0, h_ = 0, c_ = 0;
    std::vector<float> data_;
};

} // namespace geosynth
