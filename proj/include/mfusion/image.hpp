// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mfusion/error.hpp"

namespace mfusion {

/// Dense row-major plane of doubles. Used for every intermediate map
/// (statistics, SSIM planes, gradients). No range constraints.
class Plane {
public:
    Plane() = default;
    Plane(int width, int height, double fill = 0.0);
    Plane(int width, int height, std::vector<double> data);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    double& at(int x, int y) { return data_[index(x, y)]; }
    double at(int x, int y) const { return data_[index(x, y)]; }
    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    std::span<const double> values() const noexcept { return data_; }
    std::span<double> values() noexcept { return data_; }

    bool same_shape(const Plane& other) const noexcept {
        return width_ == other.width_ && height_ == other.height_;
    }

    double min_value() const;
    double max_value() const;

    bool operator==(const Plane&) const = default;

private:
    std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(x);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<double> data_;
};

/// Grayscale intensity image on the 8-bit dynamic range. Construction
/// enforces width, height >= 2 and finite values in [0, 255].
class GrayImage {
public:
    static constexpr double kMaxLevel = 255.0;

    GrayImage() = default;
    explicit GrayImage(Plane pixels);
    GrayImage(int width, int height, std::vector<double> data);

    /// Builds an image from arbitrary reals by rounding and clamping to
    /// [0, 255]; the path used when a computed plane becomes an image.
    static GrayImage quantized(const Plane& plane);

    int width() const noexcept { return pixels_.width(); }
    int height() const noexcept { return pixels_.height(); }
    std::size_t size() const noexcept { return pixels_.size(); }
    double at(int x, int y) const { return pixels_.at(x, y); }
    double operator[](std::size_t i) const { return pixels_[i]; }
    const Plane& plane() const noexcept { return pixels_; }
    std::span<const double> values() const noexcept { return pixels_.values(); }

    bool same_shape(const GrayImage& other) const noexcept {
        return pixels_.same_shape(other.pixels_);
    }

    bool operator==(const GrayImage&) const = default;

private:
    Plane pixels_;
};

/// Integer label per pixel. Label 0 marks watershed lines and only
/// appears in intermediate maps; `count` is the largest label in use.
struct LabelMap {
    int width = 0;
    int height = 0;
    std::vector<std::int32_t> labels;
    int count = 0;

    LabelMap() = default;
    LabelMap(int w, int h, std::int32_t fill = 0)
        : width(w), height(h),
          labels(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {}

    std::int32_t& at(int x, int y) {
        return labels[static_cast<std::size_t>(y) * width + x];
    }
    std::int32_t at(int x, int y) const {
        return labels[static_cast<std::size_t>(y) * width + x];
    }
    std::size_t size() const noexcept { return labels.size(); }

    /// No zero labels anywhere.
    bool is_total() const noexcept;

    bool operator==(const LabelMap&) const = default;
};

/// Splits every label into its 4-connected components and renumbers
/// them 1..K in raster order of first appearance. Label 0 stays 0.
LabelMap connected_components(const LabelMap& map);

void require_same_shape(const Plane& a, const Plane& b, const char* where);
void require_same_shape(const GrayImage& a, const GrayImage& b, const char* where);

}  // namespace mfusion
