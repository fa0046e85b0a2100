// SPDX-License-Identifier: Apache-2.0
#include "mfusion/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mfusion {

Plane::Plane(int width, int height, double fill)
    : width_(width), height_(height) {
    if (width < 1 || height < 1)
        fail(ErrorKind::InvalidArgument, "plane dimensions must be positive");
    data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

Plane::Plane(int width, int height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
    if (width < 1 || height < 1)
        fail(ErrorKind::InvalidArgument, "plane dimensions must be positive");
    if (data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
        fail(ErrorKind::InvalidArgument, "plane data length does not match width*height");
}

double Plane::min_value() const {
    return data_.empty() ? 0.0 : *std::min_element(data_.begin(), data_.end());
}

double Plane::max_value() const {
    return data_.empty() ? 0.0 : *std::max_element(data_.begin(), data_.end());
}

GrayImage::GrayImage(Plane pixels) : pixels_(std::move(pixels)) {
    if (pixels_.width() < 2 || pixels_.height() < 2)
        fail(ErrorKind::InvalidArgument, "image must be at least 2x2");
    for (double v : pixels_.values()) {
        if (!std::isfinite(v) || v < 0.0 || v > kMaxLevel)
            fail(ErrorKind::InvalidArgument,
                 "pixel value out of range [0, 255]: " + std::to_string(v));
    }
}

GrayImage::GrayImage(int width, int height, std::vector<double> data)
    : GrayImage(Plane(width, height, std::move(data))) {}

GrayImage GrayImage::quantized(const Plane& plane) {
    Plane out = plane;
    for (double& v : out.values()) {
        if (!std::isfinite(v)) v = 0.0;
        v = std::clamp(std::round(v), 0.0, kMaxLevel);
    }
    return GrayImage(std::move(out));
}

bool LabelMap::is_total() const noexcept {
    return std::none_of(labels.begin(), labels.end(), [](std::int32_t l) { return l == 0; });
}

LabelMap connected_components(const LabelMap& map) {
    LabelMap out(map.width, map.height, 0);
    std::vector<std::size_t> stack;
    std::int32_t next = 0;
    const int w = map.width;
    const int h = map.height;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t seed = static_cast<std::size_t>(y) * w + x;
            const std::int32_t lab = map.labels[seed];
            if (lab == 0 || out.labels[seed] != 0) continue;
            ++next;
            out.labels[seed] = next;
            stack.push_back(seed);
            while (!stack.empty()) {
                const std::size_t p = stack.back();
                stack.pop_back();
                const int px = static_cast<int>(p % w);
                const int py = static_cast<int>(p / w);
                const int nx[4] = {px - 1, px + 1, px, px};
                const int ny[4] = {py, py, py - 1, py + 1};
                for (int k = 0; k < 4; ++k) {
                    if (nx[k] < 0 || nx[k] >= w || ny[k] < 0 || ny[k] >= h) continue;
                    const std::size_t q = static_cast<std::size_t>(ny[k]) * w + nx[k];
                    if (out.labels[q] == 0 && map.labels[q] == lab) {
                        out.labels[q] = next;
                        stack.push_back(q);
                    }
                }
            }
        }
    }
    out.count = next;
    return out;
}

void require_same_shape(const Plane& a, const Plane& b, const char* where) {
    if (!a.same_shape(b))
        fail(ErrorKind::DimensionMismatch,
             std::string(where) + ": dimension mismatch (" + std::to_string(a.width()) + "x" +
                 std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                 std::to_string(b.height()) + ")");
}

void require_same_shape(const GrayImage& a, const GrayImage& b, const char* where) {
    require_same_shape(a.plane(), b.plane(), where);
}

}  // namespace mfusion
