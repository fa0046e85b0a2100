// SPDX-License-Identifier: Apache-2.0
#include "mfusion/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace mfusion {

Plane gaussian_blur(const Plane& plane, double sigma) {
    if (!(sigma > 0.0)) fail(ErrorKind::InvalidArgument, "blur sigma must be positive");
    const int r = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> kernel(static_cast<std::size_t>(2 * r + 1));
    double total = 0.0;
    for (int i = -r; i <= r; ++i) {
        const double v = std::exp(-(i * i) / (2.0 * sigma * sigma));
        kernel[static_cast<std::size_t>(i + r)] = v;
        total += v;
    }
    for (double& v : kernel) v /= total;

    const int w = plane.width();
    const int h = plane.height();
    Plane tmp(w, h), out(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double s = 0.0;
            for (int i = -r; i <= r; ++i)
                s += kernel[static_cast<std::size_t>(i + r)] * plane.at(std::clamp(x + i, 0, w - 1), y);
            tmp.at(x, y) = s;
        }
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double s = 0.0;
            for (int i = -r; i <= r; ++i)
                s += kernel[static_cast<std::size_t>(i + r)] * tmp.at(x, std::clamp(y + i, 0, h - 1));
            out.at(x, y) = s;
        }
    return out;
}

GrayImage make_texture(int width, int height, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    Plane noise(width, height);
    for (double& v : noise.values()) v = uniform(rng);
    Plane fine = gaussian_blur(noise, 0.8);

    Plane out(width, height);
    const double pi = std::numbers::pi;
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            const double grating = std::sin(2.0 * pi * (x * 0.11 + y * 0.05)) +
                                   std::sin(2.0 * pi * (x * -0.04 + y * 0.13)) * 0.7 +
                                   std::sin(2.0 * pi * (x * 0.21 + y * 0.19)) * 0.5;
            out.at(x, y) = grating;
        }
    // Normalize both layers independently so their mix is predictable.
    auto normalize = [](Plane& p) {
        const double lo = p.min_value(), hi = p.max_value();
        for (double& v : p.values()) v = hi > lo ? (v - lo) / (hi - lo) : 0.5;
    };
    normalize(fine);
    normalize(out);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = 20.0 + 215.0 * (0.6 * fine[k] + 0.4 * out[k]);
    return GrayImage::quantized(out);
}

int split_column(int width, int parts, int k) { return width * k / parts; }

SyntheticSet gen_synthetic(const GrayImage& base, SplitMode mode, double blur_sigma) {
    const GrayImage blurred = GrayImage::quantized(gaussian_blur(base.plane(), blur_sigma));
    const int parts = mode == SplitMode::Half ? 2 : 3;
    const int w = base.width();
    const int h = base.height();
    SyntheticSet out{base, {}};
    for (int k = 0; k < parts; ++k) {
        const int x0 = split_column(w, parts, k);
        const int x1 = split_column(w, parts, k + 1);
        Plane src(w, h);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                // Half mode: source k is blurred on part k.
                // Thirds mode: source k is sharp on part k only.
                const bool inside = x >= x0 && x < x1;
                const bool sharp = mode == SplitMode::Half ? !inside : inside;
                src.at(x, y) = sharp ? base.at(x, y) : blurred.at(x, y);
            }
        out.sources.emplace_back(std::move(src));
    }
    return out;
}

}  // namespace mfusion
