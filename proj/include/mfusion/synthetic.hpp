// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "mfusion/image.hpp"

namespace mfusion {

enum class SplitMode { Half, Thirds };

struct SyntheticSet {
    GrayImage ground_truth;
    /// Half: [left blurred, right blurred]. Thirds: source k is sharp
    /// only in vertical third k.
    std::vector<GrayImage> sources;
};

/// Separable Gaussian blur, kernel radius ceil(3 sigma), replicated borders.
Plane gaussian_blur(const Plane& plane, double sigma);

/// Deterministic detailed test texture: band-limited noise over a mix
/// of oriented gratings, spanning roughly [20, 235].
GrayImage make_texture(int width, int height, std::uint64_t seed);

/// Column where split k of `parts` begins.
int split_column(int width, int parts, int k);

SyntheticSet gen_synthetic(const GrayImage& base, SplitMode mode, double blur_sigma);

}  // namespace mfusion
