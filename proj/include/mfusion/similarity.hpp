// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mfusion/image.hpp"

namespace mfusion {

/// Local mean and population standard deviation over a square window
/// of radius `window_radius`, clipped at the image border.
struct WindowStats {
    Plane mu;
    Plane sigma;
    int window_radius = 0;
};

struct SsimParams {
    double alpha = 1.0;
    double beta = 1.0;
    double gamma = 1.0;
    double c1 = (0.01 * 255.0) * (0.01 * 255.0);
    double c2 = (0.03 * 255.0) * (0.03 * 255.0);
    double c3 = (0.03 * 255.0) * (0.03 * 255.0) / 2.0;
    int window_radius = 3;

    /// Throws InvalidConfig when any exponent or constant is non-positive
    /// or the radius is below 1.
    void validate() const;
    bool operator==(const SsimParams&) const = default;
};

struct SsimComponents {
    Plane luminance;
    Plane contrast;
    Plane structure;
    Plane sigma_x;
    Plane sigma_y;
    Plane sigma_xy;
};

struct SsimMaps {
    Plane ssim;
    Plane snsim;
    Plane sign;    // +1 where sigma_x > sigma_y, -1 otherwise
    Plane ssnsim;
    Plane sigma_xy;
};

WindowStats window_stats(const GrayImage& img, int window_radius);

SsimComponents ssim_component_maps(const GrayImage& x, const GrayImage& y,
                                   const SsimParams& p = {});

Plane ssim_map(const GrayImage& x, const GrayImage& y, const SsimParams& p = {});

/// Bundles SSIM, its complement, the focus sign and the signed
/// non-similarity map for a pair of registered sources.
SsimMaps ssnsim_map(const GrayImage& x, const GrayImage& y, const SsimParams& p = {});

}  // namespace mfusion
