// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "mfusion/image.hpp"

namespace mfusion {

struct RegionDecision {
    int region = 0;
    std::vector<double> gradients;  // one per source, in source order
    int chosen = 0;                 // 0-based source index
};

struct FusionResult {
    GrayImage fused;
    std::vector<RegionDecision> decisions;
};

/// Average gradient of one region. Only pixels whose right and lower
/// neighbors lie in the same region contribute; no such pixel gives 0.
double average_gradient_region(const GrayImage& img, const LabelMap& labels, int region);

/// Same quantity for every region 1..labels.count in one pass.
std::vector<double> average_gradients(const GrayImage& img, const LabelMap& labels);

/// First source whose gradient is >= every other one.
int select_region_source(std::span<const double> gradients);

FusionResult fuse(std::span<const GrayImage> sources, const LabelMap& labels);

}  // namespace mfusion
