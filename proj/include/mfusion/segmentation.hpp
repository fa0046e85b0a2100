// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "mfusion/image.hpp"

namespace mfusion {

/// Mean signed non-similarity and pixel count per watershed region.
/// Index n holds region label n + 1.
struct RegionFeatures {
    std::vector<double> mns;
    std::vector<std::int64_t> pixel_count;
};

struct ClusterResult {
    int n_cluster = 0;
    int n_items = 0;
    /// Row-major n_cluster x n_items; column n sums to 1.
    std::vector<double> memberships;
    /// 1-based cluster per item.
    std::vector<int> assignment;
    std::vector<double> centers;
    /// Objective sum(mu^m * d^2) after each iteration.
    std::vector<double> objective;
    int iterations = 0;

    double membership(int cluster, int item) const {
        return memberships[static_cast<std::size_t>(cluster) * n_items + item];
    }
};

enum class FcmInit { Quantile, Random };

struct FcmParams {
    int n_cluster = 5;
    double fuzzifier = 2.0;
    double tol = 1e-6;
    int max_iter = 300;
    FcmInit init = FcmInit::Quantile;
    std::uint64_t seed = 0;
};

enum class DepthMode { Relative, Absolute };

struct SegmentationParams {
    /// Relative: fraction of the gradient map's (max - min).
    double hmin = 0.05;
    DepthMode hmin_mode = DepthMode::Relative;
    FcmParams fcm;
};

/// Everything produced on the way from an SSNSIM plane to its final
/// partition, retained for dumps and for joint segmentation.
struct Segmentation {
    Plane gradient;
    Plane suppressed;
    LabelMap watershed;
    RegionFeatures features;
    ClusterResult cluster;
    /// Per-pixel class in [1, n_cluster]; boundaries resolved.
    LabelMap classes;
    /// 4-connected components of `classes`, numbered 1..K.
    LabelMap regions;
};

/// Sobel magnitude with replicated borders.
Plane gradient_magnitude(const Plane& map);

/// Grayscale reconstruction by erosion (4-connected) of `marker` over
/// `mask`; requires marker >= mask everywhere.
Plane reconstruct_by_erosion(const Plane& marker, const Plane& mask);

/// Reconstruction by erosion of (gradient + h) over gradient. Minima
/// shallower than h are filled; deeper ones are raised by h.
Plane h_minima(const Plane& gradient, double h);

/// Vincent-Soille immersion with 4-connectivity. Basins get labels
/// 1..count, watershed-line pixels get 0.
LabelMap watershed(const Plane& gradient);

RegionFeatures region_features(const LabelMap& labels, const Plane& ssnsim);

/// Fuzzy c-means on the scalar region features.
ClusterResult fcm(const RegionFeatures& features, const FcmParams& params);

/// Relabels regions by class and absorbs watershed-line pixels. A line
/// pixel touching one class joins it; one touching several joins the
/// class whose center is nearest its own SSNSIM value.
LabelMap merge_boundaries(const LabelMap& watershed_labels, const ClusterResult& cluster,
                          const Plane& ssnsim);

/// merge_boundaries followed by connected-component re-enumeration.
LabelMap merge_regions(const LabelMap& watershed_labels, const ClusterResult& cluster,
                       const Plane& ssnsim);

/// Full chain: gradient, H-minima, watershed, features, FCM, merge. The
/// cluster count is capped by the number of watershed regions.
Segmentation segment(const Plane& ssnsim, const SegmentationParams& params);

}  // namespace mfusion
