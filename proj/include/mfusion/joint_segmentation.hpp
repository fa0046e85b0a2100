// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "mfusion/image.hpp"

namespace mfusion {

/// Class maps of the three pairwise segmentations scaled onto the
/// progressions {1..N}, {(N+1)..N(N+1)} and {(N+1)^2..N(N+1)^2}.
struct ProgressionPlanes {
    LabelMap a;
    LabelMap b;
    LabelMap c;
    int n_cluster = 0;
};

struct ClassTriple {
    int xy = 0;
    int xz = 0;
    int yz = 0;
    bool operator==(const ClassTriple&) const = default;
};

struct JointLabelMap {
    int n_cluster = 0;
    /// Raw per-pixel sum A + B + C.
    LabelMap sums;
    /// Distinct sums enumerated 1..K in ascending sum order.
    LabelMap dense;
    /// Decoded class triple for dense label k at index k - 1.
    std::vector<ClassTriple> provenance;
    /// 4-connected components of `dense`; these are the fusible regions.
    LabelMap regions;
};

std::int64_t encode_triple(const ClassTriple& t, int n_cluster);

/// Base-(N+1) digit extraction. Throws InvalidArgument when a digit
/// falls outside [1, N].
ClassTriple decode_triple(std::int64_t sum, int n_cluster);

ProgressionPlanes relabel_progressions(const LabelMap& r_xy, const LabelMap& r_xz,
                                       const LabelMap& r_yz, int n_cluster);

JointLabelMap joint_map(const ProgressionPlanes& planes);

}  // namespace mfusion
