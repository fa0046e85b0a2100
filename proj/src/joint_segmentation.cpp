// SPDX-License-Identifier: Apache-2.0
#include "mfusion/joint_segmentation.hpp"

#include <algorithm>
#include <string>

namespace mfusion {

namespace {

void require_classes(const LabelMap& map, int n, const char* name) {
    for (std::int32_t l : map.labels)
        if (l < 1 || l > n)
            fail(ErrorKind::InvalidArgument, std::string("relabel_progressions: ") + name +
                                                 " has class label " + std::to_string(l) +
                                                 " outside [1, " + std::to_string(n) + "]");
}

bool same_dims(const LabelMap& a, const LabelMap& b) {
    return a.width == b.width && a.height == b.height;
}

}  // namespace

std::int64_t encode_triple(const ClassTriple& t, int n_cluster) {
    for (int d : {t.xy, t.xz, t.yz})
        if (d < 1 || d > n_cluster)
            fail(ErrorKind::InvalidArgument, "encode_triple: class " + std::to_string(d) + " outside [1, " +
                                                 std::to_string(n_cluster) + "]");
    const std::int64_t base = n_cluster + 1;
    return t.xy + t.xz * base + t.yz * base * base;
}

ClassTriple decode_triple(std::int64_t sum, int n_cluster) {
    const std::int64_t base = n_cluster + 1;
    ClassTriple t{static_cast<int>(sum % base), static_cast<int>((sum / base) % base),
                  static_cast<int>(sum / (base * base))};
    for (int d : {t.xy, t.xz, t.yz})
        if (d < 1 || d > n_cluster)
            fail(ErrorKind::InvalidArgument,
                 "decode_triple: " + std::to_string(sum) + " is not a valid joint label");
    return t;
}

ProgressionPlanes relabel_progressions(const LabelMap& r_xy, const LabelMap& r_xz,
                                       const LabelMap& r_yz, int n_cluster) {
    if (n_cluster < 1) fail(ErrorKind::InvalidArgument, "relabel_progressions: cluster count must be positive");
    if (!same_dims(r_xy, r_xz) || !same_dims(r_xy, r_yz))
        fail(ErrorKind::DimensionMismatch, "relabel_progressions: label maps differ in size");
    require_classes(r_xy, n_cluster, "R_XY");
    require_classes(r_xz, n_cluster, "R_XZ");
    require_classes(r_yz, n_cluster, "R_YZ");

    const std::int32_t step_b = n_cluster + 1;
    const std::int32_t step_c = step_b * step_b;
    ProgressionPlanes out{r_xy, r_xz, r_yz, n_cluster};
    for (auto& l : out.b.labels) l *= step_b;
    for (auto& l : out.c.labels) l *= step_c;
    out.a.count = n_cluster;
    out.b.count = n_cluster * step_b;
    out.c.count = n_cluster * step_c;
    return out;
}

JointLabelMap joint_map(const ProgressionPlanes& planes) {
    if (!same_dims(planes.a, planes.b) || !same_dims(planes.a, planes.c))
        fail(ErrorKind::DimensionMismatch, "joint_map: planes differ in size");

    JointLabelMap out;
    out.n_cluster = planes.n_cluster;
    out.sums = LabelMap(planes.a.width, planes.a.height, 0);
    for (std::size_t k = 0; k < out.sums.size(); ++k)
        out.sums.labels[k] = planes.a.labels[k] + planes.b.labels[k] + planes.c.labels[k];

    std::vector<std::int32_t> distinct = out.sums.labels;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    out.sums.count = distinct.empty() ? 0 : distinct.back();

    out.dense = LabelMap(planes.a.width, planes.a.height, 0);
    for (std::size_t k = 0; k < out.sums.size(); ++k) {
        const auto it = std::lower_bound(distinct.begin(), distinct.end(), out.sums.labels[k]);
        out.dense.labels[k] = static_cast<std::int32_t>(it - distinct.begin()) + 1;
    }
    out.dense.count = static_cast<int>(distinct.size());

    out.provenance.reserve(distinct.size());
    for (std::int32_t s : distinct) out.provenance.push_back(decode_triple(s, planes.n_cluster));

    out.regions = connected_components(out.dense);
    return out;
}

}  // namespace mfusion
