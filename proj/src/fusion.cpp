// SPDX-License-Identifier: Apache-2.0
#include "mfusion/fusion.hpp"

#include <cmath>
#include <string>

namespace mfusion {

namespace {

void require_labels_match(const GrayImage& img, const LabelMap& labels, const char* where) {
    if (img.width() != labels.width || img.height() != labels.height)
        fail(ErrorKind::DimensionMismatch, std::string(where) + ": label map and image differ in size");
}

double forward_term(const GrayImage& img, int x, int y) {
    const double f = img.at(x, y);
    const double dv = f - img.at(x, y + 1);
    const double dh = f - img.at(x + 1, y);
    return std::sqrt((dv * dv + dh * dh) / 2.0);
}

}  // namespace

double average_gradient_region(const GrayImage& img, const LabelMap& labels, int region) {
    require_labels_match(img, labels, "average_gradient_region");
    double sum = 0.0;
    std::size_t count = 0;
    for (int y = 0; y + 1 < img.height(); ++y)
        for (int x = 0; x + 1 < img.width(); ++x) {
            if (labels.at(x, y) != region || labels.at(x + 1, y) != region ||
                labels.at(x, y + 1) != region)
                continue;
            sum += forward_term(img, x, y);
            ++count;
        }
    return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

std::vector<double> average_gradients(const GrayImage& img, const LabelMap& labels) {
    require_labels_match(img, labels, "average_gradients");
    std::vector<double> sum(static_cast<std::size_t>(labels.count), 0.0);
    std::vector<std::size_t> count(sum.size(), 0);
    for (int y = 0; y + 1 < img.height(); ++y)
        for (int x = 0; x + 1 < img.width(); ++x) {
            const std::int32_t l = labels.at(x, y);
            if (l < 1 || l > labels.count || labels.at(x + 1, y) != l || labels.at(x, y + 1) != l)
                continue;
            sum[static_cast<std::size_t>(l - 1)] += forward_term(img, x, y);
            ++count[static_cast<std::size_t>(l - 1)];
        }
    for (std::size_t k = 0; k < sum.size(); ++k)
        sum[k] = count[k] == 0 ? 0.0 : sum[k] / static_cast<double>(count[k]);
    return sum;
}

int select_region_source(std::span<const double> gradients) {
    if (gradients.size() < 2) fail(ErrorKind::InvalidArgument, "select_region_source needs at least two sources");
    for (double g : gradients)
        if (!std::isfinite(g)) fail(ErrorKind::InvalidArgument, "select_region_source: non-finite gradient");
    for (std::size_t k = 0; k < gradients.size(); ++k) {
        bool dominates = true;
        for (std::size_t l = 0; l < gradients.size(); ++l)
            if (l != k && !(gradients[k] >= gradients[l])) dominates = false;
        if (dominates) return static_cast<int>(k);
    }
    return 0;  // unreachable for finite input
}

FusionResult fuse(std::span<const GrayImage> sources, const LabelMap& labels) {
    if (sources.size() < 2 || sources.size() > 3)
        fail(ErrorKind::InvalidArgument, "fuse takes 2 or 3 sources");
    for (const GrayImage& s : sources) require_same_shape(sources.front(), s, "fuse");
    require_labels_match(sources.front(), labels, "fuse");
    if (!labels.is_total()) fail(ErrorKind::InvalidArgument, "fuse: label map is not a total partition");
    for (std::int32_t l : labels.labels)
        if (l > labels.count) fail(ErrorKind::InvalidArgument, "fuse: label exceeds region count");

    std::vector<std::vector<double>> per_source;
    per_source.reserve(sources.size());
    for (const GrayImage& s : sources) per_source.push_back(average_gradients(s, labels));

    FusionResult out;
    out.decisions.resize(static_cast<std::size_t>(labels.count));
    std::vector<int> chosen(out.decisions.size(), 0);
    for (std::size_t r = 0; r < out.decisions.size(); ++r) {
        RegionDecision& d = out.decisions[r];
        d.region = static_cast<int>(r) + 1;
        for (const auto& g : per_source) d.gradients.push_back(g[r]);
        d.chosen = select_region_source(d.gradients);
        chosen[r] = d.chosen;
    }

    Plane fused(sources.front().width(), sources.front().height());
    for (std::size_t k = 0; k < fused.size(); ++k)
        fused[k] = sources[static_cast<std::size_t>(chosen[static_cast<std::size_t>(labels.labels[k] - 1)])][k];
    out.fused = GrayImage(std::move(fused));
    return out;
}

}  // namespace mfusion
