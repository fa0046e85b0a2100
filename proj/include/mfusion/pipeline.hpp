// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "mfusion/config.hpp"
#include "mfusion/fusion.hpp"
#include "mfusion/joint_segmentation.hpp"
#include "mfusion/metrics.hpp"
#include "mfusion/segmentation.hpp"
#include "mfusion/similarity.hpp"

namespace mfusion {

struct PairSegmentation {
    int first = 0;   // source indices
    int second = 0;
    SsimMaps maps;
    Segmentation seg;

    std::string name() const;  // "XY", "XZ", "YZ"
};

struct PipelineResult {
    int n_cluster = 0;
    std::vector<PairSegmentation> pairs;
    std::optional<JointLabelMap> joint;
    /// Partition handed to the fusion rule.
    LabelMap regions;
    FusionResult fusion;
    MetricsReport metrics;
};

/// Two sources: SSNSIM, segmentation, fusion and scoring. Three
/// sources: the three pairwise segmentations run concurrently and are
/// joined by label-progression sums before fusion.
PipelineResult run_pipeline(std::span<const GrayImage> sources, const PipelineConfig& cfg);

nlohmann::json metrics_json(const MetricsReport& m);
nlohmann::json report_json(const PipelineResult& result, const PipelineConfig& cfg,
                           std::size_t n_sources);
nlohmann::json score_report_json(const MetricsReport& m, std::size_t n_sources);

/// Writes the viewing renders and raw label text files of every
/// intermediate map into `dir`, which is created if missing.
void write_dumps(const PipelineResult& result, const std::string& dir);

}  // namespace mfusion
