// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mfusion/segmentation.hpp"
#include "mfusion/similarity.hpp"

namespace mfusion {

struct PipelineConfig {
    SsimParams ssim;
    double hmin = 0.05;
    DepthMode hmin_mode = DepthMode::Relative;
    /// Unset means 5 for two sources and 3 for three.
    std::optional<int> n_cluster;
    double fuzzifier = 2.0;
    double tol = 1e-6;
    int max_iter = 300;
    FcmInit fcm_init = FcmInit::Quantile;
    std::uint64_t seed = 0;
    bool dump_intermediates = false;
    std::string out_path;
    std::string dump_dir;
    std::string report_path;

    int cluster_count(std::size_t n_sources) const {
        return n_cluster.value_or(n_sources == 3 ? 3 : 5);
    }
    SegmentationParams segmentation(std::size_t n_sources) const;

    /// Range checks for every field; throws InvalidConfig.
    void validate() const;

    bool operator==(const PipelineConfig&) const = default;
};

/// Keys accepted by set_config_value and the config file, in file order.
const std::vector<std::string>& config_keys();

void set_config_value(PipelineConfig& cfg, const std::string& key, const std::string& value);
std::string get_config_value(const PipelineConfig& cfg, const std::string& key);

/// Applies "key = value" lines onto `cfg`. Blank lines and lines
/// starting with '#' are ignored.
void apply_config_text(PipelineConfig& cfg, const std::string& text);
void apply_config_file(PipelineConfig& cfg, const std::string& path);

/// Every key, one per line; reals are written with 17 significant
/// digits so parsing the text back reproduces the config exactly.
std::string config_to_text(const PipelineConfig& cfg);

}  // namespace mfusion
