// SPDX-License-Identifier: Apache-2.0
#include "mfusion/pipeline.hpp"

#include <filesystem>
#include <future>

#include "mfusion/image_io.hpp"

namespace mfusion {

namespace {

constexpr const char* kSourceNames[] = {"X", "Y", "Z"};

PairSegmentation segment_pair(const GrayImage& a, const GrayImage& b, int first, int second,
                              const PipelineConfig& cfg, std::size_t n_sources) {
    PairSegmentation p;
    p.first = first;
    p.second = second;
    try {
        p.maps = ssnsim_map(a, b, cfg.ssim);
        p.seg = segment(p.maps.ssnsim, cfg.segmentation(n_sources));
    } catch (const Error& e) {
        throw Error(e.kind(), "pair " + p.name() + ": " + e.what());
    }
    return p;
}

}  // namespace

std::string PairSegmentation::name() const {
    return std::string(kSourceNames[first]) + kSourceNames[second];
}

PipelineResult run_pipeline(std::span<const GrayImage> sources, const PipelineConfig& cfg) {
    if (sources.size() != 2 && sources.size() != 3)
        fail(ErrorKind::InvalidArgument, "the pipeline fuses 2 or 3 sources");
    cfg.validate();
    for (const GrayImage& s : sources) require_same_shape(sources.front(), s, "pipeline");

    PipelineResult r;
    r.n_cluster = cfg.cluster_count(sources.size());
    if (sources.size() == 2) {
        r.pairs.push_back(segment_pair(sources[0], sources[1], 0, 1, cfg, 2));
        r.regions = r.pairs.front().seg.regions;
    } else {
        const std::pair<int, int> order[] = {{0, 1}, {0, 2}, {1, 2}};
        std::vector<std::future<PairSegmentation>> jobs;
        for (const auto& [i, j] : order)
            jobs.push_back(std::async(std::launch::async, segment_pair, std::cref(sources[i]),
                                      std::cref(sources[j]), i, j, std::cref(cfg), std::size_t{3}));
        // Collect all before rethrowing so no task outlives this frame.
        std::vector<std::exception_ptr> errors;
        for (auto& job : jobs) {
            try {
                r.pairs.push_back(job.get());
            } catch (...) {
                errors.push_back(std::current_exception());
            }
        }
        if (!errors.empty()) std::rethrow_exception(errors.front());

        const ProgressionPlanes planes = relabel_progressions(
            r.pairs[0].seg.classes, r.pairs[1].seg.classes, r.pairs[2].seg.classes, r.n_cluster);
        r.joint = joint_map(planes);
        r.regions = r.joint->regions;
    }
    r.fusion = fuse(sources, r.regions);
    r.metrics = evaluate(r.fusion.fused, sources);
    return r;
}

nlohmann::json metrics_json(const MetricsReport& m) {
    return {
        {"v", m.v},
        {"variance", m.variance},
        {"sf", m.sf},
        {"ag", m.ag},
        {"h", m.h},
        {"mi", m.mi},
        {"mi_convention", "sum over sources"},
        {"mi_per_source", m.mi_per_source},
        {"q_abf", m.q_abf},
        {"q_per_source", m.q_per_source},
    };
}

nlohmann::json report_json(const PipelineResult& result, const PipelineConfig& cfg,
                           std::size_t n_sources) {
    nlohmann::json config = nlohmann::json::object();
    for (const std::string& key : config_keys()) {
        if (key == "out" || key == "dump_dir" || key == "report") continue;
        config[key] = get_config_value(cfg, key);
    }

    nlohmann::json pairs = nlohmann::json::array();
    for (const PairSegmentation& p : result.pairs) {
        pairs.push_back({
            {"pair", p.name()},
            {"watershed_regions", p.seg.watershed.count},
            {"clusters", p.seg.cluster.n_cluster},
            {"fcm_iterations", p.seg.cluster.iterations},
            {"centers", p.seg.cluster.centers},
            {"final_regions", p.seg.regions.count},
        });
    }

    nlohmann::json segmentation = {
        {"n_cluster", result.n_cluster},
        {"pairs", pairs},
        {"regions", result.regions.count},
    };
    if (result.joint) {
        nlohmann::json labels = nlohmann::json::array();
        for (std::size_t k = 0; k < result.joint->provenance.size(); ++k) {
            const ClassTriple& t = result.joint->provenance[k];
            labels.push_back({{"sum", encode_triple(t, result.joint->n_cluster)},
                              {"classes", {t.xy, t.xz, t.yz}}});
        }
        segmentation["joint"] = {{"labels", labels}, {"regions", result.joint->regions.count}};
    }

    nlohmann::json decisions = nlohmann::json::array();
    for (const RegionDecision& d : result.fusion.decisions)
        decisions.push_back({{"region", d.region},
                             {"gradients", d.gradients},
                             {"source", kSourceNames[d.chosen]}});

    return {
        {"schema", "mfusion.report/1"},
        {"mode", n_sources == 3 ? "fuse3" : "fuse2"},
        {"sources", n_sources},
        {"width", result.fusion.fused.width()},
        {"height", result.fusion.fused.height()},
        {"config", config},
        {"segmentation", segmentation},
        {"decisions", decisions},
        {"metrics", metrics_json(result.metrics)},
    };
}

nlohmann::json score_report_json(const MetricsReport& m, std::size_t n_sources) {
    return {{"schema", "mfusion.metrics/1"}, {"sources", n_sources}, {"metrics", metrics_json(m)}};
}

void write_dumps(const PipelineResult& result, const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) fail(ErrorKind::Io, dir + ": cannot create dump directory: " + ec.message());
    const std::filesystem::path base(dir);
    auto path = [&](const std::string& name) { return (base / name).string(); };
    auto dump_labels = [&](const std::string& stem, const LabelMap& labels) {
        write_image(path(stem + ".png"), render_labels(labels));
        write_labels(path(stem + ".txt"), labels);
    };

    for (const PairSegmentation& p : result.pairs) {
        const std::string n = p.name();
        write_image(path("ssim_" + n + ".png"), rescale_for_view(p.maps.ssim));
        write_image(path("ssnsim_" + n + ".png"), rescale_for_view(p.maps.ssnsim));
        write_image(path("gradient_" + n + ".png"), rescale_for_view(p.seg.gradient));
        dump_labels("watershed_" + n, p.seg.watershed);
        dump_labels("clusters_" + n, p.seg.classes);
        dump_labels("regions_" + n, p.seg.regions);
    }
    if (result.joint) {
        dump_labels("joint_sums", result.joint->sums);
        dump_labels("joint_regions", result.joint->regions);
    }
    dump_labels("final_regions", result.regions);
}

}  // namespace mfusion
