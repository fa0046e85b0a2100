// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. Talks to the library only through mfusion.h.

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mfusion/mfusion.h"

namespace {

struct ImageDeleter {
    void operator()(mf_image* p) const { mf_image_free(p); }
};
struct ConfigDeleter {
    void operator()(mf_config* p) const { mf_config_free(p); }
};
struct ResultDeleter {
    void operator()(mf_result* p) const { mf_result_free(p); }
};
struct StringDeleter {
    void operator()(char* p) const { mf_string_free(p); }
};
using ImagePtr = std::unique_ptr<mf_image, ImageDeleter>;
using ConfigPtr = std::unique_ptr<mf_config, ConfigDeleter>;
using ResultPtr = std::unique_ptr<mf_result, ResultDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

// Carries a status out of nested helpers; the message is already in
// mf_last_error() or passed explicitly.
struct Failure {
    mf_status status;
    std::string message;
};

void check(mf_status st) {
    if (st != MF_OK) throw Failure{st, mf_last_error()};
}

ImagePtr load(const std::string& path) {
    mf_image* img = nullptr;
    check(mf_image_load(path.c_str(), &img));
    return ImagePtr(img);
}

std::vector<const mf_image*> raw(const std::vector<ImagePtr>& images) {
    std::vector<const mf_image*> out;
    for (const auto& i : images) out.push_back(i.get());
    return out;
}

std::string config_value(const mf_config* cfg, const char* key) {
    char buf[4096];
    check(mf_config_get(cfg, key, buf, sizeof buf));
    return buf;
}

struct FuseOptions {
    std::vector<std::string> inputs;
    std::string out;
    std::string config;
    std::string dump;
    std::string json;
    std::optional<int> n_cluster;
    std::optional<int> window;
    std::optional<double> hmin;
    bool hmin_absolute = false;
    std::optional<long long> seed;
    std::string fcm_init;
};

void add_fuse_options(CLI::App* cmd, FuseOptions& o) {
    cmd->add_option("--out", o.out, "Fused image path (.png or .pgm)");
    cmd->add_option("--config", o.config, "Key = value config file; flags override it");
    cmd->add_option("--dump", o.dump, "Directory for intermediate maps");
    cmd->add_option("--json", o.json, "Report path (default: fused path with .json)");
    cmd->add_option("--n-cluster", o.n_cluster, "FCM cluster count");
    cmd->add_option("--window", o.window, "SSIM window radius");
    cmd->add_option("--hmin", o.hmin, "H-minima depth (relative unless --hmin-absolute)");
    cmd->add_flag("--hmin-absolute", o.hmin_absolute, "Treat --hmin as an absolute depth");
    cmd->add_option("--seed", o.seed, "Seed for random FCM initialization");
    cmd->add_option("--fcm-init", o.fcm_init, "FCM initialization: quantile or random")
        ->check(CLI::IsMember({"quantile", "random"}));
}

int run_fuse(const FuseOptions& o) {
    mf_config* raw_cfg = nullptr;
    check(mf_config_create(&raw_cfg));
    ConfigPtr cfg(raw_cfg);
    if (!o.config.empty()) check(mf_config_load(cfg.get(), o.config.c_str()));
    auto set = [&](const char* key, const std::string& value) { check(mf_config_set(cfg.get(), key, value.c_str())); };
    if (o.n_cluster) set("n_cluster", std::to_string(*o.n_cluster));
    if (o.window) set("window_radius", std::to_string(*o.window));
    if (o.hmin) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", *o.hmin);
        set("hmin", buf);
    }
    if (o.hmin_absolute) set("hmin_mode", "absolute");
    if (o.seed) set("seed", std::to_string(*o.seed));
    if (!o.fcm_init.empty()) set("fcm_init", o.fcm_init);
    if (!o.out.empty()) set("out", o.out);
    if (!o.dump.empty()) {
        set("dump_dir", o.dump);
        set("dump_intermediates", "true");
    }
    if (!o.json.empty()) set("report", o.json);

    std::vector<ImagePtr> images;
    for (const auto& path : o.inputs) images.push_back(load(path));
    const auto sources = raw(images);

    mf_result* raw_result = nullptr;
    check(mf_fuse(sources.data(), sources.size(), cfg.get(), &raw_result));
    ResultPtr result(raw_result);

    std::string out = config_value(cfg.get(), "out");
    if (out.empty()) out = "fused.png";
    std::string report = config_value(cfg.get(), "report");
    if (report.empty()) report = std::filesystem::path(out).replace_extension(".json").string();
    std::string dump;
    if (config_value(cfg.get(), "dump_intermediates") == "true") {
        dump = config_value(cfg.get(), "dump_dir");
        if (dump.empty()) dump = "dump";
    }
    check(mf_result_write(result.get(), out.c_str(), report.c_str(), dump.empty() ? nullptr : dump.c_str()));

    mf_metrics m{};
    check(mf_result_metrics(result.get(), &m));
    std::printf("fused %zu sources into %s (%zu regions)\n", sources.size(), out.c_str(),
                mf_result_region_count(result.get()));
    std::printf("V=%.4f SF=%.4f AG=%.4f H=%.4f MI=%.4f QABF=%.4f\n", m.v, m.sf, m.ag, m.h, m.mi, m.q_abf);
    return MF_OK;
}

int run_score(const std::string& fused_path, const std::vector<std::string>& source_paths,
              const std::string& json_path) {
    ImagePtr fused = load(fused_path);
    std::vector<ImagePtr> images;
    for (const auto& path : source_paths) images.push_back(load(path));
    const auto sources = raw(images);
    char* text = nullptr;
    check(mf_score_report_json(fused.get(), sources.data(), sources.size(), &text));
    StringPtr owned(text);
    if (json_path.empty()) {
        std::fputs(text, stdout);
        return MF_OK;
    }
    std::FILE* f = std::fopen(json_path.c_str(), "wb");
    if (!f) throw Failure{MF_ERR_IO, json_path + ": cannot open for writing"};
    const std::size_t len = std::strlen(text);
    const bool ok = std::fwrite(text, 1, len, f) == len;
    std::fclose(f);
    if (!ok) throw Failure{MF_ERR_IO, json_path + ": write failed"};
    return MF_OK;
}

int run_synth(const std::string& base_path, const std::string& mode, double sigma, const std::string& out_dir) {
    ImagePtr base = load(base_path);
    mf_image* outs[3] = {nullptr, nullptr, nullptr};
    std::size_t count = 0;
    check(mf_synthesize(base.get(), mode == "half" ? MF_SPLIT_HALF : MF_SPLIT_THIRDS, sigma, outs, &count));
    std::vector<ImagePtr> owned;
    for (std::size_t k = 0; k < count; ++k) owned.emplace_back(outs[k]);

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw Failure{MF_ERR_IO, out_dir + ": " + ec.message()};
    const std::filesystem::path dir(out_dir);
    const char* names[] = {"source_x.png", "source_y.png", "source_z.png"};
    for (std::size_t k = 0; k < count; ++k) check(mf_image_save(owned[k].get(), (dir / names[k]).string().c_str()));
    check(mf_image_save(base.get(), (dir / "ground_truth.png").string().c_str()));
    std::printf("wrote %zu sources and ground_truth.png to %s\n", count, out_dir.c_str());
    return MF_OK;
}

int run_texture(const std::string& out, int width, int height, long long seed) {
    mf_image* img = nullptr;
    check(mf_texture(width, height, static_cast<std::uint64_t>(seed), &img));
    ImagePtr owned(img);
    check(mf_image_save(owned.get(), out.c_str()));
    return MF_OK;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-focus image fusion from signed structural non-similarity segmentation"};
    app.require_subcommand(1);

    FuseOptions fuse2_opts, fuse3_opts;
    auto* fuse2 = app.add_subcommand("fuse2", "Fuse two registered grayscale sources");
    fuse2->add_option("inputs", fuse2_opts.inputs, "X Y")->required()->expected(2);
    add_fuse_options(fuse2, fuse2_opts);

    auto* fuse3 = app.add_subcommand("fuse3", "Fuse three sources through joint segmentation");
    fuse3->add_option("inputs", fuse3_opts.inputs, "X Y Z")->required()->expected(3);
    add_fuse_options(fuse3, fuse3_opts);

    std::string score_fused, score_json;
    std::vector<std::string> score_sources;
    auto* score = app.add_subcommand("score", "Compute quality metrics of a fused image");
    score->add_option("fused", score_fused, "Fused image")->required();
    score->add_option("sources", score_sources, "Source images")->required()->expected(1, 3);
    score->add_option("--json", score_json, "Write the report here instead of stdout");

    std::string synth_base, synth_mode = "half", synth_out = ".";
    double synth_sigma = 3.0;
    auto* synth = app.add_subcommand("synth", "Make partially blurred sources from an all-in-focus image");
    synth->add_option("base", synth_base, "All-in-focus base image")->required();
    synth->add_option("--mode", synth_mode, "half or thirds")->check(CLI::IsMember({"half", "thirds"}));
    synth->add_option("--sigma", synth_sigma, "Gaussian blur sigma")->check(CLI::PositiveNumber);
    synth->add_option("--out", synth_out, "Output directory");

    std::string texture_out;
    int texture_w = 256, texture_h = 256;
    long long texture_seed = 1;
    auto* texture = app.add_subcommand("texture", "Write a deterministic detailed test texture");
    texture->add_option("out", texture_out, "Output image")->required();
    texture->add_option("--width", texture_w, "Width")->check(CLI::Range(2, 1 << 15));
    texture->add_option("--height", texture_h, "Height")->check(CLI::Range(2, 1 << 15));
    texture->add_option("--seed", texture_seed, "Seed")->check(CLI::NonNegativeNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return MF_ERR_CONFIG;
    }

    try {
        if (*fuse2) return run_fuse(fuse2_opts);
        if (*fuse3) return run_fuse(fuse3_opts);
        if (*score) return run_score(score_fused, score_sources, score_json);
        if (*synth) return run_synth(synth_base, synth_mode, synth_sigma, synth_out);
        if (*texture) return run_texture(texture_out, texture_w, texture_h, texture_seed);
    } catch (const Failure& f) {
        std::fprintf(stderr, "mfusion: error: %s\n", f.message.c_str());
        return f.status;
    }
    return MF_OK;
}
