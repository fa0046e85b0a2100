// SPDX-License-Identifier: Apache-2.0
#include "mfusion/mfusion.h"

#include <cstring>
#include <fstream>
#include <new>
#include <string>
#include <vector>

#include "mfusion/config.hpp"
#include "mfusion/image_io.hpp"
#include "mfusion/metrics.hpp"
#include "mfusion/pipeline.hpp"
#include "mfusion/synthetic.hpp"

struct mf_image {
    mfusion::GrayImage img;
};

struct mf_config {
    mfusion::PipelineConfig cfg;
};

struct mf_result {
    mfusion::PipelineResult result;
    mfusion::PipelineConfig cfg;
    std::size_t n_sources = 0;
    mf_image fused;
};

namespace {

thread_local std::string g_last_error;

mf_status set_error(mf_status status, const std::string& message) {
    g_last_error = message;
    return status;
}

mf_status to_status(mfusion::ErrorKind kind) {
    switch (kind) {
        case mfusion::ErrorKind::Io: return MF_ERR_IO;
        case mfusion::ErrorKind::DimensionMismatch: return MF_ERR_DIMENSION;
        case mfusion::ErrorKind::DegenerateInput: return MF_ERR_DEGENERATE;
        case mfusion::ErrorKind::InvalidConfig: return MF_ERR_CONFIG;
        case mfusion::ErrorKind::InvalidArgument: return MF_ERR_ARGUMENT;
    }
    return MF_ERR_INTERNAL;
}

template <typename Fn>
mf_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return MF_OK;
    } catch (const mfusion::Error& e) {
        return set_error(to_status(e.kind()), e.what());
    } catch (const std::bad_alloc&) {
        return set_error(MF_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return set_error(MF_ERR_INTERNAL, e.what());
    }
}

char* copy_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

std::vector<mfusion::GrayImage> collect(const mf_image* const* sources, std::size_t count) {
    if (!sources) mfusion::fail(mfusion::ErrorKind::InvalidArgument, "sources is NULL");
    std::vector<mfusion::GrayImage> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        if (!sources[k]) mfusion::fail(mfusion::ErrorKind::InvalidArgument, "source image is NULL");
        out.push_back(sources[k]->img);
    }
    return out;
}

void fill_metrics(const mfusion::MetricsReport& m, mf_metrics* out) {
    out->v = m.v;
    out->variance = m.variance;
    out->sf = m.sf;
    out->ag = m.ag;
    out->h = m.h;
    out->mi = m.mi;
    out->q_abf = m.q_abf;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) mfusion::fail(mfusion::ErrorKind::Io, path + ": cannot open for writing");
    out << text;
    if (!out) mfusion::fail(mfusion::ErrorKind::Io, path + ": write failed");
}

#define MF_REQUIRE(cond, msg) \
    if (!(cond)) return set_error(MF_ERR_ARGUMENT, msg)

}  // namespace

extern "C" {

const char* mf_last_error(void) { return g_last_error.c_str(); }

const char* mf_version(void) { return "0.1.0"; }

void mf_string_free(char* s) { delete[] s; }

mf_status mf_image_create(int width, int height, const double* data, mf_image** out) {
    MF_REQUIRE(out && data, "NULL argument");
    return guarded([&] {
        if (width < 2 || height < 2)
            mfusion::fail(mfusion::ErrorKind::InvalidArgument, "image must be at least 2x2");
        std::vector<double> values(data, data + static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
        *out = new mf_image{mfusion::GrayImage(width, height, std::move(values))};
    });
}

mf_status mf_image_load(const char* path, mf_image** out) {
    MF_REQUIRE(out && path, "NULL argument");
    return guarded([&] { *out = new mf_image{mfusion::read_image(path)}; });
}

mf_status mf_image_save(const mf_image* img, const char* path) {
    MF_REQUIRE(img && path, "NULL argument");
    return guarded([&] { mfusion::write_image(path, img->img); });
}

int mf_image_width(const mf_image* img) { return img ? img->img.width() : 0; }

int mf_image_height(const mf_image* img) { return img ? img->img.height() : 0; }

mf_status mf_image_copy_data(const mf_image* img, double* out, size_t capacity) {
    MF_REQUIRE(img && out, "NULL argument");
    MF_REQUIRE(capacity >= img->img.size(), "output buffer too small");
    const auto values = img->img.values();
    std::copy(values.begin(), values.end(), out);
    return MF_OK;
}

void mf_image_free(mf_image* img) { delete img; }

mf_status mf_config_create(mf_config** out) {
    MF_REQUIRE(out, "NULL argument");
    return guarded([&] { *out = new mf_config{}; });
}

mf_status mf_config_load(mf_config* cfg, const char* path) {
    MF_REQUIRE(cfg && path, "NULL argument");
    return guarded([&] {
        mfusion::PipelineConfig next = cfg->cfg;
        mfusion::apply_config_file(next, path);
        next.validate();
        cfg->cfg = next;
    });
}

mf_status mf_config_set(mf_config* cfg, const char* key, const char* value) {
    MF_REQUIRE(cfg && key && value, "NULL argument");
    return guarded([&] {
        mfusion::PipelineConfig next = cfg->cfg;
        mfusion::set_config_value(next, key, value);
        next.validate();
        cfg->cfg = next;
    });
}

mf_status mf_config_get(const mf_config* cfg, const char* key, char* buf, size_t buflen) {
    MF_REQUIRE(cfg && key && buf, "NULL argument");
    std::string value;
    const mf_status st = guarded([&] { value = mfusion::get_config_value(cfg->cfg, key); });
    if (st != MF_OK) return st;
    MF_REQUIRE(value.size() < buflen, "buffer too small for config value");
    std::memcpy(buf, value.c_str(), value.size() + 1);
    return MF_OK;
}

mf_status mf_config_serialize(const mf_config* cfg, char** out) {
    MF_REQUIRE(cfg && out, "NULL argument");
    return guarded([&] { *out = copy_string(mfusion::config_to_text(cfg->cfg)); });
}

void mf_config_free(mf_config* cfg) { delete cfg; }

mf_status mf_fuse(const mf_image* const* sources, size_t count, const mf_config* cfg, mf_result** out) {
    MF_REQUIRE(out, "NULL argument");
    MF_REQUIRE(count == 2 || count == 3, "fusion takes 2 or 3 sources");
    return guarded([&] {
        const std::vector<mfusion::GrayImage> images = collect(sources, count);
        const mfusion::PipelineConfig c = cfg ? cfg->cfg : mfusion::PipelineConfig{};
        auto* r = new mf_result{mfusion::run_pipeline(images, c), c, count, {}};
        r->fused.img = r->result.fusion.fused;
        *out = r;
    });
}

const mf_image* mf_result_fused(const mf_result* result) { return result ? &result->fused : nullptr; }

size_t mf_result_region_count(const mf_result* result) {
    return result ? static_cast<size_t>(result->result.regions.count) : 0;
}

mf_status mf_result_metrics(const mf_result* result, mf_metrics* out) {
    MF_REQUIRE(result && out, "NULL argument");
    fill_metrics(result->result.metrics, out);
    return MF_OK;
}

mf_status mf_result_report_json(const mf_result* result, char** out) {
    MF_REQUIRE(result && out, "NULL argument");
    return guarded([&] {
        *out = copy_string(mfusion::report_json(result->result, result->cfg, result->n_sources).dump(2) + "\n");
    });
}

mf_status mf_result_write(const mf_result* result, const char* fused_path, const char* report_path,
                          const char* dump_dir) {
    MF_REQUIRE(result, "NULL argument");
    return guarded([&] {
        if (fused_path) mfusion::write_image(fused_path, result->result.fusion.fused);
        if (report_path)
            write_text(report_path,
                       mfusion::report_json(result->result, result->cfg, result->n_sources).dump(2) + "\n");
        if (dump_dir) mfusion::write_dumps(result->result, dump_dir);
    });
}

void mf_result_free(mf_result* result) { delete result; }

mf_status mf_score(const mf_image* fused, const mf_image* const* sources, size_t count, mf_metrics* out) {
    MF_REQUIRE(fused && out, "NULL argument");
    MF_REQUIRE(count >= 1, "at least one source is required");
    return guarded([&] {
        const std::vector<mfusion::GrayImage> images = collect(sources, count);
        fill_metrics(mfusion::evaluate(fused->img, images), out);
    });
}

mf_status mf_score_report_json(const mf_image* fused, const mf_image* const* sources, size_t count,
                               char** out) {
    MF_REQUIRE(fused && out, "NULL argument");
    MF_REQUIRE(count >= 1, "at least one source is required");
    return guarded([&] {
        const std::vector<mfusion::GrayImage> images = collect(sources, count);
        const auto report = mfusion::evaluate(fused->img, images);
        *out = copy_string(mfusion::score_report_json(report, count).dump(2) + "\n");
    });
}

mf_status mf_texture(int width, int height, uint64_t seed, mf_image** out) {
    MF_REQUIRE(out, "NULL argument");
    return guarded([&] {
        if (width < 2 || height < 2)
            mfusion::fail(mfusion::ErrorKind::InvalidArgument, "texture must be at least 2x2");
        *out = new mf_image{mfusion::make_texture(width, height, seed)};
    });
}

mf_status mf_synthesize(const mf_image* base, mf_split_mode mode, double blur_sigma, mf_image** sources,
                        size_t* count) {
    MF_REQUIRE(base && sources && count, "NULL argument");
    MF_REQUIRE(mode == MF_SPLIT_HALF || mode == MF_SPLIT_THIRDS, "unknown split mode");
    return guarded([&] {
        auto set = mfusion::gen_synthetic(base->img,
                                          mode == MF_SPLIT_HALF ? mfusion::SplitMode::Half
                                                                : mfusion::SplitMode::Thirds,
                                          blur_sigma);
        for (std::size_t k = 0; k < set.sources.size(); ++k)
            sources[k] = new mf_image{std::move(set.sources[k])};
        *count = set.sources.size();
    });
}

}  // extern "C"
