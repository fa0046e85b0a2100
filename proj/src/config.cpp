// SPDX-License-Identifier: Apache-2.0
#include "mfusion/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace mfusion {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_real(const std::string& key, const std::string& v) {
    errno = 0;
    char* end = nullptr;
    const double d = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE || !std::isfinite(d))
        fail(ErrorKind::InvalidConfig, key + ": expected a finite number, got '" + v + "'");
    return d;
}

long long parse_integer(const std::string& key, const std::string& v) {
    errno = 0;
    char* end = nullptr;
    const long long i = std::strtoll(v.c_str(), &end, 10);
    if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE)
        fail(ErrorKind::InvalidConfig, key + ": expected an integer, got '" + v + "'");
    return i;
}

int parse_int(const std::string& key, const std::string& v) {
    const long long i = parse_integer(key, v);
    if (i < -2147483647LL || i > 2147483647LL) fail(ErrorKind::InvalidConfig, key + ": out of range");
    return static_cast<int>(i);
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    fail(ErrorKind::InvalidConfig, key + ": expected true/false, got '" + v + "'");
}

std::string real_text(double d) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", d);
    return buf;
}

}  // namespace

SegmentationParams PipelineConfig::segmentation(std::size_t n_sources) const {
    SegmentationParams p;
    p.hmin = hmin;
    p.hmin_mode = hmin_mode;
    p.fcm.n_cluster = cluster_count(n_sources);
    p.fcm.fuzzifier = fuzzifier;
    p.fcm.tol = tol;
    p.fcm.max_iter = max_iter;
    p.fcm.init = fcm_init;
    p.fcm.seed = seed;
    return p;
}

void PipelineConfig::validate() const {
    ssim.validate();
    if (!(hmin >= 0.0)) fail(ErrorKind::InvalidConfig, "hmin must be >= 0");
    if (n_cluster && *n_cluster < 2) fail(ErrorKind::InvalidConfig, "n_cluster must be at least 2");
    if (!(fuzzifier > 1.0)) fail(ErrorKind::InvalidConfig, "fuzzifier must exceed 1");
    if (!(tol > 0.0)) fail(ErrorKind::InvalidConfig, "tol must be positive");
    if (max_iter < 1) fail(ErrorKind::InvalidConfig, "max_iter must be at least 1");
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = {
        "window_radius", "alpha", "beta", "gamma", "c1", "c2", "c3",
        "hmin", "hmin_mode", "n_cluster", "fuzzifier", "tol", "max_iter",
        "fcm_init", "seed", "dump_intermediates", "out", "dump_dir", "report"};
    return keys;
}

void set_config_value(PipelineConfig& cfg, const std::string& key, const std::string& raw) {
    const std::string v = trim(raw);
    if (key == "window_radius") cfg.ssim.window_radius = parse_int(key, v);
    else if (key == "alpha") cfg.ssim.alpha = parse_real(key, v);
    else if (key == "beta") cfg.ssim.beta = parse_real(key, v);
    else if (key == "gamma") cfg.ssim.gamma = parse_real(key, v);
    else if (key == "c1") cfg.ssim.c1 = parse_real(key, v);
    else if (key == "c2") cfg.ssim.c2 = parse_real(key, v);
    else if (key == "c3") cfg.ssim.c3 = parse_real(key, v);
    else if (key == "hmin") cfg.hmin = parse_real(key, v);
    else if (key == "hmin_mode") {
        if (v == "relative") cfg.hmin_mode = DepthMode::Relative;
        else if (v == "absolute") cfg.hmin_mode = DepthMode::Absolute;
        else fail(ErrorKind::InvalidConfig, "hmin_mode: expected relative or absolute, got '" + v + "'");
    } else if (key == "n_cluster") {
        if (v == "auto") cfg.n_cluster.reset();
        else cfg.n_cluster = parse_int(key, v);
    } else if (key == "fuzzifier") cfg.fuzzifier = parse_real(key, v);
    else if (key == "tol") cfg.tol = parse_real(key, v);
    else if (key == "max_iter") cfg.max_iter = parse_int(key, v);
    else if (key == "fcm_init") {
        if (v == "quantile") cfg.fcm_init = FcmInit::Quantile;
        else if (v == "random") cfg.fcm_init = FcmInit::Random;
        else fail(ErrorKind::InvalidConfig, "fcm_init: expected quantile or random, got '" + v + "'");
    } else if (key == "seed") {
        const long long s = parse_integer(key, v);
        if (s < 0) fail(ErrorKind::InvalidConfig, "seed must be non-negative");
        cfg.seed = static_cast<std::uint64_t>(s);
    } else if (key == "dump_intermediates") cfg.dump_intermediates = parse_bool(key, v);
    else if (key == "out") cfg.out_path = v;
    else if (key == "dump_dir") cfg.dump_dir = v;
    else if (key == "report") cfg.report_path = v;
    else fail(ErrorKind::InvalidConfig, "unknown config key '" + key + "'");
}

std::string get_config_value(const PipelineConfig& cfg, const std::string& key) {
    if (key == "window_radius") return std::to_string(cfg.ssim.window_radius);
    if (key == "alpha") return real_text(cfg.ssim.alpha);
    if (key == "beta") return real_text(cfg.ssim.beta);
    if (key == "gamma") return real_text(cfg.ssim.gamma);
    if (key == "c1") return real_text(cfg.ssim.c1);
    if (key == "c2") return real_text(cfg.ssim.c2);
    if (key == "c3") return real_text(cfg.ssim.c3);
    if (key == "hmin") return real_text(cfg.hmin);
    if (key == "hmin_mode") return cfg.hmin_mode == DepthMode::Relative ? "relative" : "absolute";
    if (key == "n_cluster") return cfg.n_cluster ? std::to_string(*cfg.n_cluster) : "auto";
    if (key == "fuzzifier") return real_text(cfg.fuzzifier);
    if (key == "tol") return real_text(cfg.tol);
    if (key == "max_iter") return std::to_string(cfg.max_iter);
    if (key == "fcm_init") return cfg.fcm_init == FcmInit::Quantile ? "quantile" : "random";
    if (key == "seed") return std::to_string(cfg.seed);
    if (key == "dump_intermediates") return cfg.dump_intermediates ? "true" : "false";
    if (key == "out") return cfg.out_path;
    if (key == "dump_dir") return cfg.dump_dir;
    if (key == "report") return cfg.report_path;
    fail(ErrorKind::InvalidConfig, "unknown config key '" + key + "'");
}

void apply_config_text(PipelineConfig& cfg, const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            fail(ErrorKind::InvalidConfig, "config line " + std::to_string(lineno) + ": expected key = value");
        set_config_value(cfg, trim(t.substr(0, eq)), t.substr(eq + 1));
    }
}

void apply_config_file(PipelineConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Io, path + ": cannot open config file");
    std::ostringstream ss;
    ss << in.rdbuf();
    apply_config_text(cfg, ss.str());
}

std::string config_to_text(const PipelineConfig& cfg) {
    std::string out;
    for (const std::string& key : config_keys()) out += key + " = " + get_config_value(cfg, key) + "\n";
    return out;
}

}  // namespace mfusion
