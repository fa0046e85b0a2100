// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"

#include <png.h>

#include <array>
#include <filesystem>
#include <fstream>
#include <set>

#include "mfusion/config.hpp"
#include "mfusion/image_io.hpp"
#include "mfusion/pipeline.hpp"
#include "mfusion/synthetic.hpp"
#include "oracles.hpp"

using namespace mfusion;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("mfusion_test_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an mfusion::Error");
    return ErrorKind::Io;
}

std::string error_text(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}

double rmse(const GrayImage& a, const GrayImage& b) {
    double s = 0;
    for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
    return std::sqrt(s / static_cast<double>(a.size()));
}

}  // namespace

TEST_CASE("config text round trip") {
    PipelineConfig cfg;
    cfg.ssim.window_radius = 2;
    cfg.ssim.c1 = 1.0 / 3.0;
    cfg.hmin = 0.125;
    cfg.hmin_mode = DepthMode::Absolute;
    cfg.n_cluster = 4;
    cfg.fcm_init = FcmInit::Random;
    cfg.seed = 12345678901ULL;
    cfg.dump_intermediates = true;
    cfg.out_path = "a.png";
    PipelineConfig back;
    apply_config_text(back, config_to_text(cfg));
    CHECK(back == cfg);
    for (const std::string& key : config_keys()) {
        PipelineConfig copy;
        set_config_value(copy, key, get_config_value(cfg, key));
        CHECK(get_config_value(copy, key) == get_config_value(cfg, key));
    }
}

TEST_CASE("config parsing") {
    PipelineConfig cfg;
    apply_config_text(cfg, "# comment\n\n  window_radius = 5  \nn_cluster = auto\nfcm_init=random\n");
    CHECK(cfg.ssim.window_radius == 5);
    CHECK_FALSE(cfg.n_cluster.has_value());
    CHECK(cfg.cluster_count(2) == 5);
    CHECK(cfg.cluster_count(3) == 3);
    CHECK(cfg.fcm_init == FcmInit::Random);

    CHECK(kind_of([&] { apply_config_text(cfg, "bogus = 1\n"); }) == ErrorKind::InvalidConfig);
    CHECK(kind_of([&] { apply_config_text(cfg, "hmin 0.3\n"); }) == ErrorKind::InvalidConfig);
    CHECK(kind_of([&] { apply_config_text(cfg, "tol = abc\n"); }) == ErrorKind::InvalidConfig);
    CHECK(kind_of([&] { apply_config_text(cfg, "max_iter = 2.5\n"); }) == ErrorKind::InvalidConfig);
    CHECK(kind_of([&] { apply_config_file(cfg, "/nonexistent/mfusion.cfg"); }) == ErrorKind::Io);
    PipelineConfig bad;
    bad.fuzzifier = 1.0;
    CHECK(kind_of([&] { bad.validate(); }) == ErrorKind::InvalidConfig);
}

TEST_CASE("two-source pipeline on a half-blurred pair") {
    const GrayImage base = make_texture(96, 80, 3);
    const SyntheticSet set = gen_synthetic(base, SplitMode::Half, 3.0);
    const std::span<const GrayImage> src(set.sources.data(), 2);
    const PipelineResult r = run_pipeline(src, PipelineConfig{});
    CHECK(r.pairs.size() == 1);
    CHECK(r.pairs[0].name() == "XY");
    CHECK_FALSE(r.joint.has_value());
    CHECK(r.regions.is_total());
    CHECK(rmse(r.fusion.fused, base) < std::min(rmse(set.sources[0], base), rmse(set.sources[1], base)));

    const PipelineResult again = run_pipeline(src, PipelineConfig{});
    CHECK(again.fusion.fused == r.fusion.fused);
    CHECK(report_json(again, PipelineConfig{}, 2).dump() == report_json(r, PipelineConfig{}, 2).dump());

    const auto j = report_json(r, PipelineConfig{}, 2);
    CHECK(j["schema"] == "mfusion.report/1");
    CHECK(j["metrics"]["sf"].get<double>() == r.metrics.sf);
}

TEST_CASE("three-source pipeline on a thirds-blurred triple") {
    const GrayImage base = make_texture(96, 72, 6);
    const SyntheticSet set = gen_synthetic(base, SplitMode::Thirds, 3.0);
    const PipelineResult r = run_pipeline(set.sources, PipelineConfig{});
    REQUIRE(r.pairs.size() == 3);
    CHECK(r.pairs[2].name() == "YZ");
    REQUIRE(r.joint.has_value());
    CHECK(r.regions == r.joint->regions);
    for (std::size_t k = 0; k < r.joint->sums.labels.size(); ++k) {
        const ClassTriple t = decode_triple(r.joint->sums.labels[k], r.n_cluster);
        CHECK(t.xy >= 1);
    }
    for (const GrayImage& s : set.sources) CHECK(rmse(r.fusion.fused, base) < rmse(s, base));
}

TEST_CASE("pipeline errors") {
    const GrayImage a = make_texture(40, 40, 1);
    const GrayImage b = GrayImage::quantized(gaussian_blur(a.plane(), 2.0));
    CHECK(kind_of([&] { run_pipeline(std::array{a, a}, PipelineConfig{}); }) == ErrorKind::DegenerateInput);
    CHECK(kind_of([&] { run_pipeline(std::array{a}, PipelineConfig{}); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([&] { run_pipeline(std::array{a, make_texture(40, 32, 1)}, PipelineConfig{}); }) ==
          ErrorKind::DimensionMismatch);
    const std::array same_yz{a, b, b};
    CHECK(kind_of([&] { run_pipeline(same_yz, PipelineConfig{}); }) == ErrorKind::DegenerateInput);
    CHECK(error_text([&] { run_pipeline(same_yz, PipelineConfig{}); }).rfind("pair YZ: ", 0) == 0);
}

TEST_CASE("image and label files") {
    TempDir dir;
    const GrayImage img = oracle::random_image(17, 11, 4);
    for (const char* name : {"a.png", "a.pgm"}) {
        write_image(dir.file(name), img);
        CHECK(read_image(dir.file(name)) == img);
    }
    {
        std::ofstream ascii(dir.file("ascii.pgm"));
        ascii << "P2\n# note\n3 2\n255\n0 10 20\n30 40 255\n";
    }
    CHECK(read_image(dir.file("ascii.pgm")) == GrayImage(3, 2, {0, 10, 20, 30, 40, 255}));
    {
        std::ofstream color(dir.file("color.ppm"));
        color << "P3\n2 2\n255\n0 0 0 1 1 1 2 2 2 3 3 3\n";
    }
    CHECK(kind_of([&] { read_image(dir.file("color.ppm")); }) == ErrorKind::Io);

    png_image rgb{};
    rgb.version = PNG_IMAGE_VERSION;
    rgb.width = 4;
    rgb.height = 4;
    rgb.format = PNG_FORMAT_RGB;
    std::vector<unsigned char> px(48, 100);
    png_image_write_to_file(&rgb, dir.file("rgb.png").c_str(), 0, px.data(), 0, nullptr);
    CHECK(kind_of([&] { read_image(dir.file("rgb.png")); }) == ErrorKind::Io);

    CHECK(kind_of([&] { read_image(dir.file("missing.png")); }) == ErrorKind::Io);
    {
        std::ofstream junk(dir.file("junk.png"));
        junk << "not an image";
    }
    CHECK(kind_of([&] { read_image(dir.file("junk.png")); }) == ErrorKind::Io);

    LabelMap m(5, 3, 0);
    for (std::size_t k = 0; k < m.labels.size(); ++k) m.labels[k] = static_cast<std::int32_t>(k % 4);
    m.count = 3;
    write_labels(dir.file("m.txt"), m);
    const LabelMap back = read_labels(dir.file("m.txt"));
    CHECK(back.labels == m.labels);
    CHECK(back.width == 5);
    CHECK(back.height == 3);
}

TEST_CASE("intermediate dumps") {
    TempDir dir;
    const GrayImage base = make_texture(48, 48, 8);
    const SyntheticSet set = gen_synthetic(base, SplitMode::Thirds, 3.0);
    const PipelineResult r = run_pipeline(set.sources, PipelineConfig{});
    write_dumps(r, dir.file("dump"));
    std::set<std::string> names;
    for (const auto& e : fs::directory_iterator(dir.path / "dump")) names.insert(e.path().filename().string());
    for (const char* expect : {"ssnsim_XY.png", "ssim_YZ.png", "gradient_XZ.png", "watershed_XY.png",
                               "regions_YZ.txt", "joint_sums.txt", "joint_regions.png", "final_regions.txt"})
        CHECK(names.count(expect) == 1);
    const LabelMap sums = read_labels(dir.file("dump/joint_sums.txt"));
    for (std::int32_t s : sums.labels) CHECK_NOTHROW(decode_triple(s, r.n_cluster));
}
