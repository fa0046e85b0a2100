// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"

#include <array>
#include <set>

#include "mfusion/metrics.hpp"
#include "mfusion/synthetic.hpp"
#include "oracles.hpp"

using namespace mfusion;

namespace {

GrayImage constant(int w, int h, double v) { return GrayImage(w, h, std::vector<double>(static_cast<std::size_t>(w) * h, v)); }

GrayImage transpose(const GrayImage& img) {
    std::vector<double> d(img.values().size());
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) d[static_cast<std::size_t>(x) * img.height() + y] = img.at(x, y);
    return GrayImage(img.height(), img.width(), d);
}

}  // namespace

TEST_CASE("constant image scores zero") {
    const GrayImage c = constant(9, 7, 120);
    CHECK(variance(c) == 0.0);
    CHECK(standard_deviation(c) == 0.0);
    CHECK(spatial_frequency(c) == 0.0);
    CHECK(average_gradient(c) == 0.0);
    CHECK(entropy(c) == 0.0);
}

TEST_CASE("closed-form metric values") {
    std::vector<double> two(64);
    for (std::size_t k = 0; k < two.size(); ++k) two[k] = k % 2 ? 255.0 : 0.0;
    const GrayImage stripes(8, 8, two);  // even width: columns alternate
    CHECK(standard_deviation(stripes) == doctest::Approx(127.5).epsilon(1e-15));
    CHECK(variance(stripes) == doctest::Approx(127.5 * 127.5).epsilon(1e-15));
    CHECK(spatial_frequency(stripes) == doctest::Approx(255.0).epsilon(1e-15));
    CHECK(entropy(stripes) == 1.0);

    std::vector<double> ramp(256);
    for (int k = 0; k < 256; ++k) ramp[static_cast<std::size_t>(k)] = k;
    CHECK(entropy(GrayImage(16, 16, ramp)) == 8.0);
}

TEST_CASE("mutual information") {
    const GrayImage a = oracle::random_image(32, 32, 1);
    CHECK(std::abs(mutual_information(a, a) - entropy(a)) < 1e-9);

    SUBCASE("independent images carry little information") {
        std::mt19937_64 rng(9);
        std::uniform_int_distribution<int> bit(0, 1);
        std::vector<double> x(256 * 256), y(256 * 256);
        for (std::size_t k = 0; k < x.size(); ++k) {
            x[k] = 255.0 * bit(rng);
            y[k] = 255.0 * bit(rng);
        }
        CHECK(mutual_information(GrayImage(256, 256, x), GrayImage(256, 256, y)) < 1e-3);
    }
    SUBCASE("bounded by either entropy") {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const GrayImage p = oracle::random_image(20, 20, seed);
            const GrayImage q = oracle::random_image(20, 20, seed + 50);
            const double mi = mutual_information(p, q);
            CHECK(mi >= -1e-12);
            CHECK(mi <= std::min(entropy(p), entropy(q)) + 1e-12);
        }
    }
    SUBCASE("sum over sources") {
        const GrayImage b = oracle::random_image(32, 32, 2);
        const std::array src{a, b};
        CHECK(mutual_information(a, src) == doctest::Approx(mutual_information(a, a) + mutual_information(a, b)));
    }
}

TEST_CASE("metrics match scalar oracles on 16x16 inputs") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const GrayImage f = oracle::random_image(16, 16, 300 + seed);
        const GrayImage s1 = oracle::random_image(16, 16, 400 + seed);
        const GrayImage s2 = GrayImage::quantized(gaussian_blur(f.plane(), 1.0));
        const auto gf = oracle::to_grid(f);
        CHECK(std::abs(standard_deviation(f) - oracle::std_dev(gf)) < 1e-9);
        CHECK(std::abs(spatial_frequency(f) - oracle::spatial_frequency(gf)) < 1e-9);
        CHECK(std::abs(average_gradient(f) - oracle::forward_difference_gradient(gf)) < 1e-9);
        CHECK(std::abs(entropy(f) - oracle::entropy(gf)) < 1e-9);
        CHECK(std::abs(mutual_information(f, s1) - oracle::mutual_information(gf, oracle::to_grid(s1))) < 1e-9);
        const std::array src{s1, s2};
        const double q = q_abf(f, src);
        const double qo = oracle::q_abf(gf, {oracle::to_grid(s1), oracle::to_grid(s2)});
        CHECK(std::abs(q - qo) < 1e-9);
        CHECK(q >= 0.0);
        CHECK(q <= 1.0);
    }
}

TEST_CASE("edge preservation") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const GrayImage a = make_texture(32, 32, seed);
        CHECK(q_abf(a, std::array{a}) >= 0.99);
        CHECK(q_abf(constant(32, 32, 100), std::array{a}) < 0.05);
    }
    SUBCASE("raw sigmoids cap perfect transfer below 1") {
        const GrayImage a = make_texture(24, 24, 7);
        EdgeRetentionParams p;
        p.normalize = false;
        const double ceiling = 0.9994 / (1 + std::exp(-15.0 * 0.5)) * 0.9879 / (1 + std::exp(-22.0 * 0.2));
        CHECK(q_abf(a, std::array{a}, p) == doctest::Approx(ceiling).epsilon(1e-12));
    }
    SUBCASE("all-flat sources give 0") {
        CHECK(q_abf(constant(8, 8, 3), std::array{constant(8, 8, 5)}) == 0.0);
    }
}

TEST_CASE("metric invariants") {
    const GrayImage img = oracle::random_image(13, 17, 21);
    const GrayImage t = transpose(img);
    CHECK(standard_deviation(t) == doctest::Approx(standard_deviation(img)).epsilon(1e-13));
    CHECK(spatial_frequency(t) == doctest::Approx(spatial_frequency(img)).epsilon(1e-13));
    CHECK(entropy(t) == doctest::Approx(entropy(img)).epsilon(1e-13));
    CHECK(average_gradient(t) == doctest::Approx(average_gradient(img)).epsilon(1e-13));
    std::set<double> distinct(img.values().begin(), img.values().end());
    CHECK(entropy(img) <= std::log2(static_cast<double>(distinct.size())) + 1e-12);
}

TEST_CASE("evaluate gathers every metric") {
    const GrayImage f = oracle::random_image(20, 20, 5);
    const std::array src{oracle::random_image(20, 20, 6), f};
    const MetricsReport r = evaluate(f, src);
    CHECK(r.v == standard_deviation(f));
    CHECK(r.variance == variance(f));
    CHECK(r.sf == spatial_frequency(f));
    CHECK(r.ag == average_gradient(f));
    CHECK(r.h == entropy(f));
    CHECK(r.mi == doctest::Approx(mutual_information(f, src)));
    CHECK(r.q_abf == doctest::Approx(q_abf(f, src)));
    REQUIRE(r.mi_per_source.size() == 2);
    CHECK(r.mi_per_source[1] == doctest::Approx(r.h));
}
