// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"

#include <functional>
#include <map>
#include <random>
#include <set>

#include "mfusion/joint_segmentation.hpp"
#include "oracles.hpp"

using namespace mfusion;

namespace {

using oracle::classes_from;
using oracle::rect;
using oracle::same_partition;
using oracle::set_algebra;
using Pred = oracle::Pred;

JointLabelMap joint_of(const LabelMap& xy, const LabelMap& xz, const LabelMap& yz, int n) {
    return joint_map(relabel_progressions(xy, xz, yz, n));
}

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an mfusion::Error");
    return ErrorKind::Io;
}

}  // namespace

TEST_CASE("progression arithmetic") {
    LabelMap single(2, 2, 2);
    LabelMap ones(2, 2, 1);
    const ProgressionPlanes p = relabel_progressions(single, single, ones, 3);
    CHECK(p.a.labels[0] == 2);
    CHECK(p.b.labels[0] == 8);
    CHECK(p.c.labels[0] == 16);
    CHECK(encode_triple({2, 2, 1}, 3) == 26);
    CHECK(encode_triple({1, 1, 1}, 3) == 21);
    CHECK(decode_triple(21, 3) == ClassTriple{1, 1, 1});
}

TEST_CASE("encode/decode is a bijection") {
    for (int n : {2, 3, 5}) {
        std::set<std::int64_t> sums;
        for (int i = 1; i <= n; ++i)
            for (int j = 1; j <= n; ++j)
                for (int k = 1; k <= n; ++k) {
                    const std::int64_t s = encode_triple({i, j, k}, n);
                    sums.insert(s);
                    CHECK(decode_triple(s, n) == ClassTriple{i, j, k});
                }
        CHECK(sums.size() == static_cast<std::size_t>(n * n * n));
    }
    CHECK(kind_of([] { decode_triple(0, 3); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([] { decode_triple(4, 3); }) == ErrorKind::InvalidArgument);  // digit 0 in the second place
    CHECK(kind_of([] { encode_triple({4, 1, 1}, 3); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("quadrants from two orthogonal splits") {
    const LabelMap lr = classes_from(20, 20, [](int x, int) { return x < 10 ? 1 : 2; });
    const LabelMap tb = classes_from(20, 20, [](int, int y) { return y < 10 ? 1 : 2; });
    const LabelMap flat(20, 20, 1);
    const JointLabelMap j = joint_of(lr, tb, flat, 3);
    CHECK(j.regions.count == 4);
    CHECK(j.regions.is_total());
    CHECK(same_partition(j.regions, classes_from(20, 20, [](int x, int y) { return (x < 10 ? 1 : 2) + (y < 10 ? 0 : 2); })));
}

TEST_CASE("incorporation rules against set algebra") {
    const int w = 20, h = 20;
    struct Case {
        const char* name;
        Pred r1, r2;
        int regions;
    };
    const std::vector<Case> cases = {
        {"equal regions", rect(3, 3, 12, 12), rect(3, 3, 12, 12), 2},
        {"disjoint regions", rect(0, 0, 8, 8), rect(12, 12, 20, 20), 3},
        {"contained region", rect(2, 2, 18, 18), rect(6, 6, 12, 12), 3},
        {"partial overlap", rect(0, 0, 12, 12), rect(6, 6, 18, 18), 4},
    };
    const LabelMap flat(w, h, 1);
    for (const Case& c : cases) {
        CAPTURE(c.name);
        const LabelMap xy = classes_from(w, h, [&](int x, int y) { return c.r1(x, y) ? 2 : 1; });
        const LabelMap xz = classes_from(w, h, [&](int x, int y) { return c.r2(x, y) ? 2 : 1; });
        const LabelMap expect = set_algebra(w, h, c.r1, c.r2);
        for (int n : {2, 3}) {
            const JointLabelMap j = joint_of(xy, xz, flat, n);
            CHECK(j.regions.count == c.regions);
            CHECK(expect.count == c.regions);
            CHECK(same_partition(j.regions, expect));
        }
    }
}

TEST_CASE("joint partition refines every input and is progression-invariant") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 6; ++trial) {
        const int n = 2 + trial % 3;
        std::uniform_int_distribution<int> cls(1, n);
        // Blocky random class maps so regions have some extent.
        auto blocky = [&](int block) {
            std::vector<int> tiles(400);
            for (int& t : tiles) t = cls(rng);
            return classes_from(20, 20, [&, block](int x, int y) { return tiles[(y / block) * 20 + x / block]; });
        };
        const LabelMap xy = blocky(4), xz = blocky(5), yz = blocky(3);
        const JointLabelMap j = joint_of(xy, xz, yz, n);
        CHECK(j.regions.is_total());
        CHECK(j.dense.count <= n * n * n);
        CHECK(static_cast<int>(j.provenance.size()) == j.dense.count);
        for (const LabelMap* in : {&xy, &xz, &yz}) {
            std::map<std::int32_t, std::int32_t> cls_of;
            bool refines = true;
            for (std::size_t k = 0; k < in->labels.size(); ++k) {
                const auto [it, ok] = cls_of.emplace(j.regions.labels[k], in->labels[k]);
                if (it->second != in->labels[k]) refines = false;
            }
            CHECK(refines);
        }
        for (std::size_t k = 0; k < j.dense.labels.size(); ++k) {
            const ClassTriple t = j.provenance[static_cast<std::size_t>(j.dense.labels[k] - 1)];
            CHECK(t == ClassTriple{xy.labels[k], xz.labels[k], yz.labels[k]});
            CHECK(encode_triple(t, n) == j.sums.labels[k]);
        }
        const JointLabelMap permuted = joint_of(yz, xy, xz, n);
        CHECK(same_partition(j.regions, permuted.regions));
        CHECK(same_partition(j.dense, permuted.dense));
    }
}

TEST_CASE("identical pairwise maps give their common regions") {
    const LabelMap m = classes_from(12, 9, [](int x, int y) { return (x + 2 * y) % 7 < 3 ? 1 : 2; });
    const JointLabelMap j = joint_of(m, m, m, 2);
    CHECK(same_partition(j.regions, connected_components(m)));
}

TEST_CASE("relabel validation") {
    const LabelMap ok(4, 4, 1);
    CHECK(kind_of([&] { relabel_progressions(ok, ok, LabelMap(4, 4, 0), 3); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([&] { relabel_progressions(ok, ok, LabelMap(4, 4, 4), 3); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([&] { relabel_progressions(ok, ok, LabelMap(5, 4, 1), 3); }) == ErrorKind::DimensionMismatch);
}
