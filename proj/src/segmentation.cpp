// SPDX-License-Identifier: Apache-2.0
#include "mfusion/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <random>
#include <string>
#include <utility>

namespace mfusion {

namespace {

template <typename Fn>
void for_each_neighbor4(int x, int y, int w, int h, Fn&& fn) {
    if (x > 0) fn(x - 1, y);
    if (x + 1 < w) fn(x + 1, y);
    if (y > 0) fn(x, y - 1);
    if (y + 1 < h) fn(x, y + 1);
}

}  // namespace

Plane gradient_magnitude(const Plane& map) {
    const int w = map.width();
    const int h = map.height();
    if (w < 2 || h < 2) fail(ErrorKind::InvalidArgument, "gradient_magnitude needs at least 2x2");
    auto px = [&](int x, int y) {
        return map.at(std::clamp(x, 0, w - 1), std::clamp(y, 0, h - 1));
    };
    Plane out(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double gx = (px(x + 1, y - 1) + 2.0 * px(x + 1, y) + px(x + 1, y + 1)) -
                              (px(x - 1, y - 1) + 2.0 * px(x - 1, y) + px(x - 1, y + 1));
            const double gy = (px(x - 1, y + 1) + 2.0 * px(x, y + 1) + px(x + 1, y + 1)) -
                              (px(x - 1, y - 1) + 2.0 * px(x, y - 1) + px(x + 1, y - 1));
            out.at(x, y) = std::sqrt(gx * gx + gy * gy);
        }
    }
    return out;
}

Plane reconstruct_by_erosion(const Plane& marker, const Plane& mask) {
    require_same_shape(marker, mask, "reconstruct_by_erosion");
    for (std::size_t k = 0; k < mask.size(); ++k)
        if (marker[k] < mask[k])
            fail(ErrorKind::InvalidArgument, "reconstruct_by_erosion: marker must lie above the mask");
    const int w = mask.width();
    const int ht = mask.height();
    Plane out = marker;

    // Each pixel ends at the cheapest max-path value from any marker
    // pixel, bounded below by the mask. Dijkstra over (value, index).
    using Entry = std::pair<double, std::size_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
    for (std::size_t k = 0; k < out.size(); ++k) queue.emplace(out[k], k);
    while (!queue.empty()) {
        const auto [value, p] = queue.top();
        queue.pop();
        if (value > out[p]) continue;
        const int x = static_cast<int>(p % w);
        const int y = static_cast<int>(p / w);
        for_each_neighbor4(x, y, w, ht, [&](int nx, int ny) {
            const std::size_t q = static_cast<std::size_t>(ny) * w + nx;
            const double candidate = std::max(value, mask[q]);
            if (candidate < out[q]) {
                out[q] = candidate;
                queue.emplace(candidate, q);
            }
        });
    }
    return out;
}

Plane h_minima(const Plane& gradient, double h) {
    if (!(h >= 0.0) || !std::isfinite(h))
        fail(ErrorKind::InvalidArgument, "h_minima depth must be a finite value >= 0");
    if (h == 0.0) return gradient;
    Plane marker = gradient;
    for (double& v : marker.values()) v += h;
    return reconstruct_by_erosion(marker, gradient);
}

LabelMap watershed(const Plane& gradient) {
    constexpr std::int32_t kInit = -1;
    constexpr std::int32_t kMask = -2;
    constexpr std::int32_t kWshed = 0;
    constexpr std::size_t kFictitious = static_cast<std::size_t>(-1);

    const int w = gradient.width();
    const int h = gradient.height();
    const std::size_t n = gradient.size();

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return gradient[a] < gradient[b]; });

    LabelMap out(w, h, kInit);
    auto& lab = out.labels;
    std::vector<int> dist(n, 0);
    std::deque<std::size_t> fifo;
    std::int32_t current_label = 0;

    auto neighbors = [&](std::size_t p, auto&& fn) {
        for_each_neighbor4(static_cast<int>(p % w), static_cast<int>(p / w), w, h,
                           [&](int nx, int ny) { fn(static_cast<std::size_t>(ny) * w + nx); });
    };

    std::size_t begin = 0;
    while (begin < n) {
        std::size_t end = begin;
        const double level = gradient[order[begin]];
        while (end < n && gradient[order[end]] == level) ++end;

        for (std::size_t k = begin; k < end; ++k) {
            const std::size_t p = order[k];
            lab[p] = kMask;
            bool touches_basin = false;
            neighbors(p, [&](std::size_t q) {
                if (lab[q] >= kWshed) touches_basin = true;
            });
            if (touches_basin) {
                dist[p] = 1;
                fifo.push_back(p);
            }
        }

        int current_dist = 1;
        fifo.push_back(kFictitious);
        while (true) {
            std::size_t p = fifo.front();
            fifo.pop_front();
            if (p == kFictitious) {
                if (fifo.empty()) break;
                fifo.push_back(kFictitious);
                ++current_dist;
                p = fifo.front();
                fifo.pop_front();
            }
            neighbors(p, [&](std::size_t q) {
                if (dist[q] < current_dist && lab[q] >= kWshed) {
                    if (lab[q] > 0) {
                        if (lab[p] == kMask || lab[p] == kWshed)
                            lab[p] = lab[q];
                        else if (lab[p] != lab[q])
                            lab[p] = kWshed;
                    } else if (lab[p] == kMask) {
                        lab[p] = kWshed;
                    }
                } else if (lab[q] == kMask && dist[q] == 0) {
                    dist[q] = current_dist + 1;
                    fifo.push_back(q);
                }
            });
        }

        // Remaining masked pixels at this level are new minima.
        for (std::size_t k = begin; k < end; ++k) {
            const std::size_t p = order[k];
            dist[p] = 0;
            if (lab[p] != kMask) continue;
            ++current_label;
            lab[p] = current_label;
            fifo.push_back(p);
            while (!fifo.empty()) {
                const std::size_t q = fifo.front();
                fifo.pop_front();
                neighbors(q, [&](std::size_t r) {
                    if (lab[r] == kMask) {
                        lab[r] = current_label;
                        fifo.push_back(r);
                    }
                });
            }
        }
        begin = end;
    }
    out.count = current_label;
    return out;
}

RegionFeatures region_features(const LabelMap& labels, const Plane& ssnsim) {
    if (labels.width != ssnsim.width() || labels.height != ssnsim.height())
        fail(ErrorKind::DimensionMismatch, "region_features: label map and plane differ in size");
    if (labels.count < 1) fail(ErrorKind::InvalidArgument, "region_features: no regions");
    RegionFeatures out;
    out.mns.assign(static_cast<std::size_t>(labels.count), 0.0);
    out.pixel_count.assign(static_cast<std::size_t>(labels.count), 0);
    for (std::size_t k = 0; k < labels.size(); ++k) {
        const std::int32_t l = labels.labels[k];
        if (l <= 0) continue;
        if (l > labels.count) fail(ErrorKind::InvalidArgument, "region_features: label exceeds count");
        out.mns[static_cast<std::size_t>(l - 1)] += ssnsim[k];
        out.pixel_count[static_cast<std::size_t>(l - 1)] += 1;
    }
    for (std::size_t n = 0; n < out.mns.size(); ++n) {
        if (out.pixel_count[n] == 0)
            fail(ErrorKind::InvalidArgument, "region_features: label " + std::to_string(n + 1) + " is empty");
        out.mns[n] /= static_cast<double>(out.pixel_count[n]);
    }
    return out;
}

namespace {

// Linear-interpolated quantiles at (k + 0.5) / c of the sorted features.
std::vector<double> quantile_centers(std::vector<double> x, int c) {
    std::sort(x.begin(), x.end());
    std::vector<double> centers(static_cast<std::size_t>(c));
    const double last = static_cast<double>(x.size() - 1);
    for (int k = 0; k < c; ++k) {
        const double pos = (k + 0.5) / c * last;
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const std::size_t hi = std::min(lo + 1, x.size() - 1);
        const double t = pos - static_cast<double>(lo);
        centers[static_cast<std::size_t>(k)] = x[lo] + t * (x[hi] - x[lo]);
    }
    return centers;
}

void update_memberships(const std::vector<double>& x, const std::vector<double>& centers,
                        double m, std::vector<double>& u) {
    const std::size_t n = x.size();
    const std::size_t c = centers.size();
    const double power = 2.0 / (m - 1.0);
    std::vector<double> d(c);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t exact = c;
        for (std::size_t k = 0; k < c; ++k) {
            d[k] = std::abs(x[i] - centers[k]);
            if (d[k] == 0.0 && exact == c) exact = k;
        }
        if (exact < c) {
            for (std::size_t k = 0; k < c; ++k) u[k * n + i] = k == exact ? 1.0 : 0.0;
            continue;
        }
        for (std::size_t k = 0; k < c; ++k) {
            double denom = 0.0;
            for (std::size_t l = 0; l < c; ++l) denom += std::pow(d[k] / d[l], power);
            u[k * n + i] = 1.0 / denom;
        }
    }
}

void update_centers(const std::vector<double>& x, const std::vector<double>& u, double m,
                    std::vector<double>& centers) {
    const std::size_t n = x.size();
    for (std::size_t k = 0; k < centers.size(); ++k) {
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double wgt = std::pow(u[k * n + i], m);
            num += wgt * x[i];
            den += wgt;
        }
        // An empty cluster keeps its previous center.
        if (den > 0.0) centers[k] = num / den;
    }
}

double objective(const std::vector<double>& x, const std::vector<double>& u,
                 const std::vector<double>& centers, double m) {
    const std::size_t n = x.size();
    double j = 0.0;
    for (std::size_t k = 0; k < centers.size(); ++k)
        for (std::size_t i = 0; i < n; ++i) {
            const double d = x[i] - centers[k];
            j += std::pow(u[k * n + i], m) * d * d;
        }
    return j;
}

}  // namespace

ClusterResult fcm(const RegionFeatures& features, const FcmParams& params) {
    const std::vector<double>& x = features.mns;
    const int n = static_cast<int>(x.size());
    const int c = params.n_cluster;
    if (c < 2) fail(ErrorKind::InvalidArgument, "fcm: n_cluster must be at least 2");
    if (c > n)
        fail(ErrorKind::InvalidArgument, "fcm: n_cluster (" + std::to_string(c) +
                                             ") exceeds number of regions (" + std::to_string(n) + ")");
    if (!(params.fuzzifier > 1.0)) fail(ErrorKind::InvalidArgument, "fcm: fuzzifier must exceed 1");
    if (!(params.tol > 0.0)) fail(ErrorKind::InvalidArgument, "fcm: tol must be positive");
    if (params.max_iter < 1) fail(ErrorKind::InvalidArgument, "fcm: max_iter must be at least 1");
    for (double v : x)
        if (!std::isfinite(v)) fail(ErrorKind::InvalidArgument, "fcm: non-finite feature");
    if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); }))
        fail(ErrorKind::DegenerateInput,
             "fcm: all region features are identical; nothing to cluster");

    const double m = params.fuzzifier;
    ClusterResult out;
    out.n_cluster = c;
    out.n_items = n;
    out.memberships.assign(static_cast<std::size_t>(c) * n, 0.0);
    std::vector<double>& u = out.memberships;
    std::vector<double> previous;
    bool have_previous = false;

    if (params.init == FcmInit::Random) {
        std::mt19937_64 rng(params.seed);
        std::uniform_real_distribution<double> uniform(0.0, 1.0);
        for (double& v : u) v = uniform(rng);
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int k = 0; k < c; ++k) s += u[static_cast<std::size_t>(k) * n + i];
            for (int k = 0; k < c; ++k) u[static_cast<std::size_t>(k) * n + i] /= s;
        }
        out.centers.assign(static_cast<std::size_t>(c), 0.0);
        update_centers(x, u, m, out.centers);
        previous = u;
        have_previous = true;
    } else {
        out.centers = quantile_centers(x, c);
    }

    for (int iter = 0; iter < params.max_iter; ++iter) {
        update_memberships(x, out.centers, m, u);
        out.objective.push_back(objective(x, u, out.centers, m));
        out.iterations = iter + 1;
        double change = std::numeric_limits<double>::infinity();
        if (have_previous) {
            change = 0.0;
            for (std::size_t k = 0; k < u.size(); ++k)
                change = std::max(change, std::abs(u[k] - previous[k]));
        }
        previous = u;
        have_previous = true;
        update_centers(x, u, m, out.centers);
        if (change < params.tol) break;
    }

    out.assignment.assign(static_cast<std::size_t>(n), 1);
    for (int i = 0; i < n; ++i) {
        int best = 0;
        for (int k = 1; k < c; ++k)
            if (out.membership(k, i) > out.membership(best, i)) best = k;
        out.assignment[static_cast<std::size_t>(i)] = best + 1;
    }
    return out;
}

LabelMap merge_boundaries(const LabelMap& watershed_labels, const ClusterResult& cluster,
                          const Plane& ssnsim) {
    const int w = watershed_labels.width;
    const int h = watershed_labels.height;
    if (w != ssnsim.width() || h != ssnsim.height())
        fail(ErrorKind::DimensionMismatch, "merge_boundaries: label map and plane differ in size");
    if (static_cast<int>(cluster.assignment.size()) != watershed_labels.count)
        fail(ErrorKind::InvalidArgument, "merge_boundaries: cluster assignment does not cover all regions");

    LabelMap out(w, h, 0);
    out.count = cluster.n_cluster;
    std::vector<std::size_t> pending;
    for (std::size_t k = 0; k < out.size(); ++k) {
        const std::int32_t l = watershed_labels.labels[k];
        if (l > 0)
            out.labels[k] = cluster.assignment[static_cast<std::size_t>(l - 1)];
        else
            pending.push_back(k);
    }

    // Each pass decides from the previous pass's state so the result does
    // not depend on scan order.
    std::vector<std::pair<std::size_t, std::int32_t>> decided;
    std::vector<std::size_t> still_pending;
    std::vector<std::int32_t> seen;
    while (!pending.empty()) {
        decided.clear();
        still_pending.clear();
        for (const std::size_t p : pending) {
            seen.clear();
            for_each_neighbor4(static_cast<int>(p % w), static_cast<int>(p / w), w, h, [&](int nx, int ny) {
                const std::int32_t c = out.labels[static_cast<std::size_t>(ny) * w + nx];
                if (c > 0 && std::find(seen.begin(), seen.end(), c) == seen.end()) seen.push_back(c);
            });
            if (seen.empty()) {
                still_pending.push_back(p);
                continue;
            }
            std::int32_t best = seen.front();
            if (seen.size() > 1) {
                std::sort(seen.begin(), seen.end());
                best = seen.front();
                double best_d = std::abs(ssnsim[p] - cluster.centers[static_cast<std::size_t>(best - 1)]);
                for (std::size_t s = 1; s < seen.size(); ++s) {
                    const double d = std::abs(ssnsim[p] - cluster.centers[static_cast<std::size_t>(seen[s] - 1)]);
                    if (d < best_d) {
                        best_d = d;
                        best = seen[s];
                    }
                }
            }
            decided.emplace_back(p, best);
        }
        if (decided.empty())
            fail(ErrorKind::InvalidArgument, "merge_boundaries: boundary pixels with no labeled region");
        for (const auto& [p, c] : decided) out.labels[p] = c;
        pending.swap(still_pending);
    }
    return out;
}

LabelMap merge_regions(const LabelMap& watershed_labels, const ClusterResult& cluster,
                       const Plane& ssnsim) {
    return connected_components(merge_boundaries(watershed_labels, cluster, ssnsim));
}

Segmentation segment(const Plane& ssnsim, const SegmentationParams& params) {
    if (!(params.hmin >= 0.0) || !std::isfinite(params.hmin))
        fail(ErrorKind::InvalidConfig, "H-minima depth must be a finite value >= 0");
    Segmentation s;
    s.gradient = gradient_magnitude(ssnsim);
    const double depth = params.hmin_mode == DepthMode::Relative
                             ? params.hmin * (s.gradient.max_value() - s.gradient.min_value())
                             : params.hmin;
    s.suppressed = h_minima(s.gradient, depth);
    s.watershed = watershed(s.suppressed);
    if (s.watershed.count < 2)
        fail(ErrorKind::DegenerateInput,
             "segmentation found a single basin; the sources show no distinguishable focus regions");
    s.features = region_features(s.watershed, ssnsim);

    FcmParams fp = params.fcm;
    fp.n_cluster = std::min(fp.n_cluster, s.watershed.count);
    s.cluster = fcm(s.features, fp);
    s.classes = merge_boundaries(s.watershed, s.cluster, ssnsim);
    s.regions = connected_components(s.classes);
    return s;
}

}  // namespace mfusion
