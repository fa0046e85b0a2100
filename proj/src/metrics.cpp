// SPDX-License-Identifier: Apache-2.0
#include "mfusion/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace mfusion {

namespace {

constexpr int kLevels = 256;

int level_of(double v) {
    return static_cast<int>(std::clamp(std::lround(v), 0L, static_cast<long>(kLevels - 1)));
}

std::array<double, kLevels> histogram(const GrayImage& img) {
    std::array<double, kLevels> hist{};
    for (double v : img.values()) hist[static_cast<std::size_t>(level_of(v))] += 1.0;
    return hist;
}

struct EdgeField {
    std::vector<double> strength;
    std::vector<double> orientation;
};

EdgeField sobel_edges(const GrayImage& img) {
    const int w = img.width();
    const int h = img.height();
    auto px = [&](int x, int y) { return img.at(std::clamp(x, 0, w - 1), std::clamp(y, 0, h - 1)); };
    EdgeField e;
    e.strength.resize(img.size());
    e.orientation.resize(img.size());
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const double gx = (px(x + 1, y - 1) + 2.0 * px(x + 1, y) + px(x + 1, y + 1)) -
                              (px(x - 1, y - 1) + 2.0 * px(x - 1, y) + px(x - 1, y + 1));
            const double gy = (px(x - 1, y + 1) + 2.0 * px(x, y + 1) + px(x + 1, y + 1)) -
                              (px(x - 1, y - 1) + 2.0 * px(x, y - 1) + px(x + 1, y - 1));
            const std::size_t k = static_cast<std::size_t>(y) * w + x;
            e.strength[k] = std::sqrt(gx * gx + gy * gy);
            e.orientation[k] = gx == 0.0 ? std::numbers::pi / 2.0 : std::atan(gy / gx);
        }
    return e;
}

double sigmoid(double gamma, double kappa, double sigma, double v) {
    return gamma / (1.0 + std::exp(kappa * (v - sigma)));
}

// Accumulates sum(Q * w) and sum(w) for one source against the fused edges.
std::pair<double, double> edge_preservation(const EdgeField& src, const EdgeField& fused,
                                            const EdgeRetentionParams& p) {
    const double half_pi = std::numbers::pi / 2.0;
    const double g_norm = p.normalize ? sigmoid(p.gamma_g, p.kappa_g, p.sigma_g, 1.0) : 1.0;
    const double a_norm = p.normalize ? sigmoid(p.gamma_a, p.kappa_a, p.sigma_a, 1.0) : 1.0;
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < src.strength.size(); ++k) {
        const double gs = src.strength[k];
        const double gf = fused.strength[k];
        const double rel_strength = gs == gf ? 1.0 : (gs > gf ? gf / gs : gs / gf);
        // Orientation is defined modulo pi.
        double d = std::abs(src.orientation[k] - fused.orientation[k]);
        if (d > half_pi) d = std::numbers::pi - d;
        const double rel_orientation = 1.0 - d / half_pi;
        const double q = sigmoid(p.gamma_g, p.kappa_g, p.sigma_g, rel_strength) / g_norm *
                         sigmoid(p.gamma_a, p.kappa_a, p.sigma_a, rel_orientation) / a_norm;
        num += q * gs;
        den += gs;
    }
    return {num, den};
}

}  // namespace

double variance(const GrayImage& img) {
    const double n = static_cast<double>(img.size());
    double sum = 0.0;
    for (double v : img.values()) sum += v;
    const double mean = sum / n;
    double ss = 0.0;
    for (double v : img.values()) ss += (v - mean) * (v - mean);
    return ss / n;
}

double standard_deviation(const GrayImage& img) { return std::sqrt(variance(img)); }

double spatial_frequency(const GrayImage& img) {
    const int w = img.width();
    const int h = img.height();
    double row = 0.0, col = 0.0;
    for (int y = 0; y < h; ++y)
        for (int x = 1; x < w; ++x) {
            const double d = img.at(x, y) - img.at(x - 1, y);
            row += d * d;
        }
    for (int y = 1; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const double d = img.at(x, y) - img.at(x, y - 1);
            col += d * d;
        }
    const double rf2 = row / (static_cast<double>(h) * (w - 1));
    const double cf2 = col / (static_cast<double>(w) * (h - 1));
    return std::sqrt(rf2 + cf2);
}

double average_gradient(const GrayImage& img) {
    double sum = 0.0;
    for (int y = 0; y + 1 < img.height(); ++y)
        for (int x = 0; x + 1 < img.width(); ++x) {
            const double f = img.at(x, y);
            const double dv = f - img.at(x, y + 1);
            const double dh = f - img.at(x + 1, y);
            sum += std::sqrt((dv * dv + dh * dh) / 2.0);
        }
    return sum / (static_cast<double>(img.height() - 1) * (img.width() - 1));
}

double entropy(const GrayImage& img) {
    const auto hist = histogram(img);
    const double n = static_cast<double>(img.size());
    double h = 0.0;
    for (double c : hist) {
        if (c == 0.0) continue;
        const double p = c / n;
        h -= p * std::log2(p);
    }
    return h;
}

double mutual_information(const GrayImage& a, const GrayImage& b) {
    require_same_shape(a, b, "mutual_information");
    std::vector<double> joint(static_cast<std::size_t>(kLevels) * kLevels, 0.0);
    for (std::size_t k = 0; k < a.size(); ++k)
        joint[static_cast<std::size_t>(level_of(a[k])) * kLevels + level_of(b[k])] += 1.0;
    const auto ha = histogram(a);
    const auto hb = histogram(b);
    const double n = static_cast<double>(a.size());
    double mi = 0.0;
    for (int i = 0; i < kLevels; ++i) {
        if (ha[static_cast<std::size_t>(i)] == 0.0) continue;
        for (int j = 0; j < kLevels; ++j) {
            const double c = joint[static_cast<std::size_t>(i) * kLevels + j];
            if (c == 0.0) continue;
            // p_ab / (p_a p_b) = c * n / (count_a * count_b)
            mi += c / n * std::log2(c * n / (ha[static_cast<std::size_t>(i)] * hb[static_cast<std::size_t>(j)]));
        }
    }
    return std::max(mi, 0.0);
}

double mutual_information(const GrayImage& fused, std::span<const GrayImage> sources) {
    double total = 0.0;
    for (const GrayImage& s : sources) total += mutual_information(fused, s);
    return total;
}

double q_abf(const GrayImage& fused, std::span<const GrayImage> sources, const EdgeRetentionParams& params) {
    if (sources.empty()) fail(ErrorKind::InvalidArgument, "q_abf needs at least one source");
    for (const GrayImage& s : sources) require_same_shape(fused, s, "q_abf");
    const EdgeField f = sobel_edges(fused);
    double num = 0.0, den = 0.0;
    for (const GrayImage& s : sources) {
        const auto [n, d] = edge_preservation(sobel_edges(s), f, params);
        num += n;
        den += d;
    }
    return den == 0.0 ? 0.0 : num / den;
}

MetricsReport evaluate(const GrayImage& fused, std::span<const GrayImage> sources,
                       const EdgeRetentionParams& params) {
    if (sources.empty()) fail(ErrorKind::InvalidArgument, "evaluate needs at least one source");
    for (const GrayImage& s : sources) require_same_shape(fused, s, "evaluate");
    MetricsReport r;
    r.variance = variance(fused);
    r.v = std::sqrt(r.variance);
    r.sf = spatial_frequency(fused);
    r.ag = average_gradient(fused);
    r.h = entropy(fused);
    const EdgeField f = sobel_edges(fused);
    double num = 0.0, den = 0.0;
    for (const GrayImage& s : sources) {
        r.mi_per_source.push_back(mutual_information(fused, s));
        r.mi += r.mi_per_source.back();
        const auto [n, d] = edge_preservation(sobel_edges(s), f, params);
        r.q_per_source.push_back(d == 0.0 ? 0.0 : n / d);
        num += n;
        den += d;
    }
    r.q_abf = den == 0.0 ? 0.0 : num / den;
    return r;
}

}  // namespace mfusion
