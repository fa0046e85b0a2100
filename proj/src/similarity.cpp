// SPDX-License-Identifier: Apache-2.0
#include "mfusion/similarity.hpp"

#include <algorithm>
#include <cmath>

namespace mfusion {

namespace {

struct Window {
    int x0, x1, y0, y1;  // inclusive bounds
    double count() const { return static_cast<double>((x1 - x0 + 1) * (y1 - y0 + 1)); }
};

Window clipped_window(int x, int y, int r, int w, int h) {
    return {std::max(0, x - r), std::min(w - 1, x + r), std::max(0, y - r), std::min(h - 1, y + r)};
}

// Structure can be negative; a fractional exponent keeps its sign.
double signed_pow(double v, double e) {
    if (e == 1.0) return v;
    return std::copysign(std::pow(std::abs(v), e), v);
}

}  // namespace

void SsimParams::validate() const {
    if (!(alpha > 0.0) || !(beta > 0.0) || !(gamma > 0.0))
        fail(ErrorKind::InvalidConfig, "SSIM exponents must be positive");
    if (!(c1 > 0.0) || !(c2 > 0.0) || !(c3 > 0.0))
        fail(ErrorKind::InvalidConfig, "SSIM stabilizing constants must be positive");
    if (window_radius < 1)
        fail(ErrorKind::InvalidConfig, "window radius must be at least 1");
}

WindowStats window_stats(const GrayImage& img, int window_radius) {
    if (window_radius < 1)
        fail(ErrorKind::InvalidArgument, "window radius must be at least 1");
    const int w = img.width();
    const int h = img.height();
    WindowStats out{Plane(w, h), Plane(w, h), window_radius};
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const Window win = clipped_window(x, y, window_radius, w, h);
            double sum = 0.0;
            for (int v = win.y0; v <= win.y1; ++v)
                for (int u = win.x0; u <= win.x1; ++u) sum += img.at(u, v);
            const double n = win.count();
            const double mean = sum / n;
            double ss = 0.0;
            for (int v = win.y0; v <= win.y1; ++v)
                for (int u = win.x0; u <= win.x1; ++u) {
                    const double d = img.at(u, v) - mean;
                    ss += d * d;
                }
            out.mu.at(x, y) = mean;
            out.sigma.at(x, y) = std::sqrt(ss / n);
        }
    }
    return out;
}

SsimComponents ssim_component_maps(const GrayImage& x, const GrayImage& y, const SsimParams& p) {
    require_same_shape(x, y, "ssim_component_maps");
    p.validate();
    const int w = x.width();
    const int h = x.height();
    const int r = p.window_radius;
    SsimComponents out{Plane(w, h), Plane(w, h), Plane(w, h),
                       Plane(w, h), Plane(w, h), Plane(w, h)};
    for (int j = 0; j < h; ++j) {
        for (int i = 0; i < w; ++i) {
            const Window win = clipped_window(i, j, r, w, h);
            double sx = 0.0, sy = 0.0;
            for (int v = win.y0; v <= win.y1; ++v)
                for (int u = win.x0; u <= win.x1; ++u) {
                    sx += x.at(u, v);
                    sy += y.at(u, v);
                }
            const double n = win.count();
            const double mx = sx / n;
            const double my = sy / n;
            double vx = 0.0, vy = 0.0, cxy = 0.0;
            for (int v = win.y0; v <= win.y1; ++v)
                for (int u = win.x0; u <= win.x1; ++u) {
                    const double dx = x.at(u, v) - mx;
                    const double dy = y.at(u, v) - my;
                    vx += dx * dx;
                    vy += dy * dy;
                    cxy += dx * dy;
                }
            const double sdx = std::sqrt(vx / n);
            const double sdy = std::sqrt(vy / n);
            const double cov = cxy / n;
            // sqrt(v * v) == v exactly, so identical windows give s == 1
            // with no rounding residue; sdx * sdy would not.
            const double sdxy = std::sqrt(vx * vy) / n;

            out.luminance.at(i, j) = (2.0 * mx * my + p.c1) / (mx * mx + my * my + p.c1);
            out.contrast.at(i, j) = (2.0 * sdx * sdy + p.c2) / (sdx * sdx + sdy * sdy + p.c2);
            out.structure.at(i, j) = (cov + p.c3) / (sdxy + p.c3);
            out.sigma_x.at(i, j) = sdx;
            out.sigma_y.at(i, j) = sdy;
            out.sigma_xy.at(i, j) = cov;
        }
    }
    return out;
}

namespace {

Plane combine(const SsimComponents& c, const SsimParams& p) {
    Plane out(c.luminance.width(), c.luminance.height());
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = signed_pow(c.luminance[k], p.alpha) * signed_pow(c.contrast[k], p.beta) *
                 signed_pow(c.structure[k], p.gamma);
    }
    return out;
}

}  // namespace

Plane ssim_map(const GrayImage& x, const GrayImage& y, const SsimParams& p) {
    return combine(ssim_component_maps(x, y, p), p);
}

SsimMaps ssnsim_map(const GrayImage& x, const GrayImage& y, const SsimParams& p) {
    SsimComponents comp = ssim_component_maps(x, y, p);
    SsimMaps out;
    out.ssim = combine(comp, p);
    const int w = x.width();
    const int h = x.height();
    out.snsim = Plane(w, h);
    out.sign = Plane(w, h);
    out.ssnsim = Plane(w, h);
    for (std::size_t k = 0; k < out.ssim.size(); ++k) {
        const double snsim = 1.0 - out.ssim[k];
        const double sign = comp.sigma_x[k] > comp.sigma_y[k] ? 1.0 : -1.0;
        out.snsim[k] = snsim;
        out.sign[k] = sign;
        // -1 * 0.0 would leave a negative zero behind
        out.ssnsim[k] = snsim == 0.0 ? 0.0 : sign * snsim;
    }
    out.sigma_xy = std::move(comp.sigma_xy);
    return out;
}

}  // namespace mfusion
