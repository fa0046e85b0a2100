// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "mfusion/image.hpp"

namespace mfusion {

/// Sigmoid shape of the edge-preservation measure, with its usual
/// constants as defaults.
struct EdgeRetentionParams {
    double gamma_g = 0.9994;
    double kappa_g = -15.0;
    double sigma_g = 0.5;
    double gamma_a = 0.9879;
    double kappa_a = -22.0;
    double sigma_a = 0.8;
    /// Divide each preservation sigmoid by its value at perfect transfer,
    /// so an unchanged edge scores exactly 1.
    bool normalize = true;
};

struct MetricsReport {
    double variance = 0.0;  // population variance
    double v = 0.0;         // standard deviation, the headline V
    double sf = 0.0;
    double ag = 0.0;
    double h = 0.0;
    double mi = 0.0;        // sum over sources
    double q_abf = 0.0;
    std::vector<double> mi_per_source;
    std::vector<double> q_per_source;  // unweighted-by-others Q^{SF} per source
};

double variance(const GrayImage& img);
double standard_deviation(const GrayImage& img);
double spatial_frequency(const GrayImage& img);
/// Whole-image average gradient, (M-1)(N-1) forward-difference terms.
double average_gradient(const GrayImage& img);
/// Shannon entropy (bits) of the 256-bin histogram of rounded values.
double entropy(const GrayImage& img);
/// MI(a; b) in bits from the 256x256 joint histogram.
double mutual_information(const GrayImage& a, const GrayImage& b);
/// Sum of MI(fused; source) over all sources.
double mutual_information(const GrayImage& fused, std::span<const GrayImage> sources);
double q_abf(const GrayImage& fused, std::span<const GrayImage> sources,
             const EdgeRetentionParams& params = {});

MetricsReport evaluate(const GrayImage& fused, std::span<const GrayImage> sources,
                       const EdgeRetentionParams& params = {});

}  // namespace mfusion
