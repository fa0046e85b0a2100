// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "mfusion/image.hpp"

namespace mfusion {

/// Reads an 8-bit grayscale PNG or PGM (P2/P5), detected by content.
/// Color input is rejected with ErrorKind::Io.
GrayImage read_image(const std::string& path);

/// Writes PNG unless the path ends in ".pgm" (binary P5). Values are
/// rounded to the nearest level.
void write_image(const std::string& path, const GrayImage& img);

/// Rescales [min, max] of a plane linearly onto [0, 255]; a flat plane
/// maps to 0.
GrayImage rescale_for_view(const Plane& plane);

/// Renders labels through a fixed palette: 0 is black, label l maps to
/// 40 + (67 * l) mod 216.
GrayImage render_labels(const LabelMap& labels);

/// Plain-text label dump: "width height" then one row per line.
void write_labels(const std::string& path, const LabelMap& labels);
LabelMap read_labels(const std::string& path);

}  // namespace mfusion
