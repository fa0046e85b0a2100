// SPDX-License-Identifier: Apache-2.0
#include "mfusion/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <vector>

namespace mfusion {

namespace {

bool ends_with_ci(const std::string& s, const std::string& suffix) {
    if (s.size() < suffix.size()) return false;
    return std::equal(suffix.rbegin(), suffix.rend(), s.rbegin(),
                      [](char a, char b) { return std::tolower(a) == std::tolower(b); });
}

GrayImage from_bytes(int w, int h, const std::vector<std::uint8_t>& bytes, const std::string& path) {
    if (w < 2 || h < 2) fail(ErrorKind::Io, path + ": image must be at least 2x2");
    std::vector<double> data(bytes.begin(), bytes.end());
    return GrayImage(w, h, std::move(data));
}

std::vector<std::uint8_t> to_bytes(const GrayImage& img) {
    std::vector<std::uint8_t> bytes(img.size());
    for (std::size_t k = 0; k < img.size(); ++k)
        bytes[k] = static_cast<std::uint8_t>(std::clamp(std::lround(img[k]), 0L, 255L));
    return bytes;
}

GrayImage read_png(const std::string& path) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&image, path.c_str()))
        fail(ErrorKind::Io, path + ": " + image.message);
    if (image.format & PNG_FORMAT_FLAG_COLOR) {
        png_image_free(&image);
        fail(ErrorKind::Io, path + ": color images are not supported; convert to grayscale");
    }
    if (image.format & PNG_FORMAT_FLAG_LINEAR) {
        png_image_free(&image);
        fail(ErrorKind::Io, path + ": 16-bit images are not supported");
    }
    image.format = PNG_FORMAT_GRAY;
    std::vector<std::uint8_t> bytes(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, bytes.data(), 0, nullptr))
        fail(ErrorKind::Io, path + ": " + image.message);
    return from_bytes(static_cast<int>(image.width), static_cast<int>(image.height), bytes, path);
}

// Next whitespace-delimited header token, skipping '#' comments.
std::string pnm_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {}
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) break;
            continue;
        }
        tok.push_back(static_cast<char>(c));
    }
    return tok;
}

GrayImage read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Io, path + ": cannot open");
    const std::string magic = pnm_token(in);
    if (magic == "P3" || magic == "P6")
        fail(ErrorKind::Io, path + ": color images are not supported; convert to grayscale");
    if (magic != "P2" && magic != "P5") fail(ErrorKind::Io, path + ": not a PGM file");
    int w = 0, h = 0, maxval = 0;
    try {
        w = std::stoi(pnm_token(in));
        h = std::stoi(pnm_token(in));
        maxval = std::stoi(pnm_token(in));
    } catch (const std::exception&) {
        fail(ErrorKind::Io, path + ": malformed PGM header");
    }
    if (w < 1 || h < 1 || maxval < 1) fail(ErrorKind::Io, path + ": malformed PGM header");
    if (maxval > 255) fail(ErrorKind::Io, path + ": 16-bit images are not supported");

    std::vector<std::uint8_t> bytes(static_cast<std::size_t>(w) * static_cast<std::size_t>(h));
    if (magic == "P5") {
        in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        if (in.gcount() != static_cast<std::streamsize>(bytes.size()))
            fail(ErrorKind::Io, path + ": truncated pixel data");
    } else {
        for (auto& b : bytes) {
            int v = -1;
            if (!(in >> v) || v < 0 || v > maxval) fail(ErrorKind::Io, path + ": bad ASCII pixel data");
            b = static_cast<std::uint8_t>(v);
        }
    }
    if (maxval != 255)
        for (auto& b : bytes) b = static_cast<std::uint8_t>(std::lround(b * 255.0 / maxval));
    return from_bytes(w, h, bytes, path);
}

}  // namespace

GrayImage read_image(const std::string& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) fail(ErrorKind::Io, path + ": cannot open");
    char head[8] = {};
    probe.read(head, sizeof head);
    probe.close();
    static constexpr unsigned char kPngSig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    if (std::equal(std::begin(kPngSig), std::end(kPngSig), reinterpret_cast<unsigned char*>(head)))
        return read_png(path);
    if (head[0] == 'P') return read_pgm(path);
    fail(ErrorKind::Io, path + ": unrecognized image format (expected PNG or PGM)");
}

void write_image(const std::string& path, const GrayImage& img) {
    const std::vector<std::uint8_t> bytes = to_bytes(img);
    if (ends_with_ci(path, ".pgm")) {
        std::ofstream out(path, std::ios::binary);
        if (!out) fail(ErrorKind::Io, path + ": cannot open for writing");
        out << "P5\n" << img.width() << ' ' << img.height() << "\n255\n";
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        if (!out) fail(ErrorKind::Io, path + ": write failed");
        return;
    }
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(img.width());
    image.height = static_cast<png_uint_32>(img.height());
    image.format = PNG_FORMAT_GRAY;
    if (!png_image_write_to_file(&image, path.c_str(), 0, bytes.data(), 0, nullptr))
        fail(ErrorKind::Io, path + ": " + image.message);
}

GrayImage rescale_for_view(const Plane& plane) {
    const double lo = plane.min_value();
    const double hi = plane.max_value();
    Plane out(plane.width(), plane.height());
    if (hi > lo)
        for (std::size_t k = 0; k < out.size(); ++k) out[k] = (plane[k] - lo) / (hi - lo) * 255.0;
    return GrayImage::quantized(out);
}

GrayImage render_labels(const LabelMap& labels) {
    Plane out(labels.width, labels.height);
    for (std::size_t k = 0; k < out.size(); ++k) {
        const std::int64_t l = labels.labels[k];
        out[k] = l <= 0 ? 0.0 : static_cast<double>(40 + (67 * l) % 216);
    }
    return GrayImage(std::move(out));
}

void write_labels(const std::string& path, const LabelMap& labels) {
    std::ofstream out(path);
    if (!out) fail(ErrorKind::Io, path + ": cannot open for writing");
    out << labels.width << ' ' << labels.height << '\n';
    for (int y = 0; y < labels.height; ++y) {
        for (int x = 0; x < labels.width; ++x) {
            if (x) out << ' ';
            out << labels.at(x, y);
        }
        out << '\n';
    }
    if (!out) fail(ErrorKind::Io, path + ": write failed");
}

LabelMap read_labels(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Io, path + ": cannot open");
    int w = 0, h = 0;
    if (!(in >> w >> h) || w < 1 || h < 1) fail(ErrorKind::Io, path + ": malformed label header");
    LabelMap out(w, h, 0);
    for (auto& l : out.labels)
        if (!(in >> l)) fail(ErrorKind::Io, path + ": truncated label data");
    out.count = *std::max_element(out.labels.begin(), out.labels.end());
    return out;
}

}  // namespace mfusion
