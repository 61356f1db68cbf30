// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <zlib.h>

#include <array>
#include <cstdint>
#include <fstream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tubal/errors.hpp"
#include "tubal/tensor3.hpp"

namespace tubal {

inline std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary | std::ios::ate);
    if (!is) throw IoError("cannot open: " + path);
    const auto size = is.tellg();
    is.seekg(0);
    std::vector<std::uint8_t> bytes(static_cast<std::size_t>(size));
    is.read(reinterpret_cast<char*>(bytes.data()), size);
    if (!is) throw IoError("read failed: " + path);
    return bytes;
}

/// Transparently inflates gzip-wrapped payloads (1F 8B prefix); anything else
/// passes through untouched.
inline std::vector<std::uint8_t> gunzip_if_needed(std::vector<std::uint8_t> bytes) {
    if (bytes.size() < 2 || bytes[0] != 0x1f || bytes[1] != 0x8b) return bytes;
    z_stream zs{};
    if (inflateInit2(&zs, 15 + 16) != Z_OK) throw ParseError("gzip: inflateInit failed");
    std::vector<std::uint8_t> out;
    out.reserve(bytes.size() * 4);
    std::array<std::uint8_t, 1 << 16> chunk;
    zs.next_in = bytes.data();
    zs.avail_in = static_cast<uInt>(bytes.size());
    int rc = Z_OK;
    while (rc != Z_STREAM_END) {
        zs.next_out = chunk.data();
        zs.avail_out = static_cast<uInt>(chunk.size());
        rc = inflate(&zs, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END) {
            inflateEnd(&zs);
            throw ParseError("gzip: corrupt stream (zlib rc " + std::to_string(rc) + ")");
        }
        out.insert(out.end(), chunk.data(), chunk.data() + (chunk.size() - zs.avail_out));
    }
    inflateEnd(&zs);
    return out;
}

namespace detail {
inline std::uint32_t get_u32_be(std::span<const std::uint8_t> bytes, std::size_t offset) {
    return std::uint32_t(bytes[offset]) << 24 | std::uint32_t(bytes[offset + 1]) << 16 |
           std::uint32_t(bytes[offset + 2]) << 8 | std::uint32_t(bytes[offset + 3]);
}
}  // namespace detail

struct IdxImages {
    std::int64_t count = 0;
    std::int64_t rows = 0;
    std::int64_t cols = 0;
    std::vector<std::uint8_t> pixels;  // count*rows*cols, row-major per image
};

/// IDX image container: big-endian magic 0x00000803, three big-endian u32
/// dims, then count*rows*cols unsigned bytes. Trailing or missing bytes are
/// rejected.
inline IdxImages parse_idx_images(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 16)
        throw ParseError("IDX images: truncated header at byte offset " +
                         std::to_string(bytes.size()));
    const std::uint32_t magic = detail::get_u32_be(bytes, 0);
    if (magic != 0x00000803)
        throw ParseError("IDX images: bad magic 0x" + [magic] {
            char buf[9];
            std::snprintf(buf, sizeof buf, "%08x", magic);
            return std::string(buf);
        }());
    IdxImages out;
    out.count = detail::get_u32_be(bytes, 4);
    out.rows = detail::get_u32_be(bytes, 8);
    out.cols = detail::get_u32_be(bytes, 12);
    const std::size_t expected = 16 + std::size_t(out.count * out.rows * out.cols);
    if (bytes.size() < expected)
        throw ParseError("IDX images: truncated pixel data at byte offset " +
                         std::to_string(bytes.size()) + " (need " + std::to_string(expected) + ")");
    if (bytes.size() > expected)
        throw ParseError("IDX images: " + std::to_string(bytes.size() - expected) +
                         " trailing bytes");
    out.pixels.assign(bytes.begin() + 16, bytes.end());
    return out;
}

/// IDX label container: magic 0x00000801, big-endian count, count bytes <= 9.
inline std::vector<std::uint8_t> parse_idx_labels(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 8)
        throw ParseError("IDX labels: truncated header at byte offset " +
                         std::to_string(bytes.size()));
    const std::uint32_t magic = detail::get_u32_be(bytes, 0);
    if (magic != 0x00000801)
        throw ParseError("IDX labels: bad magic");
    const std::size_t count = detail::get_u32_be(bytes, 4);
    if (bytes.size() < 8 + count)
        throw ParseError("IDX labels: truncated at byte offset " + std::to_string(bytes.size()) +
                         " (need " + std::to_string(8 + count) + ")");
    if (bytes.size() > 8 + count)
        throw ParseError("IDX labels: trailing bytes");
    std::vector<std::uint8_t> labels(bytes.begin() + 8, bytes.end());
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] > 9)
            throw ParseError("IDX labels: invalid label " + std::to_string(int(labels[i])) +
                             " at index " + std::to_string(i));
    return labels;
}

struct ImageSet {
    std::int64_t count = 0;
    std::int64_t rows = 0;
    std::int64_t cols = 0;
    std::vector<std::uint8_t> pixels;
    std::vector<std::uint8_t> labels;

    static ImageSet from_parts(IdxImages images, std::vector<std::uint8_t> labels) {
        if (static_cast<std::int64_t>(labels.size()) != images.count)
            throw DimensionError("ImageSet: " + std::to_string(images.count) + " images vs " +
                                 std::to_string(labels.size()) + " labels");
        return {images.count, images.rows, images.cols, std::move(images.pixels),
                std::move(labels)};
    }

    static ImageSet load(const std::string& images_path, const std::string& labels_path) {
        return from_parts(parse_idx_images(gunzip_if_needed(read_file(images_path))),
                          parse_idx_labels(gunzip_if_needed(read_file(labels_path))));
    }

    std::uint8_t pixel(std::int64_t image, std::int64_t r, std::int64_t c) const {
        return pixels[static_cast<std::size_t>((image * rows + r) * cols + c)];
    }
};

enum class Normalization { none, unit };

inline double normalization_scale(Normalization norm) {
    return norm == Normalization::unit ? 1.0 / 255.0 : 1.0;
}

inline std::string to_string(Normalization norm) {
    return norm == Normalization::unit ? "unit" : "none";
}

inline Normalization normalization_from_string(const std::string& s) {
    if (s == "unit") return Normalization::unit;
    if (s == "none") return Normalization::none;
    throw ParseError("unknown normalization '" + s + "' (expected none|unit)");
}

/// One tensor per digit, images as lateral slices in file order.
///
/// Orientation: image rows map to dimension 1 (ell) and image columns to
/// dimension 3 (tubes), i.e. tensors[d](r, j, c) = pixel(r, c) of the j-th
/// class-d image, times the normalization scale.
struct ClassPartition {
    std::array<Tensor3, 10> tensors;
    std::array<std::int64_t, 10> counts{};
    std::array<std::vector<std::int64_t>, 10> source_indices;  // positions in the file order
    Normalization normalization = Normalization::unit;
    std::int64_t total = 0;
};

inline ClassPartition build_class_partition(const ImageSet& set, Normalization norm) {
    ClassPartition part;
    part.normalization = norm;
    part.total = set.count;
    for (std::int64_t j = 0; j < set.count; ++j) ++part.counts[set.labels[std::size_t(j)]];
    for (int d = 0; d < 10; ++d) {
        if (part.counts[std::size_t(d)] == 0) continue;  // Tensor3 requires m >= 1
        part.tensors[std::size_t(d)] = Tensor3(set.rows, part.counts[std::size_t(d)], set.cols);
        part.source_indices[std::size_t(d)].reserve(std::size_t(part.counts[std::size_t(d)]));
    }
    const double scale = normalization_scale(norm);
    std::array<std::int64_t, 10> next{};
    for (std::int64_t j = 0; j < set.count; ++j) {
        const int d = set.labels[std::size_t(j)];
        Tensor3& t = part.tensors[std::size_t(d)];
        const std::int64_t slot = next[std::size_t(d)]++;
        for (std::int64_t r = 0; r < set.rows; ++r)
            for (std::int64_t c = 0; c < set.cols; ++c)
                t(r, slot, c) = double(set.pixel(j, r, c)) * scale;
        part.source_indices[std::size_t(d)].push_back(j);
    }
    return part;
}

}  // namespace tubal
