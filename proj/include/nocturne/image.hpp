/*
 * Copyright (C) 2026 The Nocturne Project Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nocturne/error.hpp"

namespace nocturne {

/// One pixel, 8 bits per channel.
struct Color {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;
    std::uint8_t a = 255;

    friend bool operator==(const Color&, const Color&) = default;
};

/// Maps each color channel v to 255 - v. Alpha is untouched.
constexpr Color invert(Color c) {
    return Color{static_cast<std::uint8_t>(255 - c.r),
                 static_cast<std::uint8_t>(255 - c.g),
                 static_cast<std::uint8_t>(255 - c.b), c.a};
}

/// Supported 4-byte pixel layouts. The X in RGBX is a padding byte: it is
/// ignored on read (alpha reported as 255) and written as 255.
enum class PixelFormat {
    RGBA_8888,
    BGRA_8888,
    RGBX_8888,
};

constexpr int bytes_per_pixel(PixelFormat) { return 4; }

constexpr const char* to_string(PixelFormat f) {
    switch (f) {
    case PixelFormat::RGBA_8888: return "RGBA_8888";
    case PixelFormat::BGRA_8888: return "BGRA_8888";
    case PixelFormat::RGBX_8888: return "RGBX_8888";
    }
    return "?";
}

/// Byte position of each channel inside a 4-byte pixel. The fourth byte is
/// alpha when has_alpha is set, padding otherwise.
struct ChannelLayout {
    int r;
    int g;
    int b;
    bool has_alpha;
};

constexpr ChannelLayout channel_layout(PixelFormat f) {
    switch (f) {
    case PixelFormat::RGBA_8888: return {0, 1, 2, true};
    case PixelFormat::BGRA_8888: return {2, 1, 0, true};
    case PixelFormat::RGBX_8888: return {0, 1, 2, false};
    }
    return {0, 1, 2, true};
}

/// Raw pixel storage with dimensions and format. Rows are stored top to
/// bottom, pixels left to right, 4 bytes each, no padding between rows.
/// Plain value type: copyable, no internal synchronization.
class ImageBuffer {
public:
    ImageBuffer(int width, int height, PixelFormat format = PixelFormat::RGBA_8888)
        : ImageBuffer(width, height, format,
                      std::vector<std::uint8_t>(checked_size(width, height), 0)) {}

    ImageBuffer(int width, int height, PixelFormat format, std::vector<std::uint8_t> data)
        : width_(width), height_(height), format_(format), data_(std::move(data)) {
        if (data_.size() != checked_size(width_, height_)) {
            throw InputError("image data size " + std::to_string(data_.size()) +
                             " does not match " + std::to_string(width_) + "x" +
                             std::to_string(height_) + "x4");
        }
    }

    static ImageBuffer filled(int width, int height, Color c,
                              PixelFormat format = PixelFormat::RGBA_8888) {
        ImageBuffer buf(width, height, format);
        for (int y = 0; y < height; ++y) {
            for (int x = 0; x < width; ++x) {
                buf.set_pixel(x, y, c);
            }
        }
        return buf;
    }

    int width() const { return width_; }
    int height() const { return height_; }
    PixelFormat format() const { return format_; }
    std::int64_t pixel_count() const {
        return static_cast<std::int64_t>(width_) * height_;
    }

    std::span<const std::uint8_t> bytes() const { return data_; }
    std::span<std::uint8_t> bytes() { return data_; }

    bool in_bounds(int x, int y) const {
        return x >= 0 && x < width_ && y >= 0 && y < height_;
    }

    /// Decodes the pixel at (x, y) according to the buffer's format.
    Color pixel(int x, int y) const {
        const std::uint8_t* p = data_.data() + offset_of(x, y);
        const ChannelLayout lay = channel_layout(format_);
        return Color{p[lay.r], p[lay.g], p[lay.b],
                     lay.has_alpha ? p[3] : std::uint8_t{255}};
    }

    /// Encodes c at (x, y). RGBX buffers discard alpha and store 255 in the
    /// padding byte, so a round trip reports alpha 255.
    void set_pixel(int x, int y, Color c) {
        std::uint8_t* p = data_.data() + offset_of(x, y);
        const ChannelLayout lay = channel_layout(format_);
        p[lay.r] = c.r;
        p[lay.g] = c.g;
        p[lay.b] = c.b;
        p[3] = lay.has_alpha ? c.a : std::uint8_t{255};
    }

    friend bool operator==(const ImageBuffer&, const ImageBuffer&) = default;

private:
    static std::size_t checked_size(int width, int height) {
        if (width < 1 || height < 1) {
            throw InputError("image dimensions must be positive, got " +
                             std::to_string(width) + "x" + std::to_string(height));
        }
        return static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 4u;
    }

    std::size_t offset_of(int x, int y) const {
        if (!in_bounds(x, y)) {
            throw BoundsError("pixel (" + std::to_string(x) + ", " + std::to_string(y) +
                              ") outside " + std::to_string(width_) + "x" +
                              std::to_string(height_) + " buffer");
        }
        return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
                static_cast<std::size_t>(x)) * 4u;
    }

    int width_;
    int height_;
    PixelFormat format_;
    std::vector<std::uint8_t> data_;
};

} // namespace nocturne
