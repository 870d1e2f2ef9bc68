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

#include <png.h>

#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include "nocturne/error.hpp"
#include "nocturne/image.hpp"

namespace nocturne {

/// Loads a PNG file. Any libpng-readable color type is accepted and
/// normalized to RGBA_8888.
inline ImageBuffer load_image(const std::string& path) {
    png_image img;
    std::memset(&img, 0, sizeof(img));
    img.version = PNG_IMAGE_VERSION;

    if (!png_image_begin_read_from_file(&img, path.c_str())) {
        std::string msg = img.message;
        png_image_free(&img);
        throw InputError("cannot read '" + path + "': " + msg);
    }
    img.format = PNG_FORMAT_RGBA;

    std::vector<std::uint8_t> data(PNG_IMAGE_SIZE(img));
    if (!png_image_finish_read(&img, nullptr, data.data(), 0, nullptr)) {
        std::string msg = img.message;
        png_image_free(&img);
        throw InputError("cannot decode '" + path + "': " + msg);
    }
    const int width = static_cast<int>(img.width);
    const int height = static_cast<int>(img.height);
    png_image_free(&img);
    return ImageBuffer(width, height, PixelFormat::RGBA_8888, std::move(data));
}

/// Writes buf as an 8-bit RGBA PNG. Non-RGBA buffers are repacked first;
/// RGBX padding bytes become alpha 255.
inline void save_image(const ImageBuffer& buf, const std::string& path) {
    std::vector<std::uint8_t> rgba;
    const std::uint8_t* pixels = buf.bytes().data();
    if (buf.format() != PixelFormat::RGBA_8888) {
        rgba.resize(buf.bytes().size());
        std::size_t off = 0;
        for (int y = 0; y < buf.height(); ++y) {
            for (int x = 0; x < buf.width(); ++x, off += 4) {
                const Color c = buf.pixel(x, y);
                rgba[off + 0] = c.r;
                rgba[off + 1] = c.g;
                rgba[off + 2] = c.b;
                rgba[off + 3] = c.a;
            }
        }
        pixels = rgba.data();
    }

    png_image img;
    std::memset(&img, 0, sizeof(img));
    img.version = PNG_IMAGE_VERSION;
    img.width = static_cast<png_uint_32>(buf.width());
    img.height = static_cast<png_uint_32>(buf.height());
    img.format = PNG_FORMAT_RGBA;

    if (!png_image_write_to_file(&img, path.c_str(), 0, pixels, 0, nullptr)) {
        std::string msg = img.message;
        png_image_free(&img);
        throw InputError("cannot write '" + path + "': " + msg);
    }
    png_image_free(&img);
}

} // namespace nocturne
