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

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include "nocturne/error.hpp"
#include "nocturne/image.hpp"

namespace nocturne {

/// Affine per-channel color transform in normalized [0,1] space:
/// out = linear * in + offset, clamped to [0,1] per channel. Alpha passes
/// through unchanged.
struct ColorMatrix {
    std::array<double, 9> linear{};  ///< row-major 3x3
    std::array<double, 3> offset{};

    static constexpr ColorMatrix identity() {
        return {{1, 0, 0, 0, 1, 0, 0, 0, 1}, {0, 0, 0}};
    }

    bool finite() const {
        for (double v : linear) {
            if (!std::isfinite(v)) return false;
        }
        for (double v : offset) {
            if (!std::isfinite(v)) return false;
        }
        return true;
    }

    friend bool operator==(const ColorMatrix&, const ColorMatrix&) = default;
};

/// Full inversion: v -> 1 - v per channel.
constexpr ColorMatrix inversion_matrix() {
    return {{-1, 0, 0, 0, -1, 0, 0, 0, -1}, {1, 1, 1}};
}

/// Extreme display warming: keeps red, zeroes green and blue.
constexpr ColorMatrix redshift_matrix() {
    return {{1, 0, 0, 0, 0, 0, 0, 0, 0}, {0, 0, 0}};
}

/// Composition: apply(compose(second, first), c) == apply(second, apply(first, c))
/// up to quantization.
constexpr ColorMatrix compose(const ColorMatrix& second, const ColorMatrix& first) {
    ColorMatrix out{};
    for (int row = 0; row < 3; ++row) {
        for (int col = 0; col < 3; ++col) {
            double sum = 0;
            for (int k = 0; k < 3; ++k) {
                sum += second.linear[row * 3 + k] * first.linear[k * 3 + col];
            }
            out.linear[row * 3 + col] = sum;
        }
        double off = second.offset[row];
        for (int k = 0; k < 3; ++k) {
            off += second.linear[row * 3 + k] * first.offset[k];
        }
        out.offset[row] = off;
    }
    return out;
}

namespace detail {

// Round half up after clamping to [0,1].
inline std::uint8_t quantize(double v) {
    v = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
    return static_cast<std::uint8_t>(std::floor(v * 255.0 + 0.5));
}

} // namespace detail

/// Applies m to a single color. Channels are normalized by 255, mapped,
/// clamped, and re-quantized with round half up. Inversion and red-shift
/// land on exact integers, so those schemes are quantization-free.
inline Color apply(const ColorMatrix& m, Color c) {
    const double in[3] = {c.r / 255.0, c.g / 255.0, c.b / 255.0};
    Color out = c;
    std::uint8_t* ch[3] = {&out.r, &out.g, &out.b};
    for (int row = 0; row < 3; ++row) {
        const double v = m.linear[row * 3 + 0] * in[0] + m.linear[row * 3 + 1] * in[1] +
                         m.linear[row * 3 + 2] * in[2] + m.offset[row];
        *ch[row] = detail::quantize(v);
    }
    return out;
}

/// Maps every pixel through m. Dimensions and format are unchanged; the
/// fourth byte of each pixel (alpha or RGBX padding) is never touched.
inline ImageBuffer apply(const ImageBuffer& buf, const ColorMatrix& m) {
    if (!m.finite()) {
        throw ConfigError("color matrix has non-finite coefficients");
    }
    ImageBuffer out = buf;
    const ChannelLayout lay = channel_layout(buf.format());
    const auto src = buf.bytes();
    auto dst = out.bytes();
    for (std::size_t off = 0; off < src.size(); off += 4) {
        const Color c{src[off + lay.r], src[off + lay.g], src[off + lay.b], 255};
        const Color t = apply(m, c);
        dst[off + lay.r] = t.r;
        dst[off + lay.g] = t.g;
        dst[off + lay.b] = t.b;
    }
    return out;
}

/// The measured display schemes: untouched, content-gated inversion, pure
/// red-shift, and inversion followed by red-shift.
enum class TransformScheme {
    Default = 0,
    Invert = 1,
    Redshift = 2,
    InvertRedshift = 3,
};

constexpr const char* to_string(TransformScheme s) {
    switch (s) {
    case TransformScheme::Default: return "default";
    case TransformScheme::Invert: return "invert";
    case TransformScheme::Redshift: return "redshift";
    case TransformScheme::InvertRedshift: return "invert-redshift";
    }
    return "?";
}

inline constexpr std::array<TransformScheme, 4> kAllSchemes = {
    TransformScheme::Default, TransformScheme::Invert, TransformScheme::Redshift,
    TransformScheme::InvertRedshift};

inline std::optional<TransformScheme> parse_scheme(const std::string& name) {
    if (name == "default") return TransformScheme::Default;
    if (name == "invert") return TransformScheme::Invert;
    if (name == "redshift") return TransformScheme::Redshift;
    if (name == "invert-redshift") return TransformScheme::InvertRedshift;
    return std::nullopt;
}

/// Matrix realizing a scheme; Default means no transform at all. The
/// combined scheme inverts first and red-shifts the result.
inline std::optional<ColorMatrix> scheme_transform(TransformScheme s) {
    switch (s) {
    case TransformScheme::Default: return std::nullopt;
    case TransformScheme::Invert: return inversion_matrix();
    case TransformScheme::Redshift: return redshift_matrix();
    case TransformScheme::InvertRedshift:
        return compose(redshift_matrix(), inversion_matrix());
    }
    return std::nullopt;
}

} // namespace nocturne
