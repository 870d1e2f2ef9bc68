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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "nocturne/error.hpp"
#include "nocturne/image.hpp"

namespace nocturne {

/// Weighted luminance ceiling: 255 * (3 + 4 + 1).
inline constexpr int kFullWhite = 2040;

/// Fast approximate luminance. Green carries the largest weight, blue the
/// smallest. Alpha is ignored.
constexpr int luminance(Color c) { return 3 * c.r + 4 * c.g + c.b; }

enum class SamplingStrategy {
    Sampled,    ///< strided grid of roughly target_samples pixels
    FullScan,   ///< every pixel
    Background, ///< strided grid of uniform 8-pixel blocks
};

constexpr const char* to_string(SamplingStrategy s) {
    switch (s) {
    case SamplingStrategy::Sampled: return "sampled";
    case SamplingStrategy::FullScan: return "full";
    case SamplingStrategy::Background: return "background";
    }
    return "?";
}

struct AnalysisConfig {
    int target_samples = 2500;
    double bright_floor = 0.6;  ///< fraction of full white, inclusive
    double dark_ceiling = 0.4;  ///< fraction of full white, inclusive
    SamplingStrategy strategy = SamplingStrategy::Sampled;

    void validate() const {
        if (target_samples < 1) {
            throw ConfigError("target_samples must be >= 1, got " +
                              std::to_string(target_samples));
        }
        if (!(dark_ceiling >= 0.0 && dark_ceiling < bright_floor && bright_floor <= 1.0)) {
            throw ConfigError("thresholds must satisfy 0 <= dark_ceiling < bright_floor <= 1, got dark_ceiling=" +
                              std::to_string(dark_ceiling) + " bright_floor=" +
                              std::to_string(bright_floor));
        }
    }
};

enum class PixelClass { Bright, Dark, Mid };

enum class Decision { Transform, Preserve };

constexpr const char* to_string(Decision d) {
    return d == Decision::Transform ? "TRANSFORM" : "PRESERVE";
}

namespace detail {

/// Thresholds scaled to integers so boundary pixels classify exactly.
/// A luminance l is bright iff l * kScale >= bright, dark iff <= dark.
struct ClassifyThresholds {
    static constexpr std::int64_t kScale = 10000;
    std::int64_t bright;
    std::int64_t dark;

    static ClassifyThresholds from(const AnalysisConfig& cfg) {
        return {std::llround(cfg.bright_floor * kScale) * kFullWhite,
                std::llround(cfg.dark_ceiling * kScale) * kFullWhite};
    }

    PixelClass classify(int l) const {
        const std::int64_t scaled = static_cast<std::int64_t>(l) * kScale;
        if (scaled >= bright) return PixelClass::Bright;
        if (scaled <= dark) return PixelClass::Dark;
        return PixelClass::Mid;
    }
};

} // namespace detail

/// Classifies a luminance value against the config thresholds. Both
/// boundaries are inclusive, which keeps the bright/dark symmetry exact
/// under the default 0.6/0.4 split.
inline PixelClass classify(int l, const AnalysisConfig& cfg = {}) {
    cfg.validate();
    return detail::ClassifyThresholds::from(cfg).classify(l);
}

/// Grid of sample coordinates covering the image. Row k starts at a
/// quarter-stride phase ((k mod 4) * stride_x) / 4 so that vertically
/// aligned features (bars, justified text) are not oversampled. Emission
/// stops at min(target_samples, width * height) positions.
inline std::vector<std::pair<int, int>> sample_positions(int width, int height,
                                                         int target_samples) {
    if (width < 1 || height < 1) {
        throw ConfigError("sample_positions needs positive dimensions");
    }
    if (target_samples < 1) {
        throw ConfigError("target_samples must be >= 1");
    }
    const int n = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(target_samples))));
    const int stride_y = std::max(1, height / n);
    const int stride_x = std::max(1, width / n);
    const std::int64_t cap =
        std::min<std::int64_t>(target_samples, static_cast<std::int64_t>(width) * height);

    std::vector<std::pair<int, int>> out;
    out.reserve(static_cast<std::size_t>(cap));
    for (int k = 0, y = 0; y < height; ++k, y += stride_y) {
        const int x0 = ((k % 4) * stride_x) / 4;
        for (int x = x0; x < width; x += stride_x) {
            out.emplace_back(x, y);
            if (static_cast<std::int64_t>(out.size()) == cap) return out;
        }
    }
    return out;
}

struct LuminanceStats {
    std::int64_t bright_count = 0;
    std::int64_t dark_count = 0;
    std::int64_t mid_count = 0;
    std::int64_t sample_count = 0;
    int max_r = 0;
    int max_g = 0;
    int max_b = 0;

    void add(int r, int g, int b, const detail::ClassifyThresholds& thr) {
        switch (thr.classify(3 * r + 4 * g + b)) {
        case PixelClass::Bright: ++bright_count; break;
        case PixelClass::Dark: ++dark_count; break;
        case PixelClass::Mid: ++mid_count; break;
        }
        ++sample_count;
        max_r = std::max(max_r, r);
        max_g = std::max(max_g, g);
        max_b = std::max(max_b, b);
    }
};

struct AnalysisResult {
    LuminanceStats stats;
    Decision decision = Decision::Preserve;
};

namespace detail {

inline Decision decide(const LuminanceStats& stats) {
    // Bright pixels must strictly outnumber dark ones; ties preserve.
    return stats.bright_count > stats.dark_count ? Decision::Transform
                                                 : Decision::Preserve;
}

inline AnalysisResult analyze_full_scan(const ImageBuffer& buf,
                                        const ClassifyThresholds& thr) {
    const ChannelLayout lay = channel_layout(buf.format());
    const auto bytes = buf.bytes();
    LuminanceStats stats;
    for (std::size_t off = 0; off < bytes.size(); off += 4) {
        stats.add(bytes[off + lay.r], bytes[off + lay.g], bytes[off + lay.b], thr);
    }
    return {stats, decide(stats)};
}

inline AnalysisResult analyze_sampled(const ImageBuffer& buf, int target_samples,
                                      const ClassifyThresholds& thr) {
    LuminanceStats stats;
    for (const auto& [x, y] : sample_positions(buf.width(), buf.height(), target_samples)) {
        const Color c = buf.pixel(x, y);
        stats.add(c.r, c.g, c.b, thr);
    }
    return {stats, decide(stats)};
}

} // namespace detail

/// Background-color variant: visits the same strided positions but counts a
/// contiguous horizontal block of 8 pixels only when every pixel in the
/// block matches the first one to within 8 per channel. Foreground detail
/// fails the uniformity test and drops out; if nothing qualifies, falls
/// back to plain sampling.
inline AnalysisResult analyze_background(const ImageBuffer& buf,
                                         const AnalysisConfig& cfg = {}) {
    cfg.validate();
    const auto thr = detail::ClassifyThresholds::from(cfg);
    constexpr int kBlock = 8;
    constexpr int kTolerance = 8;

    const ChannelLayout lay = channel_layout(buf.format());
    const auto bytes = buf.bytes();
    const int block = std::min(kBlock, buf.width());

    LuminanceStats stats;
    for (const auto& [x, y] : sample_positions(buf.width(), buf.height(), cfg.target_samples)) {
        const int bx = std::min(x, buf.width() - block);
        const std::size_t base =
            (static_cast<std::size_t>(y) * buf.width() + static_cast<std::size_t>(bx)) * 4u;
        const int r0 = bytes[base + lay.r];
        const int g0 = bytes[base + lay.g];
        const int b0 = bytes[base + lay.b];
        bool uniform = true;
        for (int i = 1; i < block && uniform; ++i) {
            const std::size_t off = base + static_cast<std::size_t>(i) * 4u;
            uniform = std::abs(static_cast<int>(bytes[off + lay.r]) - r0) <= kTolerance &&
                      std::abs(static_cast<int>(bytes[off + lay.g]) - g0) <= kTolerance &&
                      std::abs(static_cast<int>(bytes[off + lay.b]) - b0) <= kTolerance;
        }
        if (!uniform) continue;
        for (int i = 0; i < block; ++i) {
            const std::size_t off = base + static_cast<std::size_t>(i) * 4u;
            stats.add(bytes[off + lay.r], bytes[off + lay.g], bytes[off + lay.b], thr);
        }
    }
    if (stats.sample_count == 0) {
        return detail::analyze_sampled(buf, cfg.target_samples, thr);
    }
    return {stats, detail::decide(stats)};
}

/// Samples the buffer per the configured strategy, classifies each visited
/// pixel, and decides whether the content is bright-dominant. Pure function
/// of (buffer bytes, config).
inline AnalysisResult analyze(const ImageBuffer& buf, const AnalysisConfig& cfg = {}) {
    cfg.validate();
    const auto thr = detail::ClassifyThresholds::from(cfg);
    switch (cfg.strategy) {
    case SamplingStrategy::FullScan:
        return detail::analyze_full_scan(buf, thr);
    case SamplingStrategy::Background:
        return analyze_background(buf, cfg);
    case SamplingStrategy::Sampled:
        break;
    }
    return detail::analyze_sampled(buf, cfg.target_samples, thr);
}

} // namespace nocturne
