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
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nocturne/analysis.hpp"
#include "nocturne/error.hpp"
#include "nocturne/image.hpp"
#include "nocturne/transform.hpp"

namespace nocturne {

/// One z-ordered drawing surface. A layer owns the most recently submitted
/// buffer, a latch flag marking fresh content, the cached analysis decision,
/// an optional per-layer transform (full inversion when unset), and the
/// history of buffer update times.
struct Layer {
    std::string id;
    int z = 0;
    std::optional<ImageBuffer> buffer;
    bool latched = false;
    std::optional<Decision> cached_decision;
    std::optional<ColorMatrix> transform;
    std::vector<double> update_times_ms;
};

enum class EventKind { Submit, Invalidate, Compose };

/// One entry in a scene's time-ordered schedule. Submit events name a layer
/// and an image key; Compose events carry the simulated render duration.
struct SceneEvent {
    double t_ms = 0;
    EventKind kind = EventKind::Compose;
    std::string layer_id;
    std::string image_id;
    double duration_ms = 0;
};

/// A canvas, a set of layers, an image pool for submit events to draw from,
/// and the event schedule.
class Scene {
public:
    Scene(int canvas_width, int canvas_height)
        : width_(canvas_width), height_(canvas_height) {
        if (canvas_width < 1 || canvas_height < 1) {
            throw InputError("canvas dimensions must be positive");
        }
    }

    int width() const { return width_; }
    int height() const { return height_; }

    Layer& add_layer(std::string id, int z) {
        if (find(id) != nullptr) {
            throw InputError("duplicate layer id '" + id + "'");
        }
        layers_.push_back(Layer{std::move(id), z, {}, false, {}, {}, {}});
        return layers_.back();
    }

    Layer& layer(const std::string& id) {
        Layer* l = find(id);
        if (l == nullptr) {
            throw InputError("unknown layer id '" + id + "'");
        }
        return *l;
    }

    const Layer& layer(const std::string& id) const {
        return const_cast<Scene*>(this)->layer(id);
    }

    bool has_layer(const std::string& id) const {
        return const_cast<Scene*>(this)->find(id) != nullptr;
    }

    const std::vector<Layer>& layers() const { return layers_; }
    std::vector<Layer>& layers() { return layers_; }

    std::map<std::string, ImageBuffer> images;
    std::vector<SceneEvent> events;

private:
    Layer* find(const std::string& id) {
        for (Layer& l : layers_) {
            if (l.id == id) return &l;
        }
        return nullptr;
    }

    int width_;
    int height_;
    std::vector<Layer> layers_;
};

/// Replaces the layer's buffer by the submitted one, latches the layer, and
/// records the update time.
inline void submit_buffer(Scene& scene, const std::string& layer_id, ImageBuffer buf,
                          double t_ms) {
    Layer& l = scene.layer(layer_id);
    l.buffer = std::move(buf);
    l.latched = true;
    l.update_times_ms.push_back(t_ms);
}

/// Reacts to a producer invalidation. A latched layer has fresh content:
/// analyze it, cache the decision, clear the latch, and report the decision.
/// An unlatched layer is a no-op.
inline std::optional<Decision> handle_invalidate(Scene& scene, const std::string& layer_id,
                                                 const AnalysisConfig& cfg = {}) {
    Layer& l = scene.layer(layer_id);
    if (!l.latched) {
        return std::nullopt;
    }
    l.cached_decision = analyze(*l.buffer, cfg).decision;
    l.latched = false;
    return l.cached_decision;
}

namespace detail {

inline void blend_layer(ImageBuffer& canvas, const Layer& layer, bool transformed) {
    const ImageBuffer& src = *layer.buffer;
    const ColorMatrix matrix = layer.transform ? *layer.transform : inversion_matrix();
    const int w = std::min(canvas.width(), src.width());
    const int h = std::min(canvas.height(), src.height());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            Color s = src.pixel(x, y);
            if (transformed) {
                s = apply(matrix, s);
            }
            const Color d = canvas.pixel(x, y);
            const int a = s.a;
            const Color out{
                static_cast<std::uint8_t>((s.r * a + d.r * (255 - a) + 127) / 255),
                static_cast<std::uint8_t>((s.g * a + d.g * (255 - a) + 127) / 255),
                static_cast<std::uint8_t>((s.b * a + d.b * (255 - a) + 127) / 255),
                255};
            canvas.set_pixel(x, y, out);
        }
    }
}

/// Layers holding a buffer, in draw order: ascending z, ties broken by id.
inline std::vector<const Layer*> draw_order(const Scene& scene) {
    std::vector<const Layer*> order;
    for (const Layer& l : scene.layers()) {
        if (l.buffer) order.push_back(&l);
    }
    std::sort(order.begin(), order.end(), [](const Layer* a, const Layer* b) {
        return a->z != b->z ? a->z < b->z : a->id < b->id;
    });
    return order;
}

/// Composition with per-layer decision overrides (used by the scenario loop
/// to pin video layers). A layer is drawn through its transform only when
/// its effective decision is Transform; an absent decision draws untouched.
inline ImageBuffer compose_frame(const Scene& scene,
                                 const std::map<std::string, Decision>& overrides) {
    const auto order = draw_order(scene);
    if (order.empty()) {
        throw InputError("empty scene: no layer holds a buffer");
    }
    ImageBuffer canvas =
        ImageBuffer::filled(scene.width(), scene.height(), Color{0, 0, 0, 255});
    for (const Layer* l : order) {
        const auto it = overrides.find(l->id);
        const std::optional<Decision> effective =
            it != overrides.end() ? std::optional<Decision>(it->second) : l->cached_decision;
        blend_layer(canvas, *l, effective == Decision::Transform);
    }
    return canvas;
}

} // namespace detail

/// Draws every buffered layer in z-order (ties by id) with source-over
/// blending onto an opaque black canvas. Layers whose cached decision is
/// Transform are drawn through their transform; layers with no cached
/// decision yet, or Preserve, are drawn untouched.
inline ImageBuffer compose(const Scene& scene) {
    return detail::compose_frame(scene, {});
}

/// True when at least min_updates submission timestamps fall inside some
/// sliding window of window_ms. Frequently updated layers are presumed to
/// be playing video. Timestamps must be nondecreasing.
inline bool video_heuristic(std::span<const double> timestamps_ms, double window_ms,
                            int min_updates) {
    const int need = std::max(min_updates, 1);
    if (static_cast<std::size_t>(need) > timestamps_ms.size()) {
        return false;
    }
    for (std::size_t i = 0; i + need <= timestamps_ms.size(); ++i) {
        if (timestamps_ms[i + need - 1] - timestamps_ms[i] <= window_ms) {
            return true;
        }
    }
    return false;
}

struct FrameStats {
    std::int64_t frames = 0;
    double janky_fraction = 0;
    double p50 = 0;
    double p90 = 0;
    double p95 = 0;
    double p99 = 0;
};

/// Render-duration distribution: janky fraction (strictly slower than the
/// threshold) and nearest-rank percentiles.
inline FrameStats frame_stats(std::span<const double> durations_ms,
                              double jank_threshold_ms = 16.67) {
    if (durations_ms.empty()) {
        throw InputError("frame_stats needs at least one duration");
    }
    std::vector<double> sorted(durations_ms.begin(), durations_ms.end());
    std::sort(sorted.begin(), sorted.end());
    const std::int64_t n = static_cast<std::int64_t>(sorted.size());
    std::int64_t janky = 0;
    for (double d : sorted) {
        if (d > jank_threshold_ms) ++janky;
    }
    auto nearest_rank = [&](int pct) {
        const std::int64_t rank = std::max<std::int64_t>(1, (pct * n + 99) / 100);
        return sorted[static_cast<std::size_t>(rank - 1)];
    };
    FrameStats stats;
    stats.frames = n;
    stats.janky_fraction = static_cast<double>(janky) / static_cast<double>(n);
    stats.p50 = nearest_rank(50);
    stats.p90 = nearest_rank(90);
    stats.p95 = nearest_rank(95);
    stats.p99 = nearest_rank(99);
    return stats;
}

/// Per-layer count of visible transform flips between consecutive frames.
struct FlickerRecord {
    std::map<std::string, std::int64_t> flips_per_layer;
};

struct ScenarioOptions {
    /// Analyze at the first submit instead of waiting for an invalidation;
    /// removes the untransformed first-frame flash.
    bool analyze_on_create = false;
    /// Pin rapidly updating layers to Preserve while their update rate stays
    /// above min_updates per window.
    bool use_video_heuristic = false;
    double video_window_ms = 1000.0;
    int video_min_updates = 15;
    double jank_threshold_ms = 16.67;
};

struct ScenarioResult {
    std::vector<ImageBuffer> frames;
    FrameStats stats;
    FlickerRecord flicker;
};

/// Replays the scene's schedule: submits latch buffers, invalidations run
/// the analysis, compose events emit frames. Deterministic single-threaded
/// event loop; a composed frame sees exactly the decisions committed before
/// it started.
inline ScenarioResult run_scenario(Scene& scene, const AnalysisConfig& cfg = {},
                                   const ScenarioOptions& options = {}) {
    auto fail = [](std::size_t index, const std::string& why) -> void {
        throw InputError("event " + std::to_string(index) + ": " + why);
    };

    ScenarioResult result;
    for (const Layer& l : scene.layers()) {
        result.flicker.flips_per_layer[l.id] = 0;
    }

    std::vector<double> durations;
    std::map<std::string, bool> last_transformed;
    double prev_t = 0;

    for (std::size_t i = 0; i < scene.events.size(); ++i) {
        const SceneEvent& ev = scene.events[i];
        if (i > 0 && ev.t_ms < prev_t) {
            fail(i, "time " + std::to_string(ev.t_ms) + " decreases (previous " +
                        std::to_string(prev_t) + ")");
        }
        prev_t = ev.t_ms;

        switch (ev.kind) {
        case EventKind::Submit: {
            if (!scene.has_layer(ev.layer_id)) {
                fail(i, "submit to unknown layer '" + ev.layer_id + "'");
            }
            const auto img = scene.images.find(ev.image_id);
            if (img == scene.images.end()) {
                fail(i, "submit references unknown image '" + ev.image_id + "'");
            }
            const bool first = scene.layer(ev.layer_id).update_times_ms.empty();
            submit_buffer(scene, ev.layer_id, img->second, ev.t_ms);
            if (options.analyze_on_create && first) {
                Layer& l = scene.layer(ev.layer_id);
                l.cached_decision = analyze(*l.buffer, cfg).decision;
            }
            break;
        }
        case EventKind::Invalidate: {
            if (!scene.has_layer(ev.layer_id)) {
                fail(i, "invalidate of unknown layer '" + ev.layer_id + "'");
            }
            handle_invalidate(scene, ev.layer_id, cfg);
            break;
        }
        case EventKind::Compose: {
            std::map<std::string, Decision> overrides;
            if (options.use_video_heuristic) {
                for (const Layer& l : scene.layers()) {
                    // Only updates still inside the trailing window count, so
                    // a layer unpins once its submissions slow down.
                    const auto begin = std::lower_bound(l.update_times_ms.begin(),
                                                        l.update_times_ms.end(),
                                                        ev.t_ms - options.video_window_ms);
                    const std::span<const double> recent(
                        l.update_times_ms.data() + (begin - l.update_times_ms.begin()),
                        static_cast<std::size_t>(l.update_times_ms.end() - begin));
                    if (video_heuristic(recent, options.video_window_ms,
                                        options.video_min_updates)) {
                        overrides.emplace(l.id, Decision::Preserve);
                    }
                }
            }
            bool drawable = false;
            for (const Layer& l : scene.layers()) {
                if (l.buffer) drawable = true;
            }
            if (!drawable) {
                fail(i, "compose with no drawable layer");
            }
            result.frames.push_back(detail::compose_frame(scene, overrides));
            durations.push_back(ev.duration_ms);

            for (const Layer& l : scene.layers()) {
                if (!l.buffer) continue;
                const auto it = overrides.find(l.id);
                const std::optional<Decision> effective =
                    it != overrides.end() ? std::optional<Decision>(it->second)
                                          : l.cached_decision;
                const bool transformed = effective == Decision::Transform;
                const auto prev = last_transformed.find(l.id);
                if (prev != last_transformed.end() && prev->second != transformed) {
                    ++result.flicker.flips_per_layer[l.id];
                }
                last_transformed[l.id] = transformed;
            }
            break;
        }
        }
    }

    if (!durations.empty()) {
        result.stats = frame_stats(durations, options.jank_threshold_ms);
    }
    return result;
}

} // namespace nocturne
