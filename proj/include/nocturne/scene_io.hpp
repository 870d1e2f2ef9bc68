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

#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "nocturne/compositor.hpp"
#include "nocturne/error.hpp"
#include "nocturne/metrics.hpp"
#include "nocturne/png_io.hpp"

namespace nocturne {

/// Loads a scene description:
///
///   {
///     "canvas": {"width": W, "height": H},
///     "layers": [{"id": "...", "z": 0}, ...],
///     "events": [
///       {"t_ms": 0, "kind": "submit", "layer": "...", "image": "frame.png"},
///       {"t_ms": 1, "kind": "invalidate", "layer": "..."},
///       {"t_ms": 2, "kind": "compose", "duration_ms": 8.0}
///     ]
///   }
///
/// Image references are paths relative to the scene file and are loaded
/// eagerly into the scene's image pool. Validation failures name the
/// offending event index.
inline Scene load_scene(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open scene file '" + path + "'");
    }
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw InputError("scene '" + path + "': " + e.what());
    }

    try {
        Scene scene(doc.at("canvas").at("width").get<int>(),
                    doc.at("canvas").at("height").get<int>());
        for (const auto& l : doc.at("layers")) {
            scene.add_layer(l.at("id").get<std::string>(), l.at("z").get<int>());
        }

        const std::filesystem::path base = std::filesystem::path(path).parent_path();
        double prev_t = 0;
        std::size_t index = 0;
        for (const auto& e : doc.at("events")) {
            SceneEvent ev;
            ev.t_ms = e.at("t_ms").get<double>();
            if (index > 0 && ev.t_ms < prev_t) {
                throw InputError("event " + std::to_string(index) + ": time " +
                                 std::to_string(ev.t_ms) + " decreases");
            }
            prev_t = ev.t_ms;

            const std::string kind = e.at("kind").get<std::string>();
            if (kind == "submit") {
                ev.kind = EventKind::Submit;
                ev.layer_id = e.at("layer").get<std::string>();
                ev.image_id = e.at("image").get<std::string>();
                if (!scene.has_layer(ev.layer_id)) {
                    throw InputError("event " + std::to_string(index) +
                                     ": unknown layer '" + ev.layer_id + "'");
                }
                if (scene.images.find(ev.image_id) == scene.images.end()) {
                    scene.images.emplace(ev.image_id,
                                         load_image((base / ev.image_id).string()));
                }
            } else if (kind == "invalidate") {
                ev.kind = EventKind::Invalidate;
                ev.layer_id = e.at("layer").get<std::string>();
                if (!scene.has_layer(ev.layer_id)) {
                    throw InputError("event " + std::to_string(index) +
                                     ": unknown layer '" + ev.layer_id + "'");
                }
            } else if (kind == "compose") {
                ev.kind = EventKind::Compose;
                ev.duration_ms = e.value("duration_ms", 0.0);
            } else {
                throw InputError("event " + std::to_string(index) +
                                 ": unknown kind '" + kind + "'");
            }
            scene.events.push_back(std::move(ev));
            ++index;
        }
        return scene;
    } catch (const nlohmann::json::exception& e) {
        throw InputError("scene '" + path + "': " + e.what());
    }
}

/// Scenario statistics as a JSON document (numbers with six decimals).
inline std::string stats_json(const FrameStats& stats, const FlickerRecord& flicker) {
    std::string out;
    out += "{\n";
    out += "  \"frames\": " + std::to_string(stats.frames) + ",\n";
    out += "  \"janky_fraction\": " + detail::fixed6(stats.janky_fraction) + ",\n";
    out += "  \"p50\": " + detail::fixed6(stats.p50) + ",\n";
    out += "  \"p90\": " + detail::fixed6(stats.p90) + ",\n";
    out += "  \"p95\": " + detail::fixed6(stats.p95) + ",\n";
    out += "  \"p99\": " + detail::fixed6(stats.p99) + ",\n";
    out += "  \"flips_per_layer\": {";
    bool first = true;
    for (const auto& [id, flips] : flicker.flips_per_layer) {
        out += first ? "" : ", ";
        out += "\"" + id + "\": " + std::to_string(flips);
        first = false;
    }
    out += "}\n";
    out += "}\n";
    return out;
}

} // namespace nocturne
