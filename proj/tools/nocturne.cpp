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

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nocturne/nocturne.hpp"

namespace fs = std::filesystem;

namespace {

struct GlobalFlags {
    double bright_floor = 0.6;
    double dark_ceiling = 0.4;
    int samples = 2500;
    std::string strategy = "sampled";
    std::string scheme = "invert";

    nocturne::AnalysisConfig config() const {
        nocturne::AnalysisConfig cfg;
        cfg.bright_floor = bright_floor;
        cfg.dark_ceiling = dark_ceiling;
        cfg.target_samples = samples;
        if (strategy == "full") {
            cfg.strategy = nocturne::SamplingStrategy::FullScan;
        } else if (strategy == "background") {
            cfg.strategy = nocturne::SamplingStrategy::Background;
        } else {
            cfg.strategy = nocturne::SamplingStrategy::Sampled;
        }
        cfg.validate();
        return cfg;
    }

    nocturne::TransformScheme transform_scheme() const {
        return *nocturne::parse_scheme(scheme);
    }
};

void add_global_flags(CLI::App& app, GlobalFlags& flags) {
    app.add_option("--bright-floor", flags.bright_floor,
                   "Bright-pixel luminance floor, fraction of full white");
    app.add_option("--dark-ceiling", flags.dark_ceiling,
                   "Dark-pixel luminance ceiling, fraction of full white");
    app.add_option("--samples", flags.samples, "Target sample count per analysis");
    app.add_option("--strategy", flags.strategy, "Sampling strategy")
        ->check(CLI::IsMember({"sampled", "full", "background"}));
}

void add_scheme_flag(CLI::App& cmd, GlobalFlags& flags) {
    cmd.add_option("--scheme", flags.scheme, "Transform scheme")
        ->check(CLI::IsMember({"default", "invert", "redshift", "invert-redshift"}));
}

int cmd_analyze(const std::string& image_path, const GlobalFlags& flags) {
    const nocturne::AnalysisConfig cfg = flags.config();
    const nocturne::ImageBuffer buf = nocturne::load_image(image_path);
    const nocturne::AnalysisResult res = nocturne::analyze(buf, cfg);

    nlohmann::ordered_json j;
    j["decision"] = nocturne::to_string(res.decision);
    j["bright"] = res.stats.bright_count;
    j["dark"] = res.stats.dark_count;
    j["mid"] = res.stats.mid_count;
    j["samples"] = res.stats.sample_count;
    j["max_r"] = res.stats.max_r;
    j["max_g"] = res.stats.max_g;
    j["max_b"] = res.stats.max_b;
    std::cout << j.dump(2) << '\n';
    return 0;
}

int cmd_darken(const std::string& input, const std::string& output, bool force,
               const GlobalFlags& flags) {
    const nocturne::AnalysisConfig cfg = flags.config();
    const nocturne::TransformScheme scheme = flags.transform_scheme();
    const nocturne::ImageBuffer buf = nocturne::load_image(input);

    nocturne::ImageBuffer out = buf;
    switch (scheme) {
    case nocturne::TransformScheme::Default:
        break;
    case nocturne::TransformScheme::Redshift:
        out = nocturne::apply(buf, nocturne::redshift_matrix());
        break;
    case nocturne::TransformScheme::Invert:
    case nocturne::TransformScheme::InvertRedshift: {
        const bool invert =
            force ||
            nocturne::analyze(buf, cfg).decision == nocturne::Decision::Transform;
        if (invert) {
            out = nocturne::apply(buf, nocturne::inversion_matrix());
        }
        if (scheme == nocturne::TransformScheme::InvertRedshift) {
            out = nocturne::apply(out, nocturne::redshift_matrix());
        }
        break;
    }
    }
    nocturne::save_image(out, output);
    return 0;
}

int cmd_apl(const std::string& image_path, const GlobalFlags& flags) {
    const nocturne::AnalysisConfig cfg = flags.config();
    const nocturne::ImageBuffer buf = nocturne::load_image(image_path);
    std::printf("%.6f\n", nocturne::scheme_apl(buf, flags.transform_scheme(), cfg));
    return 0;
}

int cmd_corpus(const std::string& dir, const std::string& csv_path,
               const std::string& summary_path, const GlobalFlags& flags) {
    const nocturne::AnalysisConfig cfg = flags.config();
    if (!fs::is_directory(dir)) {
        throw nocturne::InputError("'" + dir + "' is not a directory");
    }

    std::vector<fs::path> candidates;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        std::string ext = entry.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        if (ext == ".png") candidates.push_back(entry.path());
    }
    std::sort(candidates.begin(), candidates.end());

    std::vector<std::pair<std::string, nocturne::ImageBuffer>> images;
    for (const fs::path& p : candidates) {
        try {
            images.emplace_back(p.filename().string(), nocturne::load_image(p.string()));
        } catch (const nocturne::Error& e) {
            std::cerr << "warning: skipping " << p << ": " << e.what() << '\n';
        }
    }
    if (images.empty()) {
        throw nocturne::InputError("no readable images in '" + dir + "'");
    }

    const auto [reports, summary] = nocturne::corpus_report(images, cfg);

    std::ofstream csv(csv_path);
    if (!csv) {
        throw nocturne::InputError("cannot write '" + csv_path + "'");
    }
    nocturne::write_corpus_csv(csv, reports);

    const std::string json = nocturne::summary_json(summary);
    std::ofstream sum(summary_path);
    if (!sum) {
        throw nocturne::InputError("cannot write '" + summary_path + "'");
    }
    sum << json;
    std::cout << json;
    return 0;
}

int cmd_simulate(const std::string& scene_path, const nocturne::ScenarioOptions& options,
                 const std::string& frames_dir, const std::string& stats_path,
                 const GlobalFlags& flags) {
    const nocturne::AnalysisConfig cfg = flags.config();
    nocturne::Scene scene = nocturne::load_scene(scene_path);
    const nocturne::ScenarioResult result = nocturne::run_scenario(scene, cfg, options);

    const std::string json = nocturne::stats_json(result.stats, result.flicker);
    if (!stats_path.empty()) {
        std::ofstream out(stats_path);
        if (!out) {
            throw nocturne::InputError("cannot write '" + stats_path + "'");
        }
        out << json;
    }
    if (!frames_dir.empty()) {
        fs::create_directories(frames_dir);
        for (std::size_t i = 0; i < result.frames.size(); ++i) {
            char name[32];
            std::snprintf(name, sizeof(name), "frame_%04zu.png", i);
            nocturne::save_image(result.frames[i], (fs::path(frames_dir) / name).string());
        }
    }
    std::cout << json;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Content-aware display darkening toolkit"};
    app.require_subcommand(1);

    GlobalFlags flags;
    add_global_flags(app, flags);

    std::string image_path;
    std::string input_path;
    std::string output_path;
    bool force = false;
    std::string corpus_dir;
    std::string csv_path = "corpus_report.csv";
    std::string summary_path = "corpus_summary.json";
    std::string scene_path;
    std::string frames_dir;
    std::string stats_path;
    nocturne::ScenarioOptions options;

    CLI::App* analyze = app.add_subcommand(
        "analyze", "Classify an image as bright- or dark-dominant");
    analyze->add_option("image", image_path, "Input PNG")->required();
    analyze->fallthrough();

    CLI::App* darken = app.add_subcommand("darken", "Apply a darkening scheme");
    darken->add_option("input", input_path, "Input PNG")->required();
    darken->add_option("output", output_path, "Output PNG")->required();
    darken->add_flag("--force", force, "Apply the transform unconditionally");
    add_scheme_flag(*darken, flags);
    darken->fallthrough();

    CLI::App* apl = app.add_subcommand("apl", "Print the average picture level");
    apl->add_option("image", image_path, "Input PNG")->required();
    add_scheme_flag(*apl, flags);
    apl->fallthrough();

    CLI::App* corpus = app.add_subcommand(
        "corpus", "Report APL under every scheme for a directory of images");
    corpus->add_option("directory", corpus_dir, "Directory of PNG images")->required();
    corpus->add_option("--csv", csv_path, "Per-image CSV output path");
    corpus->add_option("--summary", summary_path, "Summary JSON output path");
    corpus->fallthrough();

    CLI::App* simulate = app.add_subcommand(
        "simulate", "Replay a layered scene through the compositor model");
    simulate->add_option("scene", scene_path, "Scene JSON file")->required();
    simulate->add_flag("--analyze-on-create", options.analyze_on_create,
                       "Run content analysis at a layer's first submit");
    simulate->add_flag("--video-heuristic", options.use_video_heuristic,
                       "Pin rapidly updating layers to PRESERVE");
    simulate->add_option("--video-window-ms", options.video_window_ms,
                         "Video heuristic window length");
    simulate->add_option("--video-min-updates", options.video_min_updates,
                         "Updates per window that mark a layer as video");
    simulate->add_option("--jank-threshold-ms", options.jank_threshold_ms,
                         "Render duration above which a frame is janky");
    simulate->add_option("--emit-frames", frames_dir, "Write composed frames here");
    simulate->add_option("--stats", stats_path, "Also write the stats JSON here");
    simulate->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (analyze->parsed()) return cmd_analyze(image_path, flags);
        if (darken->parsed()) return cmd_darken(input_path, output_path, force, flags);
        if (apl->parsed()) return cmd_apl(image_path, flags);
        if (corpus->parsed()) return cmd_corpus(corpus_dir, csv_path, summary_path, flags);
        if (simulate->parsed()) {
            return cmd_simulate(scene_path, options, frames_dir, stats_path, flags);
        }
    } catch (const nocturne::Error& e) {
        std::cerr << "nocturne: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
