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
#include <array>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "nocturne/analysis.hpp"
#include "nocturne/error.hpp"
#include "nocturne/image.hpp"
#include "nocturne/transform.hpp"

namespace nocturne {

/// Average picture level: mean pixel luminance normalized to [0,1], where 0
/// is full black and 1 full white. Every pixel is counted (no sampling).
inline double apl(const ImageBuffer& buf) {
    const ChannelLayout lay = channel_layout(buf.format());
    const auto bytes = buf.bytes();
    std::uint64_t sum = 0;
    for (std::size_t off = 0; off < bytes.size(); off += 4) {
        sum += static_cast<std::uint64_t>(3u * bytes[off + lay.r] +
                                          4u * bytes[off + lay.g] +
                                          bytes[off + lay.b]);
    }
    return static_cast<double>(sum) /
           (static_cast<double>(buf.pixel_count()) * kFullWhite);
}

/// APL of the buffer as a scheme would display it. Inversion is gated by
/// content analysis (dark-dominant content is preserved); red-shift is
/// unconditional. The combined scheme red-shifts the inversion result.
inline double scheme_apl(const ImageBuffer& buf, TransformScheme scheme,
                         const AnalysisConfig& cfg = {}) {
    switch (scheme) {
    case TransformScheme::Default:
        return apl(buf);
    case TransformScheme::Redshift:
        return apl(apply(buf, redshift_matrix()));
    case TransformScheme::Invert:
    case TransformScheme::InvertRedshift:
        break;
    }
    const bool inverted = analyze(buf, cfg).decision == Decision::Transform;
    ImageBuffer shown = inverted ? apply(buf, inversion_matrix()) : buf;
    if (scheme == TransformScheme::InvertRedshift) {
        shown = apply(shown, redshift_matrix());
    }
    return apl(shown);
}

/// APL reduction relative to the untransformed image. Positive means the
/// scheme darkened; negative means it brightened.
inline double darkening(double apl_default, double apl_scheme) {
    if (apl_default <= 0.0) {
        throw InputError("darkening undefined: default APL is 0");
    }
    return (apl_default - apl_scheme) / apl_default;
}

/// Per-image APL under each scheme. Reduction fields are absent when the
/// default APL is 0 (all-black input has nothing to reduce).
struct AplReport {
    std::string id;
    double apl_default = 0;
    double apl_smartnight = 0;
    double apl_redshift = 0;
    double apl_combined = 0;
    Decision decision = Decision::Preserve;
    std::optional<double> red_smartnight;
    std::optional<double> red_redshift;
    std::optional<double> red_combined;

    double apl_of(TransformScheme s) const {
        switch (s) {
        case TransformScheme::Default: return apl_default;
        case TransformScheme::Invert: return apl_smartnight;
        case TransformScheme::Redshift: return apl_redshift;
        case TransformScheme::InvertRedshift: return apl_combined;
        }
        return apl_default;
    }
};

struct CorpusSummary {
    std::int64_t image_count = 0;
    double mean_apl_default = 0;
    double mean_apl_smartnight = 0;
    double mean_apl_redshift = 0;
    double mean_apl_combined = 0;
    std::optional<double> mean_red_smartnight;
    std::optional<double> mean_red_redshift;
    std::optional<double> mean_red_combined;
    /// wins[a][b]: images where scheme a had strictly lower APL than scheme b.
    std::array<std::array<std::int64_t, 4>, 4> wins{};

    std::int64_t win_count(TransformScheme a, TransformScheme b) const {
        return wins[static_cast<int>(a)][static_cast<int>(b)];
    }
    std::int64_t tie_count(TransformScheme a, TransformScheme b) const {
        return image_count - win_count(a, b) - win_count(b, a);
    }
};

/// Builds the report for one image.
inline AplReport image_report(std::string id, const ImageBuffer& buf,
                              const AnalysisConfig& cfg = {}) {
    AplReport rep;
    rep.id = std::move(id);
    rep.decision = analyze(buf, cfg).decision;
    rep.apl_default = apl(buf);
    const ImageBuffer shown = rep.decision == Decision::Transform
                                  ? apply(buf, inversion_matrix())
                                  : buf;
    rep.apl_smartnight = apl(shown);
    rep.apl_redshift = apl(apply(buf, redshift_matrix()));
    rep.apl_combined = apl(apply(shown, redshift_matrix()));
    if (rep.apl_default > 0.0) {
        rep.red_smartnight = darkening(rep.apl_default, rep.apl_smartnight);
        rep.red_redshift = darkening(rep.apl_default, rep.apl_redshift);
        rep.red_combined = darkening(rep.apl_default, rep.apl_combined);
    }
    return rep;
}

/// Reports every image and aggregates corpus-level means and pairwise win
/// counts. Output rows are ordered by identifier.
inline std::pair<std::vector<AplReport>, CorpusSummary>
corpus_report(const std::vector<std::pair<std::string, ImageBuffer>>& images,
              const AnalysisConfig& cfg = {}) {
    if (images.empty()) {
        throw InputError("corpus is empty");
    }
    std::vector<AplReport> reports;
    reports.reserve(images.size());
    for (const auto& [id, buf] : images) {
        reports.push_back(image_report(id, buf, cfg));
    }
    std::sort(reports.begin(), reports.end(),
              [](const AplReport& a, const AplReport& b) { return a.id < b.id; });

    CorpusSummary summary;
    summary.image_count = static_cast<std::int64_t>(reports.size());
    double red_sum[3] = {0, 0, 0};
    std::int64_t red_n = 0;
    for (const AplReport& r : reports) {
        summary.mean_apl_default += r.apl_default;
        summary.mean_apl_smartnight += r.apl_smartnight;
        summary.mean_apl_redshift += r.apl_redshift;
        summary.mean_apl_combined += r.apl_combined;
        if (r.red_smartnight) {
            red_sum[0] += *r.red_smartnight;
            red_sum[1] += *r.red_redshift;
            red_sum[2] += *r.red_combined;
            ++red_n;
        }
        for (TransformScheme a : kAllSchemes) {
            for (TransformScheme b : kAllSchemes) {
                if (r.apl_of(a) < r.apl_of(b)) {
                    ++summary.wins[static_cast<int>(a)][static_cast<int>(b)];
                }
            }
        }
    }
    const double n = static_cast<double>(summary.image_count);
    summary.mean_apl_default /= n;
    summary.mean_apl_smartnight /= n;
    summary.mean_apl_redshift /= n;
    summary.mean_apl_combined /= n;
    if (red_n > 0) {
        summary.mean_red_smartnight = red_sum[0] / static_cast<double>(red_n);
        summary.mean_red_redshift = red_sum[1] / static_cast<double>(red_n);
        summary.mean_red_combined = red_sum[2] / static_cast<double>(red_n);
    }
    return {std::move(reports), summary};
}

namespace detail {

inline std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

inline std::string fixed6_or(const std::optional<double>& v, const char* fallback) {
    return v ? fixed6(*v) : std::string(fallback);
}

} // namespace detail

inline constexpr const char* kCorpusCsvHeader =
    "id,apl_default,apl_smartnight,apl_redshift,apl_combined,decision,"
    "red_smartnight,red_redshift,red_combined";

/// Writes one CSV row per report. Undefined reductions serialize as "na".
inline void write_corpus_csv(std::ostream& os, const std::vector<AplReport>& reports) {
    os << kCorpusCsvHeader << '\n';
    for (const AplReport& r : reports) {
        os << r.id << ',' << detail::fixed6(r.apl_default) << ','
           << detail::fixed6(r.apl_smartnight) << ',' << detail::fixed6(r.apl_redshift)
           << ',' << detail::fixed6(r.apl_combined) << ',' << to_string(r.decision)
           << ',' << detail::fixed6_or(r.red_smartnight, "na") << ','
           << detail::fixed6_or(r.red_redshift, "na") << ','
           << detail::fixed6_or(r.red_combined, "na") << '\n';
    }
}

/// Summary as a JSON document. Hand-formatted so every number carries six
/// decimal places; undefined means serialize as null.
inline std::string summary_json(const CorpusSummary& s) {
    auto opt = [](const std::optional<double>& v) {
        return v ? detail::fixed6(*v) : std::string("null");
    };
    std::string out;
    out += "{\n";
    out += "  \"images\": " + std::to_string(s.image_count) + ",\n";
    out += "  \"mean_apl\": {\n";
    out += "    \"default\": " + detail::fixed6(s.mean_apl_default) + ",\n";
    out += "    \"smartnight\": " + detail::fixed6(s.mean_apl_smartnight) + ",\n";
    out += "    \"redshift\": " + detail::fixed6(s.mean_apl_redshift) + ",\n";
    out += "    \"combined\": " + detail::fixed6(s.mean_apl_combined) + "\n";
    out += "  },\n";
    out += "  \"mean_reduction\": {\n";
    out += "    \"smartnight\": " + opt(s.mean_red_smartnight) + ",\n";
    out += "    \"redshift\": " + opt(s.mean_red_redshift) + ",\n";
    out += "    \"combined\": " + opt(s.mean_red_combined) + "\n";
    out += "  },\n";
    out += "  \"wins\": {\n";
    const struct {
        const char* name;
        TransformScheme a;
        TransformScheme b;
    } pairs[] = {
        {"smartnight_vs_default", TransformScheme::Invert, TransformScheme::Default},
        {"redshift_vs_default", TransformScheme::Redshift, TransformScheme::Default},
        {"combined_vs_default", TransformScheme::InvertRedshift, TransformScheme::Default},
        {"redshift_vs_smartnight", TransformScheme::Redshift, TransformScheme::Invert},
        {"combined_vs_smartnight", TransformScheme::InvertRedshift, TransformScheme::Invert},
        {"combined_vs_redshift", TransformScheme::InvertRedshift, TransformScheme::Redshift},
    };
    for (std::size_t i = 0; i < std::size(pairs); ++i) {
        const auto& p = pairs[i];
        out += std::string("    \"") + p.name + "\": {\"wins\": " +
               std::to_string(s.win_count(p.a, p.b)) + ", \"losses\": " +
               std::to_string(s.win_count(p.b, p.a)) + ", \"ties\": " +
               std::to_string(s.tie_count(p.a, p.b)) + "}";
        out += i + 1 < std::size(pairs) ? ",\n" : "\n";
    }
    out += "  }\n";
    out += "}\n";
    return out;
}

} // namespace nocturne
