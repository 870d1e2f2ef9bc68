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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <sstream>
#include <string>

#include <json.hpp>

#include "nocturne/metrics.hpp"
#include "support/synthetic.hpp"

using namespace nocturne;

namespace {

ImageBuffer inverted_copy(const ImageBuffer& buf) {
    ImageBuffer out = buf;
    for (int y = 0; y < buf.height(); ++y) {
        for (int x = 0; x < buf.width(); ++x) {
            out.set_pixel(x, y, invert(buf.pixel(x, y)));
        }
    }
    return out;
}

} // namespace

TEST_CASE("apl of flat and split buffers") {
    CHECK(apl(ImageBuffer::filled(10, 10, Color{255, 255, 255, 255})) == 1.0);
    CHECK(apl(ImageBuffer::filled(10, 10, Color{0, 0, 0, 255})) == 0.0);

    ImageBuffer split(2, 1);
    split.set_pixel(0, 0, Color{255, 255, 255, 255});
    split.set_pixel(1, 0, Color{0, 0, 0, 255});
    CHECK(apl(split) == 0.5);
}

TEST_CASE("scheme apl gates inversion on the analysis decision") {
    const auto white = ImageBuffer::filled(50, 50, Color{255, 255, 255, 255});
    const auto black = ImageBuffer::filled(50, 50, Color{0, 0, 0, 255});

    CHECK(scheme_apl(white, TransformScheme::Default) == 1.0);
    CHECK(scheme_apl(white, TransformScheme::Invert) == 0.0);
    CHECK(scheme_apl(black, TransformScheme::Invert) == 0.0); // preserved, not brightened
    CHECK(scheme_apl(white, TransformScheme::Redshift) == Catch::Approx(765.0 / 2040.0));
    CHECK(scheme_apl(white, TransformScheme::InvertRedshift) == 0.0);
    CHECK(scheme_apl(black, TransformScheme::InvertRedshift) == 0.0);
}

TEST_CASE("darkening is the relative apl reduction") {
    CHECK(darkening(0.75, 0.21) == Catch::Approx(0.72));
    CHECK(darkening(0.5, 0.5) == 0.0);
    CHECK(darkening(0.4, 0.6) == Catch::Approx(-0.5));
    CHECK_THROWS_AS(darkening(0.0, 0.1), InputError);
}

TEST_CASE("apl complement under byte inversion") {
    std::mt19937 rng(8);
    for (int trial = 0; trial < 200; ++trial) {
        const ImageBuffer buf = testgen::random_sized_buffer(rng);
        CHECK(std::abs(apl(inverted_copy(buf)) - (1.0 - apl(buf))) <= 1e-9);
    }
}

TEST_CASE("red-shift never raises apl") {
    std::mt19937 rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        const ImageBuffer buf = testgen::random_sized_buffer(rng);
        CHECK(apl(apply(buf, redshift_matrix())) <= apl(buf) + 1e-12);
    }
}

TEST_CASE("gated inversion reduces apl exactly when content is bright-dominant above 0.5") {
    // bright-dominant but APL below one half: inversion brightens
    ImageBuffer dim(500, 1);
    for (int x = 0; x < 500; ++x) {
        if (x < 150) {
            dim.set_pixel(x, 0, Color{255, 255, 255, 255});
        } else if (x < 275) {
            dim.set_pixel(x, 0, Color{0, 0, 0, 255});
        } else {
            dim.set_pixel(x, 0, Color{106, 106, 106, 255}); // mid band
        }
    }
    AnalysisConfig full;
    full.strategy = SamplingStrategy::FullScan;
    REQUIRE(analyze(dim, full).decision == Decision::Transform);
    REQUIRE(apl(dim) < 0.5);
    CHECK(scheme_apl(dim, TransformScheme::Invert, full) > apl(dim));

    const auto white = ImageBuffer::filled(20, 20, Color{255, 255, 255, 255});
    CHECK(scheme_apl(white, TransformScheme::Invert) < apl(white));
}

TEST_CASE("combined apl beats plain red-shift when the red mean is high") {
    std::mt19937 rng(14);
    AnalysisConfig full;
    full.strategy = SamplingStrategy::FullScan;
    for (int trial = 0; trial < 30; ++trial) {
        // white or light gray pixels: bright-dominant, mean red >= 200
        ImageBuffer buf(20, 20);
        for (int y = 0; y < 20; ++y) {
            for (int x = 0; x < 20; ++x) {
                buf.set_pixel(x, y, rng() % 2 == 0 ? Color{255, 255, 255, 255}
                                                   : Color{200, 200, 200, 255});
            }
        }
        REQUIRE(analyze(buf, full).decision == Decision::Transform);
        CHECK(scheme_apl(buf, TransformScheme::InvertRedshift, full) <=
              scheme_apl(buf, TransformScheme::Redshift, full) + 1e-12);
    }
}

TEST_CASE("corpus report on a white and a black image") {
    std::vector<std::pair<std::string, ImageBuffer>> corpus;
    corpus.emplace_back("white.png", ImageBuffer::filled(40, 40, Color{255, 255, 255, 255}));
    corpus.emplace_back("black.png", ImageBuffer::filled(40, 40, Color{0, 0, 0, 255}));

    const auto [reports, summary] = corpus_report(corpus);
    REQUIRE(reports.size() == 2);
    // ordered by identifier
    CHECK(reports[0].id == "black.png");
    CHECK(reports[1].id == "white.png");

    const AplReport& black = reports[0];
    CHECK(black.apl_default == 0.0);
    CHECK(black.decision == Decision::Preserve);
    CHECK(!black.red_smartnight.has_value());

    const AplReport& white = reports[1];
    CHECK(white.apl_default == 1.0);
    CHECK(white.apl_smartnight == 0.0);
    CHECK(white.apl_redshift == Catch::Approx(0.375));
    CHECK(white.apl_combined == 0.0);
    CHECK(white.decision == Decision::Transform);
    CHECK(*white.red_smartnight == Catch::Approx(1.0));

    CHECK(summary.image_count == 2);
    CHECK(summary.mean_apl_default == Catch::Approx(0.5));
    // combined wins on the white image, ties on the black one
    CHECK(summary.win_count(TransformScheme::InvertRedshift, TransformScheme::Redshift) == 1);
    CHECK(summary.win_count(TransformScheme::Redshift, TransformScheme::InvertRedshift) == 0);
    CHECK(summary.tie_count(TransformScheme::InvertRedshift, TransformScheme::Redshift) == 1);
    // only the white image defines reductions
    CHECK(*summary.mean_red_smartnight == Catch::Approx(1.0));
}

TEST_CASE("single white image yields full smartnight reduction") {
    std::vector<std::pair<std::string, ImageBuffer>> corpus;
    corpus.emplace_back("w.png", ImageBuffer::filled(8, 8, Color{255, 255, 255, 255}));
    const auto [reports, summary] = corpus_report(corpus);
    CHECK(*summary.mean_red_smartnight == Catch::Approx(1.0));
}

TEST_CASE("empty corpus is an input error") {
    CHECK_THROWS_AS(corpus_report({}), InputError);
}

TEST_CASE("csv output carries the exact header and six-decimal cells") {
    std::vector<std::pair<std::string, ImageBuffer>> corpus;
    corpus.emplace_back("white.png", ImageBuffer::filled(4, 4, Color{255, 255, 255, 255}));
    corpus.emplace_back("black.png", ImageBuffer::filled(4, 4, Color{0, 0, 0, 255}));
    const auto [reports, summary] = corpus_report(corpus);

    std::ostringstream os;
    write_corpus_csv(os, reports);
    std::istringstream lines(os.str());
    std::string header;
    std::string black_row;
    std::string white_row;
    std::string extra;
    REQUIRE(std::getline(lines, header));
    REQUIRE(std::getline(lines, black_row));
    REQUIRE(std::getline(lines, white_row));
    CHECK(!std::getline(lines, extra));

    CHECK(header ==
          "id,apl_default,apl_smartnight,apl_redshift,apl_combined,decision,"
          "red_smartnight,red_redshift,red_combined");
    CHECK(black_row ==
          "black.png,0.000000,0.000000,0.000000,0.000000,PRESERVE,na,na,na");
    CHECK(white_row ==
          "white.png,1.000000,0.000000,0.375000,0.000000,TRANSFORM,1.000000,0.625000,1.000000");
}

TEST_CASE("summary json parses and carries the aggregates") {
    std::vector<std::pair<std::string, ImageBuffer>> corpus;
    corpus.emplace_back("white.png", ImageBuffer::filled(4, 4, Color{255, 255, 255, 255}));
    corpus.emplace_back("black.png", ImageBuffer::filled(4, 4, Color{0, 0, 0, 255}));
    const auto [reports, summary] = corpus_report(corpus);

    const auto j = nlohmann::json::parse(summary_json(summary));
    CHECK(j.at("images") == 2);
    CHECK(j.at("mean_apl").at("default").get<double>() == Catch::Approx(0.5));
    CHECK(j.at("mean_reduction").at("smartnight").get<double>() == Catch::Approx(1.0));
    CHECK(j.at("wins").at("combined_vs_redshift").at("wins") == 1);
    CHECK(j.at("wins").at("combined_vs_redshift").at("ties") == 1);
    CHECK(j.at("wins").at("combined_vs_redshift").at("losses") == 0);
}

TEST_CASE("summary json serializes undefined reductions as null") {
    std::vector<std::pair<std::string, ImageBuffer>> corpus;
    corpus.emplace_back("black.png", ImageBuffer::filled(4, 4, Color{0, 0, 0, 255}));
    const auto [reports, summary] = corpus_report(corpus);
    const auto j = nlohmann::json::parse(summary_json(summary));
    CHECK(j.at("mean_reduction").at("smartnight").is_null());
}

TEST_CASE("reduction columns are recomputable from the apl columns") {
    const auto corpus = testgen::screenshot_corpus(6);
    const auto [reports, summary] = corpus_report(corpus);
    for (const AplReport& r : reports) {
        REQUIRE(r.apl_default > 0.0);
        CHECK(*r.red_smartnight ==
              Catch::Approx(darkening(r.apl_default, r.apl_smartnight)).margin(1e-15));
        CHECK(*r.red_redshift ==
              Catch::Approx(darkening(r.apl_default, r.apl_redshift)).margin(1e-15));
        CHECK(*r.red_combined ==
              Catch::Approx(darkening(r.apl_default, r.apl_combined)).margin(1e-15));
        CHECK(r.apl_default >= 0.0);
        CHECK(r.apl_default <= 1.0);
        CHECK(r.apl_smartnight >= 0.0);
        CHECK(r.apl_smartnight <= 1.0);
        CHECK(r.apl_redshift >= 0.0);
        CHECK(r.apl_redshift <= 1.0);
        CHECK(r.apl_combined >= 0.0);
        CHECK(r.apl_combined <= 1.0);
    }
}

TEST_CASE("pairwise wins plus ties account for every image") {
    const auto corpus = testgen::screenshot_corpus(8);
    const auto [reports, summary] = corpus_report(corpus);
    for (TransformScheme a : kAllSchemes) {
        for (TransformScheme b : kAllSchemes) {
            if (a == b) continue;
            CHECK(summary.win_count(a, b) + summary.win_count(b, a) +
                      summary.tie_count(a, b) ==
                  summary.image_count);
        }
    }
}
