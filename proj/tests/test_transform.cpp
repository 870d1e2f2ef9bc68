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

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "nocturne/transform.hpp"
#include "support/synthetic.hpp"

using namespace nocturne;

namespace {

// Unquantized affine reference used as the algebra oracle.
void matvec(const ColorMatrix& m, const double in[3], double out[3]) {
    for (int row = 0; row < 3; ++row) {
        out[row] = m.linear[row * 3 + 0] * in[0] + m.linear[row * 3 + 1] * in[1] +
                   m.linear[row * 3 + 2] * in[2] + m.offset[row];
    }
}

ColorMatrix random_matrix(std::mt19937& rng, double coeff_range, double offset_range) {
    auto draw = [&](double r) { return (static_cast<int>(rng() % 2001) - 1000) / 1000.0 * r; };
    ColorMatrix m;
    for (auto& v : m.linear) v = draw(coeff_range);
    for (auto& v : m.offset) v = draw(offset_range);
    return m;
}

Color random_color(std::mt19937& rng) {
    return Color{static_cast<std::uint8_t>(rng() % 256),
                 static_cast<std::uint8_t>(rng() % 256),
                 static_cast<std::uint8_t>(rng() % 256),
                 static_cast<std::uint8_t>(rng() % 256)};
}

} // namespace

TEST_CASE("inversion maps every channel to its complement") {
    const ColorMatrix inv = inversion_matrix();
    CHECK(apply(inv, Color{255, 255, 255, 255}) == Color{0, 0, 0, 255});
    CHECK(apply(inv, Color{0, 0, 0, 255}) == Color{255, 255, 255, 255});
    CHECK(apply(inv, Color{100, 150, 200, 255}) == Color{155, 105, 55, 255});
}

TEST_CASE("red-shift keeps red and zeroes green and blue") {
    const ColorMatrix red = redshift_matrix();
    CHECK(apply(red, Color{255, 255, 255, 255}) == Color{255, 0, 0, 255});
    CHECK(apply(red, Color{0, 200, 200, 255}) == Color{0, 0, 0, 255});
    CHECK(apply(red, Color{80, 1, 2, 255}) == Color{80, 0, 0, 255});
}

TEST_CASE("composing inversion with itself yields the identity") {
    const ColorMatrix twice = compose(inversion_matrix(), inversion_matrix());
    const ColorMatrix id = ColorMatrix::identity();
    for (int i = 0; i < 9; ++i) {
        CHECK(twice.linear[i] == Catch::Approx(id.linear[i]).margin(1e-12));
    }
    for (int i = 0; i < 3; ++i) {
        CHECK(twice.offset[i] == Catch::Approx(0.0).margin(1e-12));
    }
}

TEST_CASE("red-shift after inversion") {
    const ColorMatrix combined = compose(redshift_matrix(), inversion_matrix());
    CHECK(apply(combined, Color{255, 255, 255, 255}) == Color{0, 0, 0, 255});
    CHECK(apply(combined, Color{55, 0, 0, 255}) == Color{200, 0, 0, 255});

    // composed application equals sequential application for exact schemes
    std::mt19937 rng(3);
    for (int i = 0; i < 200; ++i) {
        const Color c = random_color(rng);
        CHECK(apply(combined, c) == apply(redshift_matrix(), apply(inversion_matrix(), c)));
    }
}

TEST_CASE("composition matches sequential application in exact arithmetic") {
    std::mt19937 rng(9);
    for (int trial = 0; trial < 300; ++trial) {
        const ColorMatrix a = random_matrix(rng, 2.0, 1.0);
        const ColorMatrix b = random_matrix(rng, 2.0, 1.0);
        const ColorMatrix ba = compose(b, a);
        const double in[3] = {(rng() % 256) / 255.0, (rng() % 256) / 255.0,
                              (rng() % 256) / 255.0};
        double mid[3];
        double sequential[3];
        double composed[3];
        matvec(a, in, mid);
        matvec(b, mid, sequential);
        matvec(ba, in, composed);
        for (int i = 0; i < 3; ++i) {
            CHECK(composed[i] == Catch::Approx(sequential[i]).margin(1e-9));
        }
    }
}

TEST_CASE("composition is associative up to one channel step") {
    std::mt19937 rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        const ColorMatrix a = random_matrix(rng, 1.0, 0.5);
        const ColorMatrix b = random_matrix(rng, 1.0, 0.5);
        const ColorMatrix c = random_matrix(rng, 1.0, 0.5);
        const ColorMatrix left = compose(c, compose(b, a));
        const ColorMatrix right = compose(compose(c, b), a);
        const Color px = random_color(rng);
        const Color lp = apply(left, px);
        const Color rp = apply(right, px);
        CHECK(std::abs(int(lp.r) - int(rp.r)) <= 1);
        CHECK(std::abs(int(lp.g) - int(rp.g)) <= 1);
        CHECK(std::abs(int(lp.b) - int(rp.b)) <= 1);
    }
}

TEST_CASE("identity application is byte-exact") {
    std::mt19937 rng(15);
    for (PixelFormat fmt : {PixelFormat::RGBA_8888, PixelFormat::BGRA_8888,
                            PixelFormat::RGBX_8888}) {
        const ImageBuffer buf = testgen::random_buffer(rng, 9, 7, fmt);
        CHECK(apply(buf, ColorMatrix::identity()) == buf);
    }
}

TEST_CASE("inversion is an exact involution on buffers") {
    std::mt19937 rng(16);
    for (int trial = 0; trial < 60; ++trial) {
        const ImageBuffer buf = testgen::random_sized_buffer(rng);
        CHECK(apply(apply(buf, inversion_matrix()), inversion_matrix()) == buf);
    }
}

TEST_CASE("a gradient strip inverts to the reversed strip") {
    ImageBuffer strip(256, 1);
    for (int x = 0; x < 256; ++x) {
        const auto v = static_cast<std::uint8_t>(x);
        strip.set_pixel(x, 0, Color{v, v, v, 255});
    }
    const ImageBuffer inverted = apply(strip, inversion_matrix());
    for (int x = 0; x < 256; ++x) {
        const auto v = static_cast<std::uint8_t>(255 - x);
        CHECK(inverted.pixel(x, 0) == Color{v, v, v, 255});
    }
}

TEST_CASE("application preserves the fourth byte for every matrix") {
    std::mt19937 rng(18);
    for (int trial = 0; trial < 40; ++trial) {
        const ImageBuffer buf = testgen::random_sized_buffer(rng);
        const ColorMatrix m = random_matrix(rng, 10.0, 5.0);
        const ImageBuffer out = apply(buf, m);
        REQUIRE(out.bytes().size() == buf.bytes().size());
        for (std::size_t off = 3; off < buf.bytes().size(); off += 4) {
            CHECK(out.bytes()[off] == buf.bytes()[off]);
        }
    }
}

TEST_CASE("extreme matrices clamp to valid channel values") {
    std::mt19937 rng(19);
    for (int trial = 0; trial < 40; ++trial) {
        const ImageBuffer buf = testgen::random_sized_buffer(rng, 12);
        const ColorMatrix m = random_matrix(rng, 10.0, 5.0);
        const ImageBuffer out = apply(buf, m);
        for (int y = 0; y < buf.height(); ++y) {
            for (int x = 0; x < buf.width(); ++x) {
                // hand-rolled reference with explicit clamping
                const Color c = buf.pixel(x, y);
                const double in[3] = {c.r / 255.0, c.g / 255.0, c.b / 255.0};
                double raw[3];
                matvec(m, in, raw);
                const Color got = out.pixel(x, y);
                const std::uint8_t want[3] = {
                    static_cast<std::uint8_t>(
                        std::floor(std::clamp(raw[0], 0.0, 1.0) * 255.0 + 0.5)),
                    static_cast<std::uint8_t>(
                        std::floor(std::clamp(raw[1], 0.0, 1.0) * 255.0 + 0.5)),
                    static_cast<std::uint8_t>(
                        std::floor(std::clamp(raw[2], 0.0, 1.0) * 255.0 + 0.5))};
                CHECK(got.r == want[0]);
                CHECK(got.g == want[1]);
                CHECK(got.b == want[2]);
            }
        }
    }
}

TEST_CASE("non-finite matrices are rejected") {
    ColorMatrix m = ColorMatrix::identity();
    m.linear[4] = std::numeric_limits<double>::quiet_NaN();
    const ImageBuffer buf(2, 2);
    CHECK_THROWS_AS(apply(buf, m), ConfigError);
}

TEST_CASE("red-shift is idempotent at the byte level") {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 40; ++trial) {
        const ImageBuffer buf = testgen::random_sized_buffer(rng);
        const ImageBuffer once = apply(buf, redshift_matrix());
        CHECK(apply(once, redshift_matrix()) == once);
    }
}

TEST_CASE("quantization rounds half up") {
    ColorMatrix half = ColorMatrix::identity();
    half.linear[0] = half.linear[4] = half.linear[8] = 0.5;
    CHECK(apply(half, Color{1, 3, 255, 255}) == Color{1, 2, 128, 255});
}

TEST_CASE("scheme lookup maps names to transforms") {
    CHECK(!scheme_transform(TransformScheme::Default).has_value());
    CHECK(*scheme_transform(TransformScheme::Invert) == inversion_matrix());
    CHECK(*scheme_transform(TransformScheme::Redshift) == redshift_matrix());
    const auto combined = scheme_transform(TransformScheme::InvertRedshift);
    REQUIRE(combined.has_value());
    CHECK(apply(*combined, Color{255, 255, 255, 255}) == Color{0, 0, 0, 255});

    for (TransformScheme s : kAllSchemes) {
        const auto parsed = parse_scheme(to_string(s));
        REQUIRE(parsed.has_value());
        CHECK(*parsed == s);
    }
    CHECK(!parse_scheme("sepia").has_value());
}
