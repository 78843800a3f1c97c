// SPDX-License-Identifier: Apache-2.0
//
// xlris - near-field XL-RIS covert communication design toolkit
// Copyright (C) 2026 The xlris authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "xlris/analysis.hpp"
#include "xlris/channel.hpp"
#include "xlris/types.hpp"

#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace xlris;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
    CMat randn(std::mt19937_64 &rng, int r, int c)
    {
        std::normal_distribution<double> g(0.0, std::sqrt(0.5));
        CMat m(r, c);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j)
                m(i, j) = cd(g(rng), g(rng));
        return m;
    }

    CVec phases(std::mt19937_64 &rng, int n)
    {
        std::uniform_real_distribution<double> u(0.0, 2 * pi);
        CVec v(n);
        for (int i = 0; i < n; ++i)
            v(i) = std::polar(1.0, u(rng));
        return v;
    }

    ArrayGeometry surface(int n_y, int n_z)
    {
        ArrayGeometry g;
        g.n_y = n_y;
        g.n_z = n_z;
        g.spacing = 0.5 * speed_of_light / 28e9;
        return g;
    }
}

TEST_CASE("cascade coherence trivial cases", "[analysis]")
{
    std::mt19937_64 rng(1);
    const CMat G = randn(rng, 16, 8);
    const CVec r = randn(rng, 16, 1).col(0), v = phases(rng, 16);
    const Coherence self = equivalent_channel_inner_product(r, r, v, G);
    CHECK_THAT(self.coherence, WithinAbs(1.0, 1e-12));
    const CVec e = G.transpose() * r.cwiseProduct(v);
    CHECK_THAT(self.inner_product, WithinRel(e.squaredNorm(), 1e-12));

    CVec a = CVec::Zero(16), b = CVec::Zero(16);
    a(0) = 1.0;
    b(5) = cd(0.0, 2.0);
    const Coherence orth = equivalent_channel_inner_product(a, b, v, CMat::Identity(16, 16));
    CHECK(orth.coherence < 1e-15);

    for (int k = 0; k < 100; ++k)
    {
        const Coherence c = equivalent_channel_inner_product(randn(rng, 16, 1).col(0), r, phases(rng, 16), G);
        CHECK(c.coherence >= 0.0);
        CHECK(c.coherence <= 1.0);
    }
}

TEST_CASE("distinct near-field users stay neither orthogonal nor collinear", "[analysis]")
{
    std::mt19937_64 rng(2);
    for (auto [ny, nz] : {std::pair{16, 4}, std::pair{32, 8}})
    {
        const ArrayGeometry ris = surface(ny, nz);
        const double dr = rayleigh_distance(ris.aperture(), 0.0, 28e9);
        const double az = pi / 4;
        const CVec r1 = near_field_probe(ris, 0.1 * dr * std::cos(az), 0.1 * dr * std::sin(az), 28e9).row(0).transpose();
        const CVec r2 = near_field_probe(ris, 0.3 * dr * std::cos(az), 0.3 * dr * std::sin(az), 28e9).row(0).transpose();
        for (int draw = 0; draw < 10; ++draw)
        {
            const int n = ny * nz;
            const Coherence c = equivalent_channel_inner_product(r1, r2, phases(rng, n), randn(rng, n, 64));
            CHECK(c.coherence >= 0.02);
            CHECK(c.coherence <= 0.98);
        }
    }
}

TEST_CASE("focusing ratio dispersion", "[analysis]")
{
    std::mt19937_64 rng(3);
    const int n = 24;
    const CMat G = randn(rng, n, 32);
    const CVec r = randn(rng, n, 1).col(0);

    const FocusingBeam fb = focusing_construction(r, G);
    CHECK(fb.dispersion <= 1e-10);
    CHECK_THAT(fb.w.norm(), WithinAbs(1.0, 1e-12));
    CHECK(focusing_ratio_dispersion(r, G, fb.w).cv <= 1e-10);
    CHECK((fb.v.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-12);
    // Co-phased: every r_i v_i (G w)_i is real positive
    const CVec terms = r.cwiseProduct(fb.v).cwiseProduct(G * fb.w);
    CHECK(terms.imag().cwiseAbs().maxCoeff() <= 1e-12 * terms.cwiseAbs().maxCoeff());
    CHECK(terms.real().minCoeff() > 0.0);

    for (int k = 0; k < 20; ++k)
        CHECK(focusing_ratio_dispersion(r, G, randn(rng, 32, 1).col(0)).cv > 0.1);

    CVec rz = r;
    rz(3) = 0.0;
    CHECK(focusing_ratio_dispersion(rz, G, fb.w).excluded == 1);
}

TEST_CASE("heatmap grid", "[analysis]")
{
    std::mt19937_64 rng(4);
    const ArrayGeometry ris = surface(8, 4);
    GridSpec spec;
    spec.x0 = 1.0;
    spec.x1 = 6.0;
    spec.y0 = -2.0;
    spec.y1 = 3.0;
    spec.nx = 11;
    spec.ny = 7;
    const CVec v = phases(rng, 32);

    SECTION("zero precoder is flagged and left unnormalized")
    {
        const HeatmapGrid h = heatmap(ris, 28e9, v, CMat::Zero(32, 2), spec);
        CHECK(h.zero_field);
        CHECK(h.values.maxCoeff() == 0.0);
    }
    SECTION("values match direct probes and peak at exactly one")
    {
        const CMat GW = randn(rng, 32, 2);
        const HeatmapGrid h = heatmap(ris, 28e9, v, GW, spec, 1);
        REQUIRE_FALSE(h.zero_field);
        CHECK(h.values.rows() == 7);
        CHECK(h.values.cols() == 11);
        CHECK(h.values.maxCoeff() == 1.0);
        CHECK(h.values.minCoeff() >= 0.0);
        for (int j = 0; j < spec.ny; ++j)
            for (int i = 0; i < spec.nx; ++i)
            {
                const CMat p = near_field_probe(ris, spec.x(i), spec.y(j), 28e9);
                const double power = (p * v.asDiagonal() * GW).squaredNorm();
                CHECK_THAT(h.values(j, i) * h.peak_power, WithinRel(power, 1e-10));
            }
        CHECK(h.at(spec.x(3) + 0.01, spec.y(5) - 0.01) == h.values(5, 3));
        const HeatmapGrid h3 = heatmap(ris, 28e9, v, GW, spec, 3);
        CHECK(h3.values == h.values);
    }
    SECTION("csv layout")
    {
        const HeatmapGrid h = heatmap(ris, 28e9, v, randn(rng, 32, 1), spec);
        const auto path = std::filesystem::temp_directory_path() / "xlris_heatmap_test.csv";
        write_heatmap_csv(h, path.string());
        std::ifstream in(path);
        std::string line;
        std::getline(in, line);
        CHECK(line == "# 1,6,-2,3,11,7");
        int rows = 0;
        while (std::getline(in, line))
        {
            std::stringstream ss(line);
            std::string cell;
            int cols = 0;
            while (std::getline(ss, cell, ','))
            {
                CHECK(std::stod(cell) == h.values(rows, cols));
                ++cols;
            }
            CHECK(cols == 11);
            ++rows;
        }
        CHECK(rows == 7);
        std::filesystem::remove(path);
        CHECK_THROWS_AS(write_heatmap_csv(h, (path.string() + "/x.csv")), IoError);
    }
    SECTION("invalid grids are rejected")
    {
        GridSpec bad = spec;
        bad.nx = 0;
        CHECK_THROWS_AS(heatmap(ris, 28e9, v, CMat::Ones(32, 1), bad), ParameterError);
        bad = spec;
        bad.x1 = 0.0;
        CHECK_THROWS_AS(bad.validate(), ParameterError);
    }
}
