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

#include "xlris/benchmarks.hpp"
#include "xlris/channel.hpp"
#include "xlris/config.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <random>

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
}

TEST_CASE("scheme names round trip", "[benchmarks]")
{
    for (Scheme s : {Scheme::Proposed, Scheme::FD, Scheme::RP, Scheme::FF, Scheme::ZF})
        CHECK(scheme_from_name(scheme_name(s)) == s);
    CHECK_FALSE(scheme_from_name("sdr").has_value());
}

TEST_CASE("random phases are unit modulus, uniform and seeded", "[benchmarks]")
{
    Rng rng(42);
    const int n = 100000;
    const CVec v = random_phase_v(rng, n);
    CHECK((v.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-15);

    // Kolmogorov-Smirnov against U(0, 2 pi]; p > 0.01 iff sqrt(n) D < 1.6276
    std::vector<double> u(n);
    for (int i = 0; i < n; ++i)
    {
        double a = std::arg(v(i));
        if (a <= 0.0)
            a += 2 * pi;
        u[i] = a / (2 * pi);
    }
    std::sort(u.begin(), u.end());
    double d = 0.0;
    for (int i = 0; i < n; ++i)
        d = std::max({d, (i + 1.0) / n - u[i], u[i] - double(i) / n});
    CHECK(std::sqrt(double(n)) * d < 1.6276);

    Rng a(7), b(7);
    CHECK(random_phase_v(a, 16) == random_phase_v(b, 16));
}

TEST_CASE("zero-forcing beamformer", "[benchmarks]")
{
    std::mt19937_64 rng(1);
    SECTION("nulls Willie with full power on random instances")
    {
        for (int trial = 0; trial < 20; ++trial)
        {
            const CMat Hb = randn(rng, 4, 16), Hw = randn(rng, 4, 16);
            const ZfResult z = zf_beamformer(Hb, Hw, 3.0, 2);
            REQUIRE_FALSE(z.degenerate);
            CHECK((Hw * z.W).norm() <= 1e-9 * z.W.norm());
            CHECK_THAT(z.W.squaredNorm(), WithinRel(3.0, 1e-12));
        }
    }
    SECTION("no eavesdropper leaves the top singular vectors")
    {
        const CMat Hb = randn(rng, 4, 8);
        const ZfResult z = zf_beamformer(Hb, CMat::Zero(4, 8), 2.0, 2);
        Eigen::JacobiSVD<CMat> svd(Hb, Eigen::ComputeFullV);
        const CMat V = svd.matrixV().leftCols(2);
        CHECK((z.W - V * (std::sqrt(2.0) / V.norm())).norm() < 1e-10);
    }
    SECTION("full-rank eavesdropper is degenerate")
    {
        const ZfResult z = zf_beamformer(randn(rng, 2, 4), randn(rng, 4, 4), 1.0, 1);
        CHECK(z.degenerate);
        CHECK(z.W.norm() == 0.0);
    }
}

TEST_CASE("sum-path-gain ascent", "[benchmarks]")
{
    std::mt19937_64 rng(2);
    auto gain = [](const CMat &H, const CMat &G, const CMat &W, const CVec &v) {
        return (H * v.asDiagonal() * G * W).squaredNorm();
    };
    SECTION("single element aligns trivially")
    {
        const CMat H = randn(rng, 1, 1), G = randn(rng, 1, 1), W = randn(rng, 1, 1);
        CVec v0(1);
        v0 << std::polar(1.0, 0.3);
        const SumPathGainResult r = sum_path_gain_ris(H, G, W, v0);
        CHECK_THAT(std::abs(r.v(0)), WithinAbs(1.0, 1e-15));
        CHECK_THAT(gain(H, G, W, r.v), WithinRel(gain(H, G, W, v0), 1e-12));
    }
    SECTION("beats random probes with a monotone trace")
    {
        const CMat H = randn(rng, 4, 12), G = randn(rng, 12, 8), W = randn(rng, 8, 2);
        Rng prng(3);
        const SumPathGainResult r = sum_path_gain_ris(H, G, W, random_phase_v(prng, 12));
        CHECK((r.v.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-15);
        for (std::size_t k = 1; k < r.objective_trace.size(); ++k)
            CHECK(r.objective_trace[k] >= r.objective_trace[k - 1] * (1 - 1e-12));
        const double g = gain(H, G, W, r.v);
        CHECK_THAT(r.objective_trace.back(), WithinRel(g, 1e-9));
        for (int k = 0; k < 1000; ++k)
            CHECK(g >= gain(H, G, W, random_phase_v(prng, 12)));
    }
}

TEST_CASE("far-field scenario", "[benchmarks]")
{
    SystemConfig cfg;
    apply_desk_scale(cfg);
    cfg.n_y = 8;
    cfg.n_z = 4;
    Rng rng(5);
    const ChannelSet nf = build_channels(cfg, rng);
    const ChannelSet ff = far_field_scenario(cfg, nf);
    CHECK(ff.far_field_receivers);
    CHECK(ff.G == nf.G);
    CHECK(ff.H.rows() == nf.H.rows());
    CHECK(ff.F.cols() == nf.F.cols());
    for (const CMat *m : {&ff.H, &ff.F})
    {
        Eigen::JacobiSVD<CMat> svd(*m);
        const RVec s = svd.singularValues();
        CHECK(s(1) <= 1e-10 * s(0));
    }
    // Same azimuth: RIS-side responses are collinear
    const CVec rb = ff.H.row(0).adjoint(), rw = ff.F.row(0).adjoint();
    CHECK_THAT(std::abs(rb.dot(rw)) / (rb.norm() * rw.norm()), WithinAbs(1.0, 1e-12));
}
