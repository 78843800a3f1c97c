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

#include "xlris/wmmse.hpp"

#include <catch_amalgamated.hpp>

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

    // Central differences of f over the real and imaginary parts of every entry of X
    double max_fd_gradient(const std::function<double(const CMat &)> &f, const CMat &X, double h = 1e-6)
    {
        double worst = 0.0;
        for (Eigen::Index i = 0; i < X.size(); ++i)
            for (cd dir : {cd(1, 0), cd(0, 1)})
            {
                CMat p = X, m = X;
                p(i) += h * dir;
                m(i) -= h * dir;
                worst = std::max(worst, std::abs((f(p) - f(m)) / (2 * h)));
            }
        return worst;
    }

    // Optimum of log2(1 + |h w|^2 / s2) over ||w||^2 <= P, |g w|^2 <= p for 2-antenna w
    double grid_oracle(const CMat &h, const CMat &g, double s2, double P, double p, int n)
    {
        double best = 0.0;
        for (int i = 0; i <= n; ++i)
        {
            const double a = 0.5 * pi * i / n;
            for (int j = 0; j < n; ++j)
            {
                const double b = 2 * pi * j / n;
                Eigen::Vector2cd w(std::cos(a), std::sin(a) * std::polar(1.0, b));
                const double gh = std::norm((h * w)(0)), gg = std::norm((g * w)(0));
                double s = P;
                if (gg > 0.0)
                    s = std::min(s, p / gg);
                best = std::max(best, std::log2(1.0 + s * gh / s2));
            }
        }
        return best;
    }
}

TEST_CASE("covert_rate cases", "[wmmse]")
{
    std::mt19937_64 rng(1);
    const CMat H = randn(rng, 2, 3);
    CHECK(covert_rate(H, CMat::Zero(3, 2), 1.0) == 0.0);
    CHECK_THAT(covert_rate(CMat::Ones(1, 1), CMat::Ones(1, 1), 1.0), WithinAbs(1.0, 1e-15));

    const CMat Hs = randn(rng, 2, 2), W = randn(rng, 2, 2);
    const double s2 = 0.7;
    Eigen::SelfAdjointEigenSolver<CMat> es(Hs * W * W.adjoint() * Hs.adjoint());
    double oracle = 0.0;
    for (int i = 0; i < 2; ++i)
        oracle += std::log2(1.0 + es.eigenvalues()(i) / s2);
    CHECK_THAT(covert_rate(Hs, W, s2), WithinRel(oracle, 1e-12));
    CHECK_THROWS(covert_rate(Hs, CMat::Ones(3, 1), 1.0));
}

TEST_CASE("mse_matrix and receive_filter", "[wmmse]")
{
    std::mt19937_64 rng(2);
    const CMat H = randn(rng, 3, 4), W = randn(rng, 4, 2);
    const double s2 = 0.3;
    CHECK((mse_matrix(H, W, CMat::Zero(3, 2), s2) - CMat::Identity(2, 2)).norm() < 1e-15);

    const CMat U = receive_filter(H, W, s2);
    const CMat E = mse_matrix(H, W, U, s2);
    const CMat Estar = (CMat::Identity(2, 2) + W.adjoint() * H.adjoint() * H * W / s2).inverse();
    CHECK((E - Estar).norm() < 1e-10);
    // rate equivalence log2 det(E*^-1)
    CHECK_THAT(covert_rate(H, W, s2), WithinRel(-std::log2(std::real(Estar.determinant())), 1e-8));

    auto trE = [&](const CMat &X) { return mse_matrix(H, W, X, s2).trace().real(); };
    CHECK(max_fd_gradient(trE, U) < 1e-6);

    CHECK(receive_filter(H, CMat::Zero(4, 2), s2).norm() == 0.0);
    CHECK_THAT(receive_filter(CMat::Ones(1, 1), CMat::Ones(1, 1), 1.0)(0, 0).real(), WithinAbs(0.5, 1e-15));

    // Exact zero-noise case with U^H H W = I
    const CMat Hq = CMat::Identity(2, 2), Wq = CMat::Identity(2, 2);
    CHECK(mse_matrix(Hq, Wq, CMat::Identity(2, 2), 0.0).norm() < 1e-15);
}

TEST_CASE("weight_matrix", "[wmmse]")
{
    CHECK((weight_matrix(CMat::Identity(2, 2)) - CMat::Identity(2, 2)).norm() < 1e-15);
    CMat E = CMat::Zero(2, 2);
    E(0, 0) = 2.0;
    E(1, 1) = 0.5;
    const CMat P = weight_matrix(E);
    CHECK(std::abs(P(0, 0) - 0.5) < 1e-14);
    CHECK(std::abs(P(1, 1) - 2.0) < 1e-14);

    std::mt19937_64 rng(3);
    const CMat A = randn(rng, 3, 3);
    const CMat Epd = A * A.adjoint() + 0.1 * CMat::Identity(3, 3);
    CHECK((weight_matrix(Epd) * Epd - CMat::Identity(3, 3)).norm() < 1e-10);
}

TEST_CASE("wfd_closed_form", "[wmmse]")
{
    std::mt19937_64 rng(4);
    const CMat one = CMat::Ones(1, 1);
    CHECK_THAT(wfd_closed_form(one, CMat::Zero(1, 1), one, one, 1.0, 0.0)(0, 0).real(), WithinAbs(0.5, 1e-15));

    const CMat HB = randn(rng, 2, 4), HW = randn(rng, 2, 4);
    const CMat U = randn(rng, 2, 2);
    const CMat A = randn(rng, 2, 2);
    const CMat Psi = A * A.adjoint() + CMat::Identity(2, 2);
    CHECK(wfd_closed_form(HB, HW, CMat::Zero(2, 2), Psi, 0.5, 0.2).norm() == 0.0);

    const double mu = 0.4, ups = 0.7, s2 = 0.5;
    const CMat W = wfd_closed_form(HB, HW, U, Psi, mu, ups);
    auto lag = [&](const CMat &X) {
        return (Psi * mse_matrix(HB, X, U, s2)).trace().real() + mu * X.squaredNorm() + ups * (HW * X).squaredNorm();
    };
    CHECK(max_fd_gradient(lag, W) <= 1e-6 * std::max(1.0, W.norm()));

    double prev = std::numeric_limits<double>::infinity();
    for (int k = -6; k <= 6; ++k)
    {
        const double u = std::pow(10.0, k);
        const double lk = (HW * wfd_closed_form(HB, HW, U, Psi, mu, u)).squaredNorm();
        CHECK(lk <= prev * (1 + 1e-12));
        prev = lk;
    }
    CHECK_THROWS_AS(wfd_closed_form(CMat::Zero(2, 4), CMat::Zero(2, 4), U, Psi, 0.0, 0.0), NumericError);
}

TEST_CASE("bisection_solve", "[wmmse]")
{
    std::mt19937_64 rng(5);
    const CMat HB = randn(rng, 2, 4);
    const CMat U = randn(rng, 2, 2);
    const CMat Psi = CMat::Identity(2, 2);

    SECTION("inactive leakage")
    {
        const BisectionResult r = bisection_solve(HB, CMat::Zero(2, 4), U, Psi, 1.0, 1.0);
        CHECK(r.upsilon == 0.0);
        CHECK(r.power <= 1.0 * (1 + 1e-6));
        CHECK((r.mu == 0.0 || std::abs(r.power - 1.0) < 1e-6));
    }
    SECTION("complementary slackness, random instance")
    {
        const CMat HW = randn(rng, 2, 4);
        for (double pl : {1e-3, 1e-1, 10.0})
        {
            const BisectionResult r = bisection_solve(HB, HW, U, Psi, 1.0, pl);
            CHECK(r.power <= 1.0 * (1 + 1e-6));
            CHECK(r.leakage <= pl * (1 + 1e-6));
            CHECK(r.mu * std::abs(r.power - 1.0) <= 1e-6 * std::max(1.0, r.mu));
            CHECK(r.upsilon * std::abs(r.leakage - pl) <= 1e-6 * std::max(pl, r.upsilon * pl));
        }
    }
    SECTION("1x1 analytic upsilon")
    {
        const cd h(0.8, 0.3), g(1.1, -0.4), u(0.6, 0.2);
        const double psi = 1.5, pl = 1e-3;
        CMat Hm(1, 1), Gm(1, 1), Um(1, 1), Pm(1, 1);
        Hm << h;
        Gm << g;
        Um << u;
        Pm << psi;
        const double a = std::abs(h * u) * psi;
        const double ups = (std::abs(g) * a / std::sqrt(pl) - std::norm(h * u) * psi) / std::norm(g);
        REQUIRE(ups > 0.0);
        const BisectionResult r = bisection_solve(Hm, Gm, Um, Pm, 1e6, pl);
        CHECK(r.mu == 0.0);
        CHECK_THAT(r.upsilon, WithinRel(ups, 1e-8));
    }
    SECTION("zero leakage budget confines W to null(H_W)")
    {
        const CMat HW = randn(rng, 1, 4);
        const BisectionResult r = bisection_solve(HB, HW, U, Psi, 1.0, 0.0);
        CHECK((HW * r.W).norm() < 1e-10 * std::max(1.0, r.W.norm()));
        CHECK(r.power <= 1.0 * (1 + 1e-6));
    }
}

TEST_CASE("wmmse_fully_digital toy oracles", "[wmmse]")
{
    std::mt19937_64 rng(6);
    WmmseOptions opt;
    opt.eps = 1e-10;
    opt.max_iter = 2000;
    for (int trial = 0; trial < 5; ++trial)
    {
        const CMat h = randn(rng, 1, 2), g = randn(rng, 1, 2);
        const double P = 2.0, s2 = 0.5;
        const WmmseResult loose = wmmse_fully_digital(h, g, s2, P, 1e6, wmmse_default_init(h, g, 1, P, 1e6), opt);
        CHECK_THAT(loose.rate, WithinAbs(std::log2(1.0 + P * h.squaredNorm() / s2), 1e-4));

        const double pl = 0.05 * P * g.squaredNorm();
        const WmmseResult tight = wmmse_fully_digital(h, g, s2, P, pl, wmmse_default_init(h, g, 1, P, pl), opt);
        const double oracle = grid_oracle(h, g, s2, P, pl, 1000);
        CHECK(tight.rate >= oracle * 0.99);
        CHECK(tight.rate <= oracle * 1.01 + 1e-9);
        CHECK((g * tight.W).squaredNorm() <= pl * (1 + 1e-6));
    }
}

TEST_CASE("wmmse_fully_digital monotone descent and feasibility", "[wmmse]")
{
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 5; ++trial)
    {
        const CMat HB = randn(rng, 4, 8), HW = randn(rng, 4, 8);
        const double P = 1.0, pl = 0.05;
        const WmmseResult r = wmmse_fully_digital(HB, HW, 0.1, P, pl, randn(rng, 8, 2));
        for (std::size_t k = 1; k < r.objective_trace.size(); ++k)
            CHECK(r.objective_trace[k] <= r.objective_trace[k - 1] + 1e-9 * std::max(1.0, std::abs(r.objective_trace[k - 1])));
        CHECK(r.W.squaredNorm() <= P * (1 + 1e-6));
        CHECK((HW * r.W).squaredNorm() <= pl * (1 + 1e-6));
        CHECK_THAT(r.rate, WithinRel(covert_rate(HB, r.W, 0.1), 1e-12));
    }
    const WmmseResult z = wmmse_fully_digital(CMat::Zero(2, 4), CMat::Zero(2, 4), 1.0, 1.0, 1.0, CMat::Ones(4, 1));
    CHECK(z.W.norm() == 0.0);
    CHECK(z.rate == 0.0);
}
