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

#include "xlris/channel.hpp"
#include "xlris/config.hpp"
#include "xlris/experiment.hpp"
#include "xlris/types.hpp"

#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace xlris;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
    SystemConfig toy()
    {
        SystemConfig cfg;
        cfg.m_a = 4;
        cfg.m_rf = 2;
        cfg.streams = 1;
        cfg.m_b = 2;
        cfg.m_w = 2;
        cfg.n_y = 4;
        cfg.n_z = 2;
        cfg.realizations = 2;
        cfg.seed = 17;
        return cfg;
    }

    std::string slurp(const std::filesystem::path &p)
    {
        std::ifstream in(p);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    std::filesystem::path scratch(const std::string &name)
    {
        const auto dir = std::filesystem::temp_directory_path() / name;
        std::filesystem::remove_all(dir);
        std::filesystem::create_directories(dir);
        return dir;
    }
}

TEST_CASE("empty config yields the reference defaults", "[config]")
{
    for (const char *text : {"", "  \n", "{}"})
    {
        const SystemConfig c = config_from_json(text);
        CHECK(c.m_a == 64);
        CHECK(c.m_b == 4);
        CHECK(c.m_w == 4);
        CHECK(c.n_y == 90);
        CHECK(c.n_z == 8);
        CHECK(c.m_rf == 4);
        CHECK(c.streams == 2);
        CHECK(c.n_c == 5);
        CHECK(c.n_ray == 10);
        CHECK(c.freq_hz == 28e9);
        CHECK(c.sigma_b2_dbm == -110.0);
        CHECK(c.sigma_w2_dbm == -110.0);
        CHECK(c.d_x_lambda == 0.5);
        CHECK(c.d_a_lambda == 0.5);
        CHECK(c.rho_db == 3.0);
        CHECK(c.kappa == 0.01);
        CHECK(c.p_max_dbm == 40.0);
    }
}

TEST_CASE("config validation names the field", "[config]")
{
    CHECK_THROWS_WITH(config_from_json(R"({"streams": 5})"), ContainsSubstring("m_rf"));
    CHECK_THROWS_WITH(config_from_json(R"({"m_rf": 65})"), ContainsSubstring("m_rf <= m_a"));
    CHECK_THROWS_WITH(config_from_json(R"({"kappa": 1.5})"), ContainsSubstring("kappa"));
    CHECK_THROWS_WITH(config_from_json(R"({"n_y": 2.5})"), ContainsSubstring("n_y"));
    CHECK_THROWS_WITH(config_from_json(R"({"warp_factor": 9})"), ContainsSubstring("warp_factor"));
    CHECK_THROWS_AS(config_from_json("[1,2]"), ConfigError);
    CHECK_THROWS_AS(config_from_json("{"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/xlris.json"), IoError);
}

TEST_CASE("config round trip is the identity", "[config]")
{
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial)
    {
        SystemConfig c;
        c.m_a = 8 + int(u(rng) * 64);
        c.m_rf = 2 + int(u(rng) * 6);
        c.streams = 1 + int(u(rng) * 2);
        c.kappa = 0.2 * u(rng);
        c.p_max_dbm = 60 * u(rng) - 10;
        c.bob.azimuth = u(rng);
        c.willie.range = 1.0 + 30 * u(rng);
        c.seed = rng();
        const std::string text = config_to_json(c);
        const SystemConfig back = config_from_json(text);
        CHECK(config_to_json(back) == text);
        CHECK(config_hash(back) == config_hash(c));
        CHECK(back.kappa == c.kappa);
        CHECK(back.seed == c.seed);
    }
}

TEST_CASE("config_set and hashing", "[config]")
{
    SystemConfig c;
    const auto h0 = config_hash(c);
    config_set(c, "kappa", "0.05");
    CHECK(c.kappa == 0.05);
    CHECK(config_hash(c) != h0);
    CHECK_THROWS_AS(config_set(c, "kappa", "\"high\""), ConfigError);
    CHECK_THROWS_AS(config_set(c, "nope", "1"), ConfigError);
    SystemConfig d;
    apply_desk_scale(d);
    CHECK(d.n() == 240);
    CHECK(d.realizations == 10);

    CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
    CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 2));
    CHECK(derive_seed(1, 2) != derive_seed(2, 2));
}

TEST_CASE("sweep parsing", "[experiment]")
{
    const SweepSpec s = parse_sweep("kappa=0.01,0.05,0.1");
    CHECK(s.parameter == "kappa");
    CHECK(s.values == std::vector<double>{0.01, 0.05, 0.1});
    CHECK_THROWS_AS(parse_sweep("warp=1,2"), ConfigError);
    CHECK_THROWS_AS(parse_sweep("kappa="), ConfigError);
    CHECK_THROWS_AS(parse_sweep("kappa=0.1,abc"), ConfigError);
    CHECK_THROWS_AS(parse_sweep("kappa"), ConfigError);

    CHECK(parse_schemes("proposed,zf") == std::vector<Scheme>{Scheme::Proposed, Scheme::ZF});
    CHECK_THROWS_AS(parse_schemes("proposed,sdr"), ConfigError);

    for (const std::string &p : sweepable_parameters())
        CHECK_NOTHROW(parse_sweep(p + "=1"));
}

TEST_CASE("sweep values map onto the config", "[experiment]")
{
    const SystemConfig base;
    CHECK_THAT(apply_sweep_value(base, "xi", 0.95).kappa, WithinAbs(0.05, 1e-15));
    CHECK(apply_sweep_value(base, "n_y", 32).n_y == 32);
    CHECK(apply_sweep_value(base, "willie_range_m", 7.5).willie.range == 7.5);
    CHECK(apply_sweep_value(base, "", 3).kappa == base.kappa);
    CHECK_THROWS_AS(apply_sweep_value(base, "kappa", 1.5), ConfigError);
    CHECK_THROWS_AS(apply_sweep_value(base, "n_y", 2.5), ConfigError);
}

TEST_CASE("sweeps are independent of the worker count", "[experiment]")
{
    SweepSpec spec = parse_sweep("kappa=0.01,0.1");
    spec.schemes = {Scheme::Proposed, Scheme::RP, Scheme::ZF};
    spec.jobs = 1;
    const SweepResult a = run_sweep(toy(), spec);
    spec.jobs = 3;
    const SweepResult b = run_sweep(toy(), spec);
    REQUIRE(a.rows.size() == 2 * 2 * 3);
    REQUIRE(b.rows.size() == a.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i)
    {
        CHECK(a.rows[i].status == "ok");
        CHECK(a.rows[i].scheme == b.rows[i].scheme);
        CHECK(a.rows[i].seed == b.rows[i].seed);
        CHECK(a.rows[i].rate == b.rows[i].rate);
        CHECK(a.rows[i].leakage == b.rows[i].leakage);
    }
    // Ordering by sweep value, realization, scheme; one seed per draw
    CHECK(a.rows[0].sweep_value == 0.01);
    CHECK(a.rows[0].seed == a.rows[2].seed);
    CHECK(a.rows[3].realization == 1);
    CHECK(a.rows[6].sweep_value == 0.1);

    const auto da = scratch("xlris_sweep_a"), db = scratch("xlris_sweep_b");
    write_sweep_outputs(a, da.string());
    write_sweep_outputs(b, db.string());
    CHECK(slurp(da / "results.csv") == slurp(db / "results.csv"));
    CHECK(slurp(da / "aggregate.csv") == slurp(db / "aggregate.csv"));
    CHECK(std::filesystem::exists(da / "timing.csv"));
    const std::string results = slurp(da / "results.csv");
    CHECK(results.rfind("scheme,sweep_param,sweep_value,realization,seed,config_hash,rate,leakage,min_dep,"
                        "iterations,status,message\n",
                        0) == 0);
    std::filesystem::remove_all(da);
    std::filesystem::remove_all(db);
}

TEST_CASE("aggregates are means over successes", "[experiment]")
{
    std::vector<ResultRow> rows(3);
    for (auto &r : rows)
    {
        r.scheme = Scheme::RP;
        r.sweep_param = "kappa";
        r.sweep_value = 0.1;
        r.status = "ok";
    }
    rows[0].rate = 1.0;
    rows[1].rate = 3.0;
    rows[2].rate = 100.0;
    rows[2].status = "infeasible";
    const auto agg = aggregate(rows);
    REQUIRE(agg.size() == 1);
    CHECK(agg[0].successes == 2);
    CHECK(agg[0].failures == 1);
    CHECK(agg[0].mean_rate == 2.0);
}

TEST_CASE("failed draws become rows and the sweep continues", "[experiment]")
{
    SystemConfig cfg = toy();
    cfg.m_b = 1;
    cfg.n_z = 1;
    cfg.n_y = 5;
    cfg.realizations = 1;
    cfg.bob.azimuth = pi / 2;
    // Bob placed on the outermost surface element
    const double on_element = ris_geometry(cfg).element(4).norm();
    SweepSpec spec;
    spec.parameter = "bob_range_m";
    spec.values = {on_element, 15.0};
    spec.schemes = {Scheme::RP};
    const SweepResult res = run_sweep(cfg, spec);
    REQUIRE(res.rows.size() == 2);
    CHECK(res.rows[0].status == "geometry_error");
    CHECK_FALSE(res.rows[0].message.empty());
    CHECK(res.rows[1].status == "ok");
    CHECK(res.aggregates.size() == 2);

    SweepResult quoted;
    quoted.rows.push_back(res.rows[0]);
    quoted.rows[0].message = "a,\"b\"";
    quoted.aggregates = aggregate(quoted.rows);
    const auto dir = scratch("xlris_sweep_quote");
    write_sweep_outputs(quoted, dir.string());
    CHECK(slurp(dir / "results.csv").find(",\"a,\"\"b\"\"\"\n") != std::string::npos);
    // A regular file cannot hold the output directory
    std::ofstream(dir / "blocker") << "x";
    CHECK_THROWS_AS(write_sweep_outputs(quoted, (dir / "blocker" / "sub").string()), IoError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("heatmap presets", "[experiment]")
{
    SystemConfig cfg = toy();
    cfg.n_y = 8;
    cfg.n_z = 4;
    GridSpec grid;
    grid.nx = 12;
    grid.ny = 10;
    for (const std::string &p : heatmap_presets())
    {
        const HeatmapRun run = run_heatmap(cfg, p, grid, 2);
        INFO(p);
        CHECK(run.preset == p);
        CHECK_FALSE(run.grid.zero_field);
        CHECK(run.grid.values.maxCoeff() == 1.0);
        CHECK(run.rate >= 0.0);
        CHECK((run.v.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-12);
    }
    CHECK_THROWS_AS(run_heatmap(cfg, "spiral", grid), ConfigError);
}
