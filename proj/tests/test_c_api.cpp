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

#include "xlris/xlris.h"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
    const char *toy_json = R"({"m_a":4,"m_rf":2,"streams":1,"m_b":2,"m_w":2,"n_y":4,"n_z":2,"realizations":1})";

    xlris_config *toy()
    {
        xlris_config *cfg = nullptr;
        REQUIRE(xlris_config_from_json(toy_json, &cfg) == XLRIS_OK);
        return cfg;
    }
}

TEST_CASE("status names and version", "[capi]")
{
    CHECK(std::string(xlris_version()) == "1.0.0");
    CHECK(std::string(xlris_status_name(XLRIS_OK)) == "ok");
    CHECK(std::string(xlris_status_name(XLRIS_E_CONFIG)) == "config_error");
    CHECK(std::string(xlris_status_name(XLRIS_E_IO)) == "io_error");
    CHECK(std::string(xlris_status_name(static_cast<xlris_status>(1234))) == "unknown_error");
}

TEST_CASE("config handles", "[capi]")
{
    xlris_config *cfg = nullptr;
    REQUIRE(xlris_config_create_default(&cfg) == XLRIS_OK);
    size_t needed = 0;
    REQUIRE(xlris_config_to_json(cfg, nullptr, 0, &needed) == XLRIS_OK);
    REQUIRE(needed > 1);
    std::vector<char> buf(needed);
    REQUIRE(xlris_config_to_json(cfg, buf.data(), buf.size(), &needed) == XLRIS_OK);
    const std::string text(buf.data());
    CHECK(text.size() + 1 == needed);
    CHECK_THAT(text, ContainsSubstring("\"n_y\""));

    std::vector<char> small(8, 'x');
    REQUIRE(xlris_config_to_json(cfg, small.data(), small.size(), &needed) == XLRIS_OK);
    CHECK(small[7] == '\0');

    uint64_t h0 = 0, h1 = 0;
    REQUIRE(xlris_config_hash(cfg, &h0) == XLRIS_OK);
    REQUIRE(xlris_config_set(cfg, "kappa", "0.05") == XLRIS_OK);
    REQUIRE(xlris_config_hash(cfg, &h1) == XLRIS_OK);
    CHECK(h0 != h1);
    REQUIRE(xlris_config_apply_desk_scale(cfg) == XLRIS_OK);

    CHECK(xlris_config_set(cfg, "streams", "9") == XLRIS_E_CONFIG);
    CHECK_THAT(std::string(xlris_last_error()), ContainsSubstring("m_rf"));
    CHECK(xlris_config_set(cfg, "bogus", "1") == XLRIS_E_CONFIG);
    CHECK(xlris_config_set(nullptr, "kappa", "1") == XLRIS_E_PARAM);
    xlris_config_destroy(cfg);
    xlris_config_destroy(nullptr);

    xlris_config *bad = nullptr;
    CHECK(xlris_config_load("/nonexistent/cfg.json", &bad) == XLRIS_E_IO);
    CHECK(bad == nullptr);
    CHECK(xlris_config_from_json("{\"kappa\": 2}", &bad) == XLRIS_E_CONFIG);
}

TEST_CASE("config file loading", "[capi]")
{
    const auto path = std::filesystem::temp_directory_path() / "xlris_capi_cfg.json";
    std::ofstream(path) << toy_json;
    xlris_config *a = nullptr, *b = toy();
    REQUIRE(xlris_config_load(path.string().c_str(), &a) == XLRIS_OK);
    uint64_t ha = 0, hb = 0;
    xlris_config_hash(a, &ha);
    xlris_config_hash(b, &hb);
    CHECK(ha == hb);
    xlris_config_destroy(a);
    xlris_config_destroy(b);
    std::filesystem::remove(path);
}

TEST_CASE("closed forms", "[capi]")
{
    const double s2 = 1e-14, rho = std::pow(10.0, 0.3);
    double dep = -1.0;
    REQUIRE(xlris_min_dep(0.0, s2, rho, 4, &dep) == XLRIS_OK);
    CHECK(dep == 1.0);
    REQUIRE(xlris_min_dep(4 * s2 * (rho - 1 / rho), s2, rho, 4, &dep) == XLRIS_OK);
    CHECK(dep == 0.0);
    double pl = 0.0;
    REQUIRE(xlris_max_leakage(0.01, s2, rho, 4, &pl) == XLRIS_OK);
    REQUIRE(xlris_min_dep(pl, s2, rho, 4, &dep) == XLRIS_OK);
    CHECK_THAT(dep, WithinAbs(0.99, 1e-9));
    CHECK(xlris_min_dep(1.0, s2, 0.5, 4, &dep) == XLRIS_E_PARAM);

    double dr = 0.0;
    REQUIRE(xlris_rayleigh_distance(1.0, 0.0, 3e8, &dr) == XLRIS_OK);
    CHECK_THAT(dr, WithinRel(2.0 * 3e8 / 299792458.0, 1e-12));
    CHECK(xlris_rayleigh_distance(1.0, 0.0, 3e8, nullptr) == XLRIS_E_PARAM);
}

TEST_CASE("solve and inspect", "[capi]")
{
    xlris_config *cfg = toy();
    xlris_solution *sol = nullptr;
    REQUIRE(xlris_solve(cfg, "proposed", 3, &sol) == XLRIS_OK);
    double rate = -1, leak = -1, dep = -1;
    int iters = -1, conv = -1;
    size_t len = 0, n = 0;
    REQUIRE(xlris_solution_rate(sol, &rate) == XLRIS_OK);
    REQUIRE(xlris_solution_leakage(sol, &leak) == XLRIS_OK);
    REQUIRE(xlris_solution_min_dep(sol, &dep) == XLRIS_OK);
    REQUIRE(xlris_solution_iterations(sol, &iters) == XLRIS_OK);
    REQUIRE(xlris_solution_converged(sol, &conv) == XLRIS_OK);
    REQUIRE(xlris_solution_trace_length(sol, &len) == XLRIS_OK);
    REQUIRE(xlris_solution_ris_size(sol, &n) == XLRIS_OK);
    CHECK(rate > 0.0);
    CHECK(leak >= 0.0);
    CHECK(dep >= 0.99 - 1e-9);
    CHECK(iters >= 1);
    CHECK(n == 8);
    REQUIRE(len >= 2);
    std::vector<double> trace(len);
    REQUIRE(xlris_solution_rate_trace(sol, trace.data(), len) == XLRIS_OK);
    CHECK(trace.back() == rate);
    std::vector<double> refl(2 * n);
    REQUIRE(xlris_solution_reflection(sol, refl.data(), n) == XLRIS_OK);
    for (size_t i = 0; i < n; ++i)
        CHECK_THAT(std::hypot(refl[2 * i], refl[2 * i + 1]), WithinAbs(1.0, 1e-12));
    CHECK(xlris_solution_rate_trace(sol, trace.data(), len + 1) == XLRIS_E_PARAM);
    xlris_solution_destroy(sol);

    xlris_solution *none = nullptr;
    CHECK(xlris_solve(cfg, "sdr", 3, &none) == XLRIS_E_PARAM);
    CHECK(none == nullptr);
    CHECK(xlris_solution_rate(nullptr, &rate) == XLRIS_E_PARAM);
    xlris_config_destroy(cfg);
}

TEST_CASE("sweep and heatmap runners", "[capi]")
{
    xlris_config *cfg = toy();
    const auto dir = std::filesystem::temp_directory_path() / "xlris_capi_sweep";
    std::filesystem::remove_all(dir);
    REQUIRE(xlris_run_sweep(cfg, "kappa=0.01,0.05", "rp,zf", 2, dir.string().c_str()) == XLRIS_OK);
    CHECK(std::filesystem::exists(dir / "results.csv"));
    CHECK(std::filesystem::exists(dir / "aggregate.csv"));
    CHECK(xlris_run_sweep(cfg, "warp=1", nullptr, 1, dir.string().c_str()) == XLRIS_E_CONFIG);
    CHECK(xlris_run_sweep(cfg, nullptr, "proposed,sdr", 1, dir.string().c_str()) == XLRIS_E_CONFIG);
    std::filesystem::remove_all(dir);

    const auto csv = std::filesystem::temp_directory_path() / "xlris_capi_heatmap.csv";
    REQUIRE(xlris_run_heatmap(cfg, "focusing", 2, csv.string().c_str()) == XLRIS_OK);
    std::ifstream in(csv);
    std::string header;
    std::getline(in, header);
    CHECK(header == "# 0.25,25,0,25,200,200");
    std::filesystem::remove(csv);
    CHECK(xlris_run_heatmap(cfg, "spiral", 1, csv.string().c_str()) == XLRIS_E_CONFIG);
    CHECK(xlris_run_heatmap(cfg, "focusing", 0, csv.string().c_str()) == XLRIS_E_PARAM);
    xlris_config_destroy(cfg);
}
