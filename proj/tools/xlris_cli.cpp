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

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

namespace
{
    struct Failure
    {
        xlris_status status;
        std::string message;
    };

    void check(xlris_status s)
    {
        if (s != XLRIS_OK)
            throw Failure{s, xlris_last_error()};
    }

    using ConfigPtr = std::unique_ptr<xlris_config, decltype(&xlris_config_destroy)>;
    using SolutionPtr = std::unique_ptr<xlris_solution, decltype(&xlris_solution_destroy)>;

    ConfigPtr make_config(const std::string &path, bool desk, const std::vector<std::string> &overrides)
    {
        xlris_config *raw = nullptr;
        check(path.empty() ? xlris_config_create_default(&raw) : xlris_config_load(path.c_str(), &raw));
        ConfigPtr cfg(raw, &xlris_config_destroy);
        if (desk)
            check(xlris_config_apply_desk_scale(cfg.get()));
        for (const auto &kv : overrides)
        {
            const auto eq = kv.find('=');
            if (eq == std::string::npos || eq == 0)
                throw Failure{XLRIS_E_CONFIG, "--set expects KEY=VALUE, got '" + kv + "'"};
            check(xlris_config_set(cfg.get(), kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()));
        }
        return cfg;
    }

    std::string config_text(const xlris_config *cfg)
    {
        size_t needed = 0;
        check(xlris_config_to_json(cfg, nullptr, 0, &needed));
        std::string buf(needed, '\0');
        check(xlris_config_to_json(cfg, buf.data(), buf.size(), &needed));
        buf.resize(needed - 1);
        return buf;
    }

    int report(xlris_status s, const std::string &msg)
    {
        nlohmann::json err{{"error", xlris_status_name(s)}, {"message", msg}};
        std::cerr << err.dump() << '\n';
        return 2;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Near-field XL-RIS covert communication design and experiment runner"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(xlris_version()));

    std::string config_path;
    bool desk = false;
    std::vector<std::string> overrides;
    auto add_common = [&](CLI::App *sub) {
        sub->add_option("--config", config_path, "Flat JSON config file; defaults when omitted");
        sub->add_flag("--desk-scale", desk, "30 x 8 surface and 10 realizations");
        sub->add_option("--set", overrides, "KEY=VALUE override, repeatable");
    };

    auto *run = app.add_subcommand("run", "Monte-Carlo sweep over one parameter for the selected schemes");
    std::string sweep, schemes = "proposed,zf,rp,ff,fd", out_dir = "results";
    int jobs = 1;
    add_common(run);
    run->add_option("--sweep", sweep, "PARAM=v1,v2,...");
    run->add_option("--schemes", schemes, "Comma-separated subset of proposed,zf,rp,ff,fd");
    run->add_option("--out", out_dir, "Output directory for results.csv, aggregate.csv, timing.csv");
    run->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

    auto *heat = app.add_subcommand("heatmap", "Normalized received-power grid for a beam preset");
    std::string preset, out_file = "heatmap.csv";
    add_common(heat);
    heat->add_option("--preset", preset, "steering, focusing or diffraction")->required();
    heat->add_option("--out", out_file, "Output CSV path");
    heat->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

    auto *solve = app.add_subcommand("solve", "Single run of one scheme; prints a JSON summary");
    std::string scheme = "proposed";
    uint64_t seed = 1;
    add_common(solve);
    solve->add_option("--scheme", scheme, "proposed, zf, rp, ff or fd");
    solve->add_option("--seed", seed, "Channel and initialization seed");

    auto *show = app.add_subcommand("config", "Prints the resolved configuration as JSON");
    add_common(show);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        if (e.get_exit_code() == 0)
            return app.exit(e);
        return report(XLRIS_E_PARAM, e.what());
    }

    try
    {
        ConfigPtr cfg = make_config(config_path, desk, overrides);
        if (*run)
            check(xlris_run_sweep(cfg.get(), sweep.c_str(), schemes.c_str(), jobs, out_dir.c_str()));
        else if (*heat)
            check(xlris_run_heatmap(cfg.get(), preset.c_str(), jobs, out_file.c_str()));
        else if (*solve)
        {
            xlris_solution *raw = nullptr;
            check(xlris_solve(cfg.get(), scheme.c_str(), seed, &raw));
            SolutionPtr sol(raw, &xlris_solution_destroy);
            double rate = 0.0, leak = 0.0, dep = 0.0;
            int iters = 0, conv = 0;
            size_t len = 0;
            check(xlris_solution_rate(sol.get(), &rate));
            check(xlris_solution_leakage(sol.get(), &leak));
            check(xlris_solution_min_dep(sol.get(), &dep));
            check(xlris_solution_iterations(sol.get(), &iters));
            check(xlris_solution_converged(sol.get(), &conv));
            check(xlris_solution_trace_length(sol.get(), &len));
            std::vector<double> trace(len);
            check(xlris_solution_rate_trace(sol.get(), trace.data(), len));
            nlohmann::ordered_json out{{"scheme", scheme}, {"seed", seed},          {"rate", rate},
                                       {"leakage", leak},  {"min_dep", dep},       {"iterations", iters},
                                       {"converged", conv != 0}, {"rate_trace", trace}};
            std::cout << out.dump(2) << '\n';
        }
        else
            std::cout << config_text(cfg.get()) << '\n';
    }
    catch (const Failure &f)
    {
        return report(f.status, f.message);
    }
    catch (const std::exception &e)
    {
        return report(XLRIS_E_UNKNOWN, e.what());
    }
    return 0;
}
