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

#include "xlris/experiment.hpp"
#include "xlris/linalg.hpp"
#include "xlris/wmmse.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

namespace xlris
{
    const std::vector<std::string> &sweepable_parameters()
    {
        static const std::vector<std::string> names{"kappa",        "xi",         "n_y",
                                                    "p_max_dbm",    "willie_range_m", "willie_azimuth_rad",
                                                    "bob_range_m",  "m_a",        "m_b",
                                                    "rho_db"};
        return names;
    }

    void SweepSpec::validate() const
    {
        if (!parameter.empty())
        {
            const auto &names = sweepable_parameters();
            if (std::find(names.begin(), names.end(), parameter) == names.end())
                throw ConfigError("sweep: '" + parameter + "' is not a sweepable parameter");
            if (values.empty())
                throw ConfigError("sweep: value list is empty");
        }
        if (schemes.empty())
            throw ConfigError("sweep: scheme list is empty");
        if (jobs < 1)
            throw ConfigError("sweep: jobs must be >= 1");
    }

    namespace
    {
        std::vector<std::string> split(const std::string &s, char sep)
        {
            std::vector<std::string> out;
            std::stringstream ss(s);
            std::string item;
            while (std::getline(ss, item, sep))
                out.push_back(item);
            return out;
        }

        std::string num(double x)
        {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", x);
            return buf;
        }

        std::string csv_field(const std::string &s)
        {
            if (s.find_first_of(",\"\r\n") == std::string::npos)
                return s;
            std::string q = "\"";
            for (char c : s)
            {
                if (c == '"')
                    q += '"';
                q += c;
            }
            return q + "\"";
        }

        std::ofstream open_out(const std::string &path)
        {
            std::ofstream out(path);
            if (!out)
                throw IoError("cannot open output file: " + path);
            return out;
        }

        template <class F> void parallel_for(int count, int jobs, F &&body)
        {
            const int workers = std::max(1, std::min(jobs, count));
            std::atomic<int> next{0};
            auto work = [&]() {
                for (int i = next++; i < count; i = next++)
                    body(i);
            };
            if (workers == 1)
            {
                work();
                return;
            }
            std::vector<std::thread> pool;
            for (int k = 0; k < workers; ++k)
                pool.emplace_back(work);
            for (auto &t : pool)
                t.join();
        }

        // Rank-1 beam in the first stream column
        CMat single_stream(const CVec &w, int streams)
        {
            CMat W = CMat::Zero(w.size(), streams);
            W.col(0) = w;
            return W;
        }
    }

    SweepSpec parse_sweep(const std::string &text)
    {
        const auto eq = text.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ConfigError("sweep: expected PARAM=v1,v2,...");
        SweepSpec s;
        s.parameter = text.substr(0, eq);
        for (const auto &tok : split(text.substr(eq + 1), ','))
        {
            std::size_t used = 0;
            double v = 0.0;
            try
            {
                v = std::stod(tok, &used);
            }
            catch (const std::exception &)
            {
                used = 0;
            }
            if (used == 0 || used != tok.size() || !std::isfinite(v))
                throw ConfigError("sweep: cannot parse value '" + tok + "'");
            s.values.push_back(v);
        }
        s.validate();
        return s;
    }

    std::vector<Scheme> parse_schemes(const std::string &text)
    {
        std::vector<Scheme> out;
        for (const auto &tok : split(text, ','))
        {
            const auto s = scheme_from_name(tok);
            if (!s)
                throw ConfigError("schemes: unknown scheme '" + tok + "'");
            if (std::find(out.begin(), out.end(), *s) == out.end())
                out.push_back(*s);
        }
        if (out.empty())
            throw ConfigError("schemes: empty list");
        return out;
    }

    SystemConfig apply_sweep_value(const SystemConfig &cfg, const std::string &parameter, double value)
    {
        SystemConfig out = cfg;
        if (parameter.empty())
            return out;
        if (parameter == "xi")
            config_set(out, "kappa", num(1.0 - value));
        else
            config_set(out, parameter, num(value));
        return out;
    }

    namespace
    {
        ResultRow run_one(const SystemConfig &cfg, const ChannelSet &ch, Scheme scheme, std::uint64_t seed)
        {
            ResultRow row;
            row.scheme = scheme;
            row.seed = seed;
            row.config_hash = config_hash(cfg);
            const auto t0 = std::chrono::steady_clock::now();
            try
            {
                const Solution sol = run_scheme(cfg, ch, scheme, seed);
                row.rate = sol.rate;
                row.leakage = sol.report.leakage;
                row.min_dep = sol.report.min_dep;
                row.iterations = sol.iterations;
                Problem prob = make_problem(cfg, scheme == Scheme::FF ? far_field_scenario(cfg, ch) : ch);
                evaluate_solution(sol, prob);
                row.status = "ok";
            }
            catch (const InfeasibleError &e)
            {
                row.status = "infeasible";
                row.message = e.what();
            }
            catch (const GeometryError &e)
            {
                row.status = "geometry_error";
                row.message = e.what();
            }
            catch (const NumericError &e)
            {
                row.status = "numeric_error";
                row.message = e.what();
            }
            catch (const std::exception &e)
            {
                row.status = "error";
                row.message = e.what();
            }
            row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            return row;
        }
    }

    SweepResult run_sweep(const SystemConfig &cfg, const SweepSpec &spec)
    {
        cfg.validate();
        spec.validate();
        const std::vector<double> values = spec.parameter.empty() ? std::vector<double>{0.0} : spec.values;
        std::vector<SystemConfig> cfgs;
        for (double x : values)
            cfgs.push_back(apply_sweep_value(cfg, spec.parameter, x));
        const int reals = cfg.realizations;
        const int tasks = int(values.size()) * reals;
        const std::size_t per = spec.schemes.size();
        std::vector<ResultRow> rows(std::size_t(tasks) * per);
        parallel_for(tasks, spec.jobs, [&](int task) {
            const int vi = task / reals, r = task % reals;
            const std::uint64_t seed = derive_seed(cfg.seed, std::uint64_t(vi), std::uint64_t(r));
            ChannelSet ch;
            std::string chan_error;
            try
            {
                Rng rng(derive_seed(seed, 1));
                ch = build_channels(cfgs[vi], rng);
            }
            catch (const std::exception &e)
            {
                chan_error = e.what();
            }
            for (std::size_t k = 0; k < per; ++k)
            {
                ResultRow row;
                if (chan_error.empty())
                    row = run_one(cfgs[vi], ch, spec.schemes[k], seed);
                else
                {
                    row.scheme = spec.schemes[k];
                    row.seed = seed;
                    row.config_hash = config_hash(cfgs[vi]);
                    row.status = "geometry_error";
                    row.message = chan_error;
                }
                row.sweep_param = spec.parameter;
                row.sweep_value = values[vi];
                row.realization = r;
                rows[std::size_t(task) * per + k] = std::move(row);
            }
        });
        SweepResult res;
        res.rows = std::move(rows);
        res.aggregates = aggregate(res.rows);
        return res;
    }

    std::vector<AggregateRow> aggregate(const std::vector<ResultRow> &rows)
    {
        std::vector<AggregateRow> out;
        std::map<std::pair<double, int>, std::size_t> index;
        for (const auto &r : rows)
        {
            const auto key = std::make_pair(r.sweep_value, int(r.scheme));
            auto it = index.find(key);
            if (it == index.end())
            {
                it = index.emplace(key, out.size()).first;
                AggregateRow a;
                a.scheme = r.scheme;
                a.sweep_param = r.sweep_param;
                a.sweep_value = r.sweep_value;
                out.push_back(a);
            }
            AggregateRow &a = out[it->second];
            if (r.status != "ok")
            {
                ++a.failures;
                continue;
            }
            ++a.successes;
            a.mean_rate += r.rate;
            a.mean_leakage += r.leakage;
            a.mean_min_dep += r.min_dep;
            a.mean_iterations += r.iterations;
        }
        for (auto &a : out)
            if (a.successes > 0)
            {
                a.mean_rate /= a.successes;
                a.mean_leakage /= a.successes;
                a.mean_min_dep /= a.successes;
                a.mean_iterations /= a.successes;
            }
        return out;
    }

    void write_sweep_outputs(const SweepResult &res, const std::string &out_dir)
    {
        std::error_code ec;
        std::filesystem::create_directories(out_dir, ec);
        if (ec)
            throw IoError("cannot create output directory: " + out_dir);
        const std::filesystem::path dir(out_dir);
        {
            auto out = open_out((dir / "results.csv").string());
            out << "scheme,sweep_param,sweep_value,realization,seed,config_hash,rate,leakage,min_dep,iterations,status,"
                   "message\n";
            for (const auto &r : res.rows)
                out << scheme_name(r.scheme) << ',' << csv_field(r.sweep_param) << ',' << num(r.sweep_value) << ','
                    << r.realization << ',' << r.seed << ',' << r.config_hash << ',' << num(r.rate) << ','
                    << num(r.leakage) << ',' << num(r.min_dep) << ',' << r.iterations << ',' << r.status << ','
                    << csv_field(r.message) << '\n';
            if (!out)
                throw IoError("failed writing results.csv");
        }
        {
            auto out = open_out((dir / "aggregate.csv").string());
            out << "scheme,sweep_param,sweep_value,successes,failures,mean_rate,mean_leakage,mean_min_dep,"
                   "mean_iterations\n";
            for (const auto &a : res.aggregates)
                out << scheme_name(a.scheme) << ',' << csv_field(a.sweep_param) << ',' << num(a.sweep_value) << ','
                    << a.successes << ',' << a.failures << ',' << num(a.mean_rate) << ',' << num(a.mean_leakage)
                    << ',' << num(a.mean_min_dep) << ',' << num(a.mean_iterations) << '\n';
            if (!out)
                throw IoError("failed writing aggregate.csv");
        }
        {
            auto out = open_out((dir / "timing.csv").string());
            out << "scheme,sweep_value,realization,wall_seconds\n";
            for (const auto &r : res.rows)
                out << scheme_name(r.scheme) << ',' << num(r.sweep_value) << ',' << r.realization << ','
                    << num(r.wall_seconds) << '\n';
            if (!out)
                throw IoError("failed writing timing.csv");
        }
    }

    double feasible_rate(const Problem &prob, const CVec &v, CMat &W)
    {
        const double pw = W.squaredNorm();
        if (pw == 0.0)
            return 0.0;
        double s = std::min(1.0, std::sqrt(prob.p_max / pw));
        const double z = leakage_power(prob.ch.F, v, prob.ch.G, W) * s * s;
        if (z > prob.p_leak)
            s *= prob.p_leak > 0.0 ? std::sqrt(prob.p_leak / z) * (1.0 - 1e-12) : 0.0;
        W *= s;
        return covert_rate(prob.ch.H * v.asDiagonal() * prob.ch.G, W, prob.sigma_b2);
    }

    const std::vector<std::string> &heatmap_presets()
    {
        static const std::vector<std::string> names{"steering", "focusing", "diffraction"};
        return names;
    }

    HeatmapRun run_heatmap(const SystemConfig &cfg, const std::string &preset, const GridSpec &grid, int jobs)
    {
        cfg.validate();
        const auto &names = heatmap_presets();
        if (std::find(names.begin(), names.end(), preset) == names.end())
            throw ConfigError("heatmap: unknown preset '" + preset + "'");
        grid.validate();
        Rng rng(derive_seed(cfg.seed, 1));
        HeatmapRun run;
        run.preset = preset;
        run.channels = build_channels(cfg, rng);
        const ChannelSet &nf = run.channels;
        if (preset == "diffraction")
        {
            const Solution sol = run_scheme(cfg, nf, Scheme::Proposed, cfg.seed);
            run.v = sol.state.v;
            run.W = sol.state.precoder();
            run.rate = sol.rate;
        }
        else if (preset == "focusing")
        {
            const CVec r = near_field_probe(nf.ris, cfg.bob.x(), cfg.bob.y(), cfg.freq_hz).row(0).transpose();
            const FocusingBeam fb = focusing_construction(r, nf.G);
            run.v = fb.v;
            run.W = single_stream(fb.w * std::sqrt(cfg.p_max()), cfg.streams);
            run.rate = feasible_rate(make_problem(cfg, nf), run.v, run.W);
        }
        else
        {
            run.channels = far_field_scenario(cfg, nf);
            const CVec r = run.channels.H.row(0).transpose();
            CVec v = CVec::Ones(nf.ris.count());
            CVec w = (r.transpose() * nf.G).adjoint();
            for (int k = 0; k < 20; ++k)
            {
                if (w.norm() == 0.0)
                    break;
                w.normalize();
                const CVec a = nf.G * w;
                for (Eigen::Index i = 0; i < a.size(); ++i)
                {
                    const cd z = r(i) * a(i);
                    v(i) = z == cd(0.0) ? cd(1.0) : std::conj(z) / std::abs(z);
                }
                w = (r.cwiseProduct(v).transpose() * nf.G).adjoint();
            }
            if (w.norm() > 0.0)
                w.normalize();
            run.v = v;
            run.W = single_stream(w * std::sqrt(cfg.p_max()), cfg.streams);
            run.rate = feasible_rate(make_problem(cfg, run.channels), run.v, run.W);
        }
        run.grid = heatmap(nf.ris, cfg.freq_hz, run.v, nf.G * run.W, grid, jobs);
        return run;
    }
}
