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
#include "xlris/experiment.hpp"

#include <cstring>
#include <string>

struct xlris_config
{
    xlris::SystemConfig cfg;
};

struct xlris_solution
{
    xlris::Solution sol;
};

namespace
{
    thread_local std::string last_error;

    xlris_status fail(xlris_status s, const char *msg)
    {
        last_error = msg;
        return s;
    }

    template <class F> xlris_status guard(F &&body)
    {
        try
        {
            body();
            last_error.clear();
            return XLRIS_OK;
        }
        catch (const xlris::ConfigError &e)
        {
            return fail(XLRIS_E_CONFIG, e.what());
        }
        catch (const xlris::ParameterError &e)
        {
            return fail(XLRIS_E_PARAM, e.what());
        }
        catch (const xlris::GeometryError &e)
        {
            return fail(XLRIS_E_GEOMETRY, e.what());
        }
        catch (const xlris::InfeasibleError &e)
        {
            return fail(XLRIS_E_INFEASIBLE, e.what());
        }
        catch (const xlris::NumericError &e)
        {
            return fail(XLRIS_E_NUMERIC, e.what());
        }
        catch (const xlris::IoError &e)
        {
            return fail(XLRIS_E_IO, e.what());
        }
        catch (const std::bad_alloc &)
        {
            return fail(XLRIS_E_UNKNOWN, "out of memory");
        }
        catch (const std::exception &e)
        {
            return fail(XLRIS_E_UNKNOWN, e.what());
        }
        catch (...)
        {
            return fail(XLRIS_E_UNKNOWN, "unknown error");
        }
    }

    void need(const void *p, const char *what)
    {
        if (!p)
            throw xlris::ParameterError(std::string(what) + " must not be NULL");
    }
}

extern "C" {

const char *xlris_last_error(void) { return last_error.c_str(); }

const char *xlris_status_name(xlris_status s)
{
    switch (s)
    {
    case XLRIS_OK: return "ok";
    case XLRIS_E_PARAM: return "parameter_error";
    case XLRIS_E_GEOMETRY: return "geometry_error";
    case XLRIS_E_NUMERIC: return "numeric_error";
    case XLRIS_E_INFEASIBLE: return "infeasible";
    case XLRIS_E_CONFIG: return "config_error";
    case XLRIS_E_IO: return "io_error";
    case XLRIS_E_UNKNOWN: break;
    }
    return "unknown_error";
}

const char *xlris_version(void) { return "1.0.0"; }

xlris_status xlris_config_create_default(xlris_config **out)
{
    return guard([&] {
        need(out, "out");
        *out = new xlris_config{};
    });
}

xlris_status xlris_config_load(const char *path, xlris_config **out)
{
    return guard([&] {
        need(path, "path");
        need(out, "out");
        *out = nullptr;
        *out = new xlris_config{xlris::load_config(path)};
    });
}

xlris_status xlris_config_from_json(const char *json, xlris_config **out)
{
    return guard([&] {
        need(json, "json");
        need(out, "out");
        *out = nullptr;
        *out = new xlris_config{xlris::config_from_json(json)};
    });
}

xlris_status xlris_config_set(xlris_config *cfg, const char *key, const char *json_value)
{
    return guard([&] {
        need(cfg, "cfg");
        need(key, "key");
        need(json_value, "json_value");
        xlris::SystemConfig tmp = cfg->cfg;
        xlris::config_set(tmp, key, json_value);
        cfg->cfg = tmp;
    });
}

xlris_status xlris_config_apply_desk_scale(xlris_config *cfg)
{
    return guard([&] {
        need(cfg, "cfg");
        xlris::apply_desk_scale(cfg->cfg);
    });
}

xlris_status xlris_config_to_json(const xlris_config *cfg, char *buf, size_t cap, size_t *needed)
{
    return guard([&] {
        need(cfg, "cfg");
        const std::string text = xlris::config_to_json(cfg->cfg);
        if (needed)
            *needed = text.size() + 1;
        if (buf && cap > 0)
        {
            const size_t n = std::min(cap - 1, text.size());
            std::memcpy(buf, text.data(), n);
            buf[n] = '\0';
        }
    });
}

xlris_status xlris_config_hash(const xlris_config *cfg, uint64_t *out)
{
    return guard([&] {
        need(cfg, "cfg");
        need(out, "out");
        *out = xlris::config_hash(cfg->cfg);
    });
}

void xlris_config_destroy(xlris_config *cfg) { delete cfg; }

xlris_status xlris_max_leakage(double kappa, double sigma_w2, double rho, int m_w, double *out)
{
    return guard([&] {
        need(out, "out");
        const xlris::NoiseUncertainty u{sigma_w2, rho, m_w};
        u.validate();
        *out = xlris::max_leakage(kappa, u);
    });
}

xlris_status xlris_min_dep(double leakage, double sigma_w2, double rho, int m_w, double *out)
{
    return guard([&] {
        need(out, "out");
        const xlris::NoiseUncertainty u{sigma_w2, rho, m_w};
        u.validate();
        *out = xlris::min_dep(leakage, u);
    });
}

xlris_status xlris_rayleigh_distance(double aperture, double aperture_b, double freq_hz, double *out)
{
    return guard([&] {
        need(out, "out");
        *out = xlris::rayleigh_distance(aperture, aperture_b, freq_hz);
    });
}

xlris_status xlris_solve(const xlris_config *cfg, const char *scheme, uint64_t seed, xlris_solution **out)
{
    return guard([&] {
        need(cfg, "cfg");
        need(scheme, "scheme");
        need(out, "out");
        *out = nullptr;
        const auto s = xlris::scheme_from_name(scheme);
        if (!s)
            throw xlris::ParameterError(std::string("unknown scheme '") + scheme + "'");
        *out = new xlris_solution{xlris::run_scheme(cfg->cfg, *s, seed)};
    });
}

xlris_status xlris_solution_rate(const xlris_solution *sol, double *out)
{
    return guard([&] {
        need(sol, "sol");
        need(out, "out");
        *out = sol->sol.rate;
    });
}

xlris_status xlris_solution_leakage(const xlris_solution *sol, double *out)
{
    return guard([&] {
        need(sol, "sol");
        need(out, "out");
        *out = sol->sol.report.leakage;
    });
}

xlris_status xlris_solution_min_dep(const xlris_solution *sol, double *out)
{
    return guard([&] {
        need(sol, "sol");
        need(out, "out");
        *out = sol->sol.report.min_dep;
    });
}

xlris_status xlris_solution_iterations(const xlris_solution *sol, int *out)
{
    return guard([&] {
        need(sol, "sol");
        need(out, "out");
        *out = sol->sol.iterations;
    });
}

xlris_status xlris_solution_converged(const xlris_solution *sol, int *out)
{
    return guard([&] {
        need(sol, "sol");
        need(out, "out");
        *out = sol->sol.converged ? 1 : 0;
    });
}

xlris_status xlris_solution_trace_length(const xlris_solution *sol, size_t *out)
{
    return guard([&] {
        need(sol, "sol");
        need(out, "out");
        *out = sol->sol.trace.size();
    });
}

xlris_status xlris_solution_rate_trace(const xlris_solution *sol, double *out, size_t n)
{
    return guard([&] {
        need(sol, "sol");
        need(out, "out");
        if (n > sol->sol.trace.size())
            throw xlris::ParameterError("n exceeds trace length");
        for (size_t i = 0; i < n; ++i)
            out[i] = sol->sol.trace[i].rate;
    });
}

xlris_status xlris_solution_ris_size(const xlris_solution *sol, size_t *out)
{
    return guard([&] {
        need(sol, "sol");
        need(out, "out");
        *out = size_t(sol->sol.state.v.size());
    });
}

xlris_status xlris_solution_reflection(const xlris_solution *sol, double *out, size_t n)
{
    return guard([&] {
        need(sol, "sol");
        need(out, "out");
        const auto &v = sol->sol.state.v;
        if (n > size_t(v.size()))
            throw xlris::ParameterError("n exceeds surface size");
        for (size_t i = 0; i < n; ++i)
        {
            out[2 * i] = v(Eigen::Index(i)).real();
            out[2 * i + 1] = v(Eigen::Index(i)).imag();
        }
    });
}

void xlris_solution_destroy(xlris_solution *sol) { delete sol; }

xlris_status xlris_run_sweep(const xlris_config *cfg, const char *sweep_spec, const char *schemes, int jobs,
                             const char *out_dir)
{
    return guard([&] {
        need(cfg, "cfg");
        need(out_dir, "out_dir");
        xlris::SweepSpec spec;
        if (sweep_spec && *sweep_spec)
            spec = xlris::parse_sweep(sweep_spec);
        if (schemes && *schemes)
            spec.schemes = xlris::parse_schemes(schemes);
        spec.jobs = jobs;
        spec.validate();
        xlris::write_sweep_outputs(xlris::run_sweep(cfg->cfg, spec), out_dir);
    });
}

xlris_status xlris_run_heatmap(const xlris_config *cfg, const char *preset, int jobs, const char *out_path)
{
    return guard([&] {
        need(cfg, "cfg");
        need(preset, "preset");
        need(out_path, "out_path");
        if (jobs < 1)
            throw xlris::ParameterError("jobs must be >= 1");
        const xlris::HeatmapRun run = xlris::run_heatmap(cfg->cfg, preset, xlris::GridSpec{}, jobs);
        xlris::write_heatmap_csv(run.grid, out_path);
    });
}
}
