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

#include "xlris/config.hpp"

#include <json.hpp>

#include <fstream>
#include <functional>
#include <sstream>
#include <variant>
#include <vector>

namespace xlris
{
    namespace
    {
        using Field = std::variant<int *, double *, std::uint64_t *>;
        struct Entry
        {
            const char *key;
            std::function<Field(SystemConfig &)> ref;
        };

        // Canonical key order; serialization follows this table
        const std::vector<Entry> &key_table()
        {
            static const std::vector<Entry> table = {
                {"m_a", [](SystemConfig &c) -> Field { return &c.m_a; }},
                {"m_b", [](SystemConfig &c) -> Field { return &c.m_b; }},
                {"m_w", [](SystemConfig &c) -> Field { return &c.m_w; }},
                {"m_rf", [](SystemConfig &c) -> Field { return &c.m_rf; }},
                {"streams", [](SystemConfig &c) -> Field { return &c.streams; }},
                {"n_y", [](SystemConfig &c) -> Field { return &c.n_y; }},
                {"n_z", [](SystemConfig &c) -> Field { return &c.n_z; }},
                {"n_c", [](SystemConfig &c) -> Field { return &c.n_c; }},
                {"n_ray", [](SystemConfig &c) -> Field { return &c.n_ray; }},
                {"freq_hz", [](SystemConfig &c) -> Field { return &c.freq_hz; }},
                {"sigma_b2_dbm", [](SystemConfig &c) -> Field { return &c.sigma_b2_dbm; }},
                {"sigma_w2_dbm", [](SystemConfig &c) -> Field { return &c.sigma_w2_dbm; }},
                {"rho_db", [](SystemConfig &c) -> Field { return &c.rho_db; }},
                {"kappa", [](SystemConfig &c) -> Field { return &c.kappa; }},
                {"p_max_dbm", [](SystemConfig &c) -> Field { return &c.p_max_dbm; }},
                {"d_a_lambda", [](SystemConfig &c) -> Field { return &c.d_a_lambda; }},
                {"d_x_lambda", [](SystemConfig &c) -> Field { return &c.d_x_lambda; }},
                {"angle_spread_deg", [](SystemConfig &c) -> Field { return &c.angle_spread_deg; }},
                {"alice_range_m", [](SystemConfig &c) -> Field { return &c.alice.range; }},
                {"alice_azimuth_rad", [](SystemConfig &c) -> Field { return &c.alice.azimuth; }},
                {"bob_range_m", [](SystemConfig &c) -> Field { return &c.bob.range; }},
                {"bob_azimuth_rad", [](SystemConfig &c) -> Field { return &c.bob.azimuth; }},
                {"willie_range_m", [](SystemConfig &c) -> Field { return &c.willie.range; }},
                {"willie_azimuth_rad", [](SystemConfig &c) -> Field { return &c.willie.azimuth; }},
                {"ao_eps", [](SystemConfig &c) -> Field { return &c.tol.ao_eps; }},
                {"ao_max_iter", [](SystemConfig &c) -> Field { return &c.tol.ao_max_iter; }},
                {"wmmse_eps", [](SystemConfig &c) -> Field { return &c.tol.wmmse_eps; }},
                {"wmmse_max_iter", [](SystemConfig &c) -> Field { return &c.tol.wmmse_max_iter; }},
                {"bisection_rel_tol", [](SystemConfig &c) -> Field { return &c.tol.bisection_rel_tol; }},
                {"hybrid_eps", [](SystemConfig &c) -> Field { return &c.tol.hybrid_eps; }},
                {"hybrid_max_iter", [](SystemConfig &c) -> Field { return &c.tol.hybrid_max_iter; }},
                {"mo_eps", [](SystemConfig &c) -> Field { return &c.tol.mo_eps; }},
                {"mo_max_iter", [](SystemConfig &c) -> Field { return &c.tol.mo_max_iter; }},
                {"admm_eps", [](SystemConfig &c) -> Field { return &c.tol.admm_eps; }},
                {"admm_max_iter", [](SystemConfig &c) -> Field { return &c.tol.admm_max_iter; }},
                {"admm_rho", [](SystemConfig &c) -> Field { return &c.tol.admm_rho; }},
                {"admm_dual_step", [](SystemConfig &c) -> Field { return &c.tol.admm_dual_step; }},
                {"seed", [](SystemConfig &c) -> Field { return &c.seed; }},
                {"realizations", [](SystemConfig &c) -> Field { return &c.realizations; }},
            };
            return table;
        }

        void assign(SystemConfig &cfg, const std::string &key, const nlohmann::json &val)
        {
            for (const auto &e : key_table())
            {
                if (key != e.key)
                    continue;
                Field f = e.ref(cfg);
                if (auto pi = std::get_if<int *>(&f))
                {
                    if (!val.is_number_integer())
                        throw ConfigError("config field '" + key + "' must be an integer");
                    **pi = val.get<int>();
                }
                else if (auto pd = std::get_if<double *>(&f))
                {
                    if (!val.is_number())
                        throw ConfigError("config field '" + key + "' must be a number");
                    **pd = val.get<double>();
                }
                else
                {
                    if (!val.is_number_unsigned() && !(val.is_number_integer() && val.get<long long>() >= 0))
                        throw ConfigError("config field '" + key + "' must be a non-negative integer");
                    **std::get_if<std::uint64_t *>(&f) = val.get<std::uint64_t>();
                }
                return;
            }
            throw ConfigError("unknown config field '" + key + "'");
        }

        void require(bool ok, const std::string &field, const std::string &what)
        {
            if (!ok)
                throw ConfigError("config field '" + field + "' violates: " + what);
        }
    }

    void SystemConfig::validate() const
    {
        require(m_a >= 1, "m_a", "m_a >= 1");
        require(m_b >= 1, "m_b", "m_b >= 1");
        require(m_w >= 1, "m_w", "m_w >= 1");
        require(streams >= 1, "streams", "streams >= 1");
        require(m_rf >= streams, "m_rf", "streams <= m_rf");
        require(m_rf <= m_a, "m_rf", "m_rf <= m_a");
        require(streams <= m_b, "streams", "streams <= m_b");
        require(n_y >= 1, "n_y", "n_y >= 1");
        require(n_z >= 1, "n_z", "n_z >= 1");
        require(n_c >= 1, "n_c", "n_c >= 1");
        require(n_ray >= 1, "n_ray", "n_ray >= 1");
        require(freq_hz > 0.0, "freq_hz", "freq_hz > 0");
        require(rho_db > 0.0, "rho_db", "rho_db > 0");
        require(kappa >= 0.0 && kappa < 1.0, "kappa", "0 <= kappa < 1");
        require(d_a_lambda > 0.0, "d_a_lambda", "d_a_lambda > 0");
        require(d_x_lambda > 0.0, "d_x_lambda", "d_x_lambda > 0");
        require(angle_spread_deg >= 0.0, "angle_spread_deg", "angle_spread_deg >= 0");
        require(alice.range > 0.0, "alice_range_m", "alice_range_m > 0");
        require(bob.range > 0.0, "bob_range_m", "bob_range_m > 0");
        require(willie.range > 0.0, "willie_range_m", "willie_range_m > 0");
        require(tol.ao_eps > 0.0 && tol.ao_max_iter >= 1, "ao_eps", "ao_eps > 0 and ao_max_iter >= 1");
        require(tol.wmmse_eps > 0.0 && tol.wmmse_max_iter >= 1, "wmmse_eps", "wmmse_eps > 0 and wmmse_max_iter >= 1");
        require(tol.bisection_rel_tol > 0.0, "bisection_rel_tol", "bisection_rel_tol > 0");
        require(tol.hybrid_eps > 0.0 && tol.hybrid_max_iter >= 1, "hybrid_eps", "hybrid_eps > 0 and hybrid_max_iter >= 1");
        require(tol.mo_eps > 0.0 && tol.mo_max_iter >= 1, "mo_eps", "mo_eps > 0 and mo_max_iter >= 1");
        require(tol.admm_eps > 0.0 && tol.admm_max_iter >= 1, "admm_eps", "admm_eps > 0 and admm_max_iter >= 1");
        require(tol.admm_rho > 0.0, "admm_rho", "admm_rho > 0");
        require(tol.admm_dual_step > 0.0, "admm_dual_step", "admm_dual_step > 0");
        require(realizations >= 1, "realizations", "realizations >= 1");
    }

    void apply_desk_scale(SystemConfig &cfg)
    {
        cfg.n_y = 30;
        cfg.n_z = 8;
        cfg.realizations = 10;
    }

    SystemConfig config_from_json(const std::string &text)
    {
        SystemConfig cfg;
        std::string trimmed = text;
        trimmed.erase(0, trimmed.find_first_not_of(" \t\r\n"));
        if (trimmed.empty())
            return cfg;
        nlohmann::json j;
        try
        {
            j = nlohmann::json::parse(text);
        }
        catch (const nlohmann::json::parse_error &e)
        {
            throw ConfigError(std::string("config parse error: ") + e.what());
        }
        if (!j.is_object())
            throw ConfigError("config must be a flat JSON object");
        for (auto it = j.begin(); it != j.end(); ++it)
        {
            if (it.value().is_object() || it.value().is_array())
                throw ConfigError("config field '" + it.key() + "' must be a scalar");
            assign(cfg, it.key(), it.value());
        }
        cfg.validate();
        return cfg;
    }

    std::string config_to_json(const SystemConfig &cfg)
    {
        SystemConfig c = cfg;
        nlohmann::ordered_json j = nlohmann::ordered_json::object();
        for (const auto &e : key_table())
        {
            Field f = e.ref(c);
            if (auto pi = std::get_if<int *>(&f))
                j[e.key] = **pi;
            else if (auto pd = std::get_if<double *>(&f))
                j[e.key] = **pd;
            else
                j[e.key] = **std::get_if<std::uint64_t *>(&f);
        }
        return j.dump(2);
    }

    SystemConfig load_config(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw IoError("cannot open config file '" + path + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        return config_from_json(ss.str());
    }

    void config_set(SystemConfig &cfg, const std::string &key, const std::string &json_value)
    {
        nlohmann::json v;
        try
        {
            v = nlohmann::json::parse(json_value);
        }
        catch (const nlohmann::json::parse_error &)
        {
            throw ConfigError("config field '" + key + "': value is not a JSON scalar");
        }
        SystemConfig trial = cfg;
        assign(trial, key, v);
        trial.validate();
        cfg = trial;
    }

    std::uint64_t config_hash(const SystemConfig &cfg)
    {
        const std::string s = config_to_json(cfg);
        std::uint64_t h = 1469598103934665603ULL;
        for (unsigned char ch : s)
        {
            h ^= ch;
            h *= 1099511628211ULL;
        }
        return h;
    }

    std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b, std::uint64_t c)
    {
        // splitmix64 finalizer chained over the stream indices
        auto mix = [](std::uint64_t z) {
            z += 0x9e3779b97f4a7c15ULL;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            return z ^ (z >> 31);
        };
        std::uint64_t h = mix(master);
        h = mix(h ^ a);
        h = mix(h ^ b);
        h = mix(h ^ c);
        return h;
    }
}
