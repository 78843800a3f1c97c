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

#include <unsupported/Eigen/KroneckerProduct>

namespace xlris
{
    Eigen::Vector3d ArrayGeometry::element(int n) const
    {
        const int iy = n / n_z, iz = n % n_z;
        return {0.0, (iy - 0.5 * (n_y - 1)) * spacing, (iz - 0.5 * (n_z - 1)) * spacing};
    }

    double ArrayGeometry::aperture() const
    {
        return std::hypot((n_y - 1) * spacing, (n_z - 1) * spacing);
    }

    CVec ula_response(double theta, int m, double d, double lambda)
    {
        if (m < 1 || d <= 0.0 || lambda <= 0.0)
            throw ParameterError("ula_response: requires M >= 1, d > 0, lambda > 0");
        CVec a(m);
        const double k = 2.0 * pi * d / lambda * std::sin(theta);
        const double s = 1.0 / std::sqrt(double(m));
        for (int i = 0; i < m; ++i)
            a(i) = s * std::polar(1.0, k * i);
        return a;
    }

    CVec upa_response(double theta, double phi, int n_y, int n_z, double d, double lambda)
    {
        if (n_y < 1 || n_z < 1 || d <= 0.0 || lambda <= 0.0)
            throw ParameterError("upa_response: requires N_y, N_z >= 1, d > 0, lambda > 0");
        CVec h(n_y), v(n_z);
        const double kh = 2.0 * pi * d / lambda * std::sin(theta) * std::cos(phi);
        const double kv = 2.0 * pi * d / lambda * std::sin(phi);
        for (int i = 0; i < n_y; ++i)
            h(i) = std::polar(1.0, kh * i);
        for (int i = 0; i < n_z; ++i)
            v(i) = std::polar(1.0, kv * i);
        CVec a = Eigen::kroneckerProduct(h, v);
        return a / std::sqrt(double(n_y * n_z));
    }

    double rayleigh_distance(double aperture, double aperture_b, double freq_hz)
    {
        if (aperture < 0.0 || aperture_b < 0.0 || freq_hz <= 0.0)
            throw ParameterError("rayleigh_distance: requires D >= 0, D_B >= 0, f > 0");
        const double s = aperture + aperture_b;
        return 2.0 * freq_hz * s * s / speed_of_light;
    }

    double ula_aperture(int m, double d) { return (m - 1) * d; }

    double path_loss_alice_ris(double distance)
    {
        if (!(distance > 0.0))
            throw ParameterError("path_loss_alice_ris: distance must be positive");
        return std::pow(10.0, -(69.4 + 24.0 * std::log10(distance)) / 10.0);
    }

    FarFieldParams draw_far_field_params(const SystemConfig &cfg, Rng &rng)
    {
        if (cfg.n_c < 1 || cfg.n_ray < 1)
            throw ParameterError("build_far_field_channel: path count must be positive");
        FarFieldParams p;
        p.chi_ar = path_loss_alice_ris(cfg.alice.range);
        std::uniform_real_distribution<double> centre(-pi / 2.0, pi / 2.0);
        std::normal_distribution<double> jitter(0.0, cfg.angle_spread_deg * pi / 180.0);
        std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
        for (int c = 0; c < cfg.n_c; ++c)
        {
            const double az = centre(rng), el = centre(rng), dep = centre(rng);
            for (int r = 0; r < cfg.n_ray; ++r)
            {
                FarFieldPath path;
                path.aoa_az = az + jitter(rng);
                path.aoa_el = el + jitter(rng);
                path.aod = dep + jitter(rng);
                const double re = gauss(rng);
                path.gain = cd(re, gauss(rng));
                p.paths.push_back(path);
            }
        }
        return p;
    }

    CMat far_field_channel(const FarFieldParams &p, const ArrayGeometry &ris, int m_a, double d_alice, double lambda)
    {
        if (p.paths.empty())
            throw ParameterError("far_field_channel: L_p must be >= 1");
        if (!(p.chi_ar > 0.0))
            throw ParameterError("far_field_channel: chi_ar must be positive");
        const int n = ris.count();
        CMat G = CMat::Zero(n, m_a);
        for (const auto &path : p.paths)
        {
            CVec ar = upa_response(path.aoa_az, path.aoa_el, ris.n_y, ris.n_z, ris.spacing, lambda);
            CVec at = ula_response(path.aod, m_a, d_alice, lambda);
            G.noalias() += path.gain * ar * at.adjoint();
        }
        G *= std::sqrt(double(m_a) * n * p.chi_ar / double(p.paths.size()));
        return G;
    }

    ArrayGeometry ris_geometry(const SystemConfig &cfg)
    {
        return ArrayGeometry{cfg.n_y, cfg.n_z, cfg.d_ris()};
    }

    CMat build_far_field_channel(const SystemConfig &cfg, Rng &rng)
    {
        FarFieldParams p = draw_far_field_params(cfg, rng);
        return far_field_channel(p, ris_geometry(cfg), cfg.m_a, cfg.d_alice(), cfg.lambda());
    }

    CMat build_near_field_los_channel(const ArrayGeometry &ris, const PolarPosition &rx_center, int m_rx,
                                      double freq_hz, double rx_spacing)
    {
        if (m_rx < 1 || ris.count() < 1 || freq_hz <= 0.0)
            throw ParameterError("build_near_field_los_channel: invalid sizes or frequency");
        if (!(rx_center.range > 0.0))
            throw ParameterError("build_near_field_los_channel: range must be positive");
        const int n = ris.count();
        const double k = 2.0 * pi * freq_hz / speed_of_light;
        const double norm = 1.0 / std::sqrt(double(n));
        CMat H(m_rx, n);
        for (int m = 0; m < m_rx; ++m)
        {
            const double off = (m - 0.5 * (m_rx - 1)) * rx_spacing;
            const Eigen::Vector3d q(rx_center.x(), rx_center.y() + off, 0.0);
            const double r_ref = q.norm();
            for (int i = 0; i < n; ++i)
            {
                const double r = (q - ris.element(i)).norm();
                if (r < 1e-9)
                    throw GeometryError("build_near_field_los_channel: receiver coincides with a surface element");
                const double chi = speed_of_light / (4.0 * pi * freq_hz * r);
                H(m, i) = norm * chi * std::polar(1.0, -k * (r - r_ref));
            }
        }
        return H;
    }

    CMat near_field_probe(const ArrayGeometry &ris, double x, double y, double freq_hz)
    {
        PolarPosition p{std::hypot(x, y), std::atan2(y, x)};
        if (!(p.range > 0.0))
            throw GeometryError("near_field_probe: probe at the surface centre");
        return build_near_field_los_channel(ris, p, 1, freq_hz, 0.0);
    }

    CMat far_field_receiver_channel(const ArrayGeometry &ris, const PolarPosition &rx_center, int m_rx,
                                    double freq_hz, double rx_spacing)
    {
        if (!(rx_center.range > 0.0))
            throw ParameterError("far_field_receiver_channel: range must be positive");
        const double lambda = speed_of_light / freq_hz;
        const double chi = lambda / (4.0 * pi * rx_center.range);
        CVec a_rx = ula_response(rx_center.azimuth, m_rx, rx_spacing > 0.0 ? rx_spacing : 0.5 * lambda, lambda);
        CVec a_s = upa_response(rx_center.azimuth, 0.0, ris.n_y, ris.n_z, ris.spacing, lambda);
        return chi * std::sqrt(double(m_rx)) * a_rx * a_s.transpose();
    }

    ChannelSet build_channels(const SystemConfig &cfg, Rng &rng)
    {
        ChannelSet ch;
        ch.ris = ris_geometry(cfg);
        ch.freq_hz = cfg.freq_hz;
        ch.rx_spacing = cfg.d_ris();
        ch.bob = cfg.bob;
        ch.willie = cfg.willie;
        ch.G = build_far_field_channel(cfg, rng);
        ch.H = build_near_field_los_channel(ch.ris, cfg.bob, cfg.m_b, cfg.freq_hz, ch.rx_spacing);
        ch.F = build_near_field_los_channel(ch.ris, cfg.willie, cfg.m_w, cfg.freq_hz, ch.rx_spacing);
        return ch;
    }
}
