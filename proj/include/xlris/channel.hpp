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

#ifndef XLRIS_CHANNEL_HPP
#define XLRIS_CHANNEL_HPP

#include "xlris/config.hpp"

#include <random>
#include <vector>

namespace xlris
{
    using Rng = std::mt19937_64;

    // Planar surface on the yz-plane centred at the origin.
    // Element index n = iy * n_z + iz sits at (0, (iy - (n_y-1)/2) d, (iz - (n_z-1)/2) d).
    struct ArrayGeometry
    {
        int n_y = 1;
        int n_z = 1;
        double spacing = 0.0; // m

        int count() const { return n_y * n_z; }
        Eigen::Vector3d element(int n) const;
        double aperture() const; // planar diagonal with (count - 1) * d per axis
    };

    struct FarFieldPath
    {
        cd gain;          // alpha_i
        double aoa_az;    // azimuth of arrival at the surface
        double aoa_el;    // elevation of arrival at the surface
        double aod;       // departure angle at Alice's ULA
    };

    struct FarFieldParams
    {
        double chi_ar = 0.0; // linear average power gain
        std::vector<FarFieldPath> paths;
    };

    struct ChannelSet
    {
        CMat G; // N x M_A
        CMat H; // M_B x N
        CMat F; // M_W x N
        ArrayGeometry ris;
        PolarPosition bob;
        PolarPosition willie;
        double freq_hz = 0.0;
        double rx_spacing = 0.0;
        bool far_field_receivers = false;
    };

    CVec ula_response(double theta, int m, double d, double lambda);
    CVec upa_response(double theta, double phi, int n_y, int n_z, double d, double lambda);

    double rayleigh_distance(double aperture, double aperture_b, double freq_hz);
    double ula_aperture(int m, double d);

    // 10^(-(69.4 + 24 log10 D)/10)
    double path_loss_alice_ris(double distance);

    FarFieldParams draw_far_field_params(const SystemConfig &cfg, Rng &rng);
    CMat far_field_channel(const FarFieldParams &p, const ArrayGeometry &ris, int m_a, double d_alice, double lambda);
    CMat build_far_field_channel(const SystemConfig &cfg, Rng &rng);

    // Rows are receive elements at (x, y + (m - (M-1)/2) d_rx, 0)
    CMat build_near_field_los_channel(const ArrayGeometry &ris, const PolarPosition &rx_center, int m_rx,
                                      double freq_hz, double rx_spacing);

    // Single probe point on the xy-plane; 1 x N row
    CMat near_field_probe(const ArrayGeometry &ris, double x, double y, double freq_hz);

    // Rank-1 receiver channel: centre-distance free-space gain times a_rx(theta) a_surface(theta)^T
    CMat far_field_receiver_channel(const ArrayGeometry &ris, const PolarPosition &rx_center, int m_rx,
                                    double freq_hz, double rx_spacing);

    ArrayGeometry ris_geometry(const SystemConfig &cfg);

    // Draws G then builds the deterministic H and F
    ChannelSet build_channels(const SystemConfig &cfg, Rng &rng);
}

#endif
