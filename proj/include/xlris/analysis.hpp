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

#ifndef XLRIS_ANALYSIS_HPP
#define XLRIS_ANALYSIS_HPP

#include "xlris/channel.hpp"

#include <string>

namespace xlris
{
    // Rows r1, r2 (1 x N receive channels, passed as length-N vectors)
    struct Coherence
    {
        double inner_product = 0.0; // |r1 Theta G G^H Theta^H r2^H|
        double coherence = 0.0;     // in [0, 1]
    };
    Coherence equivalent_channel_inner_product(const CVec &r1, const CVec &r2, const CVec &v, const CMat &G);

    // Coefficient of variation of |a_i|^2 / |b_i| with a = G w, b_i = r_i a_i; zero b_i excluded
    struct Dispersion
    {
        double cv = 0.0;
        int excluded = 0;
    };
    Dispersion focusing_ratio_dispersion(const CVec &r, const CMat &G, const CVec &w);

    // w with |G w| proportional to |r| (alternating projections) and v co-phasing r_i (G w)_i; ||w|| = 1
    struct FocusingBeam
    {
        CVec w;
        CVec v;
        double dispersion = 0.0;
        int iterations = 0;
    };
    FocusingBeam focusing_construction(const CVec &r, const CMat &G, int max_iter = 500, double tol = 1e-12);

    struct GridSpec
    {
        double x0 = 0.25, x1 = 25.0; // m
        double y0 = 0.0, y1 = 25.0;  // m
        int nx = 200, ny = 200;

        void validate() const;
        double x(int i) const { return nx > 1 ? x0 + (x1 - x0) * i / (nx - 1) : x0; }
        double y(int j) const { return ny > 1 ? y0 + (y1 - y0) * j / (ny - 1) : y0; }
    };

    struct HeatmapGrid
    {
        GridSpec spec;
        Eigen::MatrixXd values; // ny x nx, row j holds y(j); max 1 unless zero_field
        double peak_power = 0.0;
        bool zero_field = false;

        // Value at the grid point nearest to (x, y)
        double at(double x, double y) const;
    };

    // Single-antenna probe power |h(p) Theta T|^2 per grid point, T = G W (N x L), normalised to the grid max
    HeatmapGrid heatmap(const ArrayGeometry &ris, double freq_hz, const CVec &v, const CMat &GW, const GridSpec &spec,
                        int jobs = 1);

    // "# x0,x1,y0,y1,nx,ny" then ny rows of nx values
    void write_heatmap_csv(const HeatmapGrid &grid, const std::string &path);
}

#endif
