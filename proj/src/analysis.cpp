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

#include "xlris/analysis.hpp"
#include "xlris/linalg.hpp"

#include <fstream>
#include <iomanip>
#include <thread>
#include <vector>

namespace xlris
{
    Coherence equivalent_channel_inner_product(const CVec &r1, const CVec &r2, const CVec &v, const CMat &G)
    {
        if (r1.size() != G.rows() || r2.size() != G.rows() || v.size() != G.rows())
            throw ParameterError("equivalent_channel_inner_product: dimension mismatch");
        const CVec e1 = G.transpose() * r1.cwiseProduct(v); // (r1 Theta G)^T
        const CVec e2 = G.transpose() * r2.cwiseProduct(v);
        Coherence c;
        c.inner_product = std::abs(e2.dot(e1));
        const double den = e1.norm() * e2.norm();
        c.coherence = den > 0.0 ? std::min(1.0, c.inner_product / den) : 0.0;
        return c;
    }

    Dispersion focusing_ratio_dispersion(const CVec &r, const CMat &G, const CVec &w)
    {
        if (r.size() != G.rows() || w.size() != G.cols())
            throw ParameterError("focusing_ratio_dispersion: dimension mismatch");
        const CVec a = G * w;
        std::vector<double> ratios;
        Dispersion d;
        for (Eigen::Index i = 0; i < a.size(); ++i)
        {
            const double b = std::abs(r(i) * a(i));
            if (b <= 0.0)
            {
                ++d.excluded;
                continue;
            }
            ratios.push_back(std::norm(a(i)) / b);
        }
        if (ratios.empty())
            return d;
        double mean = 0.0;
        for (double q : ratios)
            mean += q;
        mean /= double(ratios.size());
        double var = 0.0;
        for (double q : ratios)
            var += (q - mean) * (q - mean);
        var /= double(ratios.size());
        d.cv = mean > 0.0 ? std::sqrt(var) / mean : 0.0;
        return d;
    }

    FocusingBeam focusing_construction(const CVec &r, const CMat &G, int max_iter, double tol)
    {
        if (r.size() != G.rows() || G.cols() < 1)
            throw ParameterError("focusing_construction: dimension mismatch");
        const Eigen::CompleteOrthogonalDecomposition<CMat> cod(G);
        const RVec mag = r.cwiseAbs();
        FocusingBeam fb;
        fb.w = G.adjoint() * r.conjugate();
        if (fb.w.norm() == 0.0)
            fb.w = CVec::Ones(G.cols());
        fb.w.normalize();
        double prev = focusing_ratio_dispersion(r, G, fb.w).cv;
        for (int k = 1; k <= max_iter; ++k)
        {
            const CVec a = G * fb.w;
            CVec target(a.size());
            for (Eigen::Index i = 0; i < a.size(); ++i)
                target(i) = mag(i) * (a(i) == cd(0.0) ? cd(1.0) : a(i) / std::abs(a(i)));
            CVec w = cod.solve(target);
            if (w.norm() == 0.0)
                break;
            fb.w = w.normalized();
            fb.iterations = k;
            const double cur = focusing_ratio_dispersion(r, G, fb.w).cv;
            if (cur <= tol || std::abs(prev - cur) <= tol * std::max(1.0, prev))
            {
                prev = cur;
                break;
            }
            prev = cur;
        }
        fb.dispersion = prev;
        const CVec a = G * fb.w;
        fb.v.resize(a.size());
        for (Eigen::Index i = 0; i < a.size(); ++i)
        {
            const cd z = r(i) * a(i);
            fb.v(i) = z == cd(0.0) ? cd(1.0) : std::conj(z) / std::abs(z);
        }
        return fb;
    }

    void GridSpec::validate() const
    {
        if (nx < 1 || ny < 1)
            throw ParameterError("grid: resolution must be positive");
        if (!(x1 >= x0) || !(y1 >= y0) || !std::isfinite(x0) || !std::isfinite(x1) || !std::isfinite(y0) ||
            !std::isfinite(y1))
            throw ParameterError("grid: invalid extents");
    }

    double HeatmapGrid::at(double x, double y) const
    {
        auto nearest = [](double q, double a, double b, int n) {
            if (n <= 1 || b == a)
                return 0;
            const long i = std::lround((q - a) / (b - a) * (n - 1));
            return int(std::clamp<long>(i, 0, n - 1));
        };
        return values(nearest(y, spec.y0, spec.y1, spec.ny), nearest(x, spec.x0, spec.x1, spec.nx));
    }

    HeatmapGrid heatmap(const ArrayGeometry &ris, double freq_hz, const CVec &v, const CMat &GW, const GridSpec &spec,
                        int jobs)
    {
        spec.validate();
        if (v.size() != ris.count() || GW.rows() != ris.count())
            throw ParameterError("heatmap: dimension mismatch");
        const CMat T = v.asDiagonal() * GW;
        HeatmapGrid g;
        g.spec = spec;
        g.values.setZero(spec.ny, spec.nx);
        const int workers = std::max(1, std::min(jobs, spec.ny));
        std::vector<std::exception_ptr> errors(workers);
        auto work = [&](int id) {
            try
            {
                for (int j = id; j < spec.ny; j += workers)
                    for (int i = 0; i < spec.nx; ++i)
                        g.values(j, i) = (near_field_probe(ris, spec.x(i), spec.y(j), freq_hz) * T).squaredNorm();
            }
            catch (...)
            {
                errors[id] = std::current_exception();
            }
        };
        if (workers == 1)
            work(0);
        else
        {
            std::vector<std::thread> pool;
            for (int id = 0; id < workers; ++id)
                pool.emplace_back(work, id);
            for (auto &t : pool)
                t.join();
        }
        for (auto &e : errors)
            if (e)
                std::rethrow_exception(e);
        g.peak_power = g.values.maxCoeff();
        if (g.peak_power > 0.0)
            g.values /= g.peak_power;
        else
            g.zero_field = true;
        return g;
    }

    void write_heatmap_csv(const HeatmapGrid &grid, const std::string &path)
    {
        std::ofstream out(path);
        if (!out)
            throw IoError("cannot open heatmap output: " + path);
        const GridSpec &s = grid.spec;
        out << std::setprecision(17) << "# " << s.x0 << ',' << s.x1 << ',' << s.y0 << ',' << s.y1 << ',' << s.nx << ','
            << s.ny << '\n';
        for (int j = 0; j < s.ny; ++j)
        {
            for (int i = 0; i < s.nx; ++i)
                out << (i ? "," : "") << grid.values(j, i);
            out << '\n';
        }
        if (!out)
            throw IoError("failed writing heatmap output: " + path);
    }
}
