/*
 * Copyright 2026 The ventriq authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "ventriq/phantom.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ventriq/rng.hpp"

namespace ventriq {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_spec(const PhantomSpec& spec) {
    if (spec.n_phases < 2)
        throw std::invalid_argument("PhantomSpec: need at least 2 phases");
    if (!(spec.ef_target > 0.0 && spec.ef_target < 100.0))
        throw std::invalid_argument("PhantomSpec: ef_target must lie in (0, 100)");
    if (!(spec.v_ed_target > 0.0))
        throw std::invalid_argument("PhantomSpec: v_ed_target must be > 0");
    if (!(spec.es_phase_fraction > 0.0 && spec.es_phase_fraction < 1.0))
        throw std::invalid_argument("PhantomSpec: es_phase_fraction must lie in (0, 1)");
    if (spec.wall_thickness < 0)
        throw std::invalid_argument("PhantomSpec: wall_thickness must be >= 0");
    if (!(spec.cavity_intensity >= 0.0 && spec.myocardium_intensity >= 0.0 &&
          spec.background_intensity >= 0.0))
        throw std::invalid_argument("PhantomSpec: intensities must be >= 0");
}

// Cavity volume target at phase t: a cosine waveform warped so the maximum
// V_ED sits exactly at phase 0 and the minimum V_ES exactly at t_es. The
// phase angle runs 0 -> pi over [0, t_es] and pi -> 2 pi over [t_es, P], so
// the curve is strictly decreasing before t_es and strictly increasing
// after it (never reaching V_ED again inside the cycle).
double waveform(int t, int t_es, int n_phases, double v_ed, double v_es) {
    const double phi =
        t <= t_es ? kPi * static_cast<double>(t) / static_cast<double>(t_es)
                  : kPi + kPi * static_cast<double>(t - t_es) /
                              static_cast<double>(n_phases - t_es);
    return v_es + (v_ed - v_es) * (1.0 + std::cos(phi)) / 2.0;
}

// Semi-axis s of an x/y-round ellipsoid with z semi-axis 2s and volume v:
// v = (4/3) pi (2s) s s.
double minor_semi_axis(double v) { return std::cbrt(3.0 * v / (8.0 * kPi)); }

}  // namespace

std::pair<StackSeries, GroundTruth> generate(const PhantomSpec& spec) {
    check_spec(spec);
    const Dims& d = spec.dims;
    const Spacing& sp = spec.spacing;
    const int p = spec.n_phases;
    const int t_es = static_cast<int>(
        std::llround(spec.es_phase_fraction * static_cast<double>(p)));
    if (t_es < 1 || t_es > p - 1)
        throw std::invalid_argument("PhantomSpec: es phase rounds outside (0, P-1)");

    const double v_ed = spec.v_ed_target;
    const double v_es = v_ed * (1.0 - spec.ef_target / 100.0);

    // Sub-voxel jitter keeps the rasterization from aligning with voxel
    // centers the same way in every dataset.
    SplitMix64 engine{spec.seed};
    const double jx = (engine.next_unit() - 0.5) * sp.dx;
    const double jy = (engine.next_unit() - 0.5) * sp.dy;
    const double jz = (engine.next_unit() - 0.5) * sp.dz;
    const double cx = static_cast<double>(d.nx) * sp.dx / 2.0 + jx;
    const double cy = static_cast<double>(d.ny) * sp.dy / 2.0 + jy;
    const double cz = static_cast<double>(d.nz) * sp.dz / 2.0 + jz;

    // The end-diastolic cavity is the largest shape; it must fit the grid.
    const double s_ed = minor_semi_axis(v_ed);
    if (cx - s_ed < 0.0 || cx + s_ed > static_cast<double>(d.nx) * sp.dx ||
        cy - s_ed < 0.0 || cy + s_ed > static_cast<double>(d.ny) * sp.dy ||
        cz - 2.0 * s_ed < 0.0 || cz + 2.0 * s_ed > static_cast<double>(d.nz) * sp.dz)
        throw std::invalid_argument(
            "PhantomSpec: end-diastolic cavity exceeds the grid bounds");

    GroundTruth gt;
    gt.volumes.reserve(p);
    gt.analytic_volumes.reserve(p);

    std::vector<Phase> phases;
    phases.reserve(p);
    const double wx = spec.wall_thickness * sp.dx;
    const double wy = spec.wall_thickness * sp.dy;
    const double wz = spec.wall_thickness * sp.dz;

    for (int t = 0; t < p; ++t) {
        const double v = waveform(t, t_es, p, v_ed, v_es);
        gt.analytic_volumes.push_back(v);
        const double s = minor_semi_axis(v);
        const double ax = s, ay = s, az = 2.0 * s;

        std::vector<std::uint8_t> mask(d.count(), 0);
        std::vector<double> intensity(d.count(), spec.background_intensity);
        std::size_t o = 0;
        for (int z = 0; z < d.nz; ++z) {
            const double pz = (z + 0.5) * sp.dz - cz;
            for (int y = 0; y < d.ny; ++y) {
                const double py = (y + 0.5) * sp.dy - cy;
                for (int x = 0; x < d.nx; ++x, ++o) {
                    const double px = (x + 0.5) * sp.dx - cx;
                    const double rc = (px / ax) * (px / ax) + (py / ay) * (py / ay) +
                                      (pz / az) * (pz / az);
                    if (rc <= 1.0) {
                        mask[o] = 1;
                        intensity[o] = spec.cavity_intensity;
                    } else {
                        const double rs = (px / (ax + wx)) * (px / (ax + wx)) +
                                          (py / (ay + wy)) * (py / (ay + wy)) +
                                          (pz / (az + wz)) * (pz / (az + wz));
                        if (rs <= 1.0) intensity[o] = spec.myocardium_intensity;
                    }
                }
            }
        }

        BinaryMask m(d, sp, std::move(mask));
        gt.volumes.push_back(mask_volume(m));
        phases.push_back(Phase{t, std::move(m), IntensityVolume(d, sp, std::move(intensity))});
    }

    // Voxelized extremes must land where the waveform put them.
    int arg_max = 0, arg_min = 0;
    for (int t = 1; t < p; ++t) {
        if (gt.volumes[t] > gt.volumes[arg_max]) arg_max = t;
        if (gt.volumes[t] < gt.volumes[arg_min]) arg_min = t;
    }
    if (arg_max != 0 || arg_min != t_es)
        throw std::runtime_error(
            "phantom: voxelized volume extremes missed the constructed phases "
            "(ED at " +
            std::to_string(arg_max) + ", ES at " + std::to_string(arg_min) + ")");
    gt.ed_phase = arg_max;
    gt.es_phase = arg_min;
    gt.ef_percent = ground_truth_ef(gt);

    return {StackSeries(std::move(phases)), std::move(gt)};
}

double ground_truth_ef(const GroundTruth& gt) {
    const double v_ed = gt.volumes[static_cast<std::size_t>(gt.ed_phase)];
    const double v_es = gt.volumes[static_cast<std::size_t>(gt.es_phase)];
    return 100.0 * (v_ed - v_es) / v_ed;
}

}  // namespace ventriq
