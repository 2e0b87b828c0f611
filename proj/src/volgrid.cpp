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

#include "ventriq/volgrid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ventriq {

namespace {

void check_dims(const Dims& d) {
    if (d.nz <= 0 || d.ny <= 0 || d.nx <= 0)
        throw std::invalid_argument("grid dims must be positive, got (" +
                                    std::to_string(d.nz) + "," + std::to_string(d.ny) + "," +
                                    std::to_string(d.nx) + ")");
}

void check_spacing(const Spacing& s) {
    if (!(s.dx > 0.0) || !(s.dy > 0.0) || !(s.dz > 0.0))
        throw std::invalid_argument("spacing components must be positive");
}

void check_count(const Dims& d, std::size_t n) {
    if (d.count() != n)
        throw std::invalid_argument("voxel count " + std::to_string(n) +
                                    " does not match dims product " + std::to_string(d.count()));
}

}  // namespace

IntensityVolume::IntensityVolume(Dims dims, Spacing spacing, std::vector<double> voxels)
    : dims_(dims), spacing_(spacing), voxels_(std::move(voxels)) {
    check_dims(dims_);
    check_spacing(spacing_);
    check_count(dims_, voxels_.size());
    for (double v : voxels_)
        if (!std::isfinite(v) || v < 0.0)
            throw std::invalid_argument("intensity voxels must be finite and >= 0");
}

ProbabilityMap::ProbabilityMap(Dims dims, Spacing spacing, std::vector<double> voxels)
    : dims_(dims), spacing_(spacing), voxels_(std::move(voxels)) {
    check_dims(dims_);
    check_spacing(spacing_);
    check_count(dims_, voxels_.size());
    for (double v : voxels_)
        if (!(v >= 0.0) || !(v <= 1.0))
            throw std::invalid_argument("probability voxels must lie in [0,1]");
}

BinaryMask::BinaryMask(Dims dims, Spacing spacing, std::vector<std::uint8_t> voxels)
    : dims_(dims), spacing_(spacing), voxels_(std::move(voxels)) {
    check_dims(dims_);
    check_spacing(spacing_);
    check_count(dims_, voxels_.size());
    for (std::uint8_t v : voxels_)
        if (v > 1) throw std::invalid_argument("mask voxels must be 0 or 1");
}

std::size_t BinaryMask::foreground_count() const {
    std::size_t n = 0;
    for (std::uint8_t v : voxels_) n += v;
    return n;
}

StackSeries::StackSeries(std::vector<Phase> phases) : phases_(std::move(phases)) {
    if (phases_.size() < 2)
        throw std::invalid_argument("a stack series needs at least 2 phases");
    const Dims& d = phases_.front().mask.dims();
    const Spacing& s = phases_.front().mask.spacing();
    int prev = phases_.front().index;
    for (std::size_t i = 0; i < phases_.size(); ++i) {
        const Phase& p = phases_[i];
        if (!(p.mask.dims() == d) || !(p.mask.spacing() == s))
            throw std::invalid_argument("all phases must share dims and spacing");
        if (p.intensity &&
            (!(p.intensity->dims() == d) || !(p.intensity->spacing() == s)))
            throw std::invalid_argument("phase intensity dims/spacing must match the masks");
        if (i > 0 && p.index <= prev)
            throw std::invalid_argument("phase indices must be strictly increasing");
        prev = p.index;
    }
}

double mask_volume(const BinaryMask& mask) {
    return static_cast<double>(mask.foreground_count()) * mask.spacing().voxel_volume();
}

std::vector<double> slice_areas(const BinaryMask& mask) {
    const Dims& d = mask.dims();
    const double pixel_area = mask.spacing().in_plane_area();
    std::vector<double> areas(static_cast<std::size_t>(d.nz), 0.0);
    auto vox = mask.voxels();
    const std::size_t slice_size = static_cast<std::size_t>(d.ny) * d.nx;
    for (int z = 0; z < d.nz; ++z) {
        std::size_t count = 0;
        const std::size_t base = static_cast<std::size_t>(z) * slice_size;
        for (std::size_t i = 0; i < slice_size; ++i) count += vox[base + i];
        areas[z] = static_cast<double>(count) * pixel_area;
    }
    return areas;
}

namespace {

// Pixel-center coordinate of target sample t on a source axis of length n
// being resampled to length m: both grids cover the same physical extent,
// samples at (i+0.5)/len of it.
inline double source_coord(int t, int n, int m) {
    return (t + 0.5) * (static_cast<double>(n) / m) - 0.5;
}

}  // namespace

IntensityVolume resample_trilinear(const IntensityVolume& vol, Dims target_dims) {
    check_dims(target_dims);
    const Dims& sd = vol.dims();
    const Spacing& ss = vol.spacing();
    Spacing ts{ss.dx * sd.nx / target_dims.nx, ss.dy * sd.ny / target_dims.ny,
               ss.dz * sd.nz / target_dims.nz};

    std::vector<double> out(target_dims.count());
    // Per-axis index/weight pairs, clamped at the grid edge.
    auto axis_lerp = [](int t, int n, int m, int& i0, int& i1, double& f) {
        double c = source_coord(t, n, m);
        if (c <= 0.0) { i0 = i1 = 0; f = 0.0; return; }
        if (c >= n - 1) { i0 = i1 = n - 1; f = 0.0; return; }
        i0 = static_cast<int>(c);
        i1 = i0 + 1;
        f = c - i0;
    };

    std::size_t o = 0;
    for (int z = 0; z < target_dims.nz; ++z) {
        int z0, z1; double fz;
        axis_lerp(z, sd.nz, target_dims.nz, z0, z1, fz);
        for (int y = 0; y < target_dims.ny; ++y) {
            int y0, y1; double fy;
            axis_lerp(y, sd.ny, target_dims.ny, y0, y1, fy);
            for (int x = 0; x < target_dims.nx; ++x, ++o) {
                int x0, x1; double fx;
                axis_lerp(x, sd.nx, target_dims.nx, x0, x1, fx);
                const double c00 = vol.at(z0, y0, x0) * (1 - fx) + vol.at(z0, y0, x1) * fx;
                const double c01 = vol.at(z0, y1, x0) * (1 - fx) + vol.at(z0, y1, x1) * fx;
                const double c10 = vol.at(z1, y0, x0) * (1 - fx) + vol.at(z1, y0, x1) * fx;
                const double c11 = vol.at(z1, y1, x0) * (1 - fx) + vol.at(z1, y1, x1) * fx;
                const double c0 = c00 * (1 - fy) + c01 * fy;
                const double c1 = c10 * (1 - fy) + c11 * fy;
                out[o] = c0 * (1 - fz) + c1 * fz;
            }
        }
    }
    return IntensityVolume(target_dims, ts, std::move(out));
}

BinaryMask resample_mask_nearest(const BinaryMask& mask, Dims target_dims) {
    check_dims(target_dims);
    const Dims& sd = mask.dims();
    const Spacing& ss = mask.spacing();
    Spacing ts{ss.dx * sd.nx / target_dims.nx, ss.dy * sd.ny / target_dims.ny,
               ss.dz * sd.nz / target_dims.nz};

    auto nearest = [](int t, int n, int m) {
        int i = static_cast<int>(std::floor(source_coord(t, n, m) + 0.5));
        return std::clamp(i, 0, n - 1);
    };

    std::vector<std::uint8_t> out(target_dims.count());
    std::size_t o = 0;
    for (int z = 0; z < target_dims.nz; ++z) {
        const int zs = nearest(z, sd.nz, target_dims.nz);
        for (int y = 0; y < target_dims.ny; ++y) {
            const int ys = nearest(y, sd.ny, target_dims.ny);
            for (int x = 0; x < target_dims.nx; ++x, ++o)
                out[o] = mask.at(zs, ys, nearest(x, sd.nx, target_dims.nx)) ? 1 : 0;
        }
    }
    return BinaryMask(target_dims, ts, std::move(out));
}

IntensityVolume normalize_minmax(const IntensityVolume& vol) {
    auto vox = vol.voxels();
    double lo = vox[0], hi = vox[0];
    for (double v : vox) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    std::vector<double> out(vox.size());
    if (hi == lo) {
        // constant volume: all zeros by convention
        return IntensityVolume(vol.dims(), vol.spacing(), std::move(out));
    }
    const double range = hi - lo;
    for (std::size_t i = 0; i < vox.size(); ++i) out[i] = (vox[i] - lo) / range;
    return IntensityVolume(vol.dims(), vol.spacing(), std::move(out));
}

BinaryMask threshold(const ProbabilityMap& p, double t) {
    if (!(t >= 0.0) || !(t <= 1.0))
        throw std::invalid_argument("threshold must lie in [0,1]");
    auto vox = p.voxels();
    std::vector<std::uint8_t> out(vox.size());
    for (std::size_t i = 0; i < vox.size(); ++i) out[i] = vox[i] >= t ? 1 : 0;
    return BinaryMask(p.dims(), p.spacing(), std::move(out));
}

}  // namespace ventriq
