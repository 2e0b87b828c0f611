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

#ifndef VENTRIQ_VOLGRID_HPP
#define VENTRIQ_VOLGRID_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace ventriq {

/// Voxel edge lengths in mm.
struct Spacing {
    double dx = 0.5;
    double dy = 0.5;
    double dz = 1.5;

    double voxel_volume() const { return dx * dy * dz; }
    double in_plane_area() const { return dx * dy; }
    bool operator==(const Spacing&) const = default;
};

/// Grid dimensions, z-major (slice, row, column).
struct Dims {
    int nz = 0;
    int ny = 0;
    int nx = 0;

    std::size_t count() const {
        return static_cast<std::size_t>(nz) * static_cast<std::size_t>(ny) *
               static_cast<std::size_t>(nx);
    }
    bool operator==(const Dims&) const = default;
};

inline std::size_t voxel_index(const Dims& d, int z, int y, int x) {
    return (static_cast<std::size_t>(z) * d.ny + y) * d.nx + x;
}

/// Magnitude MRI volume: finite values >= 0, z-major storage.
class IntensityVolume {
public:
    IntensityVolume(Dims dims, Spacing spacing, std::vector<double> voxels);

    const Dims& dims() const { return dims_; }
    const Spacing& spacing() const { return spacing_; }
    std::span<const double> voxels() const { return voxels_; }
    double at(int z, int y, int x) const { return voxels_[voxel_index(dims_, z, y, x)]; }

private:
    Dims dims_;
    Spacing spacing_;
    std::vector<double> voxels_;
};

/// Per-voxel foreground probabilities in [0, 1].
class ProbabilityMap {
public:
    ProbabilityMap(Dims dims, Spacing spacing, std::vector<double> voxels);

    const Dims& dims() const { return dims_; }
    const Spacing& spacing() const { return spacing_; }
    std::span<const double> voxels() const { return voxels_; }
    double at(int z, int y, int x) const { return voxels_[voxel_index(dims_, z, y, x)]; }

private:
    Dims dims_;
    Spacing spacing_;
    std::vector<double> voxels_;
};

/// Binary segmentation mask, voxels in {0, 1}.
class BinaryMask {
public:
    BinaryMask(Dims dims, Spacing spacing, std::vector<std::uint8_t> voxels);

    const Dims& dims() const { return dims_; }
    const Spacing& spacing() const { return spacing_; }
    std::span<const std::uint8_t> voxels() const { return voxels_; }
    bool at(int z, int y, int x) const { return voxels_[voxel_index(dims_, z, y, x)] != 0; }
    std::size_t foreground_count() const;

private:
    Dims dims_;
    Spacing spacing_;
    std::vector<std::uint8_t> voxels_;
};

/// One cardiac phase: mask plus optional intensity image.
struct Phase {
    int index = 0;
    BinaryMask mask;
    std::optional<IntensityVolume> intensity;
};

/// Time-ordered per-phase masks for one cardiac cycle.
/// At least 2 phases; all phases share dims and spacing; phase indices
/// strictly increasing.
class StackSeries {
public:
    explicit StackSeries(std::vector<Phase> phases);

    const std::vector<Phase>& phases() const { return phases_; }
    std::size_t size() const { return phases_.size(); }
    const Dims& dims() const { return phases_.front().mask.dims(); }
    const Spacing& spacing() const { return phases_.front().mask.spacing(); }

private:
    std::vector<Phase> phases_;
};

/// Foreground voxel count times voxel volume, in mm^3. Equals the sum of
/// per-slice areas times dz.
double mask_volume(const BinaryMask& mask);

/// Per-slice foreground areas in mm^2, one entry per z slice.
std::vector<double> slice_areas(const BinaryMask& mask);

/// Trilinear resampling to target_dims. Sample centers sit at (i+0.5)/n of
/// the physical extent on both grids, and the output spacing is rescaled so
/// the physical extent is preserved.
IntensityVolume resample_trilinear(const IntensityVolume& vol, Dims target_dims);

/// Nearest-neighbor mask resampling with the same pixel-center mapping;
/// half-way coordinates round toward the higher index.
BinaryMask resample_mask_nearest(const BinaryMask& mask, Dims target_dims);

/// Min-max normalization to [0, 1]. Constant volumes map to all zeros.
IntensityVolume normalize_minmax(const IntensityVolume& vol);

/// Voxel becomes foreground iff p >= t. t must lie in [0, 1].
BinaryMask threshold(const ProbabilityMap& p, double t = 0.5);

}  // namespace ventriq

#endif
