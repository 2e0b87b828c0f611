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

#ifndef VENTRIQ_PHANTOM_HPP
#define VENTRIQ_PHANTOM_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "ventriq/volgrid.hpp"

namespace ventriq {

/// Synthetic beating-LV dataset parameters. The cavity is a 2:1:1
/// ellipsoid (long axis along z) whose volume follows a cosine waveform
/// with its maximum at phase 0 and minimum at round(P * es_phase_fraction).
struct PhantomSpec {
    Dims dims{12, 86, 98};
    Spacing spacing{0.5, 0.5, 1.5};
    int n_phases = 13;
    double v_ed_target = 500.0;  ///< analytic end-diastolic volume, mm^3
    double ef_target = 55.0;     ///< analytic ejection fraction, percent
    double es_phase_fraction = 0.4;
    int wall_thickness = 3;  ///< myocardial shell, voxels per axis
    double cavity_intensity = 300.0;
    double myocardium_intensity = 150.0;
    double background_intensity = 30.0;
    std::uint64_t seed = 0;  ///< drives the sub-voxel center jitter
};

/// What the generator knows exactly. EF comes from the voxelized volumes
/// (what a perfect downstream pipeline can recover), not the analytic ones.
struct GroundTruth {
    std::vector<double> volumes;           ///< voxelized cavity volume per phase, mm^3
    std::vector<double> analytic_volumes;  ///< waveform targets v(t), mm^3
    int ed_phase = 0;
    int es_phase = 0;
    double ef_percent = 0.0;
};

/// Deterministic for a given PhantomSpec. Throws std::invalid_argument
/// when a field is out of range or the end-diastolic cavity cannot fit in the
/// grid, and std::runtime_error if voxelization fails to place the volume
/// extremes at the constructed ED/ES phases.
std::pair<StackSeries, GroundTruth> generate(const PhantomSpec& spec);

/// 100 (V_ED - V_ES) / V_ED over the voxelized volumes.
double ground_truth_ef(const GroundTruth& gt);

}  // namespace ventriq

#endif
