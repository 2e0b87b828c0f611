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

#ifndef VENTRIQ_CYCLE_HPP
#define VENTRIQ_CYCLE_HPP

#include <optional>
#include <string>
#include <vector>

#include "ventriq/volgrid.hpp"

namespace ventriq {

/// Per-phase scalar summaries of the cycle: cavity volume (mm^3), mesh
/// surface area (mm^2), or the area (mm^2) of the single axial slice whose
/// area varies most over the cycle.
enum class MetricKind { Volume, SurfaceArea, MidSliceArea };

/// "volume" | "surface-area" | "slice-area"
std::string to_string(MetricKind metric);
MetricKind parse_metric(const std::string& name);

/// One metric sampled across the cardiac cycle.
struct CycleSeries {
    MetricKind metric = MetricKind::Volume;
    std::vector<int> phases;
    std::vector<double> values;
    /// Set iff metric == MidSliceArea: the z index the areas come from.
    std::optional<int> mid_slice_index;
};

/// Throws std::invalid_argument unless phases/values have equal length
/// >= 2 and all values are finite and >= 0.
void validate(const CycleSeries& series);

/// The z index whose per-slice area has the highest population variance
/// across phases; ties go to the lowest z.
int select_mid_slice(const StackSeries& series);

/// Evaluate one metric per phase. Masks are used as stored; any
/// morphological cleanup is the caller's job.
CycleSeries build_series(const StackSeries& series, MetricKind metric);

}  // namespace ventriq

#endif
