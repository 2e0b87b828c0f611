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

#ifndef VENTRIQ_PIPELINE_HPP
#define VENTRIQ_PIPELINE_HPP

#include <cstdint>
#include <string>

#include "ventriq/cycle.hpp"
#include "ventriq/fitting.hpp"
#include "ventriq/noise.hpp"
#include "ventriq/volgrid.hpp"

namespace ventriq {

/// Everything the analyze/noise workflows need, mirroring the CLI flags.
/// A JSON config file round-trips losslessly through config_to_json /
/// config_from_json; flags override file values.
struct PipelineConfig {
    MetricKind metric = MetricKind::MidSliceArea;
    FitMethod fit = FitMethod::GP;
    bool interpolated = false;  ///< false = snap EF to acquired phases
    bool postprocess = false;
    double threshold = 0.5;
    NoiseSpec noise{};
    std::uint64_t seed = 0;
    std::string output_format = "json";

    bool operator==(const PipelineConfig&) const = default;
};

/// Strict parse: unknown keys, wrong types, or out-of-range values throw
/// std::invalid_argument. Absent keys keep their defaults.
PipelineConfig config_from_json(const std::string& text);

/// Fixed key order, lossless numbers (shortest round-trip form).
std::string config_to_json(const PipelineConfig& config);

/// analyze workflow output: the series the selection ran on, the volume
/// series the EF came from, and both results.
struct AnalyzeOutput {
    CycleSeries metric_series;
    CycleSeries volume_series;
    PhaseSelection selection;
    EFResult ef;
};

/// optional postprocess -> build_series -> fit/select -> estimate_ef.
/// When the configured metric is not Volume, a volume series is built
/// alongside it: phases are selected on the metric curve and EF is always
/// computed from volumes.
AnalyzeOutput run_analyze(const StackSeries& series, const PipelineConfig& config);

}  // namespace ventriq

#endif
