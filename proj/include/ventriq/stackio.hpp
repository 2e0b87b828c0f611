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

#ifndef VENTRIQ_STACKIO_HPP
#define VENTRIQ_STACKIO_HPP

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ventriq/agreement.hpp"
#include "ventriq/cycle.hpp"
#include "ventriq/fitting.hpp"
#include "ventriq/mesh.hpp"
#include "ventriq/noise.hpp"
#include "ventriq/phantom.hpp"
#include "ventriq/volgrid.hpp"

namespace ventriq {

/// Every I/O failure mode gets its own code so callers can map them to
/// stable exit codes and tests can assert the exact cause.
enum class IoError {
    BadManifest,
    UnknownSchemaVersion,
    MissingFile,
    SizeMismatch,
    NonBinaryMask,
    WriteFailure,
};

class IoException : public std::runtime_error {
public:
    IoException(IoError code, const std::string& message)
        : std::runtime_error(message), code_(code) {}
    IoError code() const { return code_; }

private:
    IoError code_;
};

/// Load a series from a manifest (schema_version "1"): raw little-endian
/// blobs, u8 masks validated to {0, 1}, f32 intensities. Throws
/// IoException with the matching code on any violation.
StackSeries read_stack_series(const std::filesystem::path& manifest_path);

/// Write mask_%03d.raw / int_%03d.raw (numbered by position) plus
/// manifest.json with fixed key order into dir (created if missing).
/// Returns the manifest path. Two writes of the same series produce
/// byte-identical trees.
std::filesystem::path write_stack_series(const StackSeries& series,
                                         const std::filesystem::path& dir);

/// "%.6g" rendering used by every report number.
std::string format_g6(double v);

/// EF report: the result keys in fixed order {ef_percent, v_ed_mm3,
/// v_es_mm3, ed_phase, es_phase, metric, method} followed by a "selection"
/// object with the snap mode, observed values, unsnapped fitted extrema,
/// and the mid-slice index when the metric has one.
std::string ef_report_json(const EFResult& result, const PhaseSelection& selection,
                           bool interpolated, std::optional<int> mid_slice_index);

/// CSV with header "phase,value", one row per phase.
std::string series_csv(const CycleSeries& series);

/// Plot data for the fitted cycle: header "kind,x,y", the observed series
/// rows first, then the 512 fitted curve samples.
std::string curve_csv(const CycleSeries& series, const PhaseSelection& selection);

/// Bland-Altman report with keys {bias, sd, loa_lower, loa_upper, bias_ci,
/// loa_ci_halfwidth, n}.
std::string bland_altman_json(const BlandAltmanReport& report);

/// The agree command's report: the Bland-Altman keys, then md, md_sd, and
/// the proportional-bias slope/flag (null when not computable).
std::string agree_report_json(const BlandAltmanReport& report, const MeanAbsDifference& md,
                              const ProportionalBias* prop);

/// Plot data for a Bland-Altman figure: header "mean,diff".
std::string agree_plot_csv(const PairedMeasurements& pairs);

/// Phantom ground-truth record (voxelized EF and volumes, constructed
/// phases, waveform targets).
std::string ground_truth_json(const GroundTruth& gt, const PhantomSpec& spec);

/// One phase of a prediction-vs-reference mask comparison. Hausdorff
/// values are absent when either operand is empty.
struct MetricsRow {
    int t = 0;
    double dice = 0.0;
    std::optional<double> hausdorff_mm;
    std::optional<double> hausdorff_vox;
    double v_pred_mm3 = 0.0;
    double v_ref_mm3 = 0.0;
};

/// Mask-comparison report: per-phase rows plus mean dice and the worst
/// Hausdorff over the cycle (null when any phase was incomparable).
std::string metrics_report_json(const std::vector<MetricsRow>& rows);

/// Per-stack noise provenance: master snr/seed/model plus one entry per
/// phase with the concrete model and sigma applied.
std::string noise_report_json(const NoiseSpec& spec, const StackSeries& series,
                              const std::vector<NoiseModel>& models,
                              const std::vector<double>& sigmas);

/// pairs CSV: header "subject,reference,estimate" (or the two-column
/// "reference,estimate"), "." decimals. Throws IoException(MissingFile) if
/// absent and std::invalid_argument on malformed content.
PairedMeasurements read_pairs_csv(const std::filesystem::path& path);

/// ASCII STL export ("%.9e" floats), for mesh inspection.
void write_stl(const TriangleMesh& mesh, const std::filesystem::path& path,
               const std::string& name = "ventriq");

/// Write text to path, creating parent directories; IoException(WriteFailure)
/// on failure.
void write_text_file(const std::filesystem::path& path, const std::string& content);

/// Read a whole file; IoException(MissingFile) when absent/unreadable.
std::string read_text_file(const std::filesystem::path& path);

}  // namespace ventriq

#endif
