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

#include "ventriq/stackio.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <utility>

#include <json.hpp>

namespace ventriq {
namespace {

static_assert(std::endian::native == std::endian::little,
              "raw stack blobs are little-endian; big-endian hosts are unsupported");

using ordered_json = nlohmann::ordered_json;

constexpr std::size_t kMaxVoxels = 1u << 30;  // sanity cap on manifest-declared grids

std::string phase_file_name(const char* stem, std::size_t ordinal) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s_%03lu.raw", stem, static_cast<unsigned long>(ordinal));
    return buf;
}

[[noreturn]] void bad_manifest(const std::filesystem::path& path, const std::string& detail) {
    throw IoException(IoError::BadManifest, path.string() + ": " + detail);
}

std::vector<std::uint8_t> read_blob(const std::filesystem::path& path,
                                    std::size_t expected_bytes) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoException(IoError::MissingFile, "cannot open blob file: " + path.string());
    }
    std::vector<std::uint8_t> bytes(expected_bytes);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(expected_bytes));
    const auto got = static_cast<std::size_t>(in.gcount());
    if (got != expected_bytes) {
        throw IoException(IoError::SizeMismatch,
                          path.string() + ": expected " + std::to_string(expected_bytes) +
                              " bytes, found " + std::to_string(got));
    }
    char extra = 0;
    in.read(&extra, 1);
    if (in.gcount() != 0) {
        throw IoException(IoError::SizeMismatch,
                          path.string() + ": file is larger than the expected " +
                              std::to_string(expected_bytes) + " bytes");
    }
    return bytes;
}

void write_blob(const std::filesystem::path& path, const void* data, std::size_t bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoException(IoError::WriteFailure, "cannot open for writing: " + path.string());
    }
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(bytes));
    out.flush();
    if (!out) {
        throw IoException(IoError::WriteFailure, "write failed: " + path.string());
    }
}

double require_finite_number(const ordered_json& j, const std::filesystem::path& path,
                             const char* what) {
    if (!j.is_number()) bad_manifest(path, std::string(what) + " must be a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) bad_manifest(path, std::string(what) + " must be finite");
    return v;
}

bool parse_strict_double(const std::string& text, double& out) {
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    fields.push_back(current);
    for (std::string& f : fields) {
        const auto begin = f.find_first_not_of(" \t\r");
        const auto end = f.find_last_not_of(" \t\r");
        f = begin == std::string::npos ? std::string() : f.substr(begin, end - begin + 1);
    }
    return fields;
}

std::string json_array_g6(const std::vector<double>& values) {
    std::string s = "[";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) s += ", ";
        s += format_g6(values[i]);
    }
    s += "]";
    return s;
}

std::string opt_g6(const std::optional<double>& v) {
    return v.has_value() ? format_g6(*v) : std::string("null");
}

std::array<double, 3> triangle_normal(const TriangleMesh& mesh,
                                      const std::array<std::uint32_t, 3>& tri) {
    const auto& a = mesh.vertices[tri[0]];
    const auto& b = mesh.vertices[tri[1]];
    const auto& c = mesh.vertices[tri[2]];
    const double ux = b[0] - a[0], uy = b[1] - a[1], uz = b[2] - a[2];
    const double vx = c[0] - a[0], vy = c[1] - a[1], vz = c[2] - a[2];
    std::array<double, 3> n{uy * vz - uz * vy, uz * vx - ux * vz, ux * vy - uy * vx};
    const double len = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
    if (len > 0.0) {
        n[0] /= len;
        n[1] /= len;
        n[2] /= len;
    } else {
        n = {0.0, 0.0, 0.0};
    }
    return n;
}

}  // namespace

std::string format_g6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoException(IoError::MissingFile, "cannot open file: " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) {
        throw IoException(IoError::MissingFile, "read failed: " + path.string());
    }
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) {
            throw IoException(IoError::WriteFailure,
                              "cannot create directory: " + path.parent_path().string());
        }
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoException(IoError::WriteFailure, "cannot open for writing: " + path.string());
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
        throw IoException(IoError::WriteFailure, "write failed: " + path.string());
    }
}

StackSeries read_stack_series(const std::filesystem::path& manifest_path) {
    const std::string text = read_text_file(manifest_path);
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        bad_manifest(manifest_path, std::string("not valid JSON: ") + e.what());
    }
    if (!j.is_object()) bad_manifest(manifest_path, "top-level value must be an object");

    if (!j.contains("schema_version") || !j["schema_version"].is_string()) {
        bad_manifest(manifest_path, "missing string field schema_version");
    }
    if (j["schema_version"].get<std::string>() != "1") {
        throw IoException(IoError::UnknownSchemaVersion,
                          manifest_path.string() + ": unsupported schema_version \"" +
                              j["schema_version"].get<std::string>() + "\" (expected \"1\")");
    }

    if (!j.contains("dims") || !j["dims"].is_array() || j["dims"].size() != 3) {
        bad_manifest(manifest_path, "dims must be an array [nz, ny, nx]");
    }
    Dims dims;
    int* dim_fields[3] = {&dims.nz, &dims.ny, &dims.nx};
    for (int i = 0; i < 3; ++i) {
        const auto& e = j["dims"][i];
        if (!e.is_number_integer() || e.get<std::int64_t>() < 1 ||
            e.get<std::int64_t>() > 1000000) {
            bad_manifest(manifest_path, "dims entries must be integers in [1, 1000000]");
        }
        *dim_fields[i] = static_cast<int>(e.get<std::int64_t>());
    }
    if (dims.count() > kMaxVoxels) bad_manifest(manifest_path, "declared grid is too large");

    if (!j.contains("spacing_mm") || !j["spacing_mm"].is_array() || j["spacing_mm"].size() != 3) {
        bad_manifest(manifest_path, "spacing_mm must be an array [dx, dy, dz]");
    }
    Spacing spacing;
    double* spacing_fields[3] = {&spacing.dx, &spacing.dy, &spacing.dz};
    for (int i = 0; i < 3; ++i) {
        const double v = require_finite_number(j["spacing_mm"][i], manifest_path, "spacing_mm");
        if (v <= 0.0) bad_manifest(manifest_path, "spacing_mm entries must be positive");
        *spacing_fields[i] = v;
    }

    if (j.contains("byte_order") &&
        (!j["byte_order"].is_string() || j["byte_order"].get<std::string>() != "little")) {
        bad_manifest(manifest_path, "byte_order must be \"little\"");
    }
    if (j.contains("dtype")) {
        const auto& dt = j["dtype"];
        if (!dt.is_object()) bad_manifest(manifest_path, "dtype must be an object");
        if (dt.contains("mask") &&
            (!dt["mask"].is_string() || dt["mask"].get<std::string>() != "u8")) {
            bad_manifest(manifest_path, "dtype.mask must be \"u8\"");
        }
        if (dt.contains("intensity") &&
            (!dt["intensity"].is_string() || dt["intensity"].get<std::string>() != "f32")) {
            bad_manifest(manifest_path, "dtype.intensity must be \"f32\"");
        }
    }

    if (!j.contains("phases") || !j["phases"].is_array() || j["phases"].size() < 2) {
        bad_manifest(manifest_path, "phases must be an array with at least 2 entries");
    }

    const std::filesystem::path base = manifest_path.parent_path();
    const std::size_t count = dims.count();
    std::vector<Phase> phases;
    phases.reserve(j["phases"].size());
    std::int64_t prev_t = 0;
    for (std::size_t i = 0; i < j["phases"].size(); ++i) {
        const auto& entry = j["phases"][i];
        if (!entry.is_object() || !entry.contains("t") || !entry["t"].is_number_integer() ||
            !entry.contains("mask") || !entry["mask"].is_string()) {
            bad_manifest(manifest_path,
                         "phases[" + std::to_string(i) + "] needs integer t and string mask");
        }
        const std::int64_t t = entry["t"].get<std::int64_t>();
        if (i > 0 && t <= prev_t) {
            bad_manifest(manifest_path, "phase indices t must be strictly increasing");
        }
        prev_t = t;

        const std::filesystem::path mask_path = base / entry["mask"].get<std::string>();
        std::vector<std::uint8_t> mask_bytes = read_blob(mask_path, count);
        for (std::uint8_t b : mask_bytes) {
            if (b > 1) {
                throw IoException(IoError::NonBinaryMask,
                                  mask_path.string() + ": mask voxels must be 0 or 1");
            }
        }
        BinaryMask mask(dims, spacing, std::move(mask_bytes));

        std::optional<IntensityVolume> intensity;
        if (entry.contains("intensity")) {
            if (!entry["intensity"].is_string()) {
                bad_manifest(manifest_path,
                             "phases[" + std::to_string(i) + "].intensity must be a string");
            }
            const std::filesystem::path int_path = base / entry["intensity"].get<std::string>();
            const std::vector<std::uint8_t> raw = read_blob(int_path, count * sizeof(float));
            std::vector<float> floats(count);
            std::memcpy(floats.data(), raw.data(), raw.size());
            std::vector<double> voxels(floats.begin(), floats.end());
            intensity.emplace(dims, spacing, std::move(voxels));
        }

        phases.push_back(
            Phase{static_cast<int>(t), std::move(mask), std::move(intensity)});
    }

    try {
        return StackSeries(std::move(phases));
    } catch (const std::invalid_argument& e) {
        bad_manifest(manifest_path, e.what());
    }
}

std::filesystem::path write_stack_series(const StackSeries& series,
                                         const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw IoException(IoError::WriteFailure, "cannot create directory: " + dir.string());
    }

    const Dims& d = series.dims();
    const Spacing& s = series.spacing();
    const bool any_intensity =
        std::any_of(series.phases().begin(), series.phases().end(),
                    [](const Phase& p) { return p.intensity.has_value(); });

    ordered_json manifest;
    manifest["schema_version"] = "1";
    manifest["dims"] = {d.nz, d.ny, d.nx};
    manifest["spacing_mm"] = {s.dx, s.dy, s.dz};
    ordered_json dtype;
    dtype["mask"] = "u8";
    if (any_intensity) dtype["intensity"] = "f32";
    manifest["dtype"] = dtype;
    manifest["byte_order"] = "little";

    ordered_json entries = ordered_json::array();
    for (std::size_t i = 0; i < series.phases().size(); ++i) {
        const Phase& phase = series.phases()[i];
        const std::string mask_name = phase_file_name("mask", i);
        const auto mask_voxels = phase.mask.voxels();
        write_blob(dir / mask_name, mask_voxels.data(), mask_voxels.size());

        ordered_json entry;
        entry["t"] = phase.index;
        entry["mask"] = mask_name;
        if (phase.intensity.has_value()) {
            const std::string int_name = phase_file_name("int", i);
            const auto voxels = phase.intensity->voxels();
            std::vector<float> floats;
            floats.reserve(voxels.size());
            for (double v : voxels) floats.push_back(static_cast<float>(v));
            write_blob(dir / int_name, floats.data(), floats.size() * sizeof(float));
            entry["intensity"] = int_name;
        }
        entries.push_back(entry);
    }
    manifest["phases"] = entries;

    const std::filesystem::path manifest_path = dir / "manifest.json";
    write_text_file(manifest_path, manifest.dump(2) + "\n");
    return manifest_path;
}

std::string ef_report_json(const EFResult& result, const PhaseSelection& selection,
                           bool interpolated, std::optional<int> mid_slice_index) {
    std::string s;
    s += "{\n";
    s += "  \"ef_percent\": " + format_g6(result.ef_percent) + ",\n";
    s += "  \"v_ed_mm3\": " + format_g6(result.v_ed) + ",\n";
    s += "  \"v_es_mm3\": " + format_g6(result.v_es) + ",\n";
    s += "  \"ed_phase\": " + std::to_string(result.ed_phase) + ",\n";
    s += "  \"es_phase\": " + std::to_string(result.es_phase) + ",\n";
    s += "  \"metric\": \"" + to_string(result.metric) + "\",\n";
    s += "  \"method\": \"" + to_string(result.method) + "\",\n";
    s += "  \"selection\": {\n";
    s += std::string("    \"mode\": \"") + (interpolated ? "interpolated" : "snap") + "\",\n";
    s += "    \"ed_value\": " + format_g6(selection.ed_value) + ",\n";
    s += "    \"es_value\": " + format_g6(selection.es_value) + ",\n";
    s += "    \"fit_ed_x\": " + format_g6(selection.fit_ed_x) + ",\n";
    s += "    \"fit_ed_value\": " + format_g6(selection.fit_ed_value) + ",\n";
    s += "    \"fit_es_x\": " + format_g6(selection.fit_es_x) + ",\n";
    s += "    \"fit_es_value\": " + format_g6(selection.fit_es_value);
    if (mid_slice_index.has_value()) {
        s += ",\n    \"mid_slice_index\": " + std::to_string(*mid_slice_index) + "\n";
    } else {
        s += "\n";
    }
    s += "  }\n";
    s += "}\n";
    return s;
}

std::string series_csv(const CycleSeries& series) {
    std::string s = "phase,value\n";
    for (std::size_t i = 0; i < series.phases.size(); ++i) {
        s += std::to_string(series.phases[i]) + "," + format_g6(series.values[i]) + "\n";
    }
    return s;
}

std::string curve_csv(const CycleSeries& series, const PhaseSelection& selection) {
    std::string s = "kind,x,y\n";
    for (std::size_t i = 0; i < series.phases.size(); ++i) {
        s += "observed," + std::to_string(series.phases[i]) + "," + format_g6(series.values[i]) +
             "\n";
    }
    for (const auto& [x, y] : selection.curve_samples) {
        s += "fitted," + format_g6(x) + "," + format_g6(y) + "\n";
    }
    return s;
}

std::string bland_altman_json(const BlandAltmanReport& report) {
    std::string s;
    s += "{\n";
    s += "  \"bias\": " + format_g6(report.bias) + ",\n";
    s += "  \"sd\": " + format_g6(report.sd) + ",\n";
    s += "  \"loa_lower\": " + format_g6(report.loa_lower) + ",\n";
    s += "  \"loa_upper\": " + format_g6(report.loa_upper) + ",\n";
    s += "  \"bias_ci\": [" + format_g6(report.bias_ci_low) + ", " +
         format_g6(report.bias_ci_high) + "],\n";
    s += "  \"loa_ci_halfwidth\": " + format_g6(report.loa_ci_halfwidth) + ",\n";
    s += "  \"n\": " + std::to_string(report.n) + "\n";
    s += "}\n";
    return s;
}

std::string agree_report_json(const BlandAltmanReport& report, const MeanAbsDifference& md,
                              const ProportionalBias* prop) {
    std::string s;
    s += "{\n";
    s += "  \"bias\": " + format_g6(report.bias) + ",\n";
    s += "  \"sd\": " + format_g6(report.sd) + ",\n";
    s += "  \"loa_lower\": " + format_g6(report.loa_lower) + ",\n";
    s += "  \"loa_upper\": " + format_g6(report.loa_upper) + ",\n";
    s += "  \"bias_ci\": [" + format_g6(report.bias_ci_low) + ", " +
         format_g6(report.bias_ci_high) + "],\n";
    s += "  \"loa_ci_halfwidth\": " + format_g6(report.loa_ci_halfwidth) + ",\n";
    s += "  \"n\": " + std::to_string(report.n) + ",\n";
    s += "  \"md\": " + format_g6(md.md) + ",\n";
    s += "  \"md_sd\": " + format_g6(md.sd) + ",\n";
    if (prop != nullptr) {
        s += "  \"proportional_bias_slope\": " + format_g6(prop->slope) + ",\n";
        s += "  \"proportional_bias_se\": " + format_g6(prop->se) + ",\n";
        s += std::string("  \"proportional_bias_flag\": ") + (prop->flag ? "true" : "false") +
             "\n";
    } else {
        s += "  \"proportional_bias_slope\": null,\n";
        s += "  \"proportional_bias_se\": null,\n";
        s += "  \"proportional_bias_flag\": null\n";
    }
    s += "}\n";
    return s;
}

std::string agree_plot_csv(const PairedMeasurements& pairs) {
    std::string s = "mean,diff\n";
    for (const MeasurementPair& p : pairs) {
        const double mean = 0.5 * (p.reference + p.estimate);
        const double diff = p.estimate - p.reference;
        s += format_g6(mean) + "," + format_g6(diff) + "\n";
    }
    return s;
}

std::string ground_truth_json(const GroundTruth& gt, const PhantomSpec& spec) {
    std::string s;
    s += "{\n";
    s += "  \"ef_percent\": " + format_g6(gt.ef_percent) + ",\n";
    s += "  \"ed_phase\": " + std::to_string(gt.ed_phase) + ",\n";
    s += "  \"es_phase\": " + std::to_string(gt.es_phase) + ",\n";
    s += "  \"v_ed_mm3\": " + format_g6(gt.volumes[static_cast<std::size_t>(gt.ed_phase)]) +
         ",\n";
    s += "  \"v_es_mm3\": " + format_g6(gt.volumes[static_cast<std::size_t>(gt.es_phase)]) +
         ",\n";
    s += "  \"volumes_mm3\": " + json_array_g6(gt.volumes) + ",\n";
    s += "  \"analytic_volumes_mm3\": " + json_array_g6(gt.analytic_volumes) + ",\n";
    s += "  \"n_phases\": " + std::to_string(spec.n_phases) + ",\n";
    s += "  \"seed\": " + std::to_string(spec.seed) + "\n";
    s += "}\n";
    return s;
}

std::string metrics_report_json(const std::vector<MetricsRow>& rows) {
    double dice_sum = 0.0;
    std::optional<double> max_hd_mm = 0.0;
    std::optional<double> max_hd_vox = 0.0;
    for (const MetricsRow& row : rows) {
        dice_sum += row.dice;
        if (max_hd_mm.has_value()) {
            max_hd_mm = row.hausdorff_mm.has_value()
                            ? std::optional<double>(std::max(*max_hd_mm, *row.hausdorff_mm))
                            : std::nullopt;
        }
        if (max_hd_vox.has_value()) {
            max_hd_vox = row.hausdorff_vox.has_value()
                             ? std::optional<double>(std::max(*max_hd_vox, *row.hausdorff_vox))
                             : std::nullopt;
        }
    }
    const double mean_dice = rows.empty() ? 0.0 : dice_sum / static_cast<double>(rows.size());

    std::string s;
    s += "{\n";
    s += "  \"n_phases\": " + std::to_string(rows.size()) + ",\n";
    s += "  \"mean_dice\": " + format_g6(mean_dice) + ",\n";
    s += "  \"max_hausdorff_mm\": " + opt_g6(max_hd_mm) + ",\n";
    s += "  \"max_hausdorff_vox\": " + opt_g6(max_hd_vox) + ",\n";
    s += "  \"phases\": [\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const MetricsRow& row = rows[i];
        s += "    {\"t\": " + std::to_string(row.t) + ", \"dice\": " + format_g6(row.dice) +
             ", \"hausdorff_mm\": " + opt_g6(row.hausdorff_mm) +
             ", \"hausdorff_vox\": " + opt_g6(row.hausdorff_vox) +
             ", \"v_pred_mm3\": " + format_g6(row.v_pred_mm3) +
             ", \"v_ref_mm3\": " + format_g6(row.v_ref_mm3) + "}";
        s += i + 1 < rows.size() ? ",\n" : "\n";
    }
    s += "  ]\n";
    s += "}\n";
    return s;
}

std::string noise_report_json(const NoiseSpec& spec, const StackSeries& series,
                              const std::vector<NoiseModel>& models,
                              const std::vector<double>& sigmas) {
    std::string s;
    s += "{\n";
    s += "  \"model\": \"" + to_string(spec.model) + "\",\n";
    s += "  \"snr\": " + format_g6(spec.snr) + ",\n";
    s += "  \"seed\": " + std::to_string(spec.seed) + ",\n";
    s += "  \"stacks\": [\n";
    for (std::size_t i = 0; i < series.phases().size(); ++i) {
        s += "    {\"t\": " + std::to_string(series.phases()[i].index) + ", \"model\": \"" +
             to_string(models[i]) + "\", \"sigma\": " + format_g6(sigmas[i]) + "}";
        s += i + 1 < series.phases().size() ? ",\n" : "\n";
    }
    s += "  ]\n";
    s += "}\n";
    return s;
}

PairedMeasurements read_pairs_csv(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    PairedMeasurements out;
    std::istringstream lines(text);
    std::string line;
    std::size_t line_no = 0;
    bool first_content_line = true;
    while (std::getline(lines, line)) {
        ++line_no;
        const auto non_space = line.find_first_not_of(" \t\r");
        if (non_space == std::string::npos) continue;

        std::vector<std::string> fields = split_fields(line);
        if (first_content_line) {
            first_content_line = false;
            double probe = 0.0;
            if (!fields.empty() && !parse_strict_double(fields.back(), probe)) {
                continue;  // header row
            }
        }
        if (fields.size() != 2 && fields.size() != 3) {
            throw std::invalid_argument("pairs csv line " + std::to_string(line_no) +
                                        ": expected 2 or 3 comma-separated fields");
        }
        MeasurementPair pair;
        const std::string& ref_field = fields[fields.size() - 2];
        const std::string& est_field = fields[fields.size() - 1];
        pair.subject =
            fields.size() == 3 ? fields[0] : std::to_string(out.size() + 1);
        if (!parse_strict_double(ref_field, pair.reference) ||
            !parse_strict_double(est_field, pair.estimate)) {
            throw std::invalid_argument("pairs csv line " + std::to_string(line_no) +
                                        ": reference and estimate must be numbers");
        }
        out.push_back(std::move(pair));
    }
    if (out.empty()) {
        throw std::invalid_argument("pairs csv " + path.string() + ": no measurement rows");
    }
    return out;
}

void write_stl(const TriangleMesh& mesh, const std::filesystem::path& path,
               const std::string& name) {
    std::string s = "solid " + name + "\n";
    char buf[160];
    for (const auto& tri : mesh.triangles) {
        const std::array<double, 3> n = triangle_normal(mesh, tri);
        std::snprintf(buf, sizeof(buf), "  facet normal %.9e %.9e %.9e\n", n[0], n[1], n[2]);
        s += buf;
        s += "    outer loop\n";
        for (std::uint32_t vi : tri) {
            const auto& v = mesh.vertices[vi];
            std::snprintf(buf, sizeof(buf), "      vertex %.9e %.9e %.9e\n", v[0], v[1], v[2]);
            s += buf;
        }
        s += "    endloop\n";
        s += "  endfacet\n";
    }
    s += "endsolid " + name + "\n";
    write_text_file(path, s);
}

}  // namespace ventriq
