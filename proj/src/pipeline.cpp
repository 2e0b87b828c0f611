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

#include "ventriq/pipeline.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ventriq/morph.hpp"

namespace ventriq {
namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void bad_config(const std::string& detail) {
    throw std::invalid_argument("config: " + detail);
}

std::string require_string(const ordered_json& v, const char* key) {
    if (!v.is_string()) bad_config(std::string(key) + " must be a string");
    return v.get<std::string>();
}

bool require_bool(const ordered_json& v, const char* key) {
    if (!v.is_boolean()) bad_config(std::string(key) + " must be a boolean");
    return v.get<bool>();
}

double require_number(const ordered_json& v, const char* key) {
    if (!v.is_number()) bad_config(std::string(key) + " must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) bad_config(std::string(key) + " must be finite");
    return d;
}

std::uint64_t require_seed(const ordered_json& v, const char* key) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
        return static_cast<std::uint64_t>(v.get<std::int64_t>());
    }
    bad_config(std::string(key) + " must be a non-negative integer");
}

void apply_noise_config(const ordered_json& j, NoiseSpec& spec) {
    if (!j.is_object()) bad_config("noise must be an object");
    for (const auto& [key, value] : j.items()) {
        if (key == "model") {
            spec.model = parse_noise_model(require_string(value, "noise.model"));
        } else if (key == "snr") {
            const double snr = require_number(value, "noise.snr");
            if (snr <= 0.0) bad_config("noise.snr must be positive");
            spec.snr = snr;
        } else if (key == "seed") {
            spec.seed = require_seed(value, "noise.seed");
        } else {
            bad_config("unknown key noise." + key);
        }
    }
}

}  // namespace

PipelineConfig config_from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        bad_config(std::string("not valid JSON: ") + e.what());
    }
    if (!j.is_object()) bad_config("top-level value must be an object");

    PipelineConfig config;
    for (const auto& [key, value] : j.items()) {
        if (key == "metric") {
            config.metric = parse_metric(require_string(value, "metric"));
        } else if (key == "fit") {
            config.fit = parse_fit_method(require_string(value, "fit"));
        } else if (key == "interpolated") {
            config.interpolated = require_bool(value, "interpolated");
        } else if (key == "postprocess") {
            config.postprocess = require_bool(value, "postprocess");
        } else if (key == "threshold") {
            const double t = require_number(value, "threshold");
            if (t < 0.0 || t > 1.0) bad_config("threshold must lie in [0, 1]");
            config.threshold = t;
        } else if (key == "noise") {
            apply_noise_config(value, config.noise);
        } else if (key == "seed") {
            config.seed = require_seed(value, "seed");
        } else if (key == "output_format") {
            const std::string fmt = require_string(value, "output_format");
            if (fmt != "json") bad_config("output_format must be \"json\"");
            config.output_format = fmt;
        } else {
            bad_config("unknown key " + key);
        }
    }
    return config;
}

std::string config_to_json(const PipelineConfig& config) {
    ordered_json j;
    j["metric"] = to_string(config.metric);
    j["fit"] = to_string(config.fit);
    j["interpolated"] = config.interpolated;
    j["postprocess"] = config.postprocess;
    j["threshold"] = config.threshold;
    ordered_json noise;
    noise["model"] = to_string(config.noise.model);
    noise["snr"] = config.noise.snr;
    noise["seed"] = config.noise.seed;
    j["noise"] = noise;
    j["seed"] = config.seed;
    j["output_format"] = config.output_format;
    return j.dump(2) + "\n";
}

AnalyzeOutput run_analyze(const StackSeries& series, const PipelineConfig& config) {
    const StackSeries* input = &series;
    std::optional<StackSeries> cleaned;
    if (config.postprocess) {
        std::vector<Phase> phases;
        phases.reserve(series.phases().size());
        for (const Phase& p : series.phases()) {
            const auto voxels = p.mask.voxels();
            ProbabilityMap prob(p.mask.dims(), p.mask.spacing(),
                                std::vector<double>(voxels.begin(), voxels.end()));
            phases.push_back(Phase{p.index, postprocess(prob, config.threshold), p.intensity});
        }
        cleaned.emplace(std::move(phases));
        input = &*cleaned;
    }

    AnalyzeOutput out;
    out.metric_series = build_series(*input, config.metric);
    out.selection = select_phases(out.metric_series, config.fit);
    out.volume_series = config.metric == MetricKind::Volume
                            ? out.metric_series
                            : build_series(*input, MetricKind::Volume);
    out.ef = config.interpolated ? estimate_ef_interpolated(out.volume_series, out.selection)
                                 : estimate_ef(out.volume_series, out.selection);
    return out;
}

}  // namespace ventriq
