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

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ventriq/agreement.hpp"
#include "ventriq/cycle.hpp"
#include "ventriq/fitting.hpp"
#include "ventriq/metrics.hpp"
#include "ventriq/noise.hpp"
#include "ventriq/phantom.hpp"
#include "ventriq/pipeline.hpp"
#include "ventriq/stackio.hpp"
#include "ventriq/volgrid.hpp"

namespace {

// Exit codes: 0 ok, 1 domain error, 2 usage, 3 I/O.
constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

int fail_domain(const std::string& what) {
    std::cerr << "ventriq: error: " << what << "\n";
    return kExitDomain;
}

int fail_usage(const std::string& what) {
    std::cerr << "ventriq: usage error: " << what << "\n";
    return kExitUsage;
}

int fail_io(const std::string& what) {
    std::cerr << "ventriq: I/O error: " << what << "\n";
    return kExitIo;
}

struct PhantomOptions {
    std::string out;
    int phases = 13;
    double ef = 55.0;
    double ved = 500.0;
    std::uint64_t seed = 42;
};

int cmd_phantom(const PhantomOptions& opt) {
    ventriq::PhantomSpec spec;
    spec.n_phases = opt.phases;
    spec.ef_target = opt.ef;
    spec.v_ed_target = opt.ved;
    spec.seed = opt.seed;
    try {
        const auto [series, truth] = ventriq::generate(spec);
        const std::filesystem::path manifest = ventriq::write_stack_series(series, opt.out);
        const std::filesystem::path truth_path =
            std::filesystem::path(opt.out) / "ground_truth.json";
        ventriq::write_text_file(truth_path, ventriq::ground_truth_json(truth, spec));
        std::cout << "wrote " << manifest.string() << "\n";
        std::cout << "wrote " << truth_path.string() << "\n";
        return kExitOk;
    } catch (const ventriq::IoException& e) {
        return fail_io(e.what());
    } catch (const std::invalid_argument& e) {
        return fail_usage(e.what());  // PhantomSpec fields come straight from flags
    } catch (const std::exception& e) {
        return fail_domain(e.what());
    }
}

struct AnalyzeOptions {
    std::string stacks;
    std::string out;
    std::string curve;   // empty = not requested
    std::string config;  // empty = no config file
    std::optional<std::string> metric;
    std::optional<std::string> fit;
    bool interpolated = false;
    bool postprocess = false;
    std::optional<double> threshold;
};

/// Loads the config file (when given) and layers explicit flags on top.
/// Returns nullopt after printing a usage/I/O failure.
std::optional<ventriq::PipelineConfig> merged_config(const AnalyzeOptions& opt, int& exit_code) {
    ventriq::PipelineConfig config;
    if (!opt.config.empty()) {
        std::string text;
        try {
            text = ventriq::read_text_file(opt.config);
        } catch (const ventriq::IoException& e) {
            exit_code = fail_io(e.what());
            return std::nullopt;
        }
        try {
            config = ventriq::config_from_json(text);
        } catch (const std::invalid_argument& e) {
            exit_code = fail_usage(e.what());
            return std::nullopt;
        }
    }
    try {
        if (opt.metric.has_value()) config.metric = ventriq::parse_metric(*opt.metric);
        if (opt.fit.has_value()) config.fit = ventriq::parse_fit_method(*opt.fit);
    } catch (const std::invalid_argument& e) {
        exit_code = fail_usage(e.what());
        return std::nullopt;
    }
    if (opt.interpolated) config.interpolated = true;
    if (opt.postprocess) config.postprocess = true;
    if (opt.threshold.has_value()) {
        if (*opt.threshold < 0.0 || *opt.threshold > 1.0) {
            exit_code = fail_usage("--threshold must lie in [0, 1]");
            return std::nullopt;
        }
        config.threshold = *opt.threshold;
    }
    return config;
}

int cmd_analyze(const AnalyzeOptions& opt) {
    int exit_code = kExitOk;
    const std::optional<ventriq::PipelineConfig> config = merged_config(opt, exit_code);
    if (!config.has_value()) return exit_code;

    try {
        const ventriq::StackSeries series = ventriq::read_stack_series(opt.stacks);
        const ventriq::AnalyzeOutput result = ventriq::run_analyze(series, *config);
        ventriq::write_text_file(
            opt.out, ventriq::ef_report_json(result.ef, result.selection, config->interpolated,
                                             result.metric_series.mid_slice_index));
        if (!opt.curve.empty()) {
            ventriq::write_text_file(opt.curve,
                                     ventriq::curve_csv(result.metric_series, result.selection));
        }
        std::cout << "wrote " << opt.out << "\n";
        return kExitOk;
    } catch (const ventriq::IoException& e) {
        return fail_io(e.what());
    } catch (const std::exception& e) {
        return fail_domain(e.what());
    }
}

struct MetricsOptions {
    std::string pred;
    std::string ref;
    std::string out;
};

int cmd_metrics(const MetricsOptions& opt) {
    try {
        const ventriq::StackSeries pred = ventriq::read_stack_series(opt.pred);
        const ventriq::StackSeries ref = ventriq::read_stack_series(opt.ref);
        if (pred.size() != ref.size()) {
            throw std::invalid_argument("prediction has " + std::to_string(pred.size()) +
                                        " phases but reference has " +
                                        std::to_string(ref.size()));
        }
        std::vector<ventriq::MetricsRow> rows;
        rows.reserve(pred.size());
        for (std::size_t i = 0; i < pred.size(); ++i) {
            const ventriq::Phase& p = pred.phases()[i];
            const ventriq::Phase& r = ref.phases()[i];
            if (p.index != r.index) {
                throw std::invalid_argument("phase labels differ at position " +
                                            std::to_string(i));
            }
            ventriq::MetricsRow row;
            row.t = p.index;
            row.dice = ventriq::dice(p.mask, r.mask);
            row.v_pred_mm3 = ventriq::mask_volume(p.mask);
            row.v_ref_mm3 = ventriq::mask_volume(r.mask);
            if (p.mask.foreground_count() == 0 || r.mask.foreground_count() == 0) {
                std::cerr << "ventriq: warning: phase " << row.t
                          << ": hausdorff is undefined for an empty mask; writing null\n";
            } else {
                row.hausdorff_mm = ventriq::hausdorff(p.mask, r.mask, true);
                row.hausdorff_vox = ventriq::hausdorff(p.mask, r.mask, false);
            }
            rows.push_back(row);
        }
        ventriq::write_text_file(opt.out, ventriq::metrics_report_json(rows));
        std::cout << "wrote " << opt.out << "\n";
        return kExitOk;
    } catch (const ventriq::IoException& e) {
        return fail_io(e.what());
    } catch (const std::exception& e) {
        return fail_domain(e.what());
    }
}

struct NoiseOptions {
    std::string stacks;
    std::string out;
    std::string config;  // empty = no config file
    std::optional<std::string> model;
    std::optional<double> snr;
    std::optional<std::uint64_t> seed;
};

int cmd_noise(const NoiseOptions& opt) {
    ventriq::NoiseSpec spec;
    bool config_sets_snr = false;
    if (!opt.config.empty()) {
        std::string text;
        try {
            text = ventriq::read_text_file(opt.config);
        } catch (const ventriq::IoException& e) {
            return fail_io(e.what());
        }
        try {
            spec = ventriq::config_from_json(text).noise;
            const auto parsed = nlohmann::json::parse(text);
            config_sets_snr = parsed.contains("noise") && parsed.at("noise").contains("snr");
        } catch (const std::exception& e) {
            return fail_usage(e.what());
        }
    }
    if (opt.model.has_value()) {
        try {
            spec.model = ventriq::parse_noise_model(*opt.model);
        } catch (const std::invalid_argument& e) {
            return fail_usage(e.what());
        }
    }
    if (opt.seed.has_value()) spec.seed = *opt.seed;
    if (opt.snr.has_value()) {
        if (*opt.snr <= 0.0) return fail_usage("--snr must be positive");
        spec.snr = *opt.snr;
    } else if (!config_sets_snr) {
        // Mixed-model corruption defaults to the harsher SNR 20; the
        // single-model commands default to SNR 30.
        spec.snr = spec.model == ventriq::NoiseModel::Mixed ? 20.0 : 30.0;
    }

    try {
        const ventriq::StackSeries series = ventriq::read_stack_series(opt.stacks);
        const ventriq::CorruptedSeries result = ventriq::corrupt_series(series, spec);
        const std::filesystem::path manifest = ventriq::write_stack_series(result.series, opt.out);
        const std::filesystem::path meta_path =
            std::filesystem::path(opt.out) / "noise_meta.json";
        ventriq::write_text_file(
            meta_path, ventriq::noise_report_json(spec, result.series, result.models,
                                                  result.sigmas));
        std::cout << "wrote " << manifest.string() << "\n";
        std::cout << "wrote " << meta_path.string() << "\n";
        return kExitOk;
    } catch (const ventriq::IoException& e) {
        return fail_io(e.what());
    } catch (const std::exception& e) {
        return fail_domain(e.what());
    }
}

struct AgreeOptions {
    std::string pairs;
    std::string out;
    std::string plot;  // empty = not requested
};

int cmd_agree(const AgreeOptions& opt) {
    ventriq::PairedMeasurements pairs;
    try {
        pairs = ventriq::read_pairs_csv(opt.pairs);
    } catch (const ventriq::IoException& e) {
        return fail_io(e.what());
    } catch (const std::invalid_argument& e) {
        return fail_usage(e.what());
    }
    if (pairs.size() < 2) {
        return fail_domain("agreement needs at least 2 pairs, found " +
                           std::to_string(pairs.size()));
    }

    try {
        const ventriq::BlandAltmanReport report = ventriq::bland_altman(pairs);
        const ventriq::MeanAbsDifference md = ventriq::mean_abs_difference(pairs);
        std::optional<ventriq::ProportionalBias> prop;
        try {
            prop = ventriq::proportional_bias_check(pairs);
        } catch (const std::invalid_argument& e) {
            std::cerr << "ventriq: warning: proportional bias not computable (" << e.what()
                      << "); writing null\n";
        }
        ventriq::write_text_file(
            opt.out, ventriq::agree_report_json(report, md, prop ? &*prop : nullptr));
        if (!opt.plot.empty()) {
            ventriq::write_text_file(opt.plot, ventriq::agree_plot_csv(pairs));
        }
        std::cout << "wrote " << opt.out << "\n";
        return kExitOk;
    } catch (const ventriq::IoException& e) {
        return fail_io(e.what());
    } catch (const std::exception& e) {
        return fail_domain(e.what());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"automated left-ventricle ejection fraction from segmentation stacks"};
    app.require_subcommand(1);

    PhantomOptions phantom_opt;
    CLI::App* phantom = app.add_subcommand("phantom", "write a synthetic ground-truth dataset");
    phantom->add_option("--out", phantom_opt.out, "output directory")->required();
    phantom->add_option("--phases", phantom_opt.phases, "number of cardiac phases")
        ->capture_default_str();
    phantom->add_option("--ef", phantom_opt.ef, "target ejection fraction, percent")
        ->capture_default_str();
    phantom->add_option("--ved", phantom_opt.ved, "target end-diastolic volume, mm^3")
        ->capture_default_str();
    phantom->add_option("--seed", phantom_opt.seed, "sub-voxel center jitter seed")
        ->capture_default_str();

    AnalyzeOptions analyze_opt;
    CLI::App* analyze = app.add_subcommand("analyze", "estimate EF from a mask series");
    analyze->add_option("--stacks", analyze_opt.stacks, "input manifest.json")->required();
    analyze->add_option("--out", analyze_opt.out, "EF report path (JSON)")->required();
    analyze->add_option("--metric", analyze_opt.metric,
                        "cycle metric: volume | surface-area | slice-area");
    analyze->add_option("--fit", analyze_opt.fit, "curve fit: gp | poly4");
    analyze->add_option("--curve", analyze_opt.curve, "also write observed+fitted curve CSV");
    analyze->add_option("--config", analyze_opt.config, "JSON config file; flags override it");
    analyze->add_flag("--interpolated", analyze_opt.interpolated,
                      "read EF off the fitted volume curve instead of snapping to phases");
    analyze->add_flag("--postprocess", analyze_opt.postprocess,
                      "morphological cleanup (opening + cavity fill) before measuring");
    analyze->add_option("--threshold", analyze_opt.threshold,
                        "postprocess threshold in [0, 1]");

    MetricsOptions metrics_opt;
    CLI::App* metrics = app.add_subcommand("metrics", "compare two mask series");
    metrics->add_option("--pred", metrics_opt.pred, "prediction manifest.json")->required();
    metrics->add_option("--ref", metrics_opt.ref, "reference manifest.json")->required();
    metrics->add_option("--out", metrics_opt.out, "metrics report path (JSON)")->required();

    NoiseOptions noise_opt;
    CLI::App* noise = app.add_subcommand("noise", "corrupt intensity stacks at a target SNR");
    noise->add_option("--stacks", noise_opt.stacks, "input manifest.json")->required();
    noise->add_option("--out", noise_opt.out, "output directory")->required();
    noise->add_option("--model", noise_opt.model,
                      "gaussian | rician | rayleigh | mixed (default gaussian)");
    noise->add_option("--snr", noise_opt.snr, "target SNR (default 30; 20 for mixed)");
    noise->add_option("--seed", noise_opt.seed, "noise seed (default 0)");
    noise->add_option("--config", noise_opt.config, "JSON config file; flags override it");

    AgreeOptions agree_opt;
    CLI::App* agree = app.add_subcommand("agree", "agreement statistics for paired estimates");
    agree->add_option("--pairs", agree_opt.pairs, "CSV with columns subject,reference,estimate")
        ->required();
    agree->add_option("--out", agree_opt.out, "agreement report path (JSON)")->required();
    agree->add_option("--plot", agree_opt.plot, "also write means-vs-differences CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (phantom->parsed()) return cmd_phantom(phantom_opt);
    if (analyze->parsed()) return cmd_analyze(analyze_opt);
    if (metrics->parsed()) return cmd_metrics(metrics_opt);
    if (noise->parsed()) return cmd_noise(noise_opt);
    if (agree->parsed()) return cmd_agree(agree_opt);
    return kExitUsage;
}
