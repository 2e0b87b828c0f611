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

#include "ventriq/noise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ventriq/rng.hpp"
#include "parallel.hpp"

namespace ventriq {

std::string to_string(NoiseModel model) {
    switch (model) {
        case NoiseModel::Gaussian: return "gaussian";
        case NoiseModel::Rician: return "rician";
        case NoiseModel::Rayleigh: return "rayleigh";
        case NoiseModel::Mixed: return "mixed";
    }
    return "gaussian";
}

NoiseModel parse_noise_model(const std::string& name) {
    if (name == "gaussian") return NoiseModel::Gaussian;
    if (name == "rician") return NoiseModel::Rician;
    if (name == "rayleigh") return NoiseModel::Rayleigh;
    if (name == "mixed") return NoiseModel::Mixed;
    throw std::invalid_argument("unknown noise model \"" + name +
                                "\" (expected gaussian|rician|rayleigh|mixed)");
}

namespace {

std::vector<double> corrupt_voxels(const std::vector<double>& in, NoiseModel model,
                                   double sigma, NormalSampler& normal) {
    std::vector<double> out(in.size());
    switch (model) {
        case NoiseModel::Gaussian:
            for (std::size_t i = 0; i < in.size(); ++i)
                out[i] = std::max(0.0, in[i] + sigma * normal.next());
            break;
        case NoiseModel::Rician:
            for (std::size_t i = 0; i < in.size(); ++i) {
                const double re = in[i] + sigma * normal.next();
                const double im = sigma * normal.next();
                out[i] = std::sqrt(re * re + im * im);
            }
            break;
        case NoiseModel::Rayleigh:
            for (std::size_t i = 0; i < in.size(); ++i) {
                const double g1 = normal.next();
                const double g2 = normal.next();
                out[i] = in[i] + sigma * std::sqrt(g1 * g1 + g2 * g2);
            }
            break;
        case NoiseModel::Mixed:
            throw std::invalid_argument("corrupt: Mixed is resolved per stack, not per volume");
    }
    return out;
}

NoiseModel pick_model(SplitMix64& engine) {
    switch (engine.next_u64() % 3) {
        case 0: return NoiseModel::Gaussian;
        case 1: return NoiseModel::Rician;
        default: return NoiseModel::Rayleigh;
    }
}

}  // namespace

double sigma_for_snr(const IntensityVolume& vol, const BinaryMask& fg, double snr) {
    if (!(vol.dims() == fg.dims()))
        throw std::invalid_argument("sigma_for_snr: dimension mismatch");
    if (!(snr > 0.0)) throw std::invalid_argument("sigma_for_snr: snr must be > 0");
    const auto v = vol.voxels();
    const auto m = fg.voxels();
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (m[i]) {
            sum += v[i];
            ++count;
        }
    if (count == 0) throw std::invalid_argument("sigma_for_snr: empty foreground");
    return sum / static_cast<double>(count) / snr;
}

IntensityVolume corrupt(const IntensityVolume& vol, const NoiseSpec& spec, double sigma) {
    if (!(sigma >= 0.0)) throw std::invalid_argument("corrupt: sigma must be >= 0");
    if (spec.model == NoiseModel::Mixed)
        throw std::invalid_argument("corrupt: Mixed is resolved per stack; use corrupt_mixed");
    if (sigma == 0.0) return vol;

    NormalSampler normal{SplitMix64{spec.seed}};
    std::vector<double> out =
        corrupt_voxels({vol.voxels().begin(), vol.voxels().end()}, spec.model, sigma, normal);
    return IntensityVolume(vol.dims(), vol.spacing(), std::move(out));
}

CorruptedSeries corrupt_mixed(const StackSeries& series, double snr, std::uint64_t seed) {
    NoiseSpec spec;
    spec.model = NoiseModel::Mixed;
    spec.snr = snr;
    spec.seed = seed;
    return corrupt_series(series, spec);
}

CorruptedSeries corrupt_series(const StackSeries& series, const NoiseSpec& spec) {
    if (!(spec.snr > 0.0)) throw std::invalid_argument("corrupt_series: snr must be > 0");
    for (const Phase& ph : series.phases())
        if (!ph.intensity)
            throw std::invalid_argument("corrupt_series: phase " + std::to_string(ph.index) +
                                        " has no intensity volume");

    const std::size_t n = series.size();
    std::vector<Phase> phases(series.phases().begin(), series.phases().end());
    std::vector<NoiseModel> models(n);
    std::vector<double> sigmas(n);

    // Stacks are independent given their substreams, so parallel execution
    // matches the sequential result exactly.
    detail::parallel_for(n, [&](std::size_t i) {
        const Phase& ph = series.phases()[i];
        SplitMix64 engine{spec.seed ^ static_cast<std::uint64_t>(i)};
        const NoiseModel model =
            spec.model == NoiseModel::Mixed ? pick_model(engine) : spec.model;
        const double sigma = sigma_for_snr(*ph.intensity, ph.mask, spec.snr);

        NormalSampler normal{engine};
        std::vector<double> out = corrupt_voxels(
            {ph.intensity->voxels().begin(), ph.intensity->voxels().end()}, model, sigma,
            normal);
        phases[i].intensity =
            IntensityVolume(ph.intensity->dims(), ph.intensity->spacing(), std::move(out));
        models[i] = model;
        sigmas[i] = sigma;
    });

    return CorruptedSeries{StackSeries(std::move(phases)), std::move(models),
                           std::move(sigmas)};
}

}  // namespace ventriq
