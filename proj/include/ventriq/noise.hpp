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

#ifndef VENTRIQ_NOISE_HPP
#define VENTRIQ_NOISE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ventriq/volgrid.hpp"

namespace ventriq {

/// Magnitude-MRI noise models. Mixed draws one of the three concrete
/// models per image stack.
enum class NoiseModel { Gaussian, Rician, Rayleigh, Mixed };

/// "gaussian" | "rician" | "rayleigh" | "mixed"
std::string to_string(NoiseModel model);
NoiseModel parse_noise_model(const std::string& name);

struct NoiseSpec {
    NoiseModel model = NoiseModel::Gaussian;
    double snr = 30.0;       ///< mean foreground intensity over sigma
    std::uint64_t seed = 0;  ///< master seed; substream i uses seed ^ i

    bool operator==(const NoiseSpec&) const = default;
};

/// Noise level for a target SNR: sigma = mean(vol over fg) / snr.
/// The foreground must be nonempty.
double sigma_for_snr(const IntensityVolume& vol, const BinaryMask& fg, double snr);

/// Corrupt one volume. Gaussian: v' = max(0, v + n), n ~ N(0, sigma^2).
/// Rician: v' = sqrt((v + n1)^2 + n2^2) with i.i.d. n1, n2 ~ N(0, sigma^2)
/// (the magnitude of a complex signal with Gaussian channel noise).
/// Rayleigh: v' = v + sigma * sqrt(g1^2 + g2^2) for standard normal g1, g2,
/// i.e. an additive Rayleigh-distributed magnitude with scale sigma.
/// Deterministic given spec.seed; sigma = 0 returns the input bit-exactly.
/// spec.model must be a concrete model, not Mixed.
IntensityVolume corrupt(const IntensityVolume& vol, const NoiseSpec& spec, double sigma);

/// A corrupted series plus per-stack provenance.
struct CorruptedSeries {
    StackSeries series;
    std::vector<NoiseModel> models;  ///< concrete model applied per phase
    std::vector<double> sigmas;      ///< sigma applied per phase
};

/// Mixed-model corruption: for each stack independently, one of
/// {Gaussian, Rician, Rayleigh} is chosen uniformly from the substream
/// generator (SplitMix64(seed ^ stack_ordinal), first draw modulo 3 in
/// that order), then the stack is corrupted at the given SNR with the
/// remainder of the same substream. Every phase must carry an intensity
/// volume; sigma is computed per stack against its own mask.
CorruptedSeries corrupt_mixed(const StackSeries& series, double snr = 20.0,
                              std::uint64_t seed = 0);

/// Whole-series corruption under one spec: Mixed dispatches to
/// corrupt_mixed; concrete models corrupt each stack with substream
/// seed ^ stack_ordinal at spec.snr.
CorruptedSeries corrupt_series(const StackSeries& series, const NoiseSpec& spec);

}  // namespace ventriq

#endif
