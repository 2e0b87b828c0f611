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

#ifndef VENTRIQ_RNG_HPP
#define VENTRIQ_RNG_HPP

#include <cmath>
#include <cstdint>

namespace ventriq {

/// SplitMix64 (Steele, Lea & Flood / Vigna): the project-wide deterministic
/// generator. Chosen because the whole state is one 64-bit word, making
/// substreams trivial to derive, and the output sequence is fixed by the
/// algorithm alone — results are bit-stable across builds and platforms.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in (0, 1]: the top 53 bits, shifted into (0, 1] so a
    /// logarithm of the result is always finite.
    double next_unit() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double next_in(double lo, double hi) {
        return lo + (next_unit() - 0x1.0p-53) * (hi - lo);
    }

private:
    std::uint64_t state_;
};

/// Standard normal variates from SplitMix64 via the Box-Muller transform.
/// Each transform yields a pair; the second variate is cached, so draws
/// come in deterministic (cos, sin) order.
class NormalSampler {
public:
    explicit NormalSampler(SplitMix64 engine) : engine_(engine) {}
    explicit NormalSampler(std::uint64_t seed) : engine_(seed) {}

    double next() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = engine_.next_unit();
        const double u2 = engine_.next_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

private:
    SplitMix64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace ventriq

#endif
