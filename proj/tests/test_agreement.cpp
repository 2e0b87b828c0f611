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

#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "ventriq/agreement.hpp"

using namespace ventriq;

namespace {

PairedMeasurements from_diffs(const std::vector<double>& diffs, double ref_base = 50.0) {
    PairedMeasurements out;
    for (std::size_t i = 0; i < diffs.size(); ++i) {
        MeasurementPair p;
        p.subject = "s" + std::to_string(i);
        p.reference = ref_base + double(i);
        p.estimate = p.reference + diffs[i];
        out.push_back(p);
    }
    return out;
}

}  // namespace

TEST_CASE("bland-altman on symmetric unit differences") {
    // Differences {-1, 0, 1}: bias 0, sd 1, limits at +-1.96, and the
    // t-based intervals with t(0.975, 2) = 4.302652729696...
    const BlandAltmanReport r = bland_altman(from_diffs({-1.0, 0.0, 1.0}));
    CHECK(r.n == 3);
    CHECK(r.bias == doctest::Approx(0.0));
    CHECK(r.sd == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.loa_lower == doctest::Approx(-1.96).epsilon(1e-12));
    CHECK(r.loa_upper == doctest::Approx(1.96).epsilon(1e-12));
    CHECK(r.bias_ci_low == doctest::Approx(-2.48413771171955).epsilon(1e-9));
    CHECK(r.bias_ci_high == doctest::Approx(2.48413771171955).epsilon(1e-9));
    CHECK(r.loa_ci_halfwidth == doctest::Approx(4.30265272969614).epsilon(1e-9));
}

TEST_CASE("bland-altman on the three-subject hand case") {
    // Pairs (50,53), (60,58), (55,59): differences {3, -2, 4},
    // bias (3-2+4)/3 = 1.6667, sd 3.2146.
    PairedMeasurements pairs;
    pairs.push_back({"a", 50.0, 53.0});
    pairs.push_back({"b", 60.0, 58.0});
    pairs.push_back({"c", 55.0, 59.0});
    const BlandAltmanReport r = bland_altman(pairs);
    CHECK(r.bias == doctest::Approx(5.0 / 3.0).epsilon(1e-12));
    CHECK(r.sd == doctest::Approx(3.21455025366432).epsilon(1e-9));
    CHECK(r.loa_lower == doctest::Approx(-4.6338518305154).epsilon(1e-9));
    CHECK(r.loa_upper == doctest::Approx(7.96718516384873).epsilon(1e-9));
    CHECK(r.bias_ci_low == doctest::Approx(5.0 / 3.0 - 7.98538551134517).epsilon(1e-9));
    CHECK(r.bias_ci_high == doctest::Approx(5.0 / 3.0 + 7.98538551134517).epsilon(1e-9));
    CHECK(r.loa_ci_halfwidth == doctest::Approx(13.8310934236742).epsilon(1e-9));

    const MeanAbsDifference md = mean_abs_difference(pairs);
    CHECK(md.md == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(md.sd == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("mean absolute difference on mixed-sign differences") {
    // Differences {+3, -5, +4}: |d| = {3, 5, 4}, mean 4, sample sd 1.
    const MeanAbsDifference md = mean_abs_difference(from_diffs({3.0, -5.0, 4.0}));
    CHECK(md.md == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(md.sd == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("mean absolute difference of a single pair has zero spread") {
    const MeanAbsDifference md = mean_abs_difference(from_diffs({2.5}));
    CHECK(md.md == doctest::Approx(2.5));
    CHECK(md.sd == 0.0);
}

TEST_CASE("swapping methods negates the bias and mirrors the limits") {
    std::mt19937_64 rng(601);
    std::normal_distribution<double> noise(0.0, 2.0);
    PairedMeasurements pairs;
    for (int i = 0; i < 25; ++i) {
        MeasurementPair p;
        p.reference = 55.0 + noise(rng);
        p.estimate = p.reference + 1.0 + noise(rng);
        pairs.push_back(p);
    }
    PairedMeasurements swapped = pairs;
    for (auto& p : swapped) std::swap(p.reference, p.estimate);
    const BlandAltmanReport a = bland_altman(pairs);
    const BlandAltmanReport b = bland_altman(swapped);
    CHECK(b.bias == doctest::Approx(-a.bias).epsilon(1e-12));
    CHECK(b.sd == doctest::Approx(a.sd).epsilon(1e-12));
    CHECK(b.loa_lower == doctest::Approx(-a.loa_upper).epsilon(1e-12));
    CHECK(b.loa_upper == doctest::Approx(-a.loa_lower).epsilon(1e-12));
    CHECK(b.bias_ci_low == doctest::Approx(-a.bias_ci_high).epsilon(1e-12));
    CHECK(b.bias_ci_high == doctest::Approx(-a.bias_ci_low).epsilon(1e-12));
    CHECK(b.loa_ci_halfwidth == doctest::Approx(a.loa_ci_halfwidth).epsilon(1e-12));
}

TEST_CASE("shifting both methods by a constant leaves the analysis unchanged") {
    std::mt19937_64 rng(602);
    std::normal_distribution<double> noise(0.0, 3.0);
    PairedMeasurements pairs;
    for (int i = 0; i < 20; ++i) {
        MeasurementPair p;
        p.reference = 40.0 + noise(rng);
        p.estimate = p.reference - 2.0 + noise(rng);
        pairs.push_back(p);
    }
    PairedMeasurements shifted = pairs;
    for (auto& p : shifted) {
        p.reference += 17.25;
        p.estimate += 17.25;
    }
    const BlandAltmanReport a = bland_altman(pairs);
    const BlandAltmanReport b = bland_altman(shifted);
    CHECK(b.bias == doctest::Approx(a.bias).epsilon(1e-12));
    CHECK(b.sd == doctest::Approx(a.sd).epsilon(1e-12));
    CHECK(b.loa_lower == doctest::Approx(a.loa_lower).epsilon(1e-12));
    CHECK(b.loa_upper == doctest::Approx(a.loa_upper).epsilon(1e-12));
}

TEST_CASE("bland-altman recovers the generator of gaussian differences") {
    // Differences drawn from N(-3.7, 3.5^2), five hundred pairs.
    std::mt19937_64 rng(603);
    std::normal_distribution<double> diff(-3.7, 3.5);
    PairedMeasurements pairs;
    for (int i = 0; i < 500; ++i) {
        MeasurementPair p;
        p.reference = 55.0 + 6.0 * std::sin(0.37 * i);
        p.estimate = p.reference + diff(rng);
        pairs.push_back(p);
    }
    const BlandAltmanReport r = bland_altman(pairs);
    CHECK(std::fabs(r.bias - (-3.7)) < 0.5);
    CHECK(std::fabs(r.sd - 3.5) < 0.4);
    CHECK(r.loa_lower == doctest::Approx(r.bias - 1.96 * r.sd).epsilon(1e-12));
    CHECK(r.loa_upper == doctest::Approx(r.bias + 1.96 * r.sd).epsilon(1e-12));
}

TEST_CASE("bland-altman needs two pairs") {
    CHECK_THROWS_AS(bland_altman(from_diffs({1.0})), std::invalid_argument);
    CHECK_NOTHROW(bland_altman(from_diffs({1.0, 2.0})));
    CHECK_THROWS_AS(mean_abs_difference({}), std::invalid_argument);
}

TEST_CASE("proportional bias detects a slope in the differences") {
    // d = 0.5 * mean exactly: slope 0.5 with zero residual, so the flag
    // must raise.
    PairedMeasurements pairs;
    for (double m : {40.0, 50.0, 60.0, 70.0}) {
        MeasurementPair p;
        // mean (ref+est)/2 = m and est-ref = 0.5*m.
        p.reference = m - 0.25 * m;
        p.estimate = m + 0.25 * m;
        pairs.push_back(p);
    }
    const ProportionalBias pb = proportional_bias_check(pairs);
    CHECK(pb.slope == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(pb.se == doctest::Approx(0.0));
    CHECK(pb.flag);
}

TEST_CASE("proportional bias on the three-subject hand case") {
    PairedMeasurements pairs;
    pairs.push_back({"a", 50.0, 53.0});
    pairs.push_back({"b", 60.0, 58.0});
    pairs.push_back({"c", 55.0, 59.0});
    const ProportionalBias pb = proportional_bias_check(pairs);
    CHECK(pb.slope == doctest::Approx(-0.486187845303867).epsilon(1e-9));
    CHECK(pb.se == doctest::Approx(0.669853903479676).epsilon(1e-9));
    CHECK_FALSE(pb.flag);  // |slope| < 2 se
}

TEST_CASE("proportional bias needs three pairs and non-constant means") {
    CHECK_THROWS_AS(proportional_bias_check(from_diffs({1.0, 2.0})),
                    std::invalid_argument);
    PairedMeasurements constant;
    for (int i = 0; i < 4; ++i) {
        MeasurementPair p;
        p.reference = 50.0 - double(i);
        p.estimate = 50.0 + double(i);  // mean always 50
        constant.push_back(p);
    }
    CHECK_THROWS_AS(proportional_bias_check(constant), std::invalid_argument);
}

TEST_CASE("an unbiased method flags no proportional bias") {
    std::mt19937_64 rng(604);
    std::normal_distribution<double> noise(0.0, 1.0);
    PairedMeasurements pairs;
    for (int i = 0; i < 50; ++i) {
        MeasurementPair p;
        p.reference = 45.0 + double(i % 10);
        p.estimate = p.reference + noise(rng);
        pairs.push_back(p);
    }
    const ProportionalBias pb = proportional_bias_check(pairs);
    CHECK_FALSE(pb.flag);
}
