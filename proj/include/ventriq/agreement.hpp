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

#ifndef VENTRIQ_AGREEMENT_HPP
#define VENTRIQ_AGREEMENT_HPP

#include <string>
#include <vector>

namespace ventriq {

/// One paired measurement of the same subject by two methods.
struct MeasurementPair {
    std::string subject;  ///< optional label, may be empty
    double reference = 0.0;
    double estimate = 0.0;
};

using PairedMeasurements = std::vector<MeasurementPair>;

struct MeanAbsDifference {
    double md = 0.0;  ///< mean of |estimate - reference|
    double sd = 0.0;  ///< sample (n-1) std of the absolute differences; 0 when n = 1
};

MeanAbsDifference mean_abs_difference(const PairedMeasurements& pairs);

/// Bland-Altman agreement statistics on differences d = estimate - reference:
/// bias = mean(d), sd with n-1, limits of agreement bias +/- 1.96 sd, a
/// t-based 95% CI for the bias, and the conventional sqrt(3/n)-variance
/// t-based halfwidth for the CI of each limit.
struct BlandAltmanReport {
    double bias = 0.0;
    double sd = 0.0;
    double loa_lower = 0.0;
    double loa_upper = 0.0;
    double bias_ci_low = 0.0;
    double bias_ci_high = 0.0;
    double loa_ci_halfwidth = 0.0;
    int n = 0;
};

/// Requires n >= 2.
BlandAltmanReport bland_altman(const PairedMeasurements& pairs);

/// OLS slope of the differences on the pair means, flagged when |slope|
/// exceeds two standard errors. Requires n >= 3 and non-constant means.
struct ProportionalBias {
    double slope = 0.0;
    double se = 0.0;
    bool flag = false;
};

ProportionalBias proportional_bias_check(const PairedMeasurements& pairs);

}  // namespace ventriq

#endif
