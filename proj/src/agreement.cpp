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

#include "ventriq/agreement.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

namespace ventriq {

namespace {

void check_finite(const PairedMeasurements& pairs) {
    for (const auto& p : pairs)
        if (!std::isfinite(p.reference) || !std::isfinite(p.estimate))
            throw std::invalid_argument("agreement: non-finite measurement");
}

double mean_of(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m += x;
    return m / static_cast<double>(v.size());
}

double sample_sd(const std::vector<double>& v, double mean) {
    if (v.size() < 2) return 0.0;
    double acc = 0.0;
    for (double x : v) acc += (x - mean) * (x - mean);
    return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

}  // namespace

MeanAbsDifference mean_abs_difference(const PairedMeasurements& pairs) {
    if (pairs.empty()) throw std::invalid_argument("mean_abs_difference: no pairs");
    check_finite(pairs);
    std::vector<double> abs_diffs;
    abs_diffs.reserve(pairs.size());
    for (const auto& p : pairs) abs_diffs.push_back(std::abs(p.estimate - p.reference));
    MeanAbsDifference out;
    out.md = mean_of(abs_diffs);
    out.sd = sample_sd(abs_diffs, out.md);
    return out;
}

BlandAltmanReport bland_altman(const PairedMeasurements& pairs) {
    const std::size_t n = pairs.size();
    if (n < 2) throw std::invalid_argument("bland_altman: need at least 2 pairs");
    check_finite(pairs);

    std::vector<double> diffs;
    diffs.reserve(n);
    for (const auto& p : pairs) diffs.push_back(p.estimate - p.reference);

    BlandAltmanReport rep;
    rep.n = static_cast<int>(n);
    rep.bias = mean_of(diffs);
    rep.sd = sample_sd(diffs, rep.bias);
    rep.loa_lower = rep.bias - 1.96 * rep.sd;
    rep.loa_upper = rep.bias + 1.96 * rep.sd;

    const double dn = static_cast<double>(n);
    const boost::math::students_t t_dist(dn - 1.0);
    const double t = boost::math::quantile(t_dist, 0.975);
    const double bias_half = t * rep.sd / std::sqrt(dn);
    rep.bias_ci_low = rep.bias - bias_half;
    rep.bias_ci_high = rep.bias + bias_half;
    rep.loa_ci_halfwidth = t * rep.sd * std::sqrt(3.0 / dn);
    return rep;
}

ProportionalBias proportional_bias_check(const PairedMeasurements& pairs) {
    const std::size_t n = pairs.size();
    if (n < 3) throw std::invalid_argument("proportional_bias_check: need at least 3 pairs");
    check_finite(pairs);

    std::vector<double> means, diffs;
    means.reserve(n);
    diffs.reserve(n);
    for (const auto& p : pairs) {
        means.push_back((p.estimate + p.reference) / 2.0);
        diffs.push_back(p.estimate - p.reference);
    }
    const double mx = mean_of(means);
    const double my = mean_of(diffs);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (means[i] - mx) * (means[i] - mx);
        sxy += (means[i] - mx) * (diffs[i] - my);
    }
    if (sxx == 0.0)
        throw std::invalid_argument("proportional_bias_check: all pair means equal");

    ProportionalBias out;
    out.slope = sxy / sxx;
    const double intercept = my - out.slope * mx;
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = diffs[i] - (intercept + out.slope * means[i]);
        rss += r * r;
    }
    out.se = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
    out.flag = std::abs(out.slope) > 2.0 * out.se;
    return out;
}

}  // namespace ventriq
