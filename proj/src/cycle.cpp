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

#include "ventriq/cycle.hpp"

#include <cmath>
#include <stdexcept>

#include "ventriq/mesh.hpp"
#include "parallel.hpp"

namespace ventriq {

std::string to_string(MetricKind metric) {
    switch (metric) {
        case MetricKind::Volume: return "volume";
        case MetricKind::SurfaceArea: return "surface-area";
        case MetricKind::MidSliceArea: return "slice-area";
    }
    return "volume";
}

MetricKind parse_metric(const std::string& name) {
    if (name == "volume") return MetricKind::Volume;
    if (name == "surface-area") return MetricKind::SurfaceArea;
    if (name == "slice-area") return MetricKind::MidSliceArea;
    throw std::invalid_argument("unknown metric \"" + name +
                                "\" (expected volume|surface-area|slice-area)");
}

void validate(const CycleSeries& series) {
    if (series.phases.size() != series.values.size())
        throw std::invalid_argument("CycleSeries: phases/values length mismatch");
    if (series.phases.size() < 2)
        throw std::invalid_argument("CycleSeries: need at least 2 phases");
    for (double v : series.values)
        if (!std::isfinite(v) || v < 0.0)
            throw std::invalid_argument("CycleSeries: values must be finite and >= 0");
    if (series.mid_slice_index.has_value() != (series.metric == MetricKind::MidSliceArea))
        throw std::invalid_argument(
            "CycleSeries: mid_slice_index is set iff metric is MidSliceArea");
}

int select_mid_slice(const StackSeries& series) {
    const int nz = series.dims().nz;
    const std::size_t n_phases = series.size();

    std::vector<std::vector<double>> areas(n_phases);
    for (std::size_t t = 0; t < n_phases; ++t)
        areas[t] = slice_areas(series.phases()[t].mask);

    int best_z = 0;
    double best_var = -1.0;
    for (int z = 0; z < nz; ++z) {
        double mean = 0.0;
        for (std::size_t t = 0; t < n_phases; ++t) mean += areas[t][z];
        mean /= static_cast<double>(n_phases);
        double var = 0.0;
        for (std::size_t t = 0; t < n_phases; ++t) {
            const double d = areas[t][z] - mean;
            var += d * d;
        }
        var /= static_cast<double>(n_phases);
        if (var > best_var) {  // strict: ties keep the lowest z
            best_var = var;
            best_z = z;
        }
    }
    return best_z;
}

CycleSeries build_series(const StackSeries& series, MetricKind metric) {
    CycleSeries out;
    out.metric = metric;
    const std::size_t n = series.size();
    out.phases.resize(n);
    out.values.resize(n);
    for (std::size_t t = 0; t < n; ++t) out.phases[t] = series.phases()[t].index;

    int mid = 0;
    if (metric == MetricKind::MidSliceArea) {
        mid = select_mid_slice(series);
        out.mid_slice_index = mid;
    }

    detail::parallel_for(n, [&](std::size_t t) {
        const BinaryMask& mask = series.phases()[t].mask;
        switch (metric) {
            case MetricKind::Volume:
                out.values[t] = mask_volume(mask);
                break;
            case MetricKind::SurfaceArea:
                out.values[t] = mask.foreground_count() == 0
                                    ? 0.0
                                    : surface_area(extract_isosurface(mask));
                break;
            case MetricKind::MidSliceArea:
                out.values[t] = slice_areas(mask)[mid];
                break;
        }
    });
    return out;
}

}  // namespace ventriq
