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

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "ventriq/phantom.hpp"
#include "ventriq/volgrid.hpp"

using namespace ventriq;

TEST_CASE("default phantom has the documented geometry") {
    const auto [series, gt] = generate(PhantomSpec{});
    CHECK(series.size() == 13);
    CHECK(series.dims().nz == 12);
    CHECK(series.dims().ny == 86);
    CHECK(series.dims().nx == 98);
    CHECK(series.spacing().dx == doctest::Approx(0.5));
    CHECK(series.spacing().dy == doctest::Approx(0.5));
    CHECK(series.spacing().dz == doctest::Approx(1.5));
    for (const Phase& p : series.phases()) {
        REQUIRE(p.intensity.has_value());
        CHECK(p.intensity->dims().count() == series.dims().count());
    }
    REQUIRE(gt.volumes.size() == 13);
    REQUIRE(gt.analytic_volumes.size() == 13);
}

TEST_CASE("the waveform peaks at phase zero and bottoms at the es phase") {
    PhantomSpec spec;
    spec.n_phases = 13;
    spec.es_phase_fraction = 0.4;  // rounds to phase 5
    const auto [series, gt] = generate(spec);
    CHECK(gt.ed_phase == 0);
    CHECK(gt.es_phase == 5);
    CHECK(gt.analytic_volumes[0] == doctest::Approx(spec.v_ed_target).epsilon(1e-12));
    const double v_es_target = spec.v_ed_target * (1.0 - spec.ef_target / 100.0);
    CHECK(gt.analytic_volumes[5] == doctest::Approx(v_es_target).epsilon(1e-12));
    // Monotone decrease into ES, monotone increase after.
    for (int t = 1; t <= 5; ++t)
        CHECK(gt.analytic_volumes[t] < gt.analytic_volumes[t - 1]);
    for (int t = 6; t < 13; ++t)
        CHECK(gt.analytic_volumes[t] > gt.analytic_volumes[t - 1]);
    // Voxelized extrema sit at the constructed phases.
    CHECK(std::max_element(gt.volumes.begin(), gt.volumes.end()) - gt.volumes.begin() ==
          0);
    CHECK(std::min_element(gt.volumes.begin(), gt.volumes.end()) - gt.volumes.begin() ==
          5);
}

TEST_CASE("voxelized volumes track the analytic waveform within five percent") {
    const auto [series, gt] = generate(PhantomSpec{});
    for (std::size_t t = 0; t < gt.volumes.size(); ++t) {
        // All default-phantom cavities are much larger than 200 voxels.
        CHECK(gt.volumes[t] / series.spacing().voxel_volume() > 200.0);
        const double rel = std::fabs(gt.volumes[t] - gt.analytic_volumes[t]) /
                           gt.analytic_volumes[t];
        CHECK(rel < 0.05);
    }
}

TEST_CASE("phantom masks are one hole-free connected component") {
    PhantomSpec spec;
    spec.seed = 4;
    const auto [series, gt] = generate(spec);
    for (const Phase& p : series.phases()) {
        CHECK(oracle::count_components(p.mask, 26) == 1);
        CHECK_FALSE(oracle::has_cavity(p.mask));
    }
}

TEST_CASE("phantom volumes equal the mask volumes downstream code will see") {
    const auto [series, gt] = generate(PhantomSpec{});
    for (std::size_t t = 0; t < series.size(); ++t)
        CHECK(gt.volumes[t] == doctest::Approx(mask_volume(series.phases()[t].mask))
                                   .epsilon(1e-12));
}

TEST_CASE("ground-truth EF comes from the voxelized extremes") {
    GroundTruth gt;
    gt.volumes = {480.0, 400.0, 216.0, 350.0};
    gt.ed_phase = 0;
    gt.es_phase = 2;
    CHECK(ground_truth_ef(gt) == doctest::Approx(55.0).epsilon(1e-12));
}

TEST_CASE("generated EF lands within three points of the target") {
    for (double ef : {40.0, 55.0, 67.0}) {
        PhantomSpec spec;
        spec.ef_target = ef;
        const auto [series, gt] = generate(spec);
        CHECK(std::fabs(gt.ef_percent - ef) < 3.0);
        CHECK(gt.ef_percent == doctest::Approx(ground_truth_ef(gt)).epsilon(1e-12));
    }
}

TEST_CASE("generation is deterministic for a fixed PhantomSpec") {
    PhantomSpec spec;
    spec.seed = 9;
    const auto [a_series, a_gt] = generate(spec);
    const auto [b_series, b_gt] = generate(spec);
    for (std::size_t t = 0; t < a_series.size(); ++t) {
        CHECK(oracle::eq(a_series.phases()[t].mask.voxels(), b_series.phases()[t].mask.voxels()));
        CHECK(oracle::eq(a_series.phases()[t].intensity->voxels(),
                         b_series.phases()[t].intensity->voxels()));
    }
    CHECK(a_gt.volumes == b_gt.volumes);
    CHECK(a_gt.ef_percent == b_gt.ef_percent);
}

TEST_CASE("the seed only jitters the centres, not the waveform") {
    PhantomSpec a, b;
    a.seed = 1;
    b.seed = 2;
    const auto [sa, ga] = generate(a);
    const auto [sb, gb] = generate(b);
    CHECK(ga.analytic_volumes == gb.analytic_volumes);
    bool any_mask_differs = false;
    for (std::size_t t = 0; t < sa.size(); ++t)
        if (!oracle::eq(sa.phases()[t].mask.voxels(), sb.phases()[t].mask.voxels()))
            any_mask_differs = true;
    CHECK(any_mask_differs);
}

TEST_CASE("intensities separate cavity, myocardium, and background") {
    PhantomSpec spec;
    const auto [series, gt] = generate(spec);
    const Phase& p = series.phases()[0];
    // Cavity voxels carry the cavity intensity.
    bool saw_cavity = false, saw_wall = false, saw_bg = false;
    for (std::size_t i = 0; i < p.mask.voxels().size(); ++i) {
        const double v = p.intensity->voxels()[i];
        if (p.mask.voxels()[i]) {
            CHECK(v == doctest::Approx(spec.cavity_intensity));
            saw_cavity = true;
        } else if (v == spec.myocardium_intensity) {
            saw_wall = true;
        } else if (v == spec.background_intensity) {
            saw_bg = true;
        }
    }
    CHECK(saw_cavity);
    CHECK(saw_wall);
    CHECK(saw_bg);
}

TEST_CASE("phantom spec validation") {
    PhantomSpec bad;
    bad.n_phases = 1;
    CHECK_THROWS_AS(generate(bad), std::invalid_argument);

    bad = PhantomSpec{};
    bad.ef_target = 0.0;
    CHECK_THROWS_AS(generate(bad), std::invalid_argument);
    bad.ef_target = 100.0;
    CHECK_THROWS_AS(generate(bad), std::invalid_argument);

    bad = PhantomSpec{};
    bad.v_ed_target = -5.0;
    CHECK_THROWS_AS(generate(bad), std::invalid_argument);

    bad = PhantomSpec{};
    bad.es_phase_fraction = 0.0;
    CHECK_THROWS_AS(generate(bad), std::invalid_argument);

    // A cavity that cannot fit the grid is rejected.
    bad = PhantomSpec{};
    bad.v_ed_target = 1.0e9;
    CHECK_THROWS_AS(generate(bad), std::invalid_argument);
}

TEST_CASE("eleven and twelve phase phantoms are well-formed too") {
    for (int n : {11, 12}) {
        PhantomSpec spec;
        spec.n_phases = n;
        spec.seed = 3;
        const auto [series, gt] = generate(spec);
        CHECK((int)series.size() == n);
        CHECK(gt.ed_phase == 0);
        CHECK(gt.es_phase == (int)std::llround(n * spec.es_phase_fraction));
        CHECK(gt.ef_percent > 0.0);
        CHECK(gt.ef_percent < 100.0);
    }
}
