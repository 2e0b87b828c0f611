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

#ifndef VENTRIQ_METRICS_HPP
#define VENTRIQ_METRICS_HPP

#include <array>
#include <vector>

#include "ventriq/volgrid.hpp"

namespace ventriq {

/// Parameters of the Dice loss family and its border weight map.
struct LossConfig {
    double epsilon = 1.0;  ///< smoothing constant of the soft Dice terms
    double w0 = 2.0;       ///< border-weight amplitude
    double sigma = 1.0;    ///< border-weight width, in voxels
    /// Per-class balance weights, indexed by voxel label {background,
    /// foreground}.
    std::array<double, 2> class_weights{1.0, 1.0};
};

/// Per-voxel loss weights on a grid; always >= min(class_weights).
struct WeightMap {
    Dims dims;
    Spacing spacing;
    std::vector<double> values;
};

/// Sørensen-Dice overlap 2|A∩B| / (|A|+|B|). Two empty masks agree
/// perfectly and score 1.
double dice(const BinaryMask& a, const BinaryMask& b);

/// Smoothed two-class Dice loss over the whole grid:
///   1 - (Σ t·p + ε)/(Σ (t+p) + ε) - (Σ (1-t)(1-p) + ε)/(Σ (2-t-p) + ε).
/// Zero in the perfect-prediction large-N limit; can be negative on small
/// grids because of the smoothing terms.
double soft_dice_loss(const BinaryMask& t, const ProbabilityMap& p,
                      const LossConfig& cfg = {});

/// Border-emphasis weight map
///   w(i) = w_class(t_i) + w0 · exp(-(d1(i)+d2(i))² / (2σ²))
/// with d1 the Euclidean distance (voxel units) to the border of the
/// nearest foreground component (26-connectivity) and d2 the distance to
/// the border of the second-nearest component; d2 = d1 when fewer than two
/// components exist. Border voxels are foreground voxels with an in-grid
/// 6-neighbor in the background. With no borders at all the exponential
/// term is zero everywhere.
WeightMap weight_map(const BinaryMask& t, const LossConfig& cfg = {});

/// soft_dice_loss scaled by the total mass of the weight map,
/// Σ_i w(t_i) · L_DSC.
double weighted_dice_loss(const BinaryMask& t, const ProbabilityMap& p,
                          const LossConfig& cfg = {});

/// Directed Hausdorff distance max_{a∈A} min_{b∈B} over foreground voxel
/// centers, in mm when use_spacing is set and voxel units otherwise.
/// Both masks must be nonempty.
double hausdorff_directed(const BinaryMask& a, const BinaryMask& b, bool use_spacing = true);

/// Bidirectional Hausdorff distance: max of the two directed distances.
double hausdorff(const BinaryMask& a, const BinaryMask& b, bool use_spacing = true);

/// Intraclass correlation flavors: two-way random effects with absolute
/// agreement (ICC(2,1)) or two-way mixed with consistency (ICC(3,1)),
/// both single-rater.
enum class IccForm { Agreement21, Consistency31 };

struct IccResult {
    double value = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

/// ICC of an n-subjects x k-raters table (n >= 3, k >= 2) from the two-way
/// ANOVA mean squares, with the conventional 95% F-distribution confidence
/// interval. A table with no variance at all is perfect agreement by
/// convention: value 1 with CI [1, 1].
IccResult icc(const std::vector<std::vector<double>>& ratings,
              IccForm form = IccForm::Agreement21);

/// Shorthand for icc(ratings, IccForm::Agreement21).
IccResult icc_2_1(const std::vector<std::vector<double>>& ratings);

}  // namespace ventriq

#endif
