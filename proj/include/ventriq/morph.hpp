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

#ifndef VENTRIQ_MORPH_HPP
#define VENTRIQ_MORPH_HPP

#include "ventriq/volgrid.hpp"

namespace ventriq {

/// Structuring element, symmetric about its center (so erosion and
/// dilation are duals). Cross6 is the 6-connected cross, Cube26 the full
/// 3x3x3 neighborhood. Both contain the center voxel.
enum class StructuringElement { Cross6, Cube26 };

/// Voxel stays foreground iff every element neighbor (out-of-bounds counts
/// as background) is foreground.
BinaryMask erode(const BinaryMask& mask, StructuringElement se = StructuringElement::Cross6);

/// Voxel becomes foreground iff any element neighbor is foreground.
BinaryMask dilate(const BinaryMask& mask, StructuringElement se = StructuringElement::Cross6);

/// Morphological opening: erode then dilate.
BinaryMask open(const BinaryMask& mask, StructuringElement se = StructuringElement::Cross6);

/// Morphological closing: dilate then erode.
BinaryMask close(const BinaryMask& mask, StructuringElement se = StructuringElement::Cross6);

/// Converts background cavities to foreground: background voxels with no
/// 6-connected background path to the grid boundary are filled.
BinaryMask fill_holes(const BinaryMask& mask);

/// Segmentation postprocessing: threshold, one opening, then cavity fill.
BinaryMask postprocess(const ProbabilityMap& p, double threshold_value = 0.5,
                       StructuringElement se = StructuringElement::Cross6);

}  // namespace ventriq

#endif
