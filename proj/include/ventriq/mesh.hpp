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

#ifndef VENTRIQ_MESH_HPP
#define VENTRIQ_MESH_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "ventriq/volgrid.hpp"

namespace ventriq {

/// Triangle surface mesh with vertices in physical coordinates.
struct TriangleMesh {
    std::vector<std::array<double, 3>> vertices;
    std::vector<std::array<std::uint32_t, 3>> triangles;

    bool empty() const { return triangles.empty(); }
};

/// Marching-cubes triangulation of the iso-level of the mask treated as a
/// 0/1 scalar field sampled at voxel centers, with linear edge
/// interpolation. The grid is padded by one background layer so surfaces
/// are closed. Vertices are in mm (voxel index times spacing) unless
/// voxel_units is set. iso must lie in (0, 1); an empty mask yields an
/// empty mesh.
TriangleMesh extract_isosurface(const BinaryMask& mask, double iso = 0.5,
                                bool voxel_units = false);

/// Total area: sum over triangles of |(b-a) x (c-a)| / 2.
double surface_area(const TriangleMesh& mesh);

}  // namespace ventriq

#endif
