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

#include "ventriq/mesh.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>

#include "mc_tables.hpp"

namespace ventriq {

namespace {

// Corner layout of a cell whose minimum lattice corner is (x, y, z):
//   0:(x,  y,  z)   1:(x+1,y,  z)   2:(x+1,y+1,z)   3:(x,  y+1,z)
//   4:(x,  y,  z+1) 5:(x+1,y,  z+1) 6:(x+1,y+1,z+1) 7:(x,  y+1,z+1)
// Edge e joins kEdgeCorners[e][0] and [1], running along kEdgeAxis[e].
constexpr int kEdgeCorners[12][2] = {
    {0, 1}, {1, 2}, {2, 3}, {3, 0}, {4, 5}, {5, 6},
    {6, 7}, {7, 4}, {0, 4}, {1, 5}, {2, 6}, {3, 7},
};

constexpr int kCornerOffset[8][3] = {
    {0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
    {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1},
};

constexpr int kEdgeAxis[12] = {0, 1, 0, 1, 0, 1, 0, 1, 2, 2, 2, 2};

}  // namespace

TriangleMesh extract_isosurface(const BinaryMask& mask, double iso, bool voxel_units) {
    if (!(iso > 0.0 && iso < 1.0))
        throw std::invalid_argument("extract_isosurface: iso must lie in (0, 1)");

    TriangleMesh mesh;
    const Dims d = mask.dims();
    const Spacing s = mask.spacing();
    const auto vox = mask.voxels();

    // The lattice embeds the volume in one layer of zero padding so that
    // surfaces close around voxels touching the grid boundary. Lattice node
    // (lx, ly, lz) carries the value of voxel (lx-1, ly-1, lz-1), or 0 when
    // that index is out of range.
    const std::int64_t lnx = static_cast<std::int64_t>(d.nx) + 2;
    const std::int64_t lny = static_cast<std::int64_t>(d.ny) + 2;
    const std::int64_t lnz = static_cast<std::int64_t>(d.nz) + 2;

    auto lattice_value = [&](std::int64_t lx, std::int64_t ly, std::int64_t lz) -> double {
        const std::int64_t x = lx - 1, y = ly - 1, z = lz - 1;
        if (x < 0 || y < 0 || z < 0 || x >= d.nx || y >= d.ny || z >= d.nz) return 0.0;
        return vox[voxel_index(d, static_cast<int>(z), static_cast<int>(y),
                               static_cast<int>(x))] != 0
                   ? 1.0
                   : 0.0;
    };

    // Voxel centers sit at (index + 0.5) * spacing; lattice node l maps to
    // voxel index l - 1.
    auto node_position = [&](std::int64_t lx, std::int64_t ly, std::int64_t lz, int axis,
                             double frac) -> std::array<double, 3> {
        double px = static_cast<double>(lx - 1) + 0.5;
        double py = static_cast<double>(ly - 1) + 0.5;
        double pz = static_cast<double>(lz - 1) + 0.5;
        if (axis == 0) px += frac;
        if (axis == 1) py += frac;
        if (axis == 2) pz += frac;
        if (!voxel_units) {
            px *= s.dx;
            py *= s.dy;
            pz *= s.dz;
        }
        return {px, py, pz};
    };

    // One shared vertex per crossing lattice edge, keyed by the lattice index
    // of the edge's lower-coordinate node and the edge axis.
    std::unordered_map<std::uint64_t, std::uint32_t> edge_vertex;
    auto edge_key = [&](std::int64_t lx, std::int64_t ly, std::int64_t lz, int axis) {
        const std::uint64_t node = static_cast<std::uint64_t>((lz * lny + ly) * lnx + lx);
        return node * 3u + static_cast<std::uint64_t>(axis);
    };

    double corner[8];
    for (std::int64_t lz = 0; lz + 1 < lnz; ++lz)
        for (std::int64_t ly = 0; ly + 1 < lny; ++ly)
            for (std::int64_t lx = 0; lx + 1 < lnx; ++lx) {
                int cubeindex = 0;
                for (int c = 0; c < 8; ++c) {
                    corner[c] = lattice_value(lx + kCornerOffset[c][0], ly + kCornerOffset[c][1],
                                              lz + kCornerOffset[c][2]);
                    if (corner[c] >= iso) cubeindex |= 1 << c;
                }
                const signed char* tris = detail::kTriTable[cubeindex];
                if (tris[0] < 0) continue;

                for (int t = 0; tris[t] >= 0; t += 3) {
                    std::array<std::uint32_t, 3> tri_ids;
                    for (int v = 0; v < 3; ++v) {
                        const int e = tris[t + v];
                        const int c0 = kEdgeCorners[e][0];
                        const int c1 = kEdgeCorners[e][1];
                        const int axis = kEdgeAxis[e];
                        const int clo =
                            kCornerOffset[c0][axis] <= kCornerOffset[c1][axis] ? c0 : c1;
                        const int chi = clo == c0 ? c1 : c0;
                        const std::int64_t ex = lx + kCornerOffset[clo][0];
                        const std::int64_t ey = ly + kCornerOffset[clo][1];
                        const std::int64_t ez = lz + kCornerOffset[clo][2];
                        const std::uint64_t key = edge_key(ex, ey, ez, axis);
                        auto it = edge_vertex.find(key);
                        if (it == edge_vertex.end()) {
                            const double vlo = corner[clo];
                            const double vhi = corner[chi];
                            // Linear interpolation along the edge; a 0/1
                            // field at iso 0.5 lands on the midpoint.
                            double frac = 0.5;
                            if (vhi != vlo) frac = (iso - vlo) / (vhi - vlo);
                            const auto id = static_cast<std::uint32_t>(mesh.vertices.size());
                            mesh.vertices.push_back(node_position(ex, ey, ez, axis, frac));
                            it = edge_vertex.emplace(key, id).first;
                        }
                        tri_ids[v] = it->second;
                    }
                    mesh.triangles.push_back(tri_ids);
                }
            }

    return mesh;
}

double surface_area(const TriangleMesh& mesh) {
    double area = 0.0;
    for (const auto& tri : mesh.triangles) {
        const auto& a = mesh.vertices[tri[0]];
        const auto& b = mesh.vertices[tri[1]];
        const auto& c = mesh.vertices[tri[2]];
        const double ux = b[0] - a[0], uy = b[1] - a[1], uz = b[2] - a[2];
        const double vx = c[0] - a[0], vy = c[1] - a[1], vz = c[2] - a[2];
        const double cx = uy * vz - uz * vy;
        const double cy = uz * vx - ux * vz;
        const double cz = ux * vy - uy * vx;
        area += 0.5 * std::sqrt(cx * cx + cy * cy + cz * cz);
    }
    return area;
}

}  // namespace ventriq
