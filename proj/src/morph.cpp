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

#include "ventriq/morph.hpp"

#include <array>
#include <vector>

namespace ventriq {

namespace {

struct Offset {
    int dz, dy, dx;
};

std::vector<Offset> element_offsets(StructuringElement se) {
    if (se == StructuringElement::Cross6) {
        return {{0, 0, 0}, {-1, 0, 0}, {1, 0, 0}, {0, -1, 0}, {0, 1, 0}, {0, 0, -1}, {0, 0, 1}};
    }
    std::vector<Offset> offs;
    offs.reserve(27);
    for (int dz = -1; dz <= 1; ++dz)
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) offs.push_back({dz, dy, dx});
    return offs;
}

}  // namespace

BinaryMask erode(const BinaryMask& mask, StructuringElement se) {
    const Dims& d = mask.dims();
    const auto offs = element_offsets(se);
    std::vector<std::uint8_t> out(d.count(), 0);
    std::size_t o = 0;
    for (int z = 0; z < d.nz; ++z)
        for (int y = 0; y < d.ny; ++y)
            for (int x = 0; x < d.nx; ++x, ++o) {
                bool keep = true;
                for (const Offset& k : offs) {
                    const int zz = z + k.dz, yy = y + k.dy, xx = x + k.dx;
                    if (zz < 0 || zz >= d.nz || yy < 0 || yy >= d.ny || xx < 0 || xx >= d.nx ||
                        !mask.at(zz, yy, xx)) {
                        keep = false;
                        break;
                    }
                }
                out[o] = keep ? 1 : 0;
            }
    return BinaryMask(d, mask.spacing(), std::move(out));
}

BinaryMask dilate(const BinaryMask& mask, StructuringElement se) {
    const Dims& d = mask.dims();
    const auto offs = element_offsets(se);
    std::vector<std::uint8_t> out(d.count(), 0);
    std::size_t o = 0;
    for (int z = 0; z < d.nz; ++z)
        for (int y = 0; y < d.ny; ++y)
            for (int x = 0; x < d.nx; ++x, ++o) {
                for (const Offset& k : offs) {
                    const int zz = z + k.dz, yy = y + k.dy, xx = x + k.dx;
                    if (zz >= 0 && zz < d.nz && yy >= 0 && yy < d.ny && xx >= 0 && xx < d.nx &&
                        mask.at(zz, yy, xx)) {
                        out[o] = 1;
                        break;
                    }
                }
            }
    return BinaryMask(d, mask.spacing(), std::move(out));
}

BinaryMask open(const BinaryMask& mask, StructuringElement se) { return dilate(erode(mask, se), se); }

BinaryMask close(const BinaryMask& mask, StructuringElement se) { return erode(dilate(mask, se), se); }

BinaryMask fill_holes(const BinaryMask& mask) {
    const Dims& d = mask.dims();
    auto vox = mask.voxels();
    // flood fill background from the grid boundary, 6-connected
    std::vector<std::uint8_t> reached(d.count(), 0);
    std::vector<std::size_t> stack;
    auto push = [&](int z, int y, int x) {
        const std::size_t i = voxel_index(d, z, y, x);
        if (!vox[i] && !reached[i]) {
            reached[i] = 1;
            stack.push_back(i);
        }
    };
    for (int z = 0; z < d.nz; ++z)
        for (int y = 0; y < d.ny; ++y)
            for (int x = 0; x < d.nx; ++x)
                if (z == 0 || z == d.nz - 1 || y == 0 || y == d.ny - 1 || x == 0 || x == d.nx - 1)
                    push(z, y, x);
    while (!stack.empty()) {
        const std::size_t i = stack.back();
        stack.pop_back();
        const int x = static_cast<int>(i % d.nx);
        const int y = static_cast<int>((i / d.nx) % d.ny);
        const int z = static_cast<int>(i / (static_cast<std::size_t>(d.nx) * d.ny));
        if (z > 0) push(z - 1, y, x);
        if (z < d.nz - 1) push(z + 1, y, x);
        if (y > 0) push(z, y - 1, x);
        if (y < d.ny - 1) push(z, y + 1, x);
        if (x > 0) push(z, y, x - 1);
        if (x < d.nx - 1) push(z, y, x + 1);
    }
    std::vector<std::uint8_t> out(d.count());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = (vox[i] || !reached[i]) ? 1 : 0;
    return BinaryMask(d, mask.spacing(), std::move(out));
}

BinaryMask postprocess(const ProbabilityMap& p, double threshold_value, StructuringElement se) {
    return fill_holes(open(threshold(p, threshold_value), se));
}

}  // namespace ventriq
