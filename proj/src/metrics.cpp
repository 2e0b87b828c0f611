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

#include "ventriq/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include <boost/math/distributions/fisher_f.hpp>

namespace ventriq {

namespace {

void check_same_dims(const Dims& a, const Dims& b, const char* op) {
    if (!(a == b)) throw std::invalid_argument(std::string(op) + ": dimension mismatch");
}

void check_loss_config(const LossConfig& cfg) {
    if (!(cfg.epsilon > 0.0)) throw std::invalid_argument("LossConfig: epsilon must be > 0");
    if (!(cfg.w0 >= 0.0)) throw std::invalid_argument("LossConfig: w0 must be >= 0");
    if (!(cfg.sigma > 0.0)) throw std::invalid_argument("LossConfig: sigma must be > 0");
    for (double w : cfg.class_weights)
        if (!(w > 0.0)) throw std::invalid_argument("LossConfig: class weights must be > 0");
}

constexpr double kFar = 1e20;  // effectively-infinite squared distance

// One pass of the exact squared Euclidean distance transform along one
// axis (Felzenszwalb & Huttenlocher lower-envelope-of-parabolas scan).
// f holds input squared distances at stride `stride`, n samples; results
// are written back in place.
void dt_axis(double* f, int n, std::ptrdiff_t stride, std::vector<int>& v,
             std::vector<double>& z, std::vector<double>& scratch) {
    v.resize(n);
    z.resize(n + 1);
    scratch.resize(n);
    for (int i = 0; i < n; ++i) scratch[i] = f[i * stride];

    int k = 0;
    v[0] = 0;
    z[0] = -kFar;
    z[1] = kFar;
    auto intersect = [&](int p, int q) {
        return ((scratch[q] + static_cast<double>(q) * q) -
                (scratch[p] + static_cast<double>(p) * p)) /
               (2.0 * q - 2.0 * p);
    };
    for (int q = 1; q < n; ++q) {
        double s = intersect(v[k], q);
        while (s <= z[k]) {
            --k;
            s = intersect(v[k], q);
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = kFar;
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        const double dq = q - v[k];
        f[q * stride] = dq * dq + scratch[v[k]];
    }
}

// Exact squared EDT of the whole grid to the given seed set (seed entries
// 0, all others kFar), in isotropic voxel units.
void squared_edt(std::vector<double>& field, const Dims& d) {
    std::vector<int> v;
    std::vector<double> z, scratch;
    for (int zz = 0; zz < d.nz; ++zz)
        for (int yy = 0; yy < d.ny; ++yy)
            dt_axis(&field[voxel_index(d, zz, yy, 0)], d.nx, 1, v, z, scratch);
    for (int zz = 0; zz < d.nz; ++zz)
        for (int xx = 0; xx < d.nx; ++xx)
            dt_axis(&field[voxel_index(d, zz, 0, xx)], d.ny, d.nx, v, z, scratch);
    for (int yy = 0; yy < d.ny; ++yy)
        for (int xx = 0; xx < d.nx; ++xx)
            dt_axis(&field[voxel_index(d, 0, yy, xx)], d.nz,
                    static_cast<std::ptrdiff_t>(d.nx) * d.ny, v, z, scratch);
}

// 26-connected component labels, 0 for background, 1..n for components.
std::vector<int> label_components_26(const BinaryMask& mask, int& n_components) {
    const Dims& d = mask.dims();
    std::vector<int> labels(d.count(), 0);
    std::vector<std::size_t> stack;
    n_components = 0;
    std::size_t o = 0;
    for (int z = 0; z < d.nz; ++z)
        for (int y = 0; y < d.ny; ++y)
            for (int x = 0; x < d.nx; ++x, ++o) {
                if (!mask.voxels()[o] || labels[o]) continue;
                const int id = ++n_components;
                labels[o] = id;
                stack.push_back(o);
                while (!stack.empty()) {
                    const std::size_t cur = stack.back();
                    stack.pop_back();
                    const int cz = static_cast<int>(cur / (static_cast<std::size_t>(d.ny) * d.nx));
                    const int cy = static_cast<int>(cur / d.nx % d.ny);
                    const int cx = static_cast<int>(cur % d.nx);
                    for (int dz = -1; dz <= 1; ++dz)
                        for (int dy = -1; dy <= 1; ++dy)
                            for (int dx = -1; dx <= 1; ++dx) {
                                if (!dz && !dy && !dx) continue;
                                const int zz = cz + dz, yy = cy + dy, xx = cx + dx;
                                if (zz < 0 || zz >= d.nz || yy < 0 || yy >= d.ny || xx < 0 ||
                                    xx >= d.nx)
                                    continue;
                                const std::size_t idx = voxel_index(d, zz, yy, xx);
                                if (mask.voxels()[idx] && !labels[idx]) {
                                    labels[idx] = id;
                                    stack.push_back(idx);
                                }
                            }
                }
            }
    return labels;
}

// Foreground voxel with an in-grid background 6-neighbor.
bool is_border_voxel(const BinaryMask& mask, int z, int y, int x) {
    static constexpr int kSteps[6][3] = {{-1, 0, 0}, {1, 0, 0},  {0, -1, 0},
                                         {0, 1, 0},  {0, 0, -1}, {0, 0, 1}};
    const Dims& d = mask.dims();
    for (const auto& st : kSteps) {
        const int zz = z + st[0], yy = y + st[1], xx = x + st[2];
        if (zz < 0 || zz >= d.nz || yy < 0 || yy >= d.ny || xx < 0 || xx >= d.nx) continue;
        if (!mask.at(zz, yy, xx)) return true;
    }
    return false;
}

std::vector<std::size_t> foreground_indices(const BinaryMask& m) {
    std::vector<std::size_t> idx;
    idx.reserve(m.foreground_count());
    const auto vox = m.voxels();
    for (std::size_t i = 0; i < vox.size(); ++i)
        if (vox[i]) idx.push_back(i);
    return idx;
}

}  // namespace

double dice(const BinaryMask& a, const BinaryMask& b) {
    check_same_dims(a.dims(), b.dims(), "dice");
    std::size_t inter = 0, total = 0;
    const auto va = a.voxels(), vb = b.voxels();
    for (std::size_t i = 0; i < va.size(); ++i) {
        inter += va[i] & vb[i];
        total += va[i] + vb[i];
    }
    if (total == 0) return 1.0;  // both empty: perfect agreement
    return 2.0 * static_cast<double>(inter) / static_cast<double>(total);
}

double soft_dice_loss(const BinaryMask& t, const ProbabilityMap& p, const LossConfig& cfg) {
    check_same_dims(t.dims(), p.dims(), "soft_dice_loss");
    check_loss_config(cfg);
    const auto vt = t.voxels();
    const auto vp = p.voxels();
    double tp = 0.0, t_plus_p = 0.0, tn = 0.0, t_plus_p_compl = 0.0;
    for (std::size_t i = 0; i < vt.size(); ++i) {
        const double ti = vt[i];
        const double pi = vp[i];
        tp += ti * pi;
        t_plus_p += ti + pi;
        tn += (1.0 - ti) * (1.0 - pi);
        t_plus_p_compl += 2.0 - ti - pi;
    }
    const double e = cfg.epsilon;
    return 1.0 - (tp + e) / (t_plus_p + e) - (tn + e) / (t_plus_p_compl + e);
}

WeightMap weight_map(const BinaryMask& t, const LossConfig& cfg) {
    check_loss_config(cfg);
    const Dims& d = t.dims();
    const std::size_t n = d.count();

    int n_components = 0;
    const std::vector<int> labels = label_components_26(t, n_components);

    // Squared distance field to each component's border voxels. Components
    // without border voxels (e.g. filling the whole grid) stay at kFar.
    std::vector<std::vector<double>> comp_dist;
    comp_dist.reserve(n_components);
    for (int c = 1; c <= n_components; ++c) {
        std::vector<double> field(n, kFar);
        bool any_border = false;
        std::size_t o = 0;
        for (int z = 0; z < d.nz; ++z)
            for (int y = 0; y < d.ny; ++y)
                for (int x = 0; x < d.nx; ++x, ++o)
                    if (labels[o] == c && is_border_voxel(t, z, y, x)) {
                        field[o] = 0.0;
                        any_border = true;
                    }
        if (any_border) squared_edt(field, d);
        comp_dist.push_back(std::move(field));
    }

    WeightMap out;
    out.dims = d;
    out.spacing = t.spacing();
    out.values.resize(n);
    const double two_sigma_sq = 2.0 * cfg.sigma * cfg.sigma;
    for (std::size_t i = 0; i < n; ++i) {
        const double wc = cfg.class_weights[t.voxels()[i] ? 1 : 0];
        // Two smallest per-component distances; d2 falls back to d1 when a
        // second component is missing.
        double d1sq = kFar, d2sq = kFar;
        for (const auto& field : comp_dist) {
            const double v = field[i];
            if (v < d1sq) {
                d2sq = d1sq;
                d1sq = v;
            } else if (v < d2sq) {
                d2sq = v;
            }
        }
        double w = wc;
        if (d1sq < kFar) {
            const double d1 = std::sqrt(d1sq);
            const double d2 = d2sq < kFar ? std::sqrt(d2sq) : d1;
            const double sum = d1 + d2;
            w += cfg.w0 * std::exp(-(sum * sum) / two_sigma_sq);
        }
        out.values[i] = w;
    }
    return out;
}

double weighted_dice_loss(const BinaryMask& t, const ProbabilityMap& p, const LossConfig& cfg) {
    check_same_dims(t.dims(), p.dims(), "weighted_dice_loss");
    const WeightMap w = weight_map(t, cfg);
    double mass = 0.0;
    for (double v : w.values) mass += v;
    return mass * soft_dice_loss(t, p, cfg);
}

double hausdorff_directed(const BinaryMask& a, const BinaryMask& b, bool use_spacing) {
    check_same_dims(a.dims(), b.dims(), "hausdorff_directed");
    const auto ia = foreground_indices(a);
    const auto ib = foreground_indices(b);
    if (ia.empty() || ib.empty())
        throw std::invalid_argument("hausdorff_directed: undefined for empty masks");

    const Dims& d = a.dims();
    const double sx = use_spacing ? a.spacing().dx : 1.0;
    const double sy = use_spacing ? a.spacing().dy : 1.0;
    const double sz = use_spacing ? a.spacing().dz : 1.0;

    struct Point {
        double z, y, x;
    };
    auto unpack = [&](std::size_t idx) {
        const auto nyx = static_cast<std::size_t>(d.ny) * d.nx;
        return Point{static_cast<double>(idx / nyx) * sz,
                     static_cast<double>(idx / d.nx % d.ny) * sy,
                     static_cast<double>(idx % d.nx) * sx};
    };
    std::vector<Point> pb;
    pb.reserve(ib.size());
    for (std::size_t idx : ib) pb.push_back(unpack(idx));

    // Work with squared distances; sqrt once at the end (monotone).
    double worst = 0.0;
    for (std::size_t idx : ia) {
        const Point pa = unpack(idx);
        double best = std::numeric_limits<double>::infinity();
        for (const Point& q : pb) {
            const double dz = pa.z - q.z, dy = pa.y - q.y, dx = pa.x - q.x;
            const double sq = dz * dz + dy * dy + dx * dx;
            if (sq < best) best = sq;
        }
        if (best > worst) worst = best;
    }
    return std::sqrt(worst);
}

double hausdorff(const BinaryMask& a, const BinaryMask& b, bool use_spacing) {
    return std::max(hausdorff_directed(a, b, use_spacing),
                    hausdorff_directed(b, a, use_spacing));
}

IccResult icc(const std::vector<std::vector<double>>& ratings, IccForm form) {
    const std::size_t n = ratings.size();
    if (n < 3) throw std::invalid_argument("icc: need at least 3 subjects");
    const std::size_t k = ratings.front().size();
    if (k < 2) throw std::invalid_argument("icc: need at least 2 raters");
    for (const auto& row : ratings) {
        if (row.size() != k) throw std::invalid_argument("icc: ragged ratings table");
        for (double v : row)
            if (!std::isfinite(v)) throw std::invalid_argument("icc: non-finite rating");
    }

    // Two-way ANOVA mean squares.
    const double dn = static_cast<double>(n), dk = static_cast<double>(k);
    double grand = 0.0;
    std::vector<double> row_mean(n, 0.0), col_mean(k, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            row_mean[i] += ratings[i][j];
            col_mean[j] += ratings[i][j];
            grand += ratings[i][j];
        }
    for (auto& m : row_mean) m /= dk;
    for (auto& m : col_mean) m /= dn;
    grand /= dn * dk;

    double ssr = 0.0, ssc = 0.0, sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) ssr += (row_mean[i] - grand) * (row_mean[i] - grand);
    ssr *= dk;
    for (std::size_t j = 0; j < k; ++j) ssc += (col_mean[j] - grand) * (col_mean[j] - grand);
    ssc *= dn;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            const double r = ratings[i][j] - row_mean[i] - col_mean[j] + grand;
            sse += r * r;
        }
    const double msr = ssr / (dn - 1.0);
    const double msc = ssc / (dk - 1.0);
    const double mse = sse / ((dn - 1.0) * (dk - 1.0));

    if (mse == 0.0) {
        // Zero residual: the table is exactly additive and the F-based CI
        // machinery degenerates, so return the limiting values directly.
        if (msr == 0.0 && msc == 0.0) return {1.0, 1.0, 1.0};  // no variance at all
        if (msc == 0.0) return {1.0, 1.0, 1.0};                // identical columns
        if (msr == 0.0) return {0.0, 0.0, 0.0};  // rater offsets only, no subject signal
        if (form == IccForm::Consistency31) return {1.0, 1.0, 1.0};
        // Agreement form with msr, msc > 0 stays finite below.
    }

    constexpr double kAlpha = 0.05;
    IccResult res;
    if (form == IccForm::Consistency31) {
        res.value = (msr - mse) / (msr + (dk - 1.0) * mse);
        const boost::math::fisher_f f_lo(dn - 1.0, (dn - 1.0) * (dk - 1.0));
        const boost::math::fisher_f f_hi((dn - 1.0) * (dk - 1.0), dn - 1.0);
        const double fvalue = msr / mse;
        const double fl = fvalue / boost::math::quantile(f_lo, 1.0 - kAlpha / 2.0);
        const double fu = fvalue * boost::math::quantile(f_hi, 1.0 - kAlpha / 2.0);
        res.ci_low = (fl - 1.0) / (fl + dk - 1.0);
        res.ci_high = (fu - 1.0) / (fu + dk - 1.0);
        return res;
    }

    res.value = (msr - mse) / (msr + (dk - 1.0) * mse + dk * (msc - mse) / dn);

    // Satterthwaite-style CI of the absolute-agreement form.
    const double icc_v = res.value;
    const double a = dk * icc_v / (dn * (1.0 - icc_v));
    const double b = 1.0 + dk * icc_v * (dn - 1.0) / (dn * (1.0 - icc_v));
    const double num = a * msc + b * mse;
    const double v = num * num / ((a * msc) * (a * msc) / (dk - 1.0) +
                                  (b * mse) * (b * mse) / ((dn - 1.0) * (dk - 1.0)));
    const boost::math::fisher_f f_lo(dn - 1.0, v);
    const boost::math::fisher_f f_hi(v, dn - 1.0);
    const double fl = boost::math::quantile(f_lo, 1.0 - kAlpha / 2.0);
    const double fu = boost::math::quantile(f_hi, 1.0 - kAlpha / 2.0);
    res.ci_low = dn * (msr - fl * mse) /
                 (fl * (dk * msc + (dk * dn - dk - dn) * mse) + dn * msr);
    res.ci_high = dn * (fu * msr - mse) /
                  (dk * msc + (dk * dn - dk - dn) * mse + dn * fu * msr);
    return res;
}

IccResult icc_2_1(const std::vector<std::vector<double>>& ratings) {
    return icc(ratings, IccForm::Agreement21);
}

}  // namespace ventriq
