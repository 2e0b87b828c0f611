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

#ifndef VENTRIQ_TESTS_ORACLES_HPP
#define VENTRIQ_TESTS_ORACLES_HPP

// Brute-force reference implementations used to pin the library's fast
// paths. Everything here trades speed for obviousness: full pairwise scans,
// dense linear algebra in long double, direct ANOVA sums. Randomness comes
// from std::mt19937_64 so the test inputs are generated by a different
// engine family than anything the library uses internally.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "ventriq/metrics.hpp"
#include "ventriq/morph.hpp"
#include "ventriq/volgrid.hpp"

namespace oracle {

using ventriq::BinaryMask;
using ventriq::Dims;
using ventriq::ProbabilityMap;
using ventriq::Spacing;
using ventriq::StructuringElement;

/// Element-wise equality for the span accessors (std::span itself does not
/// compare by value).
inline bool eq(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
    return std::equal(a.begin(), a.end(), b.begin(), b.end());
}

inline bool eq(std::span<const double> a, std::span<const double> b) {
    return std::equal(a.begin(), a.end(), b.begin(), b.end());
}

// ---------------------------------------------------------------------------
// Random test-input generators.

inline BinaryMask random_mask(const Dims& dims, const Spacing& spacing, double fg_prob,
                              std::mt19937_64& rng) {
    std::bernoulli_distribution coin(fg_prob);
    std::vector<std::uint8_t> v(dims.count());
    for (auto& b : v) b = coin(rng) ? 1 : 0;
    return BinaryMask(dims, spacing, std::move(v));
}

inline ProbabilityMap random_prob(const Dims& dims, const Spacing& spacing,
                                  std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> v(dims.count());
    for (auto& p : v) p = u(rng);
    return ProbabilityMap(dims, spacing, std::move(v));
}

// ---------------------------------------------------------------------------
// Soft Dice, summed term by term with no algebraic rearrangement.

inline double naive_soft_dice(const BinaryMask& t, const ProbabilityMap& p, double eps) {
    double tp = 0.0, tsum = 0.0, nn = 0.0, nsum = 0.0;
    const auto& tv = t.voxels();
    const auto& pv = p.voxels();
    for (std::size_t i = 0; i < tv.size(); ++i) {
        const double ti = tv[i] ? 1.0 : 0.0;
        tp += ti * pv[i];
        tsum += ti + pv[i];
        nn += (1.0 - ti) * (1.0 - pv[i]);
        nsum += (1.0 - ti) + (1.0 - pv[i]);
    }
    return 1.0 - (tp + eps) / (tsum + eps) - (nn + eps) / (nsum + eps);
}

// ---------------------------------------------------------------------------
// Hausdorff distance by scanning every foreground pair.

inline std::vector<std::array<int, 3>> foreground_coords(const BinaryMask& m) {
    std::vector<std::array<int, 3>> out;
    const Dims& d = m.dims();
    std::size_t i = 0;
    for (int z = 0; z < d.nz; ++z)
        for (int y = 0; y < d.ny; ++y)
            for (int x = 0; x < d.nx; ++x, ++i)
                if (m.voxels()[i]) out.push_back({z, y, x});
    return out;
}

inline double brute_hausdorff_directed(const BinaryMask& a, const BinaryMask& b,
                                       bool use_spacing) {
    const auto ca = foreground_coords(a);
    const auto cb = foreground_coords(b);
    if (ca.empty() || cb.empty())
        throw std::invalid_argument("brute_hausdorff: empty mask");
    const double sx = use_spacing ? a.spacing().dx : 1.0;
    const double sy = use_spacing ? a.spacing().dy : 1.0;
    const double sz = use_spacing ? a.spacing().dz : 1.0;
    double worst = 0.0;
    for (const auto& pa : ca) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& pb : cb) {
            const double dz = (pa[0] - pb[0]) * sz;
            const double dy = (pa[1] - pb[1]) * sy;
            const double dx = (pa[2] - pb[2]) * sx;
            best = std::min(best, std::sqrt(dx * dx + dy * dy + dz * dz));
        }
        worst = std::max(worst, best);
    }
    return worst;
}

inline double brute_hausdorff(const BinaryMask& a, const BinaryMask& b, bool use_spacing) {
    return std::max(brute_hausdorff_directed(a, b, use_spacing),
                    brute_hausdorff_directed(b, a, use_spacing));
}

// ---------------------------------------------------------------------------
// Morphology by direct neighbor scans.

inline std::vector<std::array<int, 3>> se_offsets(StructuringElement se) {
    std::vector<std::array<int, 3>> out;
    if (se == StructuringElement::Cross6) {
        out = {{0, 0, 0}, {1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    } else {
        for (int z = -1; z <= 1; ++z)
            for (int y = -1; y <= 1; ++y)
                for (int x = -1; x <= 1; ++x) out.push_back({z, y, x});
    }
    return out;
}

inline bool mask_at(const BinaryMask& m, int z, int y, int x) {
    const Dims& d = m.dims();
    if (z < 0 || z >= d.nz || y < 0 || y >= d.ny || x < 0 || x >= d.nx) return false;
    return m.voxels()[ventriq::voxel_index(d, z, y, x)] != 0;
}

inline BinaryMask brute_erode(const BinaryMask& m, StructuringElement se) {
    const Dims& d = m.dims();
    const auto offs = se_offsets(se);
    std::vector<std::uint8_t> out(d.count(), 0);
    std::size_t i = 0;
    for (int z = 0; z < d.nz; ++z)
        for (int y = 0; y < d.ny; ++y)
            for (int x = 0; x < d.nx; ++x, ++i) {
                bool keep = true;
                for (const auto& o : offs)
                    if (!mask_at(m, z + o[0], y + o[1], x + o[2])) {
                        keep = false;
                        break;
                    }
                out[i] = keep ? 1 : 0;
            }
    return BinaryMask(d, m.spacing(), std::move(out));
}

inline BinaryMask brute_dilate(const BinaryMask& m, StructuringElement se) {
    const Dims& d = m.dims();
    const auto offs = se_offsets(se);
    std::vector<std::uint8_t> out(d.count(), 0);
    std::size_t i = 0;
    for (int z = 0; z < d.nz; ++z)
        for (int y = 0; y < d.ny; ++y)
            for (int x = 0; x < d.nx; ++x, ++i) {
                bool hit = false;
                for (const auto& o : offs)
                    if (mask_at(m, z + o[0], y + o[1], x + o[2])) {
                        hit = true;
                        break;
                    }
                out[i] = hit ? 1 : 0;
            }
    return BinaryMask(d, m.spacing(), std::move(out));
}

/// Background voxels reachable from the grid boundary through 6-connected
/// background, found with an explicit DFS stack; everything else is filled.
inline BinaryMask brute_fill_holes(const BinaryMask& m) {
    const Dims& d = m.dims();
    const auto& v = m.voxels();
    std::vector<std::uint8_t> outside(d.count(), 0);
    std::vector<std::array<int, 3>> stack;
    auto push_if_bg = [&](int z, int y, int x) {
        if (z < 0 || z >= d.nz || y < 0 || y >= d.ny || x < 0 || x >= d.nx) return;
        const std::size_t i = ventriq::voxel_index(d, z, y, x);
        if (!v[i] && !outside[i]) {
            outside[i] = 1;
            stack.push_back({z, y, x});
        }
    };
    for (int z = 0; z < d.nz; ++z)
        for (int y = 0; y < d.ny; ++y)
            for (int x = 0; x < d.nx; ++x)
                if (z == 0 || z == d.nz - 1 || y == 0 || y == d.ny - 1 || x == 0 ||
                    x == d.nx - 1)
                    push_if_bg(z, y, x);
    while (!stack.empty()) {
        const auto [z, y, x] = stack.back();
        stack.pop_back();
        push_if_bg(z - 1, y, x);
        push_if_bg(z + 1, y, x);
        push_if_bg(z, y - 1, x);
        push_if_bg(z, y + 1, x);
        push_if_bg(z, y, x - 1);
        push_if_bg(z, y, x + 1);
    }
    std::vector<std::uint8_t> out(d.count());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = outside[i] ? 0 : 1;
    return BinaryMask(d, m.spacing(), std::move(out));
}

/// Number of foreground components under 6- or 26-connectivity.
inline int count_components(const BinaryMask& m, int connectivity) {
    const Dims& d = m.dims();
    const auto& v = m.voxels();
    std::vector<std::array<int, 3>> offs;
    for (int z = -1; z <= 1; ++z)
        for (int y = -1; y <= 1; ++y)
            for (int x = -1; x <= 1; ++x) {
                const int manhattan = std::abs(z) + std::abs(y) + std::abs(x);
                if (manhattan == 0) continue;
                if (connectivity == 6 && manhattan != 1) continue;
                offs.push_back({z, y, x});
            }
    std::vector<std::uint8_t> seen(d.count(), 0);
    std::vector<std::array<int, 3>> stack;
    int n = 0;
    std::size_t i = 0;
    for (int z0 = 0; z0 < d.nz; ++z0)
        for (int y0 = 0; y0 < d.ny; ++y0)
            for (int x0 = 0; x0 < d.nx; ++x0, ++i) {
                if (!v[i] || seen[i]) continue;
                ++n;
                seen[i] = 1;
                stack.push_back({z0, y0, x0});
                while (!stack.empty()) {
                    const auto [z, y, x] = stack.back();
                    stack.pop_back();
                    for (const auto& o : offs) {
                        const int zz = z + o[0], yy = y + o[1], xx = x + o[2];
                        if (zz < 0 || zz >= d.nz || yy < 0 || yy >= d.ny || xx < 0 ||
                            xx >= d.nx)
                            continue;
                        const std::size_t j = ventriq::voxel_index(d, zz, yy, xx);
                        if (v[j] && !seen[j]) {
                            seen[j] = 1;
                            stack.push_back({zz, yy, xx});
                        }
                    }
                }
            }
    return n;
}

/// True when some background voxel cannot reach the grid boundary through
/// 6-connected background (i.e. the mask encloses a cavity).
inline bool has_cavity(const BinaryMask& m) {
    const BinaryMask filled = brute_fill_holes(m);
    return !eq(filled.voxels(), m.voxels());
}

// ---------------------------------------------------------------------------
// Border-weight map by exhaustive distance scans.

inline std::vector<int> label_components_26(const BinaryMask& m, int& n_out) {
    const Dims& d = m.dims();
    const auto& v = m.voxels();
    std::vector<int> labels(d.count(), 0);
    std::vector<std::array<int, 3>> stack;
    int n = 0;
    std::size_t i = 0;
    for (int z0 = 0; z0 < d.nz; ++z0)
        for (int y0 = 0; y0 < d.ny; ++y0)
            for (int x0 = 0; x0 < d.nx; ++x0, ++i) {
                if (!v[i] || labels[i]) continue;
                ++n;
                labels[i] = n;
                stack.push_back({z0, y0, x0});
                while (!stack.empty()) {
                    const auto [z, y, x] = stack.back();
                    stack.pop_back();
                    for (int dz = -1; dz <= 1; ++dz)
                        for (int dy = -1; dy <= 1; ++dy)
                            for (int dx = -1; dx <= 1; ++dx) {
                                if (!dz && !dy && !dx) continue;
                                const int zz = z + dz, yy = y + dy, xx = x + dx;
                                if (zz < 0 || zz >= d.nz || yy < 0 || yy >= d.ny ||
                                    xx < 0 || xx >= d.nx)
                                    continue;
                                const std::size_t j = ventriq::voxel_index(d, zz, yy, xx);
                                if (v[j] && !labels[j]) {
                                    labels[j] = n;
                                    stack.push_back({zz, yy, xx});
                                }
                            }
                }
            }
    n_out = n;
    return labels;
}

inline bool is_border_voxel(const BinaryMask& m, int z, int y, int x) {
    if (!mask_at(m, z, y, x)) return false;
    const Dims& d = m.dims();
    static const int offs[6][3] = {{1, 0, 0},  {-1, 0, 0}, {0, 1, 0},
                                   {0, -1, 0}, {0, 0, 1},  {0, 0, -1}};
    for (const auto& o : offs) {
        const int zz = z + o[0], yy = y + o[1], xx = x + o[2];
        if (zz < 0 || zz >= d.nz || yy < 0 || yy >= d.ny || xx < 0 || xx >= d.nx) continue;
        if (!m.voxels()[ventriq::voxel_index(d, zz, yy, xx)]) return true;
    }
    return false;
}

inline std::vector<double> brute_weight_map(const BinaryMask& m,
                                            const ventriq::LossConfig& cfg) {
    const Dims& d = m.dims();
    int n_comp = 0;
    const std::vector<int> labels = label_components_26(m, n_comp);

    // Border voxel coordinates per component; components with no border
    // voxels are dropped.
    std::vector<std::vector<std::array<int, 3>>> borders(n_comp);
    for (int z = 0; z < d.nz; ++z)
        for (int y = 0; y < d.ny; ++y)
            for (int x = 0; x < d.nx; ++x)
                if (is_border_voxel(m, z, y, x))
                    borders[labels[ventriq::voxel_index(d, z, y, x)] - 1].push_back(
                        {z, y, x});
    borders.erase(std::remove_if(borders.begin(), borders.end(),
                                 [](const auto& b) { return b.empty(); }),
                  borders.end());

    std::vector<double> out(d.count());
    std::size_t i = 0;
    for (int z = 0; z < d.nz; ++z)
        for (int y = 0; y < d.ny; ++y)
            for (int x = 0; x < d.nx; ++x, ++i) {
                double w = cfg.class_weights[m.voxels()[i] ? 1 : 0];
                if (!borders.empty()) {
                    std::vector<double> comp_min;
                    comp_min.reserve(borders.size());
                    for (const auto& b : borders) {
                        double best = std::numeric_limits<double>::infinity();
                        for (const auto& p : b) {
                            const double dz = p[0] - z, dy = p[1] - y, dx = p[2] - x;
                            best = std::min(best,
                                            std::sqrt(dz * dz + dy * dy + dx * dx));
                        }
                        comp_min.push_back(best);
                    }
                    std::sort(comp_min.begin(), comp_min.end());
                    const double d1 = comp_min[0];
                    const double d2 = comp_min.size() > 1 ? comp_min[1] : d1;
                    w += cfg.w0 *
                         std::exp(-((d1 + d2) * (d1 + d2)) / (2.0 * cfg.sigma * cfg.sigma));
                }
                out[i] = w;
            }
    return out;
}

// ---------------------------------------------------------------------------
// Dense Gaussian-process reference in long double: Gauss-Jordan solves
// against the explicitly assembled covariance matrix.

/// Solve A x = b for several right-hand sides with Gauss-Jordan elimination
/// and partial pivoting. A is n x n row-major; b is n x m column-major-free
/// (vector of columns).
inline std::vector<std::vector<long double>> gauss_jordan_solve(
    std::vector<long double> a, std::vector<std::vector<long double>> b, std::size_t n) {
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs((double)a[r * n + col]) > std::fabs((double)a[piv * n + col]))
                piv = r;
        if (a[piv * n + col] == 0.0L) throw std::runtime_error("gauss_jordan: singular");
        if (piv != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(a[piv * n + c], a[col * n + c]);
            for (auto& rhs : b) std::swap(rhs[piv], rhs[col]);
        }
        const long double inv = 1.0L / a[col * n + col];
        for (std::size_t c = 0; c < n; ++c) a[col * n + c] *= inv;
        for (auto& rhs : b) rhs[col] *= inv;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const long double f = a[r * n + col];
            if (f == 0.0L) continue;
            for (std::size_t c = 0; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
            for (auto& rhs : b) rhs[r] -= f * rhs[col];
        }
    }
    return b;
}

inline std::vector<long double> rbf_gram(const std::vector<double>& x, long double c,
                                         long double l, long double alpha) {
    const std::size_t n = x.size();
    std::vector<long double> k(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const long double dd = (long double)x[i] - (long double)x[j];
            k[i * n + j] = c * std::exp(-(dd * dd) / (2.0L * l * l));
            if (i == j) k[i * n + j] += alpha;
        }
    return k;
}

/// log |A| via an unpivoted long double Cholesky (A must be SPD).
inline long double chol_logdet(std::vector<long double> a, std::size_t n) {
    long double logdet = 0.0L;
    for (std::size_t j = 0; j < n; ++j) {
        long double diag = a[j * n + j];
        for (std::size_t k = 0; k < j; ++k) diag -= a[j * n + k] * a[j * n + k];
        if (diag <= 0.0L) throw std::runtime_error("chol_logdet: not positive definite");
        const long double ljj = std::sqrt(diag);
        a[j * n + j] = ljj;
        logdet += 2.0L * std::log(ljj);
        for (std::size_t i = j + 1; i < n; ++i) {
            long double s = a[i * n + j];
            for (std::size_t k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
            a[i * n + j] = s / ljj;
        }
    }
    return logdet;
}

inline double dense_lml(const std::vector<double>& x, const std::vector<double>& y,
                        double c, double l, double alpha) {
    const std::size_t n = x.size();
    const auto k = rbf_gram(x, c, l, alpha);
    std::vector<long double> rhs(y.begin(), y.end());
    const auto sol = gauss_jordan_solve(k, {rhs}, n);
    long double quad = 0.0L;
    for (std::size_t i = 0; i < n; ++i) quad += (long double)y[i] * sol[0][i];
    const long double logdet = chol_logdet(k, n);
    const long double pi = 3.14159265358979323846264338327950288L;
    return (double)(-0.5L * quad - 0.5L * logdet -
                    0.5L * (long double)n * std::log(2.0L * pi));
}

struct DensePrediction {
    double mean = 0.0;
    double variance = 0.0;
};

/// Posterior mean and variance at xs for targets given raw (unstandardized):
/// standardization with the population deviation is applied here exactly as
/// the library documents, so the result is directly comparable with
/// gp_predict on a gp_build model.
inline DensePrediction dense_gp_predict(const std::vector<double>& x,
                                        const std::vector<double>& y, double c, double l,
                                        double alpha, double xs) {
    const std::size_t n = x.size();
    long double mu = 0.0L;
    for (double v : y) mu += v;
    mu /= (long double)n;
    long double var = 0.0L;
    for (double v : y) var += ((long double)v - mu) * ((long double)v - mu);
    long double sd = std::sqrt(var / (long double)n);
    if (sd == 0.0L) sd = 1.0L;

    std::vector<long double> ys(n);
    for (std::size_t i = 0; i < n; ++i) ys[i] = ((long double)y[i] - mu) / sd;

    const auto k = rbf_gram(x, c, l, alpha);
    std::vector<long double> kstar(n);
    for (std::size_t i = 0; i < n; ++i) {
        const long double dd = (long double)x[i] - (long double)xs;
        kstar[i] = (long double)c * std::exp(-(dd * dd) / (2.0L * (long double)l * l));
    }
    const auto sols = gauss_jordan_solve(k, {ys, kstar}, n);
    long double mean = 0.0L, quad = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
        mean += kstar[i] * sols[0][i];
        quad += kstar[i] * sols[1][i];
    }
    long double v = (long double)c - quad;
    if (v < 0.0L) v = 0.0L;
    return {(double)(mean * sd + mu), (double)(v * sd * sd)};
}

// ---------------------------------------------------------------------------
// Two-way ANOVA ICC point estimate from first principles.

inline double anova_icc_value(const std::vector<std::vector<double>>& table,
                              bool consistency) {
    const std::size_t n = table.size();
    const std::size_t k = table.front().size();
    long double grand = 0.0L;
    std::vector<long double> rm(n, 0.0L), cm(k, 0.0L);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            grand += table[i][j];
            rm[i] += table[i][j];
            cm[j] += table[i][j];
        }
    grand /= (long double)(n * k);
    for (auto& v : rm) v /= (long double)k;
    for (auto& v : cm) v /= (long double)n;
    long double ssr = 0.0L, ssc = 0.0L, sse = 0.0L;
    for (std::size_t i = 0; i < n; ++i) ssr += (rm[i] - grand) * (rm[i] - grand);
    ssr *= (long double)k;
    for (std::size_t j = 0; j < k; ++j) ssc += (cm[j] - grand) * (cm[j] - grand);
    ssc *= (long double)n;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            const long double r = table[i][j] - rm[i] - cm[j] + grand;
            sse += r * r;
        }
    const long double msr = ssr / (long double)(n - 1);
    const long double msc = ssc / (long double)(k - 1);
    const long double mse = sse / (long double)((n - 1) * (k - 1));
    if (consistency) return (double)((msr - mse) / (msr + (long double)(k - 1) * mse));
    return (double)((msr - mse) /
                    (msr + (long double)(k - 1) * mse +
                     (long double)k * (msc - mse) / (long double)n));
}

// ---------------------------------------------------------------------------
// Quartic least squares through the normal equations in long double.

inline std::array<double, 5> poly4_normal_equations(const std::vector<double>& u,
                                                    const std::vector<double>& y) {
    const std::size_t n = u.size();
    std::vector<long double> ata(25, 0.0L);
    std::vector<long double> aty(5, 0.0L);
    for (std::size_t s = 0; s < n; ++s) {
        long double pow_u[5];
        pow_u[0] = 1.0L;
        for (int p = 1; p < 5; ++p) pow_u[p] = pow_u[p - 1] * (long double)u[s];
        for (int i = 0; i < 5; ++i) {
            for (int j = 0; j < 5; ++j) ata[i * 5 + j] += pow_u[i] * pow_u[j];
            aty[i] += pow_u[i] * (long double)y[s];
        }
    }
    const auto sol = gauss_jordan_solve(ata, {aty}, 5);
    std::array<double, 5> out{};
    for (int i = 0; i < 5; ++i) out[i] = (double)sol[0][i];
    return out;
}

}  // namespace oracle

#endif
