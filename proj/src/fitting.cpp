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

#include "ventriq/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

namespace ventriq {

std::string to_string(FitMethod method) {
    return method == FitMethod::GP ? "gp" : "poly4";
}

FitMethod parse_fit_method(const std::string& name) {
    if (name == "gp") return FitMethod::GP;
    if (name == "poly4" || name == "poly") return FitMethod::Poly4;
    throw std::invalid_argument("unknown fit method \"" + name + "\" (expected gp|poly4)");
}

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

struct GPSolve {
    std::vector<double> chol;     // row-major lower factor of K + alpha I
    std::vector<double> weights;  // (K + alpha I)^{-1} y
    double lml = 0.0;
};

void check_hyper(const GPHyper& h) {
    if (!(h.amplitude > 0.0) || !(h.length_scale > 0.0) || !(h.jitter >= 0.0) ||
        !std::isfinite(h.amplitude) || !std::isfinite(h.length_scale))
        throw std::invalid_argument("GPHyper: amplitude/length_scale must be positive finite"
                                    " and jitter >= 0");
}

Eigen::MatrixXd kernel_matrix(const std::vector<double>& x, const GPHyper& hyper) {
    const auto n = static_cast<Eigen::Index>(x.size());
    Eigen::MatrixXd k(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        k(i, i) = hyper.amplitude + hyper.jitter;
        for (Eigen::Index j = 0; j < i; ++j) {
            const double v = gp_kernel(x[i], x[j], hyper);
            k(i, j) = v;
            k(j, i) = v;
        }
    }
    return k;
}

GPSolve solve_gp(const std::vector<double>& x, const std::vector<double>& y,
                 const GPHyper& hyper) {
    check_hyper(hyper);
    if (x.empty() || x.size() != y.size())
        throw std::invalid_argument("gp: need matching nonempty x/y");
    const auto n = static_cast<Eigen::Index>(x.size());

    const Eigen::MatrixXd k = kernel_matrix(x, hyper);
    Eigen::LLT<Eigen::MatrixXd> llt(k);
    if (llt.info() != Eigen::Success) {
        std::ostringstream msg;
        msg << "gp: Cholesky of K + alpha I failed (c=" << hyper.amplitude
            << ", l=" << hyper.length_scale << ", alpha=" << hyper.jitter << ")";
        throw std::runtime_error(msg.str());
    }

    const Eigen::VectorXd yv = Eigen::Map<const Eigen::VectorXd>(y.data(), n);
    Eigen::VectorXd w = llt.solve(yv);
    // Iterative refinement: with a tiny jitter on smooth data the system is
    // ill-conditioned enough that a single solve leaves an interpolation
    // residual near 1e-6; two cheap correction sweeps recover it.
    for (int sweep = 0; sweep < 2; ++sweep) {
        const Eigen::VectorXd r = yv - k * w;
        w += llt.solve(r);
    }
    const Eigen::MatrixXd l = llt.matrixL();

    double log_det_half = 0.0;  // 0.5 log det (K + alpha I) = sum log L_ii
    for (Eigen::Index i = 0; i < n; ++i) log_det_half += std::log(l(i, i));

    GPSolve out;
    out.lml = -0.5 * yv.dot(w) - log_det_half - 0.5 * static_cast<double>(n) * kLog2Pi;
    out.weights.assign(w.data(), w.data() + n);
    out.chol.resize(static_cast<std::size_t>(n) * n, 0.0);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j <= i; ++j) out.chol[i * n + j] = l(i, j);
    return out;
}

// Forward substitution with the packed lower factor.
std::vector<double> chol_forward(const std::vector<double>& l, std::size_t n,
                                 const std::vector<double>& b) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = b[i];
        for (std::size_t j = 0; j < i; ++j) acc -= l[i * n + j] * v[j];
        v[i] = acc / l[i * n + i];
    }
    return v;
}

struct SeriesAxes {
    std::vector<double> x_norm;
    double x_offset = 0.0;
    double x_scale = 1.0;
};

SeriesAxes normalize_phases(const CycleSeries& series) {
    const auto [mn, mx] = std::minmax_element(series.phases.begin(), series.phases.end());
    if (*mn == *mx)
        throw std::invalid_argument("fitting: degenerate series, all phases equal");
    SeriesAxes axes;
    axes.x_offset = static_cast<double>(*mn);
    axes.x_scale = static_cast<double>(*mx - *mn);
    axes.x_norm.reserve(series.phases.size());
    for (int p : series.phases)
        axes.x_norm.push_back((static_cast<double>(p) - axes.x_offset) / axes.x_scale);
    return axes;
}

double clamp_log(double v) {
    return std::clamp(v, std::log(kGPBoundLow), std::log(kGPBoundHigh));
}

// Nelder-Mead on f over 2D log-hyperparameter space, maximizing. Every
// evaluation happens at bound-clamped coordinates and the best clamped
// point ever evaluated is returned, so the result can only improve on the
// start value.
struct NMBest {
    std::array<double, 2> log_p{};
    double value = -std::numeric_limits<double>::infinity();
};

template <typename F>
NMBest nelder_mead_max(F&& f, std::array<double, 2> start, int max_iter) {
    NMBest best;
    auto eval = [&](std::array<double, 2> p) {
        p[0] = clamp_log(p[0]);
        p[1] = clamp_log(p[1]);
        const double v = f(p);
        if (v > best.value) {
            best.value = v;
            best.log_p = p;
        }
        return v;
    };

    struct Vertex {
        std::array<double, 2> p;
        double v;
    };
    std::array<Vertex, 3> s{};
    s[0] = {start, eval(start)};
    s[1] = {{start[0] + 0.25, start[1]}, 0.0};
    s[1].v = eval(s[1].p);
    s[2] = {{start[0], start[1] + 0.25}, 0.0};
    s[2].v = eval(s[2].p);

    for (int it = 0; it < max_iter; ++it) {
        std::sort(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) { return a.v > b.v; });
        if (s[0].v - s[2].v < 1e-12) break;

        const std::array<double, 2> centroid{(s[0].p[0] + s[1].p[0]) / 2.0,
                                             (s[0].p[1] + s[1].p[1]) / 2.0};
        auto blend = [&](double t) {
            return std::array<double, 2>{centroid[0] + t * (centroid[0] - s[2].p[0]),
                                         centroid[1] + t * (centroid[1] - s[2].p[1])};
        };

        const std::array<double, 2> xr = blend(1.0);  // reflection
        const double fr = eval(xr);
        if (fr > s[0].v) {
            const std::array<double, 2> xe = blend(2.0);  // expansion
            const double fe = eval(xe);
            s[2] = fe > fr ? Vertex{xe, fe} : Vertex{xr, fr};
            continue;
        }
        if (fr > s[1].v) {
            s[2] = {xr, fr};
            continue;
        }
        const std::array<double, 2> xc = blend(-0.5);  // contraction
        const double fc = eval(xc);
        if (fc > s[2].v) {
            s[2] = {xc, fc};
            continue;
        }
        for (int i = 1; i < 3; ++i) {  // shrink toward the best vertex
            s[i].p = {(s[i].p[0] + s[0].p[0]) / 2.0, (s[i].p[1] + s[0].p[1]) / 2.0};
            s[i].v = eval(s[i].p);
        }
    }
    return best;
}

struct Standardized {
    std::vector<double> y;
    double mean = 0.0;
    double std = 1.0;
};

Standardized standardize(const std::vector<double>& y) {
    Standardized out;
    const double n = static_cast<double>(y.size());
    for (double v : y) out.mean += v;
    out.mean /= n;
    double var = 0.0;
    for (double v : y) var += (v - out.mean) * (v - out.mean);
    var /= n;  // population variance
    out.std = var > 0.0 ? std::sqrt(var) : 1.0;  // constant targets: center only
    out.y.reserve(y.size());
    for (double v : y) out.y.push_back((v - out.mean) / out.std);
    return out;
}

}  // namespace

double gp_kernel(double x, double xp, const GPHyper& hyper) {
    const double d = x - xp;
    return hyper.amplitude *
           std::exp(-d * d / (2.0 * hyper.length_scale * hyper.length_scale));
}

double gp_log_marginal_likelihood(const std::vector<double>& x, const std::vector<double>& y,
                                  const GPHyper& hyper) {
    return solve_gp(x, y, hyper).lml;
}

GPModel gp_build(const std::vector<double>& x, const std::vector<double>& y,
                 const GPHyper& hyper) {
    Standardized st = standardize(y);
    GPSolve solved = solve_gp(x, st.y, hyper);

    GPModel model;
    model.hyper = hyper;
    model.train_x = x;
    model.train_y = std::move(st.y);
    model.y_mean = st.mean;
    model.y_std = st.std;
    model.chol = std::move(solved.chol);
    model.weights = std::move(solved.weights);
    model.log_marginal = solved.lml;
    return model;
}

GPModel gp_fit(const CycleSeries& series, const GPHyper& init) {
    validate(series);
    if (series.phases.size() < 3)
        throw std::invalid_argument("gp_fit: need at least 3 phases");
    check_hyper(init);

    const SeriesAxes axes = normalize_phases(series);
    const Standardized st = standardize(series.values);

    GPHyper probe = init;
    auto lml_at = [&](std::array<double, 2> log_p) {
        probe.amplitude = std::exp(log_p[0]);
        probe.length_scale = std::exp(log_p[1]);
        try {
            return solve_gp(axes.x_norm, st.y, probe).lml;
        } catch (const std::runtime_error&) {
            return -std::numeric_limits<double>::infinity();
        }
    };

    // Multi-start: the supplied initial values, eight log-space restarts
    // at the corners and edge midpoints of the bound box, and the argmax
    // of a 20x20 log-spaced grid scan.
    std::vector<std::array<double, 2>> starts;
    starts.push_back({clamp_log(std::log(init.amplitude)),
                      clamp_log(std::log(init.length_scale))});
    const double lo = std::log(kGPBoundLow), mid = 0.0, hi = std::log(kGPBoundHigh);
    for (double a : {lo, mid, hi})
        for (double b : {lo, mid, hi})
            if (!(a == mid && b == mid)) starts.push_back({a, b});

    NMBest grid_best;
    for (int i = 0; i < 20; ++i)
        for (int j = 0; j < 20; ++j) {
            const std::array<double, 2> p{lo + (hi - lo) * i / 19.0,
                                          lo + (hi - lo) * j / 19.0};
            const double v = lml_at(p);
            if (v > grid_best.value) {
                grid_best.value = v;
                grid_best.log_p = p;
            }
        }
    starts.push_back(grid_best.log_p);

    NMBest best;
    for (const auto& start : starts) {
        const NMBest r = nelder_mead_max(lml_at, start, 150);
        if (r.value > best.value) best = r;  // strict: earlier start wins ties
    }
    if (!std::isfinite(best.value))
        throw std::runtime_error("gp_fit: no feasible hyperparameters found");

    GPHyper fitted = init;
    // exp(log(bound)) can land one ulp outside the box; pin it back.
    fitted.amplitude = std::clamp(std::exp(best.log_p[0]), kGPBoundLow, kGPBoundHigh);
    fitted.length_scale = std::clamp(std::exp(best.log_p[1]), kGPBoundLow, kGPBoundHigh);

    GPModel model = gp_build(axes.x_norm, series.values, fitted);
    model.x_offset = axes.x_offset;
    model.x_scale = axes.x_scale;
    return model;
}

GPPrediction gp_predict(const GPModel& model, double x) {
    const std::size_t n = model.train_x.size();
    const double u = (x - model.x_offset) / model.x_scale;

    std::vector<double> ks(n);
    for (std::size_t i = 0; i < n; ++i) ks[i] = gp_kernel(u, model.train_x[i], model.hyper);

    double mean_std = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean_std += ks[i] * model.weights[i];

    const std::vector<double> v = chol_forward(model.chol, n, ks);
    double var_std = model.hyper.amplitude;  // k(x*, x*)
    for (std::size_t i = 0; i < n; ++i) var_std -= v[i] * v[i];
    if (var_std < 0.0) var_std = 0.0;

    GPPrediction pred;
    pred.mean = model.y_mean + model.y_std * mean_std;
    pred.variance = model.y_std * model.y_std * var_std;
    return pred;
}

Poly4Model fit_poly4(const CycleSeries& series) {
    validate(series);
    std::vector<int> distinct = series.phases;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < 5)
        throw std::invalid_argument("fit_poly4: underdetermined, need >= 5 distinct phases");

    const SeriesAxes axes = normalize_phases(series);
    const auto n = static_cast<Eigen::Index>(series.values.size());
    Eigen::MatrixXd vand(n, 5);
    for (Eigen::Index i = 0; i < n; ++i) {
        double p = 1.0;
        for (int j = 0; j < 5; ++j) {
            vand(i, j) = p;
            p *= axes.x_norm[static_cast<std::size_t>(i)];
        }
    }
    const Eigen::VectorXd yv =
        Eigen::Map<const Eigen::VectorXd>(series.values.data(), n);
    const Eigen::VectorXd c = vand.colPivHouseholderQr().solve(yv);

    Poly4Model model;
    for (int j = 0; j < 5; ++j) model.coefficients[static_cast<std::size_t>(j)] = c(j);
    model.x_offset = axes.x_offset;
    model.x_scale = axes.x_scale;
    return model;
}

PhaseSelection select_phases(const CycleSeries& series, FitMethod method) {
    validate(series);

    Poly4Model poly;
    GPModel gp;
    if (method == FitMethod::Poly4)
        poly = fit_poly4(series);
    else
        gp = gp_fit(series);
    auto fitted = [&](double x) {
        return method == FitMethod::Poly4 ? poly.evaluate(x) : gp_predict(gp, x).mean;
    };

    const auto [mn, mx] = std::minmax_element(series.phases.begin(), series.phases.end());
    const double x0 = static_cast<double>(*mn);
    const double x1 = static_cast<double>(*mx);

    PhaseSelection sel;
    sel.metric = series.metric;
    sel.method = method;
    sel.curve_samples.reserve(512);

    std::size_t g_max = 0, g_min = 0;
    for (std::size_t g = 0; g < 512; ++g) {
        const double x = x0 + (x1 - x0) * static_cast<double>(g) / 511.0;
        const double y = fitted(x);
        sel.curve_samples.emplace_back(x, y);
        if (y > sel.curve_samples[g_max].second) g_max = g;  // strict: earlier grid wins
        if (y < sel.curve_samples[g_min].second) g_min = g;
    }

    auto snap = [&](double x) {
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < series.phases.size(); ++t) {
            const double d = std::abs(static_cast<double>(series.phases[t]) - x);
            if (d < best_d) {  // strict: earlier phase wins ties
                best_d = d;
                best = t;
            }
        }
        return best;
    };

    const std::size_t ed_idx = snap(sel.curve_samples[g_max].first);
    const std::size_t es_idx = snap(sel.curve_samples[g_min].first);
    if (series.phases[ed_idx] == series.phases[es_idx])
        throw std::runtime_error("degenerate cycle: ED and ES snap to the same phase");

    sel.ed_phase = series.phases[ed_idx];
    sel.es_phase = series.phases[es_idx];
    sel.ed_value = series.values[ed_idx];
    sel.es_value = series.values[es_idx];
    sel.fit_ed_x = sel.curve_samples[g_max].first;
    sel.fit_ed_value = sel.curve_samples[g_max].second;
    sel.fit_es_x = sel.curve_samples[g_min].first;
    sel.fit_es_value = sel.curve_samples[g_min].second;
    return sel;
}

namespace {

EFResult make_ef(double v_ed, double v_es, const PhaseSelection& selection) {
    if (!(v_ed > 0.0)) throw std::domain_error("estimate_ef: V_ED must be > 0");
    EFResult res;
    res.v_ed = v_ed;
    res.v_es = v_es;
    res.ef_percent = 100.0 * (v_ed - v_es) / v_ed;
    res.ed_phase = selection.ed_phase;
    res.es_phase = selection.es_phase;
    res.metric = selection.metric;
    res.method = selection.method;
    return res;
}

std::size_t find_phase(const CycleSeries& series, int phase, const char* which) {
    for (std::size_t t = 0; t < series.phases.size(); ++t)
        if (series.phases[t] == phase) return t;
    throw std::invalid_argument(std::string("estimate_ef: selected ") + which +
                                " phase missing from the volume series");
}

}  // namespace

EFResult estimate_ef(const CycleSeries& volume_series, const PhaseSelection& selection) {
    validate(volume_series);
    if (volume_series.metric != MetricKind::Volume)
        throw std::invalid_argument("estimate_ef: series metric must be Volume");
    const double v_ed = volume_series.values[find_phase(volume_series, selection.ed_phase, "ED")];
    const double v_es = volume_series.values[find_phase(volume_series, selection.es_phase, "ES")];
    return make_ef(v_ed, v_es, selection);
}

EFResult estimate_ef_interpolated(const CycleSeries& volume_series,
                                  const PhaseSelection& selection) {
    validate(volume_series);
    if (volume_series.metric != MetricKind::Volume)
        throw std::invalid_argument("estimate_ef: series metric must be Volume");

    double v_ed = 0.0, v_es = 0.0;
    if (selection.method == FitMethod::Poly4) {
        const Poly4Model poly = fit_poly4(volume_series);
        v_ed = poly.evaluate(selection.fit_ed_x);
        v_es = poly.evaluate(selection.fit_es_x);
    } else {
        const GPModel gp = gp_fit(volume_series);
        v_ed = gp_predict(gp, selection.fit_ed_x).mean;
        v_es = gp_predict(gp, selection.fit_es_x).mean;
    }
    return make_ef(v_ed, v_es, selection);
}

}  // namespace ventriq
