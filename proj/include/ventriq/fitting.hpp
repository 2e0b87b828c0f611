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

#ifndef VENTRIQ_FITTING_HPP
#define VENTRIQ_FITTING_HPP

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "ventriq/cycle.hpp"

namespace ventriq {

enum class FitMethod { GP, Poly4 };

/// "gp" | "poly4" ("poly" is accepted on input)
std::string to_string(FitMethod method);
FitMethod parse_fit_method(const std::string& name);

/// Fourth-degree polynomial on the affinely normalized phase axis
/// u = (x - x_offset) / x_scale in [0, 1].
struct Poly4Model {
    std::array<double, 5> coefficients{};  ///< c0..c4 in powers of u
    double x_offset = 0.0;
    double x_scale = 1.0;

    double evaluate(double x) const {
        const double u = (x - x_offset) / x_scale;
        double acc = coefficients[4];
        for (int i = 3; i >= 0; --i) acc = acc * u + coefficients[i];
        return acc;
    }
};

/// Hyperparameters of the constant x RBF kernel
///   k(x, x') = c * exp(-(x - x')^2 / (2 l^2)),
/// plus the diagonal jitter added to the training covariance. c and l are
/// optimized within [0.1, 10] on the normalized axis.
struct GPHyper {
    double amplitude = 0.1;     ///< c
    double length_scale = 0.5;  ///< l
    double jitter = 1e-10;      ///< alpha on the diagonal of K
};

inline constexpr double kGPBoundLow = 0.1;
inline constexpr double kGPBoundHigh = 10.0;

/// Fitted GP state. Targets are standardized (learned on (y - y_mean) /
/// y_std with the population std; constant targets are only centered) and
/// inputs live on the normalized axis u = (x - x_offset) / x_scale.
struct GPModel {
    GPHyper hyper;
    std::vector<double> train_x;  ///< normalized training inputs
    std::vector<double> train_y;  ///< standardized training targets
    double y_mean = 0.0;
    double y_std = 1.0;
    double x_offset = 0.0;
    double x_scale = 1.0;
    std::vector<double> chol;     ///< row-major lower Cholesky factor of K + alpha I
    std::vector<double> weights;  ///< (K + alpha I)^{-1} y on standardized targets
    double log_marginal = 0.0;    ///< at the stored hyperparameters
};

double gp_kernel(double x, double xp, const GPHyper& hyper);

/// log p(y | x, hyper) = -0.5 y^T (K+aI)^{-1} y - 0.5 log det(K+aI)
///                       - (n/2) log 2pi,
/// evaluated on y exactly as given (standardize first if that is wanted).
/// Throws if the Cholesky factorization fails, naming the hyperparameters.
double gp_log_marginal_likelihood(const std::vector<double>& x, const std::vector<double>& y,
                                  const GPHyper& hyper);

/// Solve the posterior state at fixed hyperparameters. x is used as given
/// (x_offset/x_scale stay identity); y is standardized internally.
GPModel gp_build(const std::vector<double>& x, const std::vector<double>& y,
                 const GPHyper& hyper);

/// Fit hyperparameters by maximizing the log marginal likelihood with
/// multi-start bounded search (the given initial values among the starts),
/// after normalizing phases to [0, 1] and standardizing targets. The
/// achieved LML is never below the LML at the initial hyperparameters.
GPModel gp_fit(const CycleSeries& series, const GPHyper& init = {});

struct GPPrediction {
    double mean = 0.0;
    double variance = 0.0;  ///< clamped at 0; destandardized units
};

/// Posterior at raw phase coordinate x.
GPPrediction gp_predict(const GPModel& model, double x);

/// Least-squares quartic through the series (>= 5 distinct phases) via an
/// orthogonal decomposition of the Vandermonde system.
Poly4Model fit_poly4(const CycleSeries& series);

/// ED/ES phases picked from the fitted curve: the curve is sampled on a
/// 512-point uniform grid over the phase range, the global max/min grid
/// points (ties: earlier grid point) are snapped to the nearest acquired
/// phase (ties: earlier phase), and the observed series values at the
/// snapped phases are recorded. The unsnapped grid extrema are kept for
/// the interpolated reporting mode.
struct PhaseSelection {
    int ed_phase = 0;
    int es_phase = 0;
    double ed_value = 0.0;  ///< observed value at ed_phase
    double es_value = 0.0;  ///< observed value at es_phase
    MetricKind metric = MetricKind::Volume;
    FitMethod method = FitMethod::GP;
    double fit_ed_x = 0.0;
    double fit_ed_value = 0.0;
    double fit_es_x = 0.0;
    double fit_es_value = 0.0;
    /// The 512 (x, fitted value) grid samples, for plotting.
    std::vector<std::pair<double, double>> curve_samples;
};

/// Throws std::runtime_error("degenerate cycle") when ED and ES snap to
/// the same phase (e.g. constant series).
PhaseSelection select_phases(const CycleSeries& series, FitMethod method);

struct EFResult {
    double ef_percent = 0.0;
    double v_ed = 0.0;  ///< mm^3
    double v_es = 0.0;  ///< mm^3
    int ed_phase = 0;
    int es_phase = 0;
    MetricKind metric = MetricKind::Volume;  ///< metric the selection used
    FitMethod method = FitMethod::GP;        ///< fit the selection used
};

/// EF% = 100 (V_ED - V_ES) / V_ED from the OBSERVED volumes at the selected
/// phases. The selection may come from any metric; volumes always come from
/// the volume series.
EFResult estimate_ef(const CycleSeries& volume_series, const PhaseSelection& selection);

/// Comparison mode: volumes are read off a fitted volume curve (same fit
/// method as the selection) at the selection's unsnapped extremum
/// positions instead of the observed samples.
EFResult estimate_ef_interpolated(const CycleSeries& volume_series,
                                  const PhaseSelection& selection);

}  // namespace ventriq

#endif
