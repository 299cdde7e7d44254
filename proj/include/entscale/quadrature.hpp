#pragma once

// Adaptive Gauss-Kronrod (7,15) quadrature with subdivision seeds, plus a
// log-space density integrator that maps infinite endpoints to bounded
// intervals (rational map, with an exponential pre-map for log-like tails
// chosen by probing) and classifies divergent tails.

#include <functional>
#include <optional>
#include <span>

#include "entscale/errors.hpp"
#include "entscale/scale.hpp"

namespace entscale {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
};

struct QuadratureOptions {
    double rel_tol = 1e-11;
    double abs_floor = 1e-300; // stop once absolute error is below this
    int max_cells = 200000;
};

// Integrate f over finite [a, b]; initial cells split at interior seeds.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    std::span<const double> seeds, const QuadratureOptions& opt);

// Map t in (0,1) onto the open support; rational maps cover infinite ends.
double map_unit_to_support(const Interval& s, double t);

// A log-density evaluator. of_logy, when set, evaluates log f at y = e^u for
// supports reaching +infinity; it keeps log-like tails representable past the
// double range of y.
struct LogDensityFn {
    std::function<double(double)> of_y;
    std::function<double(double)> of_logy; // optional

    double operator()(double y) const { return of_y(y); }
};

struct DensityIntegral {
    double value = 0.0; // integral of exp(log_f - shift) * weight
    double error = 0.0;
    double shift = 0.0;
};

// Integrate exp(log_f(y) - shift) * weight(y) over the open support.
// weight may be empty (taken as 1). weight_of_logy, when given, evaluates the
// weight at y = e^u and lets heavy-tailed expectations use the log-coordinate
// path. The shift is chosen from probe maxima unless fixed_shift is given.
// Throws NotNormalizableError when a tail or a finite-endpoint singularity is
// classified divergent, QuadratureError when the error estimate cannot be
// brought below tolerance.
DensityIntegral integrate_density(const LogDensityFn& log_f, const Interval& support,
                                  std::span<const double> seeds,
                                  const std::function<double(double)>& weight,
                                  const QuadratureOptions& opt,
                                  std::optional<double> fixed_shift = {},
                                  const std::function<double(double)>& weight_of_logy = {});

} // namespace entscale
