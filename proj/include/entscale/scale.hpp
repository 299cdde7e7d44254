#pragma once

// Measurement-scale deformations w(f), the measurement function T solving
// dT/dw = alpha + beta*T, analytic derivatives, and affine-invariance checks.

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "entscale/errors.hpp"

namespace entscale {

// Open interval (lo, hi); either endpoint may be infinite.
struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    bool contains(double x) const { return x > lo && x < hi; }
    bool lo_finite() const { return std::isfinite(lo); }
    bool hi_finite() const { return std::isfinite(hi); }

    static Interval all() { return {}; }
    static Interval positive() { return {0.0, std::numeric_limits<double>::infinity()}; }
};

enum class LevelKind {
    PureLog,         // w = log x
    LinearLog,       // w = log(c + x)
    LogLinear,       // w = c*x + log x
    LogLinearLog,    // w = log((c2 - x) * (x - c1)^b)
    LinearLogLinear, // w = c2*x + b*log(c1 + x)
};

struct LevelSpec {
    LevelKind kind = LevelKind::PureLog;
    double c = 0.0;       // LinearLog, LogLinear
    double c1 = 0.0;      // LogLinearLog, LinearLogLinear
    double c2 = 0.0;
    double b = 1.0;

    static LevelSpec pure_log() { return {LevelKind::PureLog, 0, 0, 0, 1}; }
    static LevelSpec linear_log(double c) { return {LevelKind::LinearLog, c, 0, 0, 1}; }
    static LevelSpec log_linear(double c) { return {LevelKind::LogLinear, c, 0, 0, 1}; }
    static LevelSpec log_linear_log(double c1, double c2, double b) {
        return {LevelKind::LogLinearLog, 0, c1, c2, b};
    }
    static LevelSpec linear_log_linear(double c1, double c2, double b) {
        return {LevelKind::LinearLogLinear, 0, c1, c2, b};
    }
};

// Evaluate one deformation level at inner value x.
double level_eval(const LevelSpec& level, double x);
// d(level)/dx at inner value x.
double level_deriv(const LevelSpec& level, double x);
// Open interval of inner values the level accepts.
Interval level_input_domain(const LevelSpec& level);
// Strictly increasing on its whole input domain?
bool level_monotone(const LevelSpec& level);

// An ordered stack of deformation levels, applied innermost-first.
// Depth 0 is the identity scale w(f) = f.
class ScaleSpec {
public:
    ScaleSpec() = default;
    explicit ScaleSpec(std::vector<LevelSpec> levels);

    const std::vector<LevelSpec>& levels() const { return levels_; }
    std::size_t depth() const { return levels_.size(); }
    const Interval& domain() const { return domain_; }
    bool contains(double f) const { return domain_.contains(f); }
    // Monotone over the whole stack (false only when the outer level is not).
    bool monotone() const { return monotone_; }

    // Interior points where the scale transitions between regimes; used as
    // quadrature subdivision seeds.
    std::vector<double> transition_seeds() const;

    std::string to_json() const;
    static ScaleSpec from_json(const std::string& text);

private:
    std::vector<LevelSpec> levels_;
    Interval domain_;
    bool monotone_ = true;
};

// Reduction of data to sufficient summary form f_y.
struct ObservableReduction {
    enum class Kind { Identity, CenteredSquare, AbsoluteValue, Power, Log, Ratio };

    Kind kind = Kind::Identity;
    double mu = 0.0; // CenteredSquare: f = (y - mu)^2
    double k = 1.0;  // Power: f = y^k
    Interval domain = Interval::all();

    double eval(double y) const;
    double deriv(double y) const;
    // Points of y in `within` that map to f; used to carry quadrature seeds
    // back to the y axis.
    std::vector<double> preimages(double f, const Interval& within) const;
    // Interior points where the reduction is not smooth.
    std::vector<double> kink_points() const;

    static ObservableReduction identity();
    static ObservableReduction centered_square(double mu);
    static ObservableReduction absolute_value();
    static ObservableReduction power(double k);
    static ObservableReduction log();
    static ObservableReduction ratio();
};

struct ScaleParams {
    double T0 = 0.0;
    double alpha = 1.0;
    double beta = 0.0;
};

struct AffineFit {
    double a = 0.0;
    double b = 1.0;
    double max_residual = 0.0;
};

// |beta| below this selects the linear-limit branch T = T0 + alpha*w.
inline constexpr double kBetaLinearThreshold = 1e-9;
// exp() arguments above this raise OverflowError.
inline constexpr double kExpArgMax = 709.0;

namespace detail {
// expm1(x)/x, continuous through x = 0.
inline double expm1_over(double x) { return x == 0.0 ? 1.0 : std::expm1(x) / x; }
} // namespace detail

// w(f) composed innermost-first.
double eval_w(const ScaleSpec& spec, double f);
// dw/df by per-level chain rule.
double eval_w_prime(const ScaleSpec& spec, double f);

// As eval_w, but a log argument reaching 0 yields the -inf/+inf limit instead
// of DomainError; still throws for f strictly outside the closed domain.
double eval_w_limit(const ScaleSpec& spec, double f);

// w and log|dw/df| at f = exp(log_f), stable when f itself overflows a double.
// Used for far-tail evaluation of log-like scales.
double eval_w_of_logf(const ScaleSpec& spec, double log_f);
double eval_logabs_wprime_of_logf(const ScaleSpec& spec, double log_f);

// T as a function of the deformation value w (Eq. dT/dw = alpha + beta*T).
double eval_T_of_w(const ScaleParams& params, double w);
// T(f) = T0*e^{beta w} + (alpha/beta)(e^{beta w} - 1), linear branch at small beta.
double eval_T(const ScaleSpec& spec, const ScaleParams& params, double f);
// dT/dy for the identity reduction f_y = y: (alpha + beta*T0) * w'(y) * e^{beta w}.
double eval_T_prime(const ScaleSpec& spec, const ScaleParams& params, double y);

// Action of the finite group element with parameter eps on a T value.
double finite_transform(double alpha, double beta, double eps, double T_value);

// Least-squares fit of T(G(f)) = a + b*T(f) over the sample points, residual
// reported in max norm. The caller decides invariance via a tolerance.
AffineFit check_affine_invariance(const ScaleSpec& spec, const ScaleParams& params,
                                  const std::function<double(double)>& G,
                                  std::span<const double> sample_f);

} // namespace entscale
