#pragma once

// Maximum-entropy densities p_y ∝ m_y e^{-Λ e^{β w}} under the three measure
// policies, with multiplier solving, relative entropy, solution-invariance and
// change-of-variable operations.

#include <functional>
#include <optional>
#include <vector>

#include "entscale/quadrature.hpp"
#include "entscale/scale.hpp"

namespace entscale {

struct MeasurePolicy {
    enum class Kind { Uniform, CumulativeDerivative, Jacobian };

    Kind kind = Kind::Uniform;
    // log|dg/dy| for the change-of-variable measure.
    std::function<double(double)> jacobian_log;

    static MeasurePolicy uniform() { return {}; }
    static MeasurePolicy cumulative_derivative() {
        return {Kind::CumulativeDerivative, {}};
    }
    static MeasurePolicy jacobian(std::function<double(double)> log_abs_deriv) {
        return {Kind::Jacobian, std::move(log_abs_deriv)};
    }
};

// Exponent weight of the master form. The full branch carries Λ, the β→0
// limit branch carries γ; the two are stored separately and never aliased.
struct KernelWeight {
    std::optional<double> Lambda;
    std::optional<double> gamma;
    std::optional<double> multiplier; // λ, when the weight came from a multiplier

    static KernelWeight big_lambda(double v) { return {v, {}, {}}; }
    static KernelWeight small_gamma(double v) { return {{}, v, {}}; }
    static KernelWeight from_multiplier(double lambda, const ScaleParams& p);
};

struct ConstraintTarget {
    double mean_T = 0.0;
};

class DensityModel {
public:
    struct Info {
        std::optional<ScaleSpec> spec;
        std::optional<ScaleParams> params;
        std::optional<ObservableReduction> reduction;
        std::optional<MeasurePolicy> measure;
        std::optional<double> Lambda;
        std::optional<double> gamma;
        std::optional<double> multiplier;
    };

    DensityModel() = default;

    const Interval& support() const { return support_; }
    const std::vector<double>& seeds() const { return seeds_; }
    const Info& info() const { return info_; }

    double log_measure(double y) const { return log_m_.of_y ? log_m_.of_y(y) : 0.0; }
    double log_kernel(double y) const { return kernel_.of_y(y); }
    double log_unnormalized(double y) const { return log_measure(y) + log_kernel(y); }

    bool normalized() const { return normalized_; }
    double log_Z() const;
    double Z() const { return std::exp(log_Z()); }
    double pdf(double y) const;
    double log_pdf(double y) const;

    // Combined log density with the optional log-coordinate path.
    LogDensityFn log_density() const;
    // The kernel part alone (log p/m up to the normalizer).
    const LogDensityFn& kernel_fn() const { return kernel_; }

    static DensityModel from_log_density(Interval support,
                                         std::function<double(double)> log_unnormalized,
                                         std::vector<double> seeds = {},
                                         std::function<double(double)> log_unnorm_of_logy = {});
    // For densities already normalized analytically (log_Z = 0).
    static DensityModel from_normalized_log_pdf(Interval support,
                                                std::function<double(double)> log_pdf,
                                                std::vector<double> seeds = {},
                                                std::function<double(double)> log_pdf_of_logy = {});
    static DensityModel assemble(Interval support, LogDensityFn log_measure, LogDensityFn kernel,
                                 std::vector<double> seeds, Info info);

    friend double normalize(DensityModel& model);
    friend DensityModel change_of_variable(const DensityModel&,
                                           const std::function<double(double)>&,
                                           const std::function<double(double)>&,
                                           const std::function<double(double)>&);

private:
    Interval support_{0.0, 1.0};
    LogDensityFn log_m_;   // log m_y; empty of_y means uniform (0)
    LogDensityFn kernel_;  // -Λ(e^{βw}-1) or -γw, or a closed-form log kernel
    std::vector<double> seeds_;
    Info info_;
    bool normalized_ = false;
    double log_Z_ = 0.0;
    double norm_shift_ = 0.0; // shift used during normalization
    double norm_value_ = 1.0; // ∫ e^{log_unnorm - shift}

    friend double expectation(const DensityModel&, const std::function<double(double)>&,
                              const std::function<double(double)>&);
};

// Normalizes the model in place and returns Z. Relative accuracy 1e-8 or
// better; throws NotNormalizableError / QuadratureError.
double normalize(DensityModel& model);

// E[h(Y)] under a normalized model. h_of_logy, when given, evaluates h at
// y = e^u so heavy-tailed expectations stay on the log-coordinate path.
double expectation(const DensityModel& model, const std::function<double(double)>& h,
                   const std::function<double(double)>& h_of_logy = {});

// Builds and normalizes the maxent density for the given recipe.
DensityModel synth_density(const ScaleSpec& spec, const ScaleParams& params,
                           const ObservableReduction& reduction, const MeasurePolicy& measure,
                           const Interval& support, const KernelWeight& weight);

struct MultiplierReport {
    double lambda = 0.0;
    double mean_T = 0.0;
    int evaluations = 0;
};

// Finds the multiplier λ so that E[T(f_Y)] = target.mean_T, with canonical
// T0 = 0, alpha = 1. Bracket by geometric expansion, bisection, Newton polish.
DensityModel solve_multiplier(const ScaleSpec& spec, const ObservableReduction& reduction,
                              const MeasurePolicy& measure, const Interval& support,
                              const ConstraintTarget& target, double beta,
                              MultiplierReport* report = nullptr);

// -∫ p log(p/m) dy.
double relative_entropy(const DensityModel& model);

// E[T(f_Y)] of a synthesized model.
double mean_T(const DensityModel& model);

// Synthesizes with T(f) and with T(G(f)) (target mapped through the fitted
// affine relation), re-solves the multipliers, and returns the sup-norm
// difference of the two normalized densities on a shared quantile grid.
double solution_invariance(const ScaleSpec& spec, const ScaleParams& params,
                           const std::function<double(double)>& G,
                           const ObservableReduction& reduction, const MeasurePolicy& measure,
                           const Interval& support, const ConstraintTarget& target,
                           const std::function<double(double)>& G_prime = {});

// Density of g(Y) for strictly monotone g.
DensityModel change_of_variable(const DensityModel& model, const std::function<double(double)>& g,
                                const std::function<double(double)>& g_inverse,
                                const std::function<double(double)>& g_derivative);

} // namespace entscale
