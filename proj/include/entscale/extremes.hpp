#pragma once

// Cumulative-constraint densities p ∝ d/dy e^{-λT}, entropy on the T scale,
// and block-extreme simulation with Kolmogorov-Smirnov checks.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "entscale/maxent.hpp"
#include "entscale/rng.hpp"

namespace entscale::extremes {

enum class Orientation { Lower, Upper };
enum class ExtremeMode { Max, Min };

// F(y) = e^{-λT(y)} read as a cumulative distribution under the chosen
// ordering of y (Upper: survival side, converted to a left-CDF internally).
struct CumulativeModel {
    ScaleSpec spec;
    ScaleParams params;
    double lambda = 1.0;
    Orientation orientation = Orientation::Upper;
    Interval support = Interval::positive();
};

// Normalized density λ T'(y) e^{-λT(y)} = |dF/dy| (measure policy m = T').
// Throws NonMonotoneError when F fails the sampled monotonicity check.
DensityModel density_from_cumulative(const CumulativeModel& model);

// Left-CDF of the model (affinely normalized onto (0,1)) and its inverse.
double cdf(const CumulativeModel& model, double y);
double quantile(const CumulativeModel& model, double mass);

// -∫ p_T log p_T dT on the T scale.
double entropy_on_T(const CumulativeModel& model);

// Block extremes: `replicates` draws of the max/min of n_per_block samples.
std::vector<double> simulate_extremes(const std::function<double(Rng&)>& base_sampler,
                                      int n_per_block, int replicates, ExtremeMode mode,
                                      std::uint64_t seed);

// Two-sided Kolmogorov-Smirnov distance between samples and a CDF.
double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf);

} // namespace entscale::extremes
