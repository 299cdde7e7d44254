#pragma once

// Tabulated cumulative distribution with monotone-cubic quantile
// interpolation; backs inverse-CDF sampling and quantile grids.

#include <functional>
#include <vector>

#include "entscale/maxent.hpp"
#include "entscale/rng.hpp"

namespace entscale {

class CdfTable {
public:
    CdfTable(const Interval& support, std::function<double(double)> pdf, int build_points = 16384);
    explicit CdfTable(const DensityModel& model, int build_points = 16384);

    double cdf(double y) const;
    // Inverse CDF; mass is clamped to the tabulated knot range intersected
    // with [1e-9, 1 - 1e-9].
    double quantile(double mass) const;
    double sample(Rng& rng) const;

    double mass_lo() const { return mass_lo_; }
    double mass_hi() const { return mass_hi_; }

private:
    void build(const Interval& support, const std::function<double(double)>& pdf, int n);

    std::vector<double> y_, cum_;        // fine grid for cdf()
    std::vector<double> qm_, qy_, qs_;   // quantile knots: mass, value, PCHIP slope
    double mass_lo_ = 1e-9, mass_hi_ = 1.0 - 1e-9;
};

// n quantiles at masses equally spaced in [mass_lo, mass_hi].
std::vector<double> quantile_grid(const CdfTable& table, int n, double mass_lo = 1e-6,
                                  double mass_hi = 1.0 - 1e-6);

} // namespace entscale
