#include "entscale/table.hpp"

#include <algorithm>
#include <cmath>

namespace entscale {

namespace {

// Fritsch-Carlson monotone cubic slopes for strictly increasing data.
std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& y) {
    std::size_t n = x.size();
    std::vector<double> d(n - 1), m(n);
    for (std::size_t i = 0; i + 1 < n; ++i) d[i] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
    m[0] = d[0];
    m[n - 1] = d[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (d[i - 1] <= 0.0 || d[i] <= 0.0) {
            m[i] = 0.0;
        } else {
            double h0 = x[i] - x[i - 1], h1 = x[i + 1] - x[i];
            double w1 = 2.0 * h1 + h0, w2 = h1 + 2.0 * h0;
            m[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
        }
    }
    return m;
}

double hermite(double x, double x0, double x1, double y0, double y1, double m0, double m1) {
    double h = x1 - x0;
    double t = (x - x0) / h;
    double t2 = t * t, t3 = t2 * t;
    return y0 * (2 * t3 - 3 * t2 + 1) + h * m0 * (t3 - 2 * t2 + t) + y1 * (-2 * t3 + 3 * t2) +
           h * m1 * (t3 - t2);
}

} // namespace

CdfTable::CdfTable(const Interval& support, std::function<double(double)> pdf, int build_points) {
    build(support, pdf, build_points);
}

CdfTable::CdfTable(const DensityModel& model, int build_points) {
    build(model.support(), [&model](double y) { return model.pdf(y); }, build_points);
}

void CdfTable::build(const Interval& support, const std::function<double(double)>& pdf, int n) {
    y_.resize(n);
    std::vector<double> p(n);
    for (int j = 0; j < n; ++j) {
        double t = static_cast<double>(j + 1) / (n + 1);
        y_[j] = map_unit_to_support(support, t);
        double v;
        try {
            v = pdf(y_[j]);
        } catch (const DomainError&) {
            v = 0.0;
        }
        p[j] = std::isfinite(v) && v > 0.0 ? v : 0.0;
    }
    cum_.assign(n, 0.0);
    for (int j = 1; j < n; ++j)
        cum_[j] = cum_[j - 1] + 0.5 * (p[j] + p[j - 1]) * (y_[j] - y_[j - 1]);
    double total = cum_[n - 1];
    if (!(total > 0.0)) throw QuadratureError("cdf table: density mass is zero");
    for (double& c : cum_) c /= total;

    // 4096 quantile knots, subsampled from the build grid where the cumulative
    // is strictly increasing.
    int stride = std::max(1, n / 4096);
    double last = -1.0;
    for (int j = 0; j < n; j += stride) {
        if (cum_[j] > last + 1e-15) {
            qm_.push_back(cum_[j]);
            qy_.push_back(y_[j]);
            last = cum_[j];
        }
    }
    if (qm_.size() < 4) throw QuadratureError("cdf table: too few usable knots");
    qs_ = pchip_slopes(qm_, qy_);
    mass_lo_ = std::max(1e-9, qm_.front());
    mass_hi_ = std::min(1.0 - 1e-9, qm_.back());
}

double CdfTable::cdf(double y) const {
    if (y <= y_.front()) return 0.0;
    if (y >= y_.back()) return 1.0;
    auto it = std::upper_bound(y_.begin(), y_.end(), y);
    std::size_t i = static_cast<std::size_t>(it - y_.begin());
    double t = (y - y_[i - 1]) / (y_[i] - y_[i - 1]);
    return cum_[i - 1] + t * (cum_[i] - cum_[i - 1]);
}

double CdfTable::quantile(double mass) const {
    double m = std::clamp(mass, mass_lo_, mass_hi_);
    auto it = std::upper_bound(qm_.begin(), qm_.end(), m);
    if (it == qm_.begin()) return qy_.front();
    if (it == qm_.end()) return qy_.back();
    std::size_t i = static_cast<std::size_t>(it - qm_.begin());
    return hermite(m, qm_[i - 1], qm_[i], qy_[i - 1], qy_[i], qs_[i - 1], qs_[i]);
}

double CdfTable::sample(Rng& rng) const { return quantile(rng.canonical()); }

std::vector<double> quantile_grid(const CdfTable& table, int n, double mass_lo, double mass_hi) {
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) {
        double m = mass_lo + (mass_hi - mass_lo) * static_cast<double>(i) / (n - 1);
        out[i] = table.quantile(m);
    }
    return out;
}

} // namespace entscale
