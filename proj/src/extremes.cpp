#include "entscale/extremes.hpp"

#include <algorithm>
#include <cmath>

#include "entscale/quadrature.hpp"

namespace entscale::extremes {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double T_at(const CumulativeModel& m, double y) { return eval_T(m.spec, m.params, y); }

// T at the open support endpoints, as limits.
double T_limit(const CumulativeModel& m, bool lower) {
    double t = std::ldexp(1.0, -48);
    double y = map_unit_to_support(m.support, lower ? t : 1.0 - t);
    try {
        return eval_T_of_w(m.params, eval_w_limit(m.spec, y));
    } catch (const OverflowError&) {
        return kInf;
    } catch (const DomainError&) {
        y = map_unit_to_support(m.support, lower ? 1e-9 : 1.0 - 1e-9);
        return eval_T_of_w(m.params, eval_w_limit(m.spec, y));
    }
}

// Strictly monotone on 257 sampled points, reporting the offending interval.
bool check_monotone(const CumulativeModel& m, bool* increasing, std::string* offend) {
    const int n = 257;
    double prev = 0.0;
    int dir = 0;
    double prev_y = 0.0;
    for (int i = 1; i <= n; ++i) {
        double y = map_unit_to_support(m.support, static_cast<double>(i) / (n + 1));
        double t = T_at(m, y);
        if (i > 1) {
            int s = t > prev ? 1 : (t < prev ? -1 : 0);
            if (s == 0 || (dir != 0 && s != dir)) {
                if (offend)
                    *offend = "F is not strictly monotone on [" + std::to_string(prev_y) + ", " +
                              std::to_string(y) + "]";
                return false;
            }
            dir = s;
        }
        prev = t;
        prev_y = y;
    }
    if (increasing) *increasing = dir > 0;
    return true;
}

} // namespace

DensityModel density_from_cumulative(const CumulativeModel& model) {
    std::string offend;
    bool increasing = true;
    if (!check_monotone(model, &increasing, &offend)) throw NonMonotoneError(offend);

    CumulativeModel m = model;
    if (!(m.lambda > 0)) throw DomainError("cumulative model requires lambda > 0");
    double log_lambda = std::log(m.lambda);
    auto logp = [m, log_lambda](double y) {
        try {
            double tp = eval_T_prime(m.spec, m.params, y);
            double T = eval_T_of_w(m.params, eval_w_limit(m.spec, y));
            return log_lambda + std::log(std::abs(tp)) - m.lambda * T;
        } catch (const DomainError&) {
            return -kInf;
        } catch (const OverflowError&) {
            return -kInf;
        }
    };
    std::vector<double> seeds;
    for (double s : m.spec.transition_seeds())
        if (m.support.contains(s)) seeds.push_back(s);
    DensityModel out = DensityModel::from_log_density(m.support, logp, seeds);
    normalize(out);
    return out;
}

double cdf(const CumulativeModel& model, double y) {
    double t_lo = T_limit(model, true), t_hi = T_limit(model, false);
    double F_lo = std::exp(-model.lambda * t_lo), F_hi = std::exp(-model.lambda * t_hi);
    double F = std::exp(-model.lambda * T_at(model, y));
    // convert the survival-side ordering to a left-CDF
    double c = (F_lo - F) / (F_lo - F_hi);
    return std::clamp(c, 0.0, 1.0);
}

double quantile(const CumulativeModel& model, double mass) {
    if (!(mass > 0.0 && mass < 1.0)) throw DomainError("quantile needs mass in (0,1)");
    double lo_t = 1e-12, hi_t = 1.0 - 1e-12;
    double lo = map_unit_to_support(model.support, lo_t);
    double hi = map_unit_to_support(model.support, hi_t);
    for (int i = 0; i < 200 && hi - lo > 1e-14 * (1.0 + std::abs(lo) + std::abs(hi)); ++i) {
        double mid = 0.5 * (lo + hi);
        if (cdf(model, mid) < mass)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double entropy_on_T(const CumulativeModel& model) {
    double t_lo = T_limit(model, true), t_hi = T_limit(model, false);
    double a = std::min(t_lo, t_hi), b = std::max(t_lo, t_hi);
    if (!std::isfinite(a))
        throw NotNormalizableError("T is unbounded below; e^{-lambda T} is not a cumulative");
    // p_T(t) = λ e^{-λ t} / N on (a, b)
    double lam = model.lambda;
    double logN;
    if (std::isinf(b))
        logN = -lam * a;
    else
        logN = -lam * a + std::log1p(-std::exp(-lam * (b - a)));
    auto log_pT = [lam, logN](double t) { return std::log(lam) - lam * t - logN; };
    QuadratureOptions opt;
    LogDensityFn f{log_pT, {}};
    DensityIntegral r = integrate_density(f, {a, b}, {}, log_pT, opt, 0.0);
    return -r.value;
}

std::vector<double> simulate_extremes(const std::function<double(Rng&)>& base_sampler,
                                      int n_per_block, int replicates, ExtremeMode mode,
                                      std::uint64_t seed) {
    if (n_per_block < 1 || replicates < 1)
        throw DomainError("simulate_extremes needs n_per_block >= 1 and replicates >= 1");
    Rng rng(seed);
    std::vector<double> out;
    out.reserve(replicates);
    for (int r = 0; r < replicates; ++r) {
        double extreme = base_sampler(rng);
        for (int i = 1; i < n_per_block; ++i) {
            double v = base_sampler(rng);
            extreme = mode == ExtremeMode::Max ? std::max(extreme, v) : std::min(extreme, v);
        }
        out.push_back(extreme);
    }
    return out;
}

double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw DomainError("ks_distance needs at least one sample");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        double F = cdf(sorted[i]);
        d = std::max(d, std::abs((i + 1) / n - F));
        d = std::max(d, std::abs(static_cast<double>(i) / n - F));
    }
    return d;
}

} // namespace entscale::extremes
