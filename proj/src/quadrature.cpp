#include "entscale/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

namespace entscale {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 15-point Kronrod nodes and weights with the embedded 7-point Gauss rule.
constexpr double kXgk[8] = {0.991455371120813, 0.949107912342759, 0.864864423359769,
                            0.741531185599394, 0.586087235467691, 0.405845151377397,
                            0.207784955007898, 0.000000000000000};
constexpr double kWgk[8] = {0.022935322010529, 0.063092092629979, 0.104790010322250,
                            0.140653259715525, 0.169004726639267, 0.190350578064785,
                            0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                           0.417959183673469};

struct Cell {
    double a, b, value, error;
    bool operator<(const Cell& o) const { return error < o.error; }
};

Cell eval_cell(const std::function<double(double)>& f, double a, double b) {
    double c = 0.5 * (a + b);
    double h = 0.5 * (b - a);
    double f0 = f(c);
    double k15 = kWgk[7] * f0;
    double g7 = kWg[3] * f0;
    for (int i = 0; i < 7; ++i) {
        double dx = h * kXgk[i];
        double v = f(c - dx) + f(c + dx);
        k15 += kWgk[i] * v;
        if (i % 2 == 1) g7 += kWg[(i - 1) / 2] * v;
    }
    k15 *= h;
    g7 *= h;
    if (!std::isfinite(k15))
        throw QuadratureError("non-finite integrand value in quadrature cell");
    return {a, b, k15, std::abs(k15 - g7)};
}

} // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    std::span<const double> seeds, const QuadratureOptions& opt) {
    if (!(a < b)) return {0.0, 0.0};
    std::vector<double> cuts{a};
    for (double s : seeds)
        if (s > a && s < b) cuts.push_back(s);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());

    std::priority_queue<Cell> active;
    double value = 0.0, error = 0.0;
    auto push = [&](const Cell& c) {
        value += c.value;
        error += c.error;
        active.push(c);
    };
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        if (cuts[i] < cuts[i + 1]) push(eval_cell(f, cuts[i], cuts[i + 1]));

    double retired_error = 0.0;
    int cells = static_cast<int>(active.size());
    const double eps = std::numeric_limits<double>::epsilon();
    while (true) {
        double total_err = error + retired_error;
        if (total_err <= std::max(opt.rel_tol * std::abs(value), opt.abs_floor)) break;
        if (active.empty()) {
            if (total_err > 1e3 * std::max(opt.rel_tol * std::abs(value), opt.abs_floor))
                throw QuadratureError("quadrature stalled at roundoff-limited subdivision");
            break;
        }
        if (cells >= opt.max_cells)
            throw QuadratureError("quadrature error above tolerance after max refinement");
        Cell worst = active.top();
        active.pop();
        double width_floor = 4.0 * eps * std::max({std::abs(worst.a), std::abs(worst.b), 1.0});
        if (worst.b - worst.a <= width_floor) {
            // Cannot subdivide further in double precision; retire the cell.
            retired_error += worst.error;
            error -= worst.error;
            if (retired_error > std::max(opt.rel_tol * std::abs(value), opt.abs_floor))
                throw QuadratureError(
                    "quadrature stalled: roundoff-limited cell exceeds the error budget");
            continue;
        }
        value -= worst.value;
        error -= worst.error;
        double mid = 0.5 * (worst.a + worst.b);
        push(eval_cell(f, worst.a, mid));
        push(eval_cell(f, mid, worst.b));
        ++cells;
        if (std::abs(value) > 1e290)
            throw NotNormalizableError("integral magnitude diverges under refinement");
    }
    return {value, error + retired_error};
}

double map_unit_to_support(const Interval& s, double t) {
    bool lf = s.lo_finite(), hf = s.hi_finite();
    if (lf && hf) return s.lo + t * (s.hi - s.lo);
    if (lf) return s.lo + t / (1.0 - t);
    if (hf) return s.hi - (1.0 - t) / t;
    double z = 2.0 * t - 1.0;
    return z / (1.0 - z * z);
}

namespace {

enum class TailClass { Fast, Divergent, Band };

struct TailProbe {
    TailClass cls = TailClass::Fast;
    double max_logg = -kInf;
    double final_slope = -kInf;
};

// logg over the axis u in (u0, inf): probe at u = u0 - 1 + 2^k and classify
// the decay by the slope of logg against log(u - u0 + 1). Slopes at or above
// -1 mean a divergent tail; slopes hovering near -1 need an exponential remap.
TailProbe classify_tail(const std::function<double(double)>& logg, double u0, double shift) {
    constexpr double kEta = 0.02;
    std::vector<double> slopes;
    double prev = -kInf;
    bool prev_valid = false;
    TailProbe out;
    for (int k = 0; k <= 60; ++k) {
        double u = u0 - 1.0 + std::ldexp(1.0, k);
        double lg;
        try {
            lg = logg(u);
        } catch (const DomainError&) {
            lg = -kInf;
        }
        if (lg > 1e300) { // unbounded log density along the probe
            out.cls = TailClass::Divergent;
            return out;
        }
        if (std::isfinite(lg)) out.max_logg = std::max(out.max_logg, lg);
        bool valid = std::isfinite(lg) && prev_valid;
        if (valid) {
            double s = (lg - prev) / std::log(2.0);
            slopes.push_back(s);
            // A tail already decayed to numerical zero needs no classification.
            if (lg - shift < -760.0 && s < 0.0) return out;
        }
        if (!std::isfinite(lg) && k >= 2 && !prev_valid) return out; // hard zero beyond
        prev = lg;
        prev_valid = std::isfinite(lg);
        if (slopes.size() >= 4 && k >= 8) {
            auto last = std::span(slopes).last(4);
            bool all_fast = true, all_div = true;
            double min_s = kInf, max_s = -kInf;
            for (double s : last) {
                all_fast = all_fast && s <= -1.0 - kEta;
                all_div = all_div && s >= -1.0 + kEta;
                min_s = std::min(min_s, s);
                max_s = std::max(max_s, s);
            }
            if (all_fast) {
                out.cls = TailClass::Fast;
                out.final_slope = max_s;
                return out;
            }
            // Steeply growing integrands are divergent without a long probe;
            // borderline ones get the full probe range.
            if (all_div && (k >= 20 || min_s > 0.5)) {
                out.cls = TailClass::Divergent;
                return out;
            }
        }
    }
    if (slopes.size() < 2) return out; // nothing measurable; treat as fast
    auto last = std::span(slopes).last(std::min<std::size_t>(4, slopes.size()));
    bool all_fast = true, all_div = true;
    for (double s : last) {
        all_fast = all_fast && s <= -1.0 - kEta;
        all_div = all_div && s >= -1.0 + kEta;
        out.final_slope = std::max(out.final_slope, s);
    }
    if (all_fast)
        out.cls = TailClass::Fast;
    else if (all_div)
        out.cls = TailClass::Divergent;
    else
        out.cls = TailClass::Band;
    return out;
}

// Integrate exp(logg(u) - shift) * h(u) du over (u0, inf). h may be empty.
QuadratureResult tail_integrate(const std::function<double(double)>& logg,
                                const std::function<double(double)>& h, double u0, double shift,
                                const QuadratureOptions& opt, double abs_floor, int depth,
                                const char* what) {
    auto logg_cls = [&](double u) {
        double lg = logg(u);
        if (h && std::isfinite(lg)) lg += std::log1p(std::abs(h(u)));
        return lg;
    };
    TailProbe probe = classify_tail(logg_cls, u0, shift);
    if (probe.cls == TailClass::Divergent)
        throw NotNormalizableError(std::string("density is not integrable: divergent ") + what);
    // A shallow power decay would be truncated by the rational map's double
    // resolution; push it through the exponential remap first.
    if (probe.cls == TailClass::Fast && probe.final_slope > -2.5 && depth < 3)
        probe.cls = TailClass::Band;
    if (probe.cls == TailClass::Band) {
        if (depth >= 3)
            throw QuadratureError(std::string("could not classify ") + what +
                                  " after repeated remaps");
        // Exponential remap v = u - u0 + 1 = e^{u2}: picks apart log-like tails.
        auto logg2 = [logg, u0](double u2) {
            if (u2 > 700.0) return logg(kInf) + u2; // overflow guard; usually -inf
            double u = u0 - 1.0 + std::exp(u2);
            return logg(u) + u2;
        };
        std::function<double(double)> h2;
        if (h)
            h2 = [h, u0](double u2) { return h(u0 - 1.0 + std::exp(std::min(u2, 700.0))); };
        return tail_integrate(logg2, h2, 0.0, shift, opt, abs_floor, depth + 1, what);
    }
    // Rational map u = u0 + t/(1-t) onto t in (0,1).
    auto f = [&](double t) {
        double one_m = 1.0 - t;
        double u = u0 + t / one_m;
        double lg;
        try {
            lg = logg(u);
        } catch (const DomainError&) {
            return 0.0;
        }
        double dens = std::exp(lg - shift);
        if (dens == 0.0) return 0.0;
        double v = dens / (one_m * one_m);
        if (h) v *= h(u);
        return v;
    };
    QuadratureOptions topt = opt;
    topt.abs_floor = abs_floor;
    double mids[] = {0.5};
    return integrate_adaptive(f, 0.0, 1.0, mids, topt);
}

} // namespace

DensityIntegral integrate_density(const LogDensityFn& log_f, const Interval& support,
                                  std::span<const double> seeds,
                                  const std::function<double(double)>& weight,
                                  const QuadratureOptions& opt, std::optional<double> fixed_shift,
                                  const std::function<double(double)>& weight_of_logy) {
    if (!(support.lo < support.hi)) throw DomainError("support must be a non-degenerate interval");

    auto safe_logf = [&](double y) {
        try {
            double v = log_f.of_y(y);
            return std::isnan(v) ? -kInf : v;
        } catch (const DomainError&) {
            return -kInf;
        }
    };

    // Probe for the log-scale shift and the peak location.
    double peak_y = 0.5 * (std::max(support.lo, -1.0) + std::min(support.hi, 1.0));
    double max_logf = -kInf;
    auto consider = [&](double y) {
        if (!support.contains(y)) return;
        double v = safe_logf(y);
        if (v > max_logf) {
            max_logf = v;
            peak_y = y;
        }
    };
    const int n_probe = 129;
    for (int i = 1; i <= n_probe; ++i)
        consider(map_unit_to_support(support, static_cast<double>(i) / (n_probe + 1)));
    for (double s : seeds) consider(s);
    // Kernels with steep decay can peak arbitrarily close to a finite
    // endpoint; approach both geometrically.
    double d0 = support.lo_finite() && support.hi_finite() ? support.hi - support.lo : 1.0;
    for (int k = 1; k <= 80; ++k) {
        double step = d0 * std::ldexp(1.0, -k);
        if (support.lo_finite()) consider(support.lo + step);
        if (support.hi_finite()) consider(support.hi - step);
    }
    if (!std::isfinite(max_logf) && !fixed_shift)
        throw NotNormalizableError("density evaluates to zero everywhere on support");
    double shift = fixed_shift.value_or(max_logf);

    // Split points between the finite core and the infinite tails.
    double s_hi = kInf, s_lo = -kInf;
    if (!support.hi_finite()) {
        s_hi = std::max(1.0, 2.0 * std::abs(peak_y) + 1.0);
        if (support.lo_finite()) s_hi = std::max(s_hi, support.lo + 1.0);
        for (double s : seeds) s_hi = std::max(s_hi, s + 1.0);
    }
    if (!support.lo_finite()) {
        s_lo = std::min(-1.0, -2.0 * std::abs(peak_y) - 1.0);
        if (support.hi_finite()) s_lo = std::min(s_lo, support.hi - 1.0);
        for (double s : seeds) s_lo = std::min(s_lo, s - 1.0);
    }

    double core_lo = support.lo_finite() ? support.lo : s_lo;
    double core_hi = support.hi_finite() ? support.hi : s_hi;

    // A finite endpoint where log f climbs as the endpoint is approached gets
    // its own exponentially-mapped zone; the slope vs. log-distance decides.
    auto endpoint_singular = [&](double endpoint, int side) { // side +1: lower, -1: upper
        double d = std::min(1.0, 0.125 * (core_hi - core_lo));
        double l_far = safe_logf(endpoint + side * d);
        double l_near = safe_logf(endpoint + side * d * std::ldexp(1.0, -16));
        if (!std::isfinite(l_far) || !std::isfinite(l_near)) return false;
        double slope = (l_near - l_far) / (-16.0 * std::log(2.0));
        return slope < -0.05;
    };

    double total = 0.0, err = 0.0;
    QuadratureOptions core_opt = opt;

    struct Zone {
        std::function<double(double)> logg;
        std::function<double(double)> h;
        double u0;
        const char* what;
        // Explicit cutoff in the distance coordinate, set safely before
        // endpoint ± e^{-u} collapses onto the endpoint in double precision;
        // the mass past it is recovered by exponential extrapolation.
        double u_cut = 0.0;
    };
    std::vector<Zone> zones;

    auto cutoff_u = [](double endpoint) {
        double ulp = std::max(std::abs(endpoint) * std::numeric_limits<double>::epsilon(), 5e-324);
        return -std::log(ulp) - 8.0;
    };
    if (support.lo_finite() && endpoint_singular(support.lo, +1)) {
        double d = std::min(1.0, 0.125 * (core_hi - core_lo));
        double lo = support.lo;
        double cut = cutoff_u(lo);
        zones.push_back({[=](double u) {
                             if (u >= cut) return -kInf;
                             return safe_logf(lo + std::exp(-u)) - u;
                         },
                         weight ? std::function<double(double)>(
                                      [=](double u) { return weight(lo + std::exp(-u)); })
                                : std::function<double(double)>{},
                         -std::log(d), "lower-endpoint singularity", cut});
        core_lo = lo + d;
    }
    if (support.hi_finite() && endpoint_singular(support.hi, -1)) {
        double d = std::min(1.0, 0.125 * (core_hi - core_lo));
        double hi = support.hi;
        double cut = cutoff_u(hi);
        zones.push_back({[=](double u) {
                             if (u >= cut) return -kInf;
                             return safe_logf(hi - std::exp(-u)) - u;
                         },
                         weight ? std::function<double(double)>(
                                      [=](double u) { return weight(hi - std::exp(-u)); })
                                : std::function<double(double)>{},
                         -std::log(d), "upper-endpoint singularity", cut});
        core_hi = hi - d;
    }
    if (!support.hi_finite()) {
        bool log_axis = static_cast<bool>(log_f.of_logy) && s_hi > 0.0 &&
                        (!weight || static_cast<bool>(weight_of_logy));
        if (log_axis) {
            auto lf = log_f.of_logy;
            zones.push_back({[lf](double u) {
                                 double v = lf(u);
                                 return std::isnan(v) ? -kInf : v + u;
                             },
                             weight ? weight_of_logy : std::function<double(double)>{},
                             std::log(s_hi), "upper tail"});
        } else {
            zones.push_back({[=](double y) { return safe_logf(y); },
                             weight, s_hi, "upper tail"});
        }
    }
    if (!support.lo_finite()) {
        zones.push_back({[=](double u) { return safe_logf(-u); },
                         weight ? std::function<double(double)>(
                                      [=](double u) { return weight(-u); })
                                : std::function<double(double)>{},
                         -s_lo, "lower tail"});
    }

    // Core first: it usually dominates and sets the tails' absolute floor.
    if (core_lo < core_hi) {
        auto f_core = [&](double y) {
            double lg = safe_logf(y);
            double dens = std::exp(lg - shift);
            if (dens == 0.0) return 0.0;
            return weight ? dens * weight(y) : dens;
        };
        std::vector<double> core_seeds(seeds.begin(), seeds.end());
        QuadratureResult r = integrate_adaptive(f_core, core_lo, core_hi, core_seeds, core_opt);
        total += r.value;
        err += r.error;
    }
    for (const auto& z : zones) {
        double floor = std::max(opt.abs_floor, 0.1 * opt.rel_tol * std::abs(total));
        QuadratureResult r = tail_integrate(z.logg, z.h, z.u0,
                                            shift, opt, floor, 0, z.what);
        total += r.value;
        err += r.error;
        if (z.u_cut > z.u0 + 2.0) {
            // Mass between the cutoff and the endpoint, recovered from the
            // exponential decay of g in the distance coordinate (exact for
            // power-law endpoint behavior).
            double lg1 = z.logg(z.u_cut - 2.0);
            double lg2 = z.logg(z.u_cut - 1.0);
            if (std::isfinite(lg1) && std::isfinite(lg2) && lg1 > lg2) {
                double rate = lg1 - lg2;
                double rem = std::exp(lg2 - shift - rate) / rate;
                double hval = 1.0;
                if (z.h) hval = z.h(z.u_cut - 1.0);
                total += rem * hval;
                err += std::abs(rem * hval) * 1e-10;
            }
        }
    }

    if (!std::isfinite(total)) throw QuadratureError("density integral is not finite");
    return {total, err, shift};
}

} // namespace entscale
