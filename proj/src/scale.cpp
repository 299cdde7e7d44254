#include "entscale/scale.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

namespace entscale {

namespace {

double checked_log(double arg) {
    if (!(arg > 0.0))
        throw DomainError("log argument must be positive, got " + std::to_string(arg));
    return std::log(arg);
}

} // namespace

double level_eval(const LevelSpec& level, double x) {
    switch (level.kind) {
    case LevelKind::PureLog:
        return checked_log(x);
    case LevelKind::LinearLog:
        return checked_log(level.c + x);
    case LevelKind::LogLinear:
        return level.c * x + checked_log(x);
    case LevelKind::LogLinearLog:
        return checked_log(level.c2 - x) + level.b * checked_log(x - level.c1);
    case LevelKind::LinearLogLinear:
        return level.c2 * x + level.b * checked_log(level.c1 + x);
    }
    throw Error("unreachable level kind");
}

double level_deriv(const LevelSpec& level, double x) {
    switch (level.kind) {
    case LevelKind::PureLog:
        return 1.0 / x;
    case LevelKind::LinearLog:
        return 1.0 / (level.c + x);
    case LevelKind::LogLinear:
        return level.c + 1.0 / x;
    case LevelKind::LogLinearLog:
        return -1.0 / (level.c2 - x) + level.b / (x - level.c1);
    case LevelKind::LinearLogLinear:
        return level.c2 + level.b / (level.c1 + x);
    }
    throw Error("unreachable level kind");
}

Interval level_input_domain(const LevelSpec& level) {
    const double inf = std::numeric_limits<double>::infinity();
    switch (level.kind) {
    case LevelKind::PureLog:
        return {0.0, inf};
    case LevelKind::LinearLog:
        return {-level.c, inf};
    case LevelKind::LogLinear:
        return {0.0, inf};
    case LevelKind::LogLinearLog:
        return {level.c1, level.c2};
    case LevelKind::LinearLogLinear:
        return {-level.c1, inf};
    }
    throw Error("unreachable level kind");
}

bool level_monotone(const LevelSpec& level) {
    switch (level.kind) {
    case LevelKind::PureLog:
    case LevelKind::LinearLog:
        return true;
    case LevelKind::LogLinear:
        return true; // c >= 0 enforced at construction
    case LevelKind::LogLinearLog:
        return false; // rises then falls on (c1, c2)
    case LevelKind::LinearLogLinear:
        return level.b >= 0.0;
    }
    throw Error("unreachable level kind");
}

namespace {

void validate_level(const LevelSpec& level) {
    switch (level.kind) {
    case LevelKind::PureLog:
        break;
    case LevelKind::LinearLog:
        if (!(level.c >= 0.0)) throw DomainError("linear_log requires c >= 0");
        break;
    case LevelKind::LogLinear:
        if (!(level.c >= 0.0)) throw DomainError("log_linear requires c >= 0");
        break;
    case LevelKind::LogLinearLog:
        if (!(level.c1 < level.c2)) throw DomainError("log_linear_log requires c1 < c2");
        break;
    case LevelKind::LinearLogLinear:
        if (!(level.c1 >= 0.0) || !(level.c2 >= 0.0))
            throw DomainError("linear_log_linear requires c1 >= 0 and c2 >= 0");
        break;
    }
    if (!std::isfinite(level.c) || !std::isfinite(level.c1) || !std::isfinite(level.c2) ||
        !std::isfinite(level.b))
        throw DomainError("level constants must be finite");
}

// Value of the prefix stack levels[0..n) at f; assumes f strictly inside the
// prefix domain.
double prefix_eval(const std::vector<LevelSpec>& levels, std::size_t n, double f) {
    double x = f;
    for (std::size_t i = 0; i < n; ++i) x = level_eval(levels[i], x);
    return x;
}

// Solve prefix(f) = target for f inside the open interval dom, where the
// prefix is continuous and strictly increasing. Returns the cut point.
double solve_prefix(const std::vector<LevelSpec>& levels, std::size_t n, double target,
                    const Interval& dom) {
    // Start from a point inside dom and expand a bracket toward the needed side.
    double lo, hi;
    if (dom.lo_finite() && dom.hi_finite()) {
        lo = dom.lo;
        hi = dom.hi;
    } else if (dom.lo_finite()) {
        lo = dom.lo;
        double step = 1.0;
        hi = dom.lo + step;
        while (prefix_eval(levels, n, hi) < target) {
            step *= 2.0;
            hi = dom.lo + step;
            if (step > 1e300) throw DomainError("scale domain inference failed to bracket");
        }
    } else if (dom.hi_finite()) {
        hi = dom.hi;
        double step = 1.0;
        lo = dom.hi - step;
        while (prefix_eval(levels, n, lo) > target) {
            step *= 2.0;
            lo = dom.hi - step;
            if (step > 1e300) throw DomainError("scale domain inference failed to bracket");
        }
    } else {
        lo = -1.0;
        hi = 1.0;
        while (prefix_eval(levels, n, lo) > target) {
            lo *= 2.0;
            if (lo < -1e300) throw DomainError("scale domain inference failed to bracket");
        }
        while (prefix_eval(levels, n, hi) < target) {
            hi *= 2.0;
            if (hi > 1e300) throw DomainError("scale domain inference failed to bracket");
        }
    }
    for (int iter = 0; iter < 200; ++iter) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        double v;
        // At an open prefix-domain endpoint the eval may throw; treat the
        // offending side as below/above target accordingly.
        try {
            v = prefix_eval(levels, n, mid);
        } catch (const DomainError&) {
            lo = mid;
            continue;
        }
        if (v < target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

ScaleSpec::ScaleSpec(std::vector<LevelSpec> levels) : levels_(std::move(levels)) {
    for (const auto& level : levels_) validate_level(level);
    for (std::size_t i = 0; i + 1 < levels_.size(); ++i) {
        if (!level_monotone(levels_[i]))
            throw DomainError("non-monotone level must be the outermost level of the stack");
    }
    if (!levels_.empty() && !level_monotone(levels_.back())) monotone_ = false;

    // Maximal open domain: intersect each level's input requirement, pulled
    // back through the (monotone) prefix stack.
    domain_ = Interval::all();
    for (std::size_t i = 0; i < levels_.size(); ++i) {
        Interval need = level_input_domain(levels_[i]);
        if (i == 0) {
            domain_.lo = std::max(domain_.lo, need.lo);
            domain_.hi = std::min(domain_.hi, need.hi);
        } else {
            if (need.lo_finite())
                domain_.lo = std::max(domain_.lo, solve_prefix(levels_, i, need.lo, domain_));
            if (need.hi_finite())
                domain_.hi = std::min(domain_.hi, solve_prefix(levels_, i, need.hi, domain_));
        }
        if (!(domain_.lo < domain_.hi)) throw DomainError("scale spec has empty domain");
    }
}

std::vector<double> ScaleSpec::transition_seeds() const {
    std::vector<double> seeds;
    auto push = [&](double f) {
        if (domain_.contains(f)) seeds.push_back(f);
    };
    for (std::size_t i = 0; i < levels_.size(); ++i) {
        const auto& level = levels_[i];
        // Transition happens where the level's inner value is comparable to
        // its constant; map that back through the prefix when possible.
        std::vector<double> inner;
        switch (level.kind) {
        case LevelKind::PureLog:
            inner = {1.0};
            break;
        case LevelKind::LinearLog:
            inner = {level.c, 1.0};
            break;
        case LevelKind::LogLinear:
            inner = {level.c > 0 ? 1.0 / level.c : 1.0, 1.0};
            break;
        case LevelKind::LogLinearLog:
            inner = {0.5 * (level.c1 + level.c2)};
            break;
        case LevelKind::LinearLogLinear:
            inner = {level.c2 > 0 ? 1.0 / level.c2 : 1.0, level.c1};
            break;
        }
        for (double x : inner) {
            if (i == 0) {
                push(x);
            } else {
                try {
                    push(solve_prefix(levels_, i, level_eval(levels_[i - 1], x), domain_));
                } catch (const DomainError&) {
                    // outside the stack domain; no seed
                }
            }
        }
    }
    std::sort(seeds.begin(), seeds.end());
    seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
    return seeds;
}

// --- Observable reductions ---------------------------------------------------

double ObservableReduction::eval(double y) const {
    switch (kind) {
    case Kind::Identity: return y;
    case Kind::CenteredSquare: return (y - mu) * (y - mu);
    case Kind::AbsoluteValue: return std::abs(y);
    case Kind::Power: return std::pow(y, k);
    case Kind::Log: return checked_log(y);
    case Kind::Ratio: return y / (1.0 + y);
    }
    throw Error("unreachable reduction kind");
}

double ObservableReduction::deriv(double y) const {
    switch (kind) {
    case Kind::Identity: return 1.0;
    case Kind::CenteredSquare: return 2.0 * (y - mu);
    case Kind::AbsoluteValue: return y >= 0.0 ? 1.0 : -1.0;
    case Kind::Power: return k * std::pow(y, k - 1.0);
    case Kind::Log: return 1.0 / y;
    case Kind::Ratio: {
        double d = 1.0 + y;
        return 1.0 / (d * d);
    }
    }
    throw Error("unreachable reduction kind");
}

std::vector<double> ObservableReduction::preimages(double f, const Interval& within) const {
    std::vector<double> out;
    auto push = [&](double y) {
        if (within.contains(y)) out.push_back(y);
    };
    switch (kind) {
    case Kind::Identity:
        push(f);
        break;
    case Kind::CenteredSquare:
        if (f >= 0.0) {
            push(mu + std::sqrt(f));
            push(mu - std::sqrt(f));
        }
        break;
    case Kind::AbsoluteValue:
        push(f);
        push(-f);
        break;
    case Kind::Power:
        if (f > 0.0 && k != 0.0) push(std::pow(f, 1.0 / k));
        break;
    case Kind::Log:
        if (f < kExpArgMax) push(std::exp(f));
        break;
    case Kind::Ratio:
        if (f != 1.0) push(f / (1.0 - f));
        break;
    }
    return out;
}

std::vector<double> ObservableReduction::kink_points() const {
    switch (kind) {
    case Kind::CenteredSquare: return {mu};
    case Kind::AbsoluteValue: return {0.0};
    default: return {};
    }
}

ObservableReduction ObservableReduction::identity() { return {}; }
ObservableReduction ObservableReduction::centered_square(double mu) {
    ObservableReduction r;
    r.kind = Kind::CenteredSquare;
    r.mu = mu;
    return r;
}
ObservableReduction ObservableReduction::absolute_value() {
    ObservableReduction r;
    r.kind = Kind::AbsoluteValue;
    return r;
}
ObservableReduction ObservableReduction::power(double k) {
    if (k == 0.0 || !std::isfinite(k)) throw DomainError("power reduction requires finite k != 0");
    ObservableReduction r;
    r.kind = Kind::Power;
    r.k = k;
    r.domain = Interval::positive();
    return r;
}
ObservableReduction ObservableReduction::log() {
    ObservableReduction r;
    r.kind = Kind::Log;
    r.domain = Interval::positive();
    return r;
}
ObservableReduction ObservableReduction::ratio() {
    ObservableReduction r;
    r.kind = Kind::Ratio;
    r.domain = {-1.0, std::numeric_limits<double>::infinity()};
    return r;
}

// --- Scale evaluation ---------------------------------------------------------

double eval_w(const ScaleSpec& spec, double f) {
    if (!spec.contains(f)) throw DomainError("f outside scale domain");
    double x = f;
    for (const auto& level : spec.levels()) x = level_eval(level, x);
    return x;
}

double eval_w_prime(const ScaleSpec& spec, double f) {
    if (!spec.contains(f)) throw DomainError("f outside scale domain");
    double x = f;
    double deriv = 1.0;
    for (const auto& level : spec.levels()) {
        deriv *= level_deriv(level, x);
        x = level_eval(level, x);
    }
    return deriv;
}

namespace {

// level_eval with log(0) treated as -inf; arguments < 0 still raise.
double level_eval_limit(const LevelSpec& level, double x) {
    auto lim_log = [](double arg) {
        if (arg < 0.0) throw DomainError("log argument negative");
        return arg == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(arg);
    };
    switch (level.kind) {
    case LevelKind::PureLog: return lim_log(x);
    case LevelKind::LinearLog: return lim_log(level.c + x);
    case LevelKind::LogLinear: return level.c * x + lim_log(x);
    case LevelKind::LogLinearLog: return lim_log(level.c2 - x) + level.b * lim_log(x - level.c1);
    case LevelKind::LinearLogLinear: return level.c2 * x + level.b * lim_log(level.c1 + x);
    }
    throw Error("unreachable level kind");
}

} // namespace

double eval_w_limit(const ScaleSpec& spec, double f) {
    const Interval& d = spec.domain();
    if (f < d.lo || f > d.hi) throw DomainError("f outside closed scale domain");
    double x = f;
    for (const auto& level : spec.levels()) {
        x = level_eval_limit(level, x);
        // A level hitting its boundary fixes the limit of the whole stack.
        if (std::isinf(x)) return x;
    }
    return x;
}

namespace {

constexpr double kHuge = 1e300;

// First-level value and log|derivative| at f = exp(lf) without forming f when
// it would overflow.
void first_level_of_logf(const LevelSpec& level, double lf, double& value, double& logd) {
    bool big = lf > 700.0;
    double f = big ? kHuge : std::exp(lf);
    switch (level.kind) {
    case LevelKind::PureLog:
        value = lf;
        logd = -lf;
        return;
    case LevelKind::LinearLog:
        value = big ? lf + std::log1p(level.c * std::exp(-lf)) : std::log(level.c + f);
        logd = -value;
        return;
    case LevelKind::LogLinear:
        value = big ? kHuge : level.c * f + lf;
        logd = std::log(level.c + (big ? 0.0 : 1.0 / f));
        return;
    case LevelKind::LogLinearLog:
        // Bounded domain; f cannot be huge here.
        value = level_eval_limit(level, f);
        logd = std::log(std::abs(level_deriv(level, f)));
        return;
    case LevelKind::LinearLogLinear: {
        double lg = big ? lf + std::log1p(level.c1 * std::exp(-lf)) : std::log(level.c1 + f);
        value = big && level.c2 > 0.0 ? kHuge : level.c2 * (big ? kHuge : f) + level.b * lg;
        if (big)
            logd = level.c2 > 0.0 ? std::log(level.c2) : std::log(std::abs(level.b)) - lg;
        else
            logd = std::log(std::abs(level.c2 + level.b / (level.c1 + f)));
        return;
    }
    }
    throw Error("unreachable level kind");
}

} // namespace

double eval_w_of_logf(const ScaleSpec& spec, double log_f) {
    if (spec.depth() == 0) return log_f > 700.0 ? kHuge : std::exp(log_f);
    double x, logd;
    first_level_of_logf(spec.levels()[0], log_f, x, logd);
    for (std::size_t i = 1; i < spec.depth(); ++i) {
        if (x >= kHuge) return kHuge;
        x = level_eval_limit(spec.levels()[i], x);
    }
    return x;
}

double eval_logabs_wprime_of_logf(const ScaleSpec& spec, double log_f) {
    if (spec.depth() == 0) return 0.0;
    double x, logd;
    first_level_of_logf(spec.levels()[0], log_f, x, logd);
    for (std::size_t i = 1; i < spec.depth(); ++i) {
        if (x >= kHuge) return logd;
        logd += std::log(std::abs(level_deriv(spec.levels()[i], x)));
        x = level_eval_limit(spec.levels()[i], x);
    }
    return logd;
}

double eval_T_of_w(const ScaleParams& params, double w) {
    if (std::abs(params.beta) < kBetaLinearThreshold) return params.T0 + params.alpha * w;
    double bw = params.beta * w;
    if (bw > kExpArgMax) throw OverflowError("exp(beta*w) exceeds representable range");
    return params.T0 * std::exp(bw) + params.alpha * w * detail::expm1_over(bw);
}

double eval_T(const ScaleSpec& spec, const ScaleParams& params, double f) {
    return eval_T_of_w(params, eval_w(spec, f));
}

double eval_T_prime(const ScaleSpec& spec, const ScaleParams& params, double y) {
    double wp = eval_w_prime(spec, y);
    if (std::abs(params.beta) < kBetaLinearThreshold) return params.alpha * wp;
    double bw = params.beta * eval_w(spec, y);
    if (bw > kExpArgMax) throw OverflowError("exp(beta*w) exceeds representable range");
    return (params.alpha + params.beta * params.T0) * wp * std::exp(bw);
}

double finite_transform(double alpha, double beta, double eps, double T_value) {
    if (std::abs(beta) < kBetaLinearThreshold) return T_value + eps * alpha;
    double eb = eps * beta;
    return alpha * eps * detail::expm1_over(eb) + std::exp(eb) * T_value;
}

AffineFit check_affine_invariance(const ScaleSpec& spec, const ScaleParams& params,
                                  const std::function<double(double)>& G,
                                  std::span<const double> sample_f) {
    if (sample_f.size() < 3) throw DomainError("affine fit needs at least 3 sample points");
    std::vector<double> xs, zs;
    xs.reserve(sample_f.size());
    zs.reserve(sample_f.size());
    for (double f : sample_f) {
        if (!spec.contains(f)) throw DomainError("sample point outside scale domain");
        double gf = G(f);
        if (!spec.contains(gf)) throw DomainError("G maps sample point outside scale domain");
        xs.push_back(eval_T(spec, params, f));
        zs.push_back(eval_T(spec, params, gf));
    }
    double n = static_cast<double>(xs.size());
    double mx = 0, mz = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        mz += zs[i];
    }
    mx /= n;
    mz /= n;
    double sxx = 0, sxz = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxz += (xs[i] - mx) * (zs[i] - mz);
    }
    if (sxx <= 0.0) throw DomainError("sample points give a degenerate fit");
    AffineFit fit;
    fit.b = sxz / sxx;
    fit.a = mz - fit.b * mx;
    fit.max_residual = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
        fit.max_residual = std::max(fit.max_residual, std::abs(zs[i] - fit.a - fit.b * xs[i]));
    return fit;
}

// --- JSON serialization -----------------------------------------------------

namespace {

const char* kind_name(LevelKind kind) {
    switch (kind) {
    case LevelKind::PureLog: return "pure_log";
    case LevelKind::LinearLog: return "linear_log";
    case LevelKind::LogLinear: return "log_linear";
    case LevelKind::LogLinearLog: return "log_linear_log";
    case LevelKind::LinearLogLinear: return "linear_log_linear";
    }
    return "?";
}

double require_number(const nlohmann::json& obj, const char* key) {
    if (!obj.contains(key) || !obj[key].is_number())
        throw ParseError(std::string("level is missing numeric field \"") + key + "\"");
    return obj[key].get<double>();
}

} // namespace

std::string ScaleSpec::to_json() const {
    nlohmann::json doc;
    doc["levels"] = nlohmann::json::array();
    for (const auto& level : levels_) {
        nlohmann::json item;
        item["kind"] = kind_name(level.kind);
        switch (level.kind) {
        case LevelKind::PureLog:
            break;
        case LevelKind::LinearLog:
        case LevelKind::LogLinear:
            item["c"] = level.c;
            break;
        case LevelKind::LogLinearLog:
        case LevelKind::LinearLogLinear:
            item["c1"] = level.c1;
            item["c2"] = level.c2;
            item["b"] = level.b;
            break;
        }
        doc["levels"].push_back(std::move(item));
    }
    return doc.dump();
}

ScaleSpec ScaleSpec::from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    const nlohmann::json* arr = nullptr;
    if (doc.is_object() && doc.contains("levels"))
        arr = &doc["levels"];
    else if (doc.is_array())
        arr = &doc;
    else
        throw ParseError("scale spec must be {\"levels\": [...]} or a level array");
    if (!arr->is_array()) throw ParseError("\"levels\" must be an array");

    std::vector<LevelSpec> levels;
    for (const auto& item : *arr) {
        if (!item.is_object() || !item.contains("kind") || !item["kind"].is_string())
            throw ParseError("each level needs a string \"kind\"");
        std::string kind = item["kind"].get<std::string>();
        if (kind == "pure_log") {
            levels.push_back(LevelSpec::pure_log());
        } else if (kind == "linear_log") {
            levels.push_back(LevelSpec::linear_log(require_number(item, "c")));
        } else if (kind == "log_linear") {
            levels.push_back(LevelSpec::log_linear(require_number(item, "c")));
        } else if (kind == "log_linear_log") {
            levels.push_back(LevelSpec::log_linear_log(
                require_number(item, "c1"), require_number(item, "c2"), require_number(item, "b")));
        } else if (kind == "linear_log_linear") {
            levels.push_back(LevelSpec::linear_log_linear(
                require_number(item, "c1"), require_number(item, "c2"), require_number(item, "b")));
        } else {
            throw ParseError("unknown level kind \"" + kind + "\"");
        }
    }
    try {
        return ScaleSpec(std::move(levels));
    } catch (const DomainError& e) {
        throw ParseError(std::string("invalid scale spec: ") + e.what());
    }
}

} // namespace entscale
