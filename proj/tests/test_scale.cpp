#include <doctest.h>

#include <cmath>
#include <random>

#include "entscale/scale.hpp"

using namespace entscale;

namespace {

ScaleSpec pure_log_stack(int depth) {
    std::vector<LevelSpec> levels;
    for (int i = 0; i < depth; ++i) levels.push_back(LevelSpec::pure_log());
    return ScaleSpec(levels);
}

// Deterministic random scale/params generator for property tests.
struct SpecGen {
    std::mt19937_64 rng;
    explicit SpecGen(std::uint64_t seed) : rng(seed) {}

    double uniform(double a, double b) {
        return a + (b - a) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
    }

    ScaleSpec spec() {
        std::vector<LevelSpec> levels;
        int depth = static_cast<int>(rng() % 3);
        for (int i = 0; i < depth; ++i) {
            switch (rng() % 3) {
            case 0: levels.push_back(LevelSpec::pure_log()); break;
            case 1: levels.push_back(LevelSpec::linear_log(uniform(0.0, 2.0))); break;
            default: levels.push_back(LevelSpec::log_linear(uniform(0.1, 2.0))); break;
            }
        }
        return ScaleSpec(levels);
    }

    ScaleParams params(bool allow_zero_beta = true) {
        ScaleParams p;
        p.T0 = uniform(-2.0, 2.0);
        p.alpha = uniform(0.2, 2.0) * (rng() % 2 ? 1.0 : -1.0);
        p.beta = uniform(-1.5, 1.5);
        if (allow_zero_beta && rng() % 5 == 0) p.beta = 0.0;
        return p;
    }

    double interior_point(const ScaleSpec& s) {
        const Interval& d = s.domain();
        double lo = d.lo_finite() ? d.lo : -4.0;
        double hi = d.hi_finite() ? d.hi : lo + 8.0;
        return lo + (hi - lo) * uniform(0.1, 0.9);
    }
};

} // namespace

TEST_CASE("eval_w matches the hierarchy definitions") {
    CHECK(eval_w(pure_log_stack(1), std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-14));
    // c -> 0 reduces linear-log to the pure logarithm
    ScaleSpec ll(std::vector<LevelSpec>{LevelSpec::linear_log(0.0)});
    CHECK(eval_w(ll, 10.0) == doctest::Approx(std::log(10.0)).epsilon(1e-14));
    ScaleSpec lg(std::vector<LevelSpec>{LevelSpec::log_linear(1.0)});
    CHECK(eval_w(lg, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    // identity at depth 0
    CHECK(eval_w(ScaleSpec{}, 3.25) == 3.25);
}

TEST_CASE("eval_w domain handling") {
    ScaleSpec log1 = pure_log_stack(1);
    CHECK(log1.domain().lo == 0.0);
    CHECK_THROWS_AS(eval_w(log1, -1.0), DomainError);
    CHECK_THROWS_AS(eval_w(log1, 0.0), DomainError);

    ScaleSpec log2 = pure_log_stack(2);
    CHECK(log2.domain().lo == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(eval_w(log2, 1.0), DomainError);
    CHECK(eval_w(log2, std::exp(std::exp(1.0))) == doctest::Approx(1.0).epsilon(1e-12));

    ScaleSpec ll(std::vector<LevelSpec>{LevelSpec::linear_log(2.0)});
    CHECK(ll.domain().lo == -2.0);

    ScaleSpec lll(std::vector<LevelSpec>{LevelSpec::log_linear_log(1.0, 3.0, 2.0)});
    CHECK(lll.domain().lo == 1.0);
    CHECK(lll.domain().hi == 3.0);
    CHECK_THROWS_AS(ScaleSpec(std::vector<LevelSpec>{LevelSpec::log_linear_log(3.0, 1.0, 2.0)}),
                    DomainError);
    // non-monotone levels cannot sit under another level
    CHECK_THROWS_AS(ScaleSpec(std::vector<LevelSpec>{LevelSpec::log_linear_log(0.0, 1.0, 1.0),
                                                     LevelSpec::pure_log()}),
                    DomainError);
}

TEST_CASE("eval_T examples and the beta -> 0 limit") {
    ScaleParams p{0.0, 1.0, 1.0};
    CHECK(eval_T(pure_log_stack(1), p, 2.0) == doctest::Approx(1.0).epsilon(1e-14));

    ScaleParams lin{0.0, 1.0, 0.0};
    CHECK(eval_T(ScaleSpec{}, lin, 3.0) == doctest::Approx(3.0).epsilon(1e-14));

    ScaleParams p2{5.0, 2.0, 0.0};
    CHECK(eval_T(ScaleSpec{}, p2, 3.0) == doctest::Approx(11.0).epsilon(1e-14));
    ScaleParams p2eps{5.0, 2.0, 1e-8};
    CHECK(std::abs(eval_T(ScaleSpec{}, p2eps, 3.0) - 11.0) < 1e-6);
}

TEST_CASE("beta -> 0 continuity of T over a grid") {
    SpecGen gen(7);
    for (int trial = 0; trial < 50; ++trial) {
        ScaleSpec s = gen.spec();
        double T0 = gen.uniform(-2, 2), alpha = gen.uniform(0.2, 2);
        ScaleParams small{T0, alpha, 1e-8};
        for (int i = 0; i < 10; ++i) {
            double f = gen.interior_point(s);
            double w = eval_w(s, f);
            double lin = T0 + alpha * w;
            CHECK(std::abs(eval_T(s, small, f) - lin) < 1e-5 * (1.0 + std::abs(lin)));
        }
    }
}

TEST_CASE("eval_T_prime examples") {
    ScaleParams p{0.0, 1.0, 1.0};
    CHECK(eval_T_prime(pure_log_stack(1), p, 2.0) == doctest::Approx(1.0).epsilon(1e-14));

    ScaleParams lin{0.0, 1.7, 0.0};
    for (double y : {-2.0, 0.5, 9.0})
        CHECK(eval_T_prime(ScaleSpec{}, lin, y) == doctest::Approx(1.7).epsilon(1e-14));
}

TEST_CASE("eval_T_prime agrees with a centered finite difference of eval_T") {
    SpecGen gen(11);
    for (int trial = 0; trial < 200; ++trial) {
        ScaleSpec s = gen.spec();
        ScaleParams p = gen.params();
        double y = gen.interior_point(s);
        double h = 1e-6;
        if (!s.contains(y - h) || !s.contains(y + h)) continue;
        double tp;
        try {
            tp = eval_T_prime(s, p, y);
        } catch (const OverflowError&) {
            continue;
        }
        double fd = (eval_T(s, p, y + h) - eval_T(s, p, y - h)) / (2 * h);
        CHECK(std::abs(tp - fd) < 1e-5 * (1.0 + std::abs(tp)));
    }
}

TEST_CASE("invariance ODE dT/dw = alpha + beta T") {
    SpecGen gen(13);
    for (int trial = 0; trial < 300; ++trial) {
        ScaleSpec s = gen.spec();
        ScaleParams p = gen.params();
        double f = gen.interior_point(s);
        double w = eval_w(s, f);
        // keep T in a range where the centered difference is not roundoff-bound
        if (std::abs(w) > 30 || std::abs(p.beta * w) > 5) continue;
        double h = 1e-6;
        double dTdw = (eval_T_of_w(p, w + h) - eval_T_of_w(p, w - h)) / (2 * h);
        double residual = dTdw - p.beta * eval_T_of_w(p, w) - p.alpha;
        CHECK(std::abs(residual) < 1e-6);
    }
}

TEST_CASE("finite transform examples") {
    CHECK(finite_transform(0.7, 0.3, 0.0, 4.2) == 4.2);
    CHECK(finite_transform(1.0, 1.0, std::log(2.0), 0.0) == doctest::Approx(1.0).epsilon(1e-14));
    // beta = 0 branch
    CHECK(finite_transform(2.0, 0.0, 1.5, 1.0) == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("finite transforms compose additively in epsilon") {
    SpecGen gen(17);
    for (int trial = 0; trial < 1000; ++trial) {
        double alpha = gen.uniform(-2, 2), beta = gen.uniform(-1.5, 1.5);
        double e1 = gen.uniform(-1, 1), e2 = gen.uniform(-1, 1);
        double T = gen.uniform(-5, 5);
        double once = finite_transform(alpha, beta, e1 + e2, T);
        double twice = finite_transform(alpha, beta, e1, finite_transform(alpha, beta, e2, T));
        CHECK(std::abs(once - twice) < 1e-12);
    }
}

TEST_CASE("affine invariance fits") {
    std::vector<double> pts{1.0, 2.0, 4.0, 8.0};

    SUBCASE("log scale is invariant to powers") {
        ScaleSpec s = pure_log_stack(1);
        ScaleParams p{0.0, 1.0, 0.0};
        AffineFit fit = check_affine_invariance(s, p, [](double f) { return f * f; }, pts);
        CHECK(fit.a == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(fit.b == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(fit.max_residual < 1e-12);
    }
    SUBCASE("linear scale is invariant to shifts") {
        ScaleSpec s;
        ScaleParams p{0.0, 1.3, 0.0};
        AffineFit fit = check_affine_invariance(s, p, [](double f) { return f + 5.0; }, pts);
        CHECK(fit.a == doctest::Approx(5.0 * 1.3).epsilon(1e-12));
        CHECK(fit.b == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(fit.max_residual < 1e-12);
    }
    SUBCASE("log scale is not invariant to shifts") {
        ScaleSpec s = pure_log_stack(1);
        ScaleParams p{0.0, 1.0, 0.0};
        AffineFit fit = check_affine_invariance(s, p, [](double f) { return f + 1.0; }, pts);
        CHECK(fit.max_residual > 1e-3);
    }
    SUBCASE("preconditions") {
        ScaleSpec s = pure_log_stack(1);
        ScaleParams p{0.0, 1.0, 0.0};
        std::vector<double> two{1.0, 2.0};
        CHECK_THROWS_AS(check_affine_invariance(s, p, [](double f) { return f; }, two),
                        DomainError);
        CHECK_THROWS_AS(
            check_affine_invariance(s, p, [](double f) { return f - 2.0; }, pts),
            DomainError);
    }
}

TEST_CASE("generator closure: finite transform output refits affinely") {
    SpecGen gen(23);
    std::vector<double> pts{1.5, 2.0, 3.0, 5.0, 8.0};
    for (int trial = 0; trial < 20; ++trial) {
        ScaleParams p = gen.params();
        double eps = gen.uniform(-0.8, 0.8);
        ScaleSpec s = pure_log_stack(1);
        // z_i = finite_transform applied to T(f_i) must fit a + b T(f_i) exactly
        std::vector<double> xs, zs;
        for (double f : pts) {
            double t = eval_T(s, p, f);
            xs.push_back(t);
            zs.push_back(finite_transform(p.alpha, p.beta, eps, t));
        }
        double mx = 0, mz = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i], mz += zs[i];
        mx /= xs.size();
        mz /= xs.size();
        double sxx = 0, sxz = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sxx += (xs[i] - mx) * (xs[i] - mx);
            sxz += (xs[i] - mx) * (zs[i] - mz);
        }
        double b = sxz / sxx, a = mz - b * mx;
        for (std::size_t i = 0; i < xs.size(); ++i)
            CHECK(std::abs(zs[i] - a - b * xs[i]) < 1e-10);
    }
}

TEST_CASE("scale spec JSON round trip") {
    std::vector<LevelSpec> levels{LevelSpec::linear_log(1.0), LevelSpec::pure_log()};
    ScaleSpec s(levels);
    ScaleSpec back = ScaleSpec::from_json(s.to_json());
    REQUIRE(back.depth() == 2);
    CHECK(back.levels()[0].kind == LevelKind::LinearLog);
    CHECK(back.levels()[0].c == 1.0);
    CHECK(back.levels()[1].kind == LevelKind::PureLog);

    ScaleSpec doc = ScaleSpec::from_json(R"({"levels":[{"kind":"linear_log","c":1.0}]})");
    CHECK(doc.depth() == 1);

    CHECK_THROWS_AS(ScaleSpec::from_json(R"({"levels":[{"kind":"mystery"}]})"), ParseError);
    CHECK_THROWS_AS(ScaleSpec::from_json("not json"), ParseError);
    CHECK_THROWS_AS(ScaleSpec::from_json(R"({"levels":[{"kind":"linear_log"}]})"), ParseError);
}

TEST_CASE("reductions") {
    auto sq = ObservableReduction::centered_square(1.0);
    CHECK(sq.eval(3.0) == 4.0);
    CHECK(sq.deriv(3.0) == 4.0);
    auto pre = sq.preimages(4.0, Interval::all());
    REQUIRE(pre.size() == 2);
    CHECK(pre[0] == 3.0);
    CHECK(pre[1] == -1.0);

    auto ratio = ObservableReduction::ratio();
    CHECK(ratio.eval(1.0) == 0.5);
    CHECK(ratio.deriv(1.0) == 0.25);

    auto pw = ObservableReduction::power(2.0);
    CHECK(pw.eval(3.0) == 9.0);
    CHECK_THROWS_AS(ObservableReduction::power(0.0), DomainError);
}
