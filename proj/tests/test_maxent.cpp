#include <doctest.h>

#include <cmath>

#include "entscale/maxent.hpp"
#include "entscale/table.hpp"

using namespace entscale;

namespace {
const double kInf = std::numeric_limits<double>::infinity();

ScaleSpec pure_logs(int depth) {
    std::vector<LevelSpec> levels(depth, LevelSpec::pure_log());
    return ScaleSpec(levels);
}
} // namespace

TEST_CASE("synth_density basic families") {
    SUBCASE("exponential") {
        auto m = synth_density(ScaleSpec{}, {0, 1, 0}, ObservableReduction::identity(),
                               MeasurePolicy::uniform(), {0.0, kInf},
                               KernelWeight::small_gamma(1.0));
        CHECK(m.Z() == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(m.pdf(1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-9));
    }
    SUBCASE("gaussian kernel via centered square") {
        auto m = synth_density(ScaleSpec{}, {0, 1, 0}, ObservableReduction::centered_square(0.0),
                               MeasurePolicy::uniform(), {-kInf, kInf},
                               KernelWeight::small_gamma(1.0));
        CHECK(m.Z() == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-9));
        CHECK(m.Z() == doctest::Approx(1.7724539).epsilon(1e-7));
    }
    SUBCASE("level-2 log power diverges on (e, inf)") {
        CHECK_THROWS_AS(synth_density(pure_logs(2), {0, 1, 0}, ObservableReduction::identity(),
                                      MeasurePolicy::uniform(), {std::exp(1.0), kInf},
                                      KernelWeight::small_gamma(2.0)),
                        NotNormalizableError);
    }
}

TEST_CASE("normalize on raw kernels") {
    SUBCASE("gamma kernel") {
        auto m = DensityModel::from_log_density({0.0, kInf},
                                                [](double y) { return 2 * std::log(y) - y; });
        double Z = normalize(m);
        CHECK(Z == doctest::Approx(2.0).epsilon(1e-9));
    }
    SUBCASE("uniform kernel") {
        auto m = DensityModel::from_log_density({0.0, 1.0}, [](double) { return 0.0; });
        CHECK(normalize(m) == doctest::Approx(1.0).epsilon(1e-10));
    }
    SUBCASE("stretched exponential kernel") {
        auto m = DensityModel::from_log_density({0.0, kInf},
                                                [](double y) { return -std::sqrt(y); });
        CHECK(normalize(m) == doctest::Approx(2.0).epsilon(1e-9));
    }
}

TEST_CASE("solve_multiplier") {
    SUBCASE("exponential mean 2 gives gamma one half") {
        MultiplierReport rep;
        auto m = solve_multiplier(ScaleSpec{}, ObservableReduction::identity(),
                                  MeasurePolicy::uniform(), {0.0, kInf}, {2.0}, 0.0, &rep);
        CHECK(rep.lambda == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(m.info().gamma.value() == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(mean_T(m) == doctest::Approx(2.0).epsilon(1e-8));
    }
    SUBCASE("gaussian second moment 1/2 gives gamma 1") {
        MultiplierReport rep;
        auto m = solve_multiplier(ScaleSpec{}, ObservableReduction::centered_square(0.0),
                                  MeasurePolicy::uniform(), {-kInf, kInf}, {0.5}, 0.0, &rep);
        CHECK(rep.lambda == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(mean_T(m) == doctest::Approx(0.5).epsilon(1e-8));
    }
    SUBCASE("pareto with E[log y] = 1 gives gamma 2") {
        MultiplierReport rep;
        auto m = solve_multiplier(pure_logs(1), ObservableReduction::identity(),
                                  MeasurePolicy::uniform(), {1.0, kInf}, {1.0}, 0.0, &rep);
        CHECK(rep.lambda == doctest::Approx(2.0).epsilon(1e-8));
        // oracle: integrate (gamma-1) y^{-gamma} log y directly
        LogDensityFn f{[](double y) { return -2.0 * std::log(y); }, {}};
        QuadratureOptions opt;
        auto num = integrate_density(f, {1.0, kInf}, {}, [](double y) { return std::log(y); }, opt);
        auto den = integrate_density(f, {1.0, kInf}, {}, {}, opt);
        CHECK(num.value / den.value == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("unattainable target") {
        CHECK_THROWS_AS(solve_multiplier(ScaleSpec{}, ObservableReduction::identity(),
                                         MeasurePolicy::uniform(), {0.0, kInf}, {-3.0}, 0.0),
                        UnattainableTargetError);
    }
}

TEST_CASE("multiplier monotonicity: E[T] decreases in lambda") {
    ScaleParams p{0, 1, 0};
    double prev = kInf;
    for (double lam : {0.25, 0.5, 1.0, 2.0, 4.0}) {
        auto m = synth_density(pure_logs(1), p, ObservableReduction::identity(),
                               MeasurePolicy::uniform(), {1.0, kInf},
                               KernelWeight::from_multiplier(1.0 + lam, p));
        double e = mean_T(m);
        CHECK(e < prev);
        prev = e;
    }
}

TEST_CASE("relative entropy") {
    SUBCASE("Exp(1) has differential entropy 1") {
        auto m = synth_density(ScaleSpec{}, {0, 1, 0}, ObservableReduction::identity(),
                               MeasurePolicy::uniform(), {0.0, kInf},
                               KernelWeight::small_gamma(1.0));
        CHECK(relative_entropy(m) == doctest::Approx(1.0).epsilon(1e-8));
    }
    SUBCASE("Uniform(0,1) has entropy 0") {
        auto m = DensityModel::from_log_density({0.0, 1.0}, [](double) { return 0.0; });
        normalize(m);
        CHECK(relative_entropy(m) == doctest::Approx(0.0).epsilon(1e-10));
    }
    SUBCASE("gaussian kernel e^{-y^2}") {
        auto m = synth_density(ScaleSpec{}, {0, 1, 0}, ObservableReduction::centered_square(0.0),
                               MeasurePolicy::uniform(), {-kInf, kInf},
                               KernelWeight::small_gamma(1.0));
        CHECK(relative_entropy(m) == doctest::Approx(0.5 * (1.0 + std::log(M_PI))).epsilon(1e-8));
        CHECK(relative_entropy(m) == doctest::Approx(1.0723649).epsilon(1e-6));
    }
}

TEST_CASE("solution invariance") {
    SUBCASE("log scale with G = f^2 and a pareto target") {
        double d = solution_invariance(pure_logs(1), {0, 1, 0},
                                       [](double f) { return f * f; },
                                       ObservableReduction::identity(), MeasurePolicy::uniform(),
                                       {1.0, kInf}, {1.0});
        CHECK(d < 1e-10);
    }
    SUBCASE("linear scale with G = f + 5 and an exponential target") {
        double d = solution_invariance(ScaleSpec{}, {0, 1, 0},
                                       [](double f) { return f + 5.0; },
                                       ObservableReduction::identity(), MeasurePolicy::uniform(),
                                       {0.0, kInf}, {2.0});
        CHECK(d < 1e-10);
    }
    SUBCASE("identity G is exactly invariant") {
        double d = solution_invariance(ScaleSpec{}, {0, 1, 0}, [](double f) { return f; },
                                       ObservableReduction::identity(), MeasurePolicy::uniform(),
                                       {0.0, kInf}, {2.0});
        CHECK(d == 0.0);
    }
    SUBCASE("non-invariant G is rejected") {
        CHECK_THROWS_AS(solution_invariance(pure_logs(1), {0, 1, 0},
                                            [](double f) { return f + 1.0; },
                                            ObservableReduction::identity(),
                                            MeasurePolicy::uniform(), {1.0, kInf}, {1.0}),
                        DomainError);
    }
}

TEST_CASE("change of variable") {
    // standard normal through y -> e^y becomes log-normal
    auto normal = synth_density(ScaleSpec{}, {0, 1, 0}, ObservableReduction::centered_square(0.0),
                                MeasurePolicy::uniform(), {-kInf, kInf},
                                KernelWeight::small_gamma(0.5));
    CHECK(normal.Z() == doctest::Approx(std::sqrt(2 * M_PI)).epsilon(1e-9));
    auto logn = change_of_variable(
        normal, [](double y) { return std::exp(y); }, [](double z) { return std::log(z); },
        [](double y) { return std::exp(y); });
    CHECK(logn.support().lo == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(logn.pdf(1.0) == doctest::Approx(1.0 / std::sqrt(2 * M_PI)).epsilon(1e-9));
    CHECK(logn.pdf(1.0) == doctest::Approx(0.3989423).epsilon(1e-6));

    SUBCASE("identity change leaves the model untouched") {
        auto same = change_of_variable(
            normal, [](double y) { return y; }, [](double z) { return z; },
            [](double) { return 1.0; });
        for (double y : {-2.0, -0.5, 0.0, 1.0, 2.5})
            CHECK(same.pdf(y) == doctest::Approx(normal.pdf(y)).epsilon(1e-12));
    }
    SUBCASE("round trip") {
        auto back = change_of_variable(
            logn, [](double z) { return std::log(z); }, [](double y) { return std::exp(y); },
            [](double z) { return 1.0 / z; });
        for (double y : {-2.0, -0.5, 0.0, 1.0, 2.5})
            CHECK(std::abs(back.pdf(y) - normal.pdf(y)) < 1e-10);
    }
    SUBCASE("non-monotone maps are rejected") {
        CHECK_THROWS_AS(change_of_variable(
                            normal, [](double y) { return y * y; },
                            [](double z) { return std::sqrt(z); }, [](double y) { return 2 * y; }),
                        DomainError);
    }
}

TEST_CASE("scale reading: log-linear synthesis is the gamma-type density") {
    // w = c f + log f with beta -> 0 and gamma: p ∝ y^{-gamma} e^{-c gamma y}
    double c = 2.0, gamma = 0.5;
    auto m = synth_density(ScaleSpec(std::vector<LevelSpec>{LevelSpec::log_linear(c)}), {0, 1, 0},
                           ObservableReduction::identity(), MeasurePolicy::uniform(), {0.0, kInf},
                           KernelWeight::small_gamma(gamma));
    // closed form: rate c*gamma = 1, exponent -0.5, Z = Gamma(0.5) / 1^{0.5}
    double Zc = std::tgamma(0.5);
    for (double y : {0.05, 0.3, 1.0, 2.0, 5.0, 9.0}) {
        double closed = std::pow(y, -gamma) * std::exp(-c * gamma * y) / Zc;
        CHECK(std::abs(m.pdf(y) - closed) < 1e-8);
    }
}

TEST_CASE("hierarchy limit chain: beta -> 0 of a level equals beta = 1 of the next") {
    // level 0 with beta = 1e-6, Lambda = gamma/beta vs level 1 with beta = 1, Lambda = gamma
    double gamma = 1.0;
    SUBCASE("levels 0 -> 1 on (0, inf)") {
        auto low = synth_density(pure_logs(0), {0, 1, 1e-6}, ObservableReduction::identity(),
                                 MeasurePolicy::uniform(), {0.0, kInf},
                                 KernelWeight::big_lambda(gamma / 1e-6));
        auto next = synth_density(pure_logs(1), {0, 1, 1.0}, ObservableReduction::identity(),
                                  MeasurePolicy::uniform(), {0.0, kInf},
                                  KernelWeight::big_lambda(gamma));
        double sup = 0.0;
        for (int i = 1; i < 400; ++i) {
            double y = i * 0.05;
            sup = std::max(sup, std::abs(low.pdf(y) - next.pdf(y)));
        }
        CHECK(sup < 1e-4);
    }
    SUBCASE("levels 1 -> 2 on (1, inf)") {
        double g2 = 2.0;
        auto low = synth_density(pure_logs(1), {0, 1, 1e-6}, ObservableReduction::identity(),
                                 MeasurePolicy::uniform(), {1.0, kInf},
                                 KernelWeight::big_lambda(g2 / 1e-6));
        auto next = synth_density(pure_logs(2), {0, 1, 1.0}, ObservableReduction::identity(),
                                  MeasurePolicy::uniform(), {1.0, kInf},
                                  KernelWeight::big_lambda(g2));
        double sup = 0.0;
        for (int i = 1; i < 400; ++i) {
            double y = 1.0 + i * 0.05;
            sup = std::max(sup, std::abs(low.pdf(y) - next.pdf(y)));
        }
        CHECK(sup < 1e-4);
    }
}

TEST_CASE("cdf table and quantiles") {
    auto m = synth_density(ScaleSpec{}, {0, 1, 0}, ObservableReduction::identity(),
                           MeasurePolicy::uniform(), {0.0, kInf}, KernelWeight::small_gamma(1.0));
    CdfTable table(m);
    CHECK(table.cdf(1.0) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-4));
    CHECK(table.quantile(0.5) == doctest::Approx(std::log(2.0)).epsilon(1e-4));
    auto grid = quantile_grid(table, 512);
    CHECK(grid.size() == 512);
    CHECK(grid.front() < grid.back());
}
