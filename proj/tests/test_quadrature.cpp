#include <doctest.h>

#include <cmath>

#include "entscale/quadrature.hpp"

using namespace entscale;

namespace {
const double kInf = std::numeric_limits<double>::infinity();

double total(const DensityIntegral& r) { return std::exp(r.shift) * r.value; }
} // namespace

TEST_CASE("adaptive rule on finite intervals") {
    QuadratureOptions opt;
    auto r = integrate_adaptive([](double x) { return std::sin(x); }, 0.0, M_PI, {}, opt);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));

    // kinked integrand with a seed at the kink
    double seeds[] = {1.0};
    auto k = integrate_adaptive([](double x) { return std::abs(x - 1.0); }, 0.0, 3.0, seeds, opt);
    CHECK(k.value == doctest::Approx(0.5 + 2.0).epsilon(1e-12));
}

TEST_CASE("density integrals with known values") {
    QuadratureOptions opt;

    SUBCASE("gamma kernel on (0, inf)") {
        LogDensityFn f{[](double y) { return 2.0 * std::log(y) - y; }, {}};
        auto r = integrate_density(f, {0.0, kInf}, {}, {}, opt);
        CHECK(total(r) == doctest::Approx(2.0).epsilon(1e-9));
    }
    SUBCASE("uniform kernel on (0,1)") {
        LogDensityFn f{[](double) { return 0.0; }, {}};
        auto r = integrate_density(f, {0.0, 1.0}, {}, {}, opt);
        CHECK(total(r) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("stretched-exponential kernel integrates to 2 by the u = sqrt(y) oracle") {
        LogDensityFn f{[](double y) { return -std::sqrt(y); }, {}};
        auto r = integrate_density(f, {0.0, kInf}, {}, {}, opt);
        CHECK(total(r) == doctest::Approx(2.0).epsilon(1e-9));
    }
    SUBCASE("gaussian kernel on the whole line") {
        LogDensityFn f{[](double y) { return -y * y; }, {}};
        auto r = integrate_density(f, {-kInf, kInf}, {}, {}, opt);
        CHECK(total(r) == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-10));
    }
    SUBCASE("arcsine kernel with integrable endpoint singularities") {
        LogDensityFn f{[](double y) { return -0.5 * std::log(y) - 0.5 * std::log1p(-y); }, {}};
        auto r = integrate_density(f, {0.0, 1.0}, {}, {}, opt);
        CHECK(total(r) == doctest::Approx(M_PI).epsilon(1e-9));
    }
    SUBCASE("log-power tail via the log-coordinate path") {
        // y^{-1} (log y)^{-3} on (e, inf) integrates to 1/2
        LogDensityFn f{[](double y) { return -std::log(y) - 3.0 * std::log(std::log(y)); },
                       [](double u) { return -u - 3.0 * std::log(u); }};
        auto r = integrate_density(f, {std::exp(1.0), kInf}, {}, {}, opt);
        CHECK(total(r) == doctest::Approx(0.5).epsilon(1e-9));
    }
    SUBCASE("weight integrand") {
        // E-like integral: ∫ e^{-y} * y dy = 1
        LogDensityFn f{[](double y) { return -y; }, {}};
        auto r = integrate_density(f, {0.0, kInf}, {}, [](double y) { return y; }, opt);
        CHECK(total(r) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("divergent kernels are detected") {
    QuadratureOptions opt;

    SUBCASE("pareto exponent 1/2") {
        LogDensityFn f{[](double y) { return -0.5 * std::log(y); }, {}};
        CHECK_THROWS_AS(integrate_density(f, {1.0, kInf}, {}, {}, opt), NotNormalizableError);
    }
    SUBCASE("pareto exponent exactly 1") {
        LogDensityFn f{[](double y) { return -std::log(y); },
                       [](double u) { return -u; }};
        CHECK_THROWS_AS(integrate_density(f, {1.0, kInf}, {}, {}, opt), NotNormalizableError);
    }
    SUBCASE("squared log power on (e, inf)") {
        LogDensityFn f{[](double y) { return -2.0 * std::log(std::log(y)); },
                       [](double u) { return -2.0 * std::log(u); }};
        CHECK_THROWS_AS(integrate_density(f, {std::exp(1.0), kInf}, {}, {}, opt),
                        NotNormalizableError);
    }
    SUBCASE("non-integrable endpoint") {
        LogDensityFn f{[](double y) { return -1.5 * std::log(y); }, {}};
        CHECK_THROWS_AS(integrate_density(f, {0.0, 1.0}, {}, {}, opt), NotNormalizableError);
    }
    SUBCASE("growing kernel") {
        LogDensityFn f{[](double y) { return 0.5 * y; }, {}};
        CHECK_THROWS_AS(integrate_density(f, {0.0, kInf}, {}, {}, opt), NotNormalizableError);
    }
}
