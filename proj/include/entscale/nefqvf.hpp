#pragma once

// Natural exponential families with quadratic variance functions: roots and
// classification, entropy / natural-parameter / cumulant-generating-function
// structure, the six canonical families, and large-deviation comparisons.

#include <complex>
#include <span>
#include <vector>

#include "entscale/errors.hpp"
#include "entscale/scale.hpp"

namespace entscale::nef {

struct VarianceFunction {
    double v0 = 0.0;
    double v1 = 0.0;
    double v2 = 0.0;

    double operator()(double mu) const { return v0 + v1 * mu + v2 * mu * mu; }
    double discriminant() const { return v1 * v1 - 4.0 * v0 * v2; }
};

// Roots of V; a conjugate pair when the discriminant is negative, real with
// mu1 <= mu2 otherwise.
struct RootPair {
    std::complex<double> mu1, mu2;
};

RootPair roots(const VarianceFunction& vf); // DegenerateError when v2 == 0

struct AffineRecord {
    double shift = 0.0; // x' = (x - shift) / scale
    double scale = 1.0;
};

struct Canonicalized {
    VarianceFunction vf;
    double mu0 = 0.0;
    AffineRecord applied;
};

// Applies the offset/scale freedom: v1 = 0 for complex or double roots, one
// root at the origin with v1 = 1 for distinct real roots.
Canonicalized canonicalize(const VarianceFunction& vf, double mu0);

struct NEFFamily {
    enum class Tag { Gaussian, Gamma, HyperbolicCosecant, Binomial, NegativeBinomial, Poisson };

    Tag tag = Tag::Gaussian;
    double mu0 = 0.0;         // reference mean
    double v0 = 1.0;          // Gaussian variance
    double q = 1.0;           // Gamma shape (mu0 = q)
    double lambda_csch = 1.0; // the csch scale sqrt(v0/v2)
    double v2 = 1.0;          // csch curvature coefficient
    int N = 1;                // Binomial / NegativeBinomial count
    double p = 0.5;           // Binomial / NegativeBinomial success probability

    static NEFFamily gaussian(double v0, double mu0);
    static NEFFamily gamma(double q);
    static NEFFamily hyperbolic_cosecant(double lambda, double v2 = 1.0, double mu0 = 0.0);
    static NEFFamily binomial(int N, double p);
    static NEFFamily negative_binomial(int N, double p);
    static NEFFamily poisson(double mu0);
};

const char* family_tag_name(NEFFamily::Tag tag);

// Accepts only canonical positions (see canonicalize); otherwise raises
// NotCanonicalError naming the normalization needed.
NEFFamily classify(const VarianceFunction& vf, double mu0);

bool is_discrete(const NEFFamily& family);
Interval mean_range(const NEFFamily& family);
Interval theta_range(const NEFFamily& family);
double variance_at(const NEFFamily& family, double mu);

// Relative entropy about mu0, S(mu0) = 0; complex-root case via the real
// arctangent form.
double entropy_S(const NEFFamily& family, double mu);
// Natural parameter theta(mu) = -dS/dmu, theta(mu0) = 0.
double theta_of_mu(const NEFFamily& family, double mu);
double mu_of_theta(const NEFFamily& family, double theta);
// Cumulant-generating function, psi(0) = 0.
double psi_of_theta(const NEFFamily& family, double theta);
// Density/mass value of the theta = 0 member.
double family_pdf(const NEFFamily& family, double x);

// |log(integral or sum of p_{x|0} e^{theta x}) - psi(theta)|.
double verify_cgf(const NEFFamily& family, double theta);

struct LegendreResiduals {
    double dual1 = 0.0;     // max |d psi/d theta - mu(theta)|
    double dual2 = 0.0;     // max |d S/d mu + theta(mu)|
    double curvature = 0.0; // max |d2S/dmu2 * V(mu) + 1|
};

// Centered finite differences with h = 1e-5 over the theta grid.
LegendreResiduals check_legendre(const NEFFamily& family, std::span<const double> theta_grid);

struct LargeDeviationPoint {
    double x = 0.0;
    double logp = 0.0;
    double S = 0.0;
    double diff = 0.0; // logp - S
};

std::vector<LargeDeviationPoint> large_deviation_compare(const NEFFamily& family,
                                                         std::span<const double> x_grid);

} // namespace entscale::nef
