#pragma once

// Scalar rate functions and closed-form optimizers shared by every tail bound.

namespace selfnorm {

enum class RateKind { kHRate, kGRate, kPsi, kPhi, kBernRate, kBennRate, kMidRate };

/// x - log(1+x), for x > -1.
double h_rate(double x);
/// (1+x) log(1+x) - x, for x > -1.
double g_rate(double x);
/// lambda + log(1-lambda), for lambda in [0,1). Nonpositive.
double psi(double lambda);
/// e^lambda - 1 - lambda, for lambda >= 0.
double phi(double lambda);

/// x^2 / (2(1+x)); lower bound for h_rate.
double bern_rate(double x);
/// x^2 / (2(1+x/3)); lower bound for mid_rate.
double benn_rate(double x);
/// x^2 / (1 + x/3 + sqrt(1+2x/3)); sits between benn_rate and g_rate.
double mid_rate(double x);

double evaluate_rate(RateKind kind, double arg);

/// Minimizer over [0,1) of -(psi(l) + l x): x/(1+x).
double lambda_star_lower(double x);
/// Minimizer over [0,inf) of phi(l) - l x: log(1+x).
double lambda_star_upper(double x);
/// Geometric ratio of the peeling slices: 1 + 1/(1+x).
double peel_a(double x);

}  // namespace selfnorm
