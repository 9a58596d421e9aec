#include "selfnorm/rates.hpp"

#include <cmath>
#include <string>

#include "selfnorm/error.hpp"

namespace selfnorm {
namespace {

// Below this magnitude the direct formulas lose digits to cancellation.
constexpr double kSeriesCutoff = 1e-4;

void require(bool ok, const char* what, double value) {
  if (!ok || std::isnan(value)) {
    throw DomainError(std::string(what) + " (got " + std::to_string(value) + ")");
  }
}

}  // namespace

double h_rate(double x) {
  require(x > -1.0, "h_rate: requires x > -1", x);
  if (std::abs(x) < kSeriesCutoff) {
    const double x2 = x * x;
    return x2 * (0.5 - x / 3.0 + x2 / 4.0);
  }
  return x - std::log1p(x);
}

double g_rate(double x) {
  require(x > -1.0, "g_rate: requires x > -1", x);
  if (std::abs(x) < kSeriesCutoff) {
    const double x2 = x * x;
    return x2 * (0.5 - x / 6.0 + x2 / 12.0);
  }
  return (1.0 + x) * std::log1p(x) - x;
}

double psi(double lambda) {
  require(lambda >= 0.0 && lambda < 1.0, "psi: requires lambda in [0,1)", lambda);
  if (lambda < kSeriesCutoff) {
    const double l2 = lambda * lambda;
    return -l2 * (0.5 + lambda / 3.0 + l2 / 4.0);
  }
  return lambda + std::log1p(-lambda);
}

double phi(double lambda) {
  require(lambda >= 0.0, "phi: requires lambda >= 0", lambda);
  if (lambda < kSeriesCutoff) {
    const double l2 = lambda * lambda;
    return l2 * (0.5 + lambda / 6.0 + l2 / 24.0);
  }
  return std::expm1(lambda) - lambda;
}

double bern_rate(double x) {
  require(x >= 0.0, "bern_rate: requires x >= 0", x);
  return x * x / (2.0 * (1.0 + x));
}

double benn_rate(double x) {
  require(x >= 0.0, "benn_rate: requires x >= 0", x);
  return x * x / (2.0 * (1.0 + x / 3.0));
}

double mid_rate(double x) {
  require(x >= 0.0, "mid_rate: requires x >= 0", x);
  return x * x / (1.0 + x / 3.0 + std::sqrt(1.0 + 2.0 * x / 3.0));
}

double evaluate_rate(RateKind kind, double arg) {
  switch (kind) {
    case RateKind::kHRate: return h_rate(arg);
    case RateKind::kGRate: return g_rate(arg);
    case RateKind::kPsi: return psi(arg);
    case RateKind::kPhi: return phi(arg);
    case RateKind::kBernRate: return bern_rate(arg);
    case RateKind::kBennRate: return benn_rate(arg);
    case RateKind::kMidRate: return mid_rate(arg);
  }
  throw DomainError("evaluate_rate: unknown rate kind");
}

double lambda_star_lower(double x) {
  require(x > 0.0, "lambda_star_lower: requires x > 0", x);
  return x / (1.0 + x);
}

double lambda_star_upper(double x) {
  require(x > 0.0, "lambda_star_upper: requires x > 0", x);
  return std::log1p(x);
}

double peel_a(double x) {
  require(x > 0.0, "peel_a: requires x > 0", x);
  return 1.0 + 1.0 / (1.0 + x);
}

}  // namespace selfnorm
