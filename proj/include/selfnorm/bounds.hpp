#pragma once

// Closed-form tail bounds for normalized and self-normalized martingales.
//
// Every function validates its domain strictly and throws DomainError on a
// violation. The deviation level x may be 0, where every exponent vanishes and
// the clamped bound is 1.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace selfnorm {

enum class FormulaId {
  // closed forms
  kBennettVarianceForm,
  kBennettSumForm,
  kDlpFixedLb,
  kSelfnormFixedLbExact,
  kSelfnormFixedLbRelaxed,
  kNormalizedLowerFixedLbExact,
  kNormalizedLowerFixedLbRelaxed,
  kPeelingSelfnorm,
  kPeelingNormalized,
  kIidSelfnorm,
  kIidSelfnormAuto,
  kTstatPeeling,
  kArFixedLb,
  kArGaussianBaseline,
  kArPeeling,
  kChenLowerTail,
  // expectation-type bounds, estimated by Monte Carlo (see verify.hpp)
  kSelfnormExpectExact,
  kSelfnormExpectRelaxed,
  kSelfnormExpectUnconditional,
  kNormalizedLowerExpectExact,
  kNormalizedLowerExpectRelaxed,
  kNormalizedLowerExpectUnconditional,
  kSymmetricGaussianExpect,
  kHeavyLeftGaussianExpect,
  kArExpect,
};

std::string_view to_string(FormulaId id);
std::optional<FormulaId> formula_from_string(std::string_view name);
bool is_expectation_formula(FormulaId id);
const std::vector<FormulaId>& all_formulas();

using ParamList = std::vector<std::pair<std::string, double>>;

struct BoundValue {
  double raw = 1.0;      // formula value, may exceed 1
  double clamped = 1.0;  // min(raw, 1)
  FormulaId formula = FormulaId::kBennettSumForm;
  ParamList params;

  static BoundValue make(FormulaId formula, double raw, ParamList params);
  /// Same formula and parameters with raw scaled by `factor`.
  BoundValue scaled(double factor) const;
};

struct BoundPair {
  BoundValue exact;
  BoundValue relaxed;
};

/// exp{-x^2 v2 / (2(1+x/3))}: P(S_n >= x v2) for independent increments <= 1.
BoundValue bennett_variance_form(double x, double v2);
/// exp{-x^2 / (2(v2 + x/3))}: P(S_n >= x).
BoundValue bennett_sum_form(double x, double v2);
/// exp{-x^2 y / 2}: Gaussian-rate bound on P(S/[S] >= x, [S] >= y), symmetric increments.
BoundValue dlp_fixed_lb(double x, double y);

/// P(S/[S] >= x, [S] >= y) for increments >= -1: exact rate h, relaxed rate x^2/(2(1+x)).
BoundPair selfnorm_fixed_lb(double x, double y);
/// P(S/<S> <= -x, <S> >= y) for increments >= -1: exact rate g, relaxed x^2/(2(1+x/3)).
BoundPair normalized_lower_fixed_lb(double x, double y);

/// sqrt(e)(1 + 2(1+x) ln M) exp{-x^2/(2(1+x/b))}: window b <= sqrt([S]) <= bM.
BoundValue peeling_selfnorm(double x, double b, double M);
/// sqrt(e)(1 + 2(1+x) ln M) exp{-x^2/(2(1+x/(3b)))}: window on sqrt(<S>).
BoundValue peeling_normalized(double x, double b, double M);

/// Two-term bound on P(S/[S] >= x) for i.i.d. increments >= -1 with
/// sigma2 = E xi^2, m2p = E xi^{2p}, 1 < moment_p <= 2 and 0 < y < sigma2.
BoundValue iid_selfnorm_bound(double x, double y, long n, double sigma2, double m2p,
                              double moment_p);
/// iid_selfnorm_bound specialized at y = x^{(p-1)/p} sigma2, for x in (0,1).
BoundValue iid_selfnorm_bound_auto(double x, long n, double sigma2, double m2p, double moment_p);

/// x sqrt(n/(n + x^2 - 1)): the level of S/sqrt([S]) equivalent to {T_n >= x}.
double tstat_transform(double x, long n);
/// Window bound on P(T_n >= x, b <= sqrt([S]) <= bM).
BoundValue tstat_peeling_bound(double x, long n, double b, double M);

/// 2 exp{-x^2 y / (2(sigma2 + x C^2/(3(1-theta_abs))))}: P(|theta_hat - theta| >= x, energy >= y).
BoundValue ar_fixed_lb(double x, double y, double sigma2, double C, double theta_abs);
/// 2 exp{-x^2 y / 2}: the Gaussian-noise counterpart of ar_fixed_lb.
BoundValue ar_gaussian_baseline(double x, double y);
/// Window bound on P(|theta_hat - theta| sqrt(energy) >= x, b <= sqrt(energy) <= bM).
BoundValue ar_peeling(double x, double b, double M, double sigma2, double C, double theta_abs);

/// P(sum zeta <= sum E zeta - y) for independent nonnegative zeta_i with
/// sum_pmoment = sum E zeta_i^p, 1 < moment_p <= 2.
BoundValue chen_lower_tail(double y, double sum_pmoment, double moment_p);

/// Deviation level after rescaling increments bounded below by -a to be bounded
/// below by -1. With xi' = xi/a: S'/[S'] = a S/[S], [S'] = [S]/a^2 and
/// <S'> = <S>/a^2, so {S/[S] >= x} = {S'/[S'] >= a x}. Returns a x.
double rescale_to_unit_lb(double a, double x);

}  // namespace selfnorm
