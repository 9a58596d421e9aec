#include "selfnorm/bounds.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "selfnorm/error.hpp"
#include "selfnorm/rates.hpp"

namespace selfnorm {
namespace {

struct FormulaName {
  FormulaId id;
  std::string_view name;
  bool expectation;
};

constexpr std::array<FormulaName, 25> kFormulaNames{{
    {FormulaId::kBennettVarianceForm, "bennett_variance_form", false},
    {FormulaId::kBennettSumForm, "bennett_sum_form", false},
    {FormulaId::kDlpFixedLb, "dlp_fixed_lb", false},
    {FormulaId::kSelfnormFixedLbExact, "selfnorm_fixed_lb_exact", false},
    {FormulaId::kSelfnormFixedLbRelaxed, "selfnorm_fixed_lb_relaxed", false},
    {FormulaId::kNormalizedLowerFixedLbExact, "normalized_lower_fixed_lb_exact", false},
    {FormulaId::kNormalizedLowerFixedLbRelaxed, "normalized_lower_fixed_lb_relaxed", false},
    {FormulaId::kPeelingSelfnorm, "peeling_selfnorm", false},
    {FormulaId::kPeelingNormalized, "peeling_normalized", false},
    {FormulaId::kIidSelfnorm, "iid_selfnorm_bound", false},
    {FormulaId::kIidSelfnormAuto, "iid_selfnorm_bound_auto", false},
    {FormulaId::kTstatPeeling, "tstat_peeling_bound", false},
    {FormulaId::kArFixedLb, "ar_fixed_lb", false},
    {FormulaId::kArGaussianBaseline, "ar_gaussian_baseline", false},
    {FormulaId::kArPeeling, "ar_peeling", false},
    {FormulaId::kChenLowerTail, "chen_lower_tail", false},
    {FormulaId::kSelfnormExpectExact, "selfnorm_expect_exact", true},
    {FormulaId::kSelfnormExpectRelaxed, "selfnorm_expect_relaxed", true},
    {FormulaId::kSelfnormExpectUnconditional, "selfnorm_expect_unconditional", true},
    {FormulaId::kNormalizedLowerExpectExact, "normalized_lower_expect_exact", true},
    {FormulaId::kNormalizedLowerExpectRelaxed, "normalized_lower_expect_relaxed", true},
    {FormulaId::kNormalizedLowerExpectUnconditional, "normalized_lower_expect_unconditional", true},
    {FormulaId::kSymmetricGaussianExpect, "symmetric_gaussian_expect", true},
    {FormulaId::kHeavyLeftGaussianExpect, "heavy_left_gaussian_expect", true},
    {FormulaId::kArExpect, "ar_expect", true},
}};

const double kSqrtE = std::exp(0.5);

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

bool finite(double v) { return std::isfinite(v); }

void check_x(const char* fn, double x) {
  require(finite(x) && x >= 0.0, std::string(fn) + ": deviation x must be >= 0");
}

void check_positive(const char* fn, const char* name, double v) {
  require(finite(v) && v > 0.0, std::string(fn) + ": " + name + " must be > 0");
}

void check_window(const char* fn, double b, double M) {
  check_positive(fn, "b", b);
  require(finite(M) && M >= 1.0, std::string(fn) + ": M must be >= 1");
}

void check_theta_abs(const char* fn, double theta_abs) {
  require(finite(theta_abs) && theta_abs >= 0.0 && theta_abs < 1.0,
          std::string(fn) + ": theta_abs must lie in [0,1)");
}

void check_moment_p(const char* fn, double p) {
  require(finite(p) && p > 1.0 && p <= 2.0, std::string(fn) + ": moment_p must lie in (1,2]");
}

// Peeling prefactor sqrt(e) (1 + 2 slope ln M).
double peel_prefactor(double slope, double M) { return kSqrtE * (1.0 + 2.0 * slope * std::log(M)); }

}  // namespace

std::string_view to_string(FormulaId id) {
  for (const auto& f : kFormulaNames) {
    if (f.id == id) return f.name;
  }
  return "unknown";
}

std::optional<FormulaId> formula_from_string(std::string_view name) {
  for (const auto& f : kFormulaNames) {
    if (f.name == name) return f.id;
  }
  return std::nullopt;
}

bool is_expectation_formula(FormulaId id) {
  for (const auto& f : kFormulaNames) {
    if (f.id == id) return f.expectation;
  }
  return false;
}

const std::vector<FormulaId>& all_formulas() {
  static const std::vector<FormulaId> ids = [] {
    std::vector<FormulaId> out;
    for (const auto& f : kFormulaNames) out.push_back(f.id);
    return out;
  }();
  return ids;
}

BoundValue BoundValue::make(FormulaId formula, double raw, ParamList params) {
  if (!(raw >= 0.0) || std::isnan(raw)) {
    throw DomainError(std::string(to_string(formula)) + ": bound evaluated to an invalid value");
  }
  BoundValue v;
  v.raw = raw;
  v.clamped = std::min(raw, 1.0);
  v.formula = formula;
  v.params = std::move(params);
  return v;
}

BoundValue BoundValue::scaled(double factor) const { return make(formula, raw * factor, params); }

BoundValue bennett_variance_form(double x, double v2) {
  check_x("bennett_variance_form", x);
  check_positive("bennett_variance_form", "v2", v2);
  return BoundValue::make(FormulaId::kBennettVarianceForm,
                          std::exp(-x * x * v2 / (2.0 * (1.0 + x / 3.0))),
                          {{"x", x}, {"v2", v2}});
}

BoundValue bennett_sum_form(double x, double v2) {
  check_x("bennett_sum_form", x);
  check_positive("bennett_sum_form", "v2", v2);
  return BoundValue::make(FormulaId::kBennettSumForm, std::exp(-x * x / (2.0 * (v2 + x / 3.0))),
                          {{"x", x}, {"v2", v2}});
}

BoundValue dlp_fixed_lb(double x, double y) {
  check_x("dlp_fixed_lb", x);
  check_positive("dlp_fixed_lb", "y", y);
  return BoundValue::make(FormulaId::kDlpFixedLb, std::exp(-0.5 * x * x * y), {{"x", x}, {"y", y}});
}

BoundPair selfnorm_fixed_lb(double x, double y) {
  check_x("selfnorm_fixed_lb", x);
  check_positive("selfnorm_fixed_lb", "y", y);
  ParamList params{{"x", x}, {"y", y}};
  return {BoundValue::make(FormulaId::kSelfnormFixedLbExact, std::exp(-h_rate(x) * y), params),
          BoundValue::make(FormulaId::kSelfnormFixedLbRelaxed, std::exp(-bern_rate(x) * y), params)};
}

BoundPair normalized_lower_fixed_lb(double x, double y) {
  check_x("normalized_lower_fixed_lb", x);
  check_positive("normalized_lower_fixed_lb", "y", y);
  ParamList params{{"x", x}, {"y", y}};
  return {BoundValue::make(FormulaId::kNormalizedLowerFixedLbExact, std::exp(-g_rate(x) * y), params),
          BoundValue::make(FormulaId::kNormalizedLowerFixedLbRelaxed, std::exp(-benn_rate(x) * y),
                           params)};
}

BoundValue peeling_selfnorm(double x, double b, double M) {
  check_x("peeling_selfnorm", x);
  check_window("peeling_selfnorm", b, M);
  const double raw = peel_prefactor(1.0 + x, M) * std::exp(-x * x / (2.0 * (1.0 + x / b)));
  return BoundValue::make(FormulaId::kPeelingSelfnorm, raw, {{"x", x}, {"b", b}, {"M", M}});
}

BoundValue peeling_normalized(double x, double b, double M) {
  check_x("peeling_normalized", x);
  check_window("peeling_normalized", b, M);
  const double raw = peel_prefactor(1.0 + x, M) * std::exp(-x * x / (2.0 * (1.0 + x / (3.0 * b))));
  return BoundValue::make(FormulaId::kPeelingNormalized, raw, {{"x", x}, {"b", b}, {"M", M}});
}

BoundValue iid_selfnorm_bound(double x, double y, long n, double sigma2, double m2p,
                              double moment_p) {
  constexpr const char* fn = "iid_selfnorm_bound";
  check_x(fn, x);
  check_positive(fn, "sigma2", sigma2);
  check_positive(fn, "m2p", m2p);
  check_moment_p(fn, moment_p);
  require(n >= 1, std::string(fn) + ": n must be >= 1");
  require(finite(y) && y > 0.0 && y < sigma2, std::string(fn) + ": y must lie in (0, sigma2)");
  const double nd = static_cast<double>(n);
  const double q = 1.0 / (moment_p - 1.0);  // 1/(p-1)
  const double first = std::exp(-x * x * (sigma2 - y) * nd / (2.0 * (1.0 + x)));
  const double second_rate =
      (moment_p - 1.0) * std::exp(moment_p * q * std::log(y) - q * std::log(m2p)) * nd / 4.0;
  return BoundValue::make(FormulaId::kIidSelfnorm, first + std::exp(-second_rate),
                          {{"x", x},
                           {"y", y},
                           {"n", nd},
                           {"sigma2", sigma2},
                           {"m2p", m2p},
                           {"moment_p", moment_p}});
}

BoundValue iid_selfnorm_bound_auto(double x, long n, double sigma2, double m2p, double moment_p) {
  constexpr const char* fn = "iid_selfnorm_bound_auto";
  require(finite(x) && x > 0.0 && x < 1.0, std::string(fn) + ": x must lie in (0,1)");
  check_positive(fn, "sigma2", sigma2);
  check_positive(fn, "m2p", m2p);
  check_moment_p(fn, moment_p);
  require(n >= 1, std::string(fn) + ": n must be >= 1");
  const double nd = static_cast<double>(n);
  const double t = std::pow(x, (moment_p - 1.0) / moment_p);
  const double first = std::exp(-sigma2 * x * x * nd / (2.0 * (1.0 + 2.0 * t)));
  // (m2p / sigma^{2p})^{1/(p-1)}
  const double normalized_moment =
      std::exp((std::log(m2p) - moment_p * std::log(sigma2)) / (moment_p - 1.0));
  const double second = std::exp(-(moment_p - 1.0) * x * nd / (4.0 * normalized_moment));
  return BoundValue::make(
      FormulaId::kIidSelfnormAuto, first + second,
      {{"x", x}, {"n", nd}, {"sigma2", sigma2}, {"m2p", m2p}, {"moment_p", moment_p}});
}

double tstat_transform(double x, long n) {
  require(finite(x) && x >= 0.0, "tstat_transform: x must be >= 0");
  require(n >= 2, "tstat_transform: n must be >= 2");
  const double nd = static_cast<double>(n);
  return x * std::sqrt(nd / (nd + x * x - 1.0));
}

BoundValue tstat_peeling_bound(double x, long n, double b, double M) {
  check_x("tstat_peeling_bound", x);
  check_window("tstat_peeling_bound", b, M);
  const double u = tstat_transform(x, n);
  // The peeling slope is u itself rather than 1+u.
  const double raw = peel_prefactor(u, M) * std::exp(-u * u / (2.0 * (1.0 + u / b)));
  return BoundValue::make(FormulaId::kTstatPeeling, raw,
                          {{"x", x}, {"n", static_cast<double>(n)}, {"b", b}, {"M", M}});
}

BoundValue ar_fixed_lb(double x, double y, double sigma2, double C, double theta_abs) {
  constexpr const char* fn = "ar_fixed_lb";
  check_x(fn, x);
  check_positive(fn, "y", y);
  check_positive(fn, "sigma2", sigma2);
  check_positive(fn, "C", C);
  check_theta_abs(fn, theta_abs);
  const double denom = 2.0 * (sigma2 + x * C * C / (3.0 * (1.0 - theta_abs)));
  return BoundValue::make(
      FormulaId::kArFixedLb, 2.0 * std::exp(-x * x * y / denom),
      {{"x", x}, {"y", y}, {"sigma2", sigma2}, {"C", C}, {"theta_abs", theta_abs}});
}

BoundValue ar_gaussian_baseline(double x, double y) {
  check_x("ar_gaussian_baseline", x);
  check_positive("ar_gaussian_baseline", "y", y);
  return BoundValue::make(FormulaId::kArGaussianBaseline, 2.0 * std::exp(-0.5 * x * x * y),
                          {{"x", x}, {"y", y}});
}

BoundValue ar_peeling(double x, double b, double M, double sigma2, double C, double theta_abs) {
  constexpr const char* fn = "ar_peeling";
  check_x(fn, x);
  check_window(fn, b, M);
  check_positive(fn, "sigma2", sigma2);
  check_positive(fn, "C", C);
  check_theta_abs(fn, theta_abs);
  const double sigma = std::sqrt(sigma2);
  const double denom = 2.0 * (sigma2 + x * C * C / (3.0 * b * (1.0 - theta_abs)));
  const double raw = 2.0 * peel_prefactor(1.0 + x / sigma, M) * std::exp(-x * x / denom);
  return BoundValue::make(FormulaId::kArPeeling, raw,
                          {{"x", x},
                           {"b", b},
                           {"M", M},
                           {"sigma2", sigma2},
                           {"C", C},
                           {"theta_abs", theta_abs}});
}

BoundValue chen_lower_tail(double y, double sum_pmoment, double moment_p) {
  constexpr const char* fn = "chen_lower_tail";
  require(finite(y) && y >= 0.0, std::string(fn) + ": y must be >= 0");
  check_positive(fn, "sum_pmoment", sum_pmoment);
  check_moment_p(fn, moment_p);
  double rate = 0.0;
  if (y > 0.0) {
    const double q = 1.0 / (moment_p - 1.0);
    rate = (moment_p - 1.0) * std::exp(moment_p * q * std::log(y) - q * std::log(sum_pmoment)) / 4.0;
  }
  return BoundValue::make(FormulaId::kChenLowerTail, std::exp(-rate),
                          {{"y", y}, {"sum_pmoment", sum_pmoment}, {"moment_p", moment_p}});
}

double rescale_to_unit_lb(double a, double x) {
  require(finite(a) && a > 0.0, "rescale_to_unit_lb: lower-bound magnitude a must be > 0");
  require(finite(x), "rescale_to_unit_lb: x must be finite");
  return a * x;
}

}  // namespace selfnorm
