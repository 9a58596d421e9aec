#include "selfnorm/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <ostream>
#include <thread>

#include <boost/math/special_functions/beta.hpp>
#include "json.hpp"

#include "selfnorm/error.hpp"
#include "selfnorm/rates.hpp"

namespace selfnorm {
namespace {

struct EventName {
  TailEventKind kind;
  std::string_view name;
};

constexpr std::array<EventName, 10> kEventNames{{
    {TailEventKind::kSelfNormUpper, "self_norm_upper"},
    {TailEventKind::kSelfNormUpperJoint, "self_norm_upper_joint"},
    {TailEventKind::kNormLower, "norm_lower"},
    {TailEventKind::kNormLowerJoint, "norm_lower_joint"},
    {TailEventKind::kSelfNormSqrtWindow, "self_norm_sqrt_window"},
    {TailEventKind::kNormSqrtWindow, "norm_sqrt_window"},
    {TailEventKind::kTstat, "tstat"},
    {TailEventKind::kArAbs, "ar_abs"},
    {TailEventKind::kArSqrtWindow, "ar_sqrt_window"},
    {TailEventKind::kChenLower, "chen_lower"},
}};

// Neumaier compensated sum, accumulated in index order.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

bool in_window(double root, double b, double M) { return b <= root && root <= b * M; }

double ar_rate(double x, double sigma2, double C, double theta_abs) {
  return x * x / (2.0 * (sigma2 + x * C * C / (3.0 * (1.0 - theta_abs))));
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

// ------------------------------------------------------------------ models

std::string model_id(const SimModel& model) {
  return std::visit([](const auto& m) { return m.id(); }, model);
}

std::size_t model_length(const SimModel& model) {
  return std::visit([](const auto& m) { return m.n; }, model);
}

// ------------------------------------------------------------------ events

std::string_view to_string(TailEventKind kind) {
  for (const auto& e : kEventNames) {
    if (e.kind == kind) return e.name;
  }
  return "unknown";
}

std::optional<TailEventKind> event_from_string(std::string_view name) {
  for (const auto& e : kEventNames) {
    if (e.name == name) return e.kind;
  }
  return std::nullopt;
}

bool TailEvent::occurs(const PathSummary& p) const {
  switch (kind) {
    case TailEventKind::kSelfNormUpper: return p.sq_var > 0.0 && p.sum >= x * p.sq_var;
    case TailEventKind::kSelfNormUpperJoint:
      return p.sq_var > 0.0 && p.sum >= x * p.sq_var && p.sq_var >= y;
    case TailEventKind::kNormLower: return p.cond_var > 0.0 && p.sum <= -x * p.cond_var;
    case TailEventKind::kNormLowerJoint:
      return p.cond_var > 0.0 && p.sum <= -x * p.cond_var && p.cond_var >= y;
    case TailEventKind::kSelfNormSqrtWindow: {
      const double root = std::sqrt(p.sq_var);
      return root > 0.0 && p.sum >= x * root && in_window(root, b, M);
    }
    case TailEventKind::kNormSqrtWindow: {
      const double root = std::sqrt(p.cond_var);
      return root > 0.0 && -p.sum >= x * root && in_window(root, b, M);
    }
    case TailEventKind::kTstat:
      return p.t_stat >= x && in_window(std::sqrt(p.sq_var), b, M);
    case TailEventKind::kArAbs:
      return std::abs(p.theta_hat - p.theta_true) >= x && p.energy >= y;
    case TailEventKind::kArSqrtWindow: {
      const double root = std::sqrt(p.energy);
      return std::abs(p.theta_hat - p.theta_true) * root >= x && in_window(root, b, M);
    }
    case TailEventKind::kChenLower: return p.sq_var <= p.cond_var - y;
  }
  return false;
}

bool TailEvent::needs_cond_var() const {
  return kind == TailEventKind::kNormLower || kind == TailEventKind::kNormLowerJoint ||
         kind == TailEventKind::kNormSqrtWindow || kind == TailEventKind::kChenLower;
}

bool TailEvent::is_ar() const {
  return kind == TailEventKind::kArAbs || kind == TailEventKind::kArSqrtWindow;
}

bool TailEvent::uses_y() const {
  return kind == TailEventKind::kSelfNormUpperJoint || kind == TailEventKind::kNormLowerJoint ||
         kind == TailEventKind::kArAbs || kind == TailEventKind::kChenLower;
}

bool TailEvent::uses_window() const {
  return kind == TailEventKind::kSelfNormSqrtWindow || kind == TailEventKind::kNormSqrtWindow ||
         kind == TailEventKind::kTstat || kind == TailEventKind::kArSqrtWindow;
}

void check_compatible(const SimModel& model, const TailEvent& event) {
  const bool ar_model = std::holds_alternative<ArModel>(model);
  if (event.is_ar() != ar_model) {
    throw DomainError("event '" + std::string(to_string(event.kind)) +
                      "' is not defined for model " + model_id(model));
  }
  if (!(event.x >= 0.0) && event.kind != TailEventKind::kChenLower) {
    throw DomainError("event: x must be >= 0");
  }
  if (event.uses_window() && !(event.b > 0.0 && event.M >= 1.0)) {
    throw DomainError("event: window requires b > 0 and M >= 1");
  }
  if (event.uses_y() && !(event.y >= 0.0)) throw DomainError("event: y must be >= 0");
  if (event.kind == TailEventKind::kChenLower) {
    const auto* inc = std::get_if<IncrementModel>(&model);
    if (inc == nullptr || !inc->is_iid()) {
      throw DomainError("chen_lower requires independent increments");
    }
  }
  if (event.kind == TailEventKind::kTstat && model_length(model) < 2) {
    throw DomainError("tstat requires n >= 2");
  }
}

// ------------------------------------------------------- empirical tails

std::pair<double, double> clopper_pearson(std::size_t hits, std::size_t reps, double level) {
  if (reps == 0 || hits > reps) throw DomainError("clopper_pearson: requires 0 <= hits <= reps, reps > 0");
  if (!(level > 0.0 && level < 1.0)) throw DomainError("clopper_pearson: level must lie in (0,1)");
  const double alpha = 1.0 - level;
  const double k = static_cast<double>(hits);
  const double n = static_cast<double>(reps);
  const double low = hits == 0 ? 0.0 : boost::math::ibeta_inv(k, n - k + 1.0, alpha / 2.0);
  const double high = hits == reps ? 1.0 : boost::math::ibeta_inv(k + 1.0, n - k, 1.0 - alpha / 2.0);
  return {low, high};
}

EmpiricalTail make_empirical_tail(std::size_t hits, std::size_t reps, double level) {
  EmpiricalTail t;
  t.hits = hits;
  t.reps = reps;
  t.level = level;
  t.p_hat = static_cast<double>(hits) / static_cast<double>(reps);
  std::tie(t.ci_low, t.ci_high) = clopper_pearson(hits, reps, level);
  t.ci_low = std::min(t.ci_low, t.p_hat);
  t.ci_high = std::max(t.ci_high, t.p_hat);
  return t;
}

std::vector<PathSummary> simulate_batch(const SimModel& model, std::size_t reps, std::uint64_t seed,
                                        unsigned workers) {
  std::visit([](const auto& m) { m.validate(); }, model);
  std::vector<PathSummary> out(reps);
  const auto run = [&](std::size_t lo, std::size_t hi) {
    std::visit(
        [&](const auto& m) {
          for (std::size_t r = lo; r < hi; ++r) out[r] = simulate_summary(m, seed, r);
        },
        model);
  };
  const std::size_t threads = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(reps, 1));
  if (threads == 1) {
    run(0, reps);
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  const std::size_t chunk = (reps + threads - 1) / threads;
  for (std::size_t t = 0; t < threads; ++t) {
    const std::size_t lo = std::min(reps, t * chunk);
    const std::size_t hi = std::min(reps, lo + chunk);
    pool.emplace_back([&, t, lo, hi] {
      try {
        run(lo, hi);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

EmpiricalTail empirical_tail(std::span<const PathSummary> paths, const TailEvent& event,
                             double level) {
  if (paths.empty()) throw DomainError("empirical_tail: no paths");
  if (event.needs_cond_var() && !paths.front().has_cond_var()) {
    throw DomainError("empirical_tail: event requires the conditional variance");
  }
  std::size_t hits = 0;
  for (const auto& p : paths) hits += event.occurs(p) ? 1 : 0;
  return make_empirical_tail(hits, paths.size(), level);
}

EmpiricalTail empirical_tail(const SimModel& model, const TailEvent& event, std::size_t reps,
                             std::uint64_t master_seed, double level, unsigned workers) {
  if (reps < 1) throw DomainError("empirical_tail: reps must be >= 1");
  check_compatible(model, event);
  const auto paths = simulate_batch(model, reps, master_seed, workers);
  return empirical_tail(paths, event, level);
}

// ------------------------------------------------------ expectation bounds

ExpectationEstimator::ExpectationEstimator(std::span<const PathSummary> paths,
                                           const ExpectationSpec& spec)
    : total_(paths.size()) {
  if (!is_expectation_formula(spec.kind)) {
    throw DomainError("expectation estimator: '" + std::string(to_string(spec.kind)) +
                      "' is not an expectation-type bound");
  }
  if (!(spec.x >= 0.0)) throw DomainError("expectation estimator: x must be >= 0");
  if (paths.empty()) throw DomainError("expectation estimator: no paths");

  enum class Weight { kSqVar, kCondVar, kEnergy };
  enum class Indicator { kNone, kSelfNormUpper, kNormLower };
  double rate = 0.0;
  Weight weight = Weight::kSqVar;
  Indicator indicator = Indicator::kNone;
  const double x = spec.x;
  switch (spec.kind) {
    case FormulaId::kSelfnormExpectExact:
      rate = h_rate(x);
      indicator = Indicator::kSelfNormUpper;
      break;
    case FormulaId::kSelfnormExpectRelaxed:
      rate = bern_rate(x);
      indicator = Indicator::kSelfNormUpper;
      break;
    case FormulaId::kSelfnormExpectUnconditional: rate = bern_rate(x); break;
    case FormulaId::kNormalizedLowerExpectExact:
      rate = g_rate(x);
      weight = Weight::kCondVar;
      indicator = Indicator::kNormLower;
      break;
    case FormulaId::kNormalizedLowerExpectRelaxed:
      rate = benn_rate(x);
      weight = Weight::kCondVar;
      indicator = Indicator::kNormLower;
      break;
    case FormulaId::kNormalizedLowerExpectUnconditional:
      rate = benn_rate(x);
      weight = Weight::kCondVar;
      break;
    case FormulaId::kSymmetricGaussianExpect:
    case FormulaId::kHeavyLeftGaussianExpect: rate = 0.5 * x * x; break;
    case FormulaId::kArExpect:
      if (!(spec.sigma2 > 0.0 && spec.C > 0.0 && spec.theta_abs >= 0.0 && spec.theta_abs < 1.0)) {
        throw DomainError("ar_expect: requires sigma2 > 0, C > 0, theta_abs in [0,1)");
      }
      rate = ar_rate(x, spec.sigma2, spec.C, spec.theta_abs);
      weight = Weight::kEnergy;
      break;
    default: break;
  }

  exponents_.reserve(paths.size());
  for (const auto& p : paths) {
    double w = p.sq_var;
    if (weight == Weight::kCondVar) {
      if (!p.has_cond_var()) throw DomainError("expectation estimator: conditional variance missing");
      w = p.cond_var;
    } else if (weight == Weight::kEnergy) {
      if (!(p.energy == p.energy)) throw DomainError("expectation estimator: design energy missing");
      w = p.energy;
    }
    bool fires = true;
    if (indicator == Indicator::kSelfNormUpper) {
      fires = p.sq_var > 0.0 && p.sum >= x * p.sq_var;
    } else if (indicator == Indicator::kNormLower) {
      fires = p.cond_var > 0.0 && p.sum <= -x * p.cond_var;
    }
    if (fires) exponents_.push_back(rate * w);
  }
  if (!exponents_.empty()) min_exponent_ = *std::min_element(exponents_.begin(), exponents_.end());
}

double ExpectationEstimator::operator()(double holder_p) const {
  if (!(holder_p > 1.0) || !std::isfinite(holder_p)) {
    throw DomainError("expectation estimator: holder_p must be > 1");
  }
  if (exponents_.empty()) return 0.0;
  // log-sum-exp: at large p the terms underflow long before the 1/p power
  // brings the mean back into range.
  const double shift = -(holder_p - 1.0) * min_exponent_;
  CompensatedSum acc;
  for (double e : exponents_) acc.add(std::exp(-(holder_p - 1.0) * e - shift));
  const double log_mean = shift + std::log(acc.value()) - std::log(static_cast<double>(total_));
  return std::exp(log_mean / holder_p);
}

double expectation_bound_estimate(std::span<const PathSummary> paths, const ExpectationSpec& spec,
                                  double holder_p) {
  return ExpectationEstimator(paths, spec)(holder_p);
}

HolderOptimum optimize_holder_p(const std::function<double(double)>& estimator, double p_min,
                                double p_max) {
  if (!(p_min > 1.0 && p_max > p_min)) throw DomainError("optimize_holder_p: need 1 < p_min < p_max");
  constexpr int kGrid = 64;
  constexpr double kRelTol = 1e-6;
  const double u_lo = 1.0 - 1.0 / p_min;
  const double u_hi = 1.0 - 1.0 / p_max;
  const auto p_of = [](double u) { return 1.0 / (1.0 - u); };
  const auto f = [&](double u) { return estimator(p_of(u)); };

  std::array<double, kGrid> us{};
  int best = 0;
  double best_value = 0.0;
  for (int i = 0; i < kGrid; ++i) {
    us[i] = i == kGrid - 1 ? u_hi : u_lo + (u_hi - u_lo) * i / (kGrid - 1);
    const double v = f(us[i]);
    if (i == 0 || v < best_value) {
      best = i;
      best_value = v;
    }
  }

  HolderOptimum result;
  result.p_star = p_of(us[best]);
  result.value = best_value;
  result.boundary = best == 0 ? HolderOptimum::Boundary::kLower
                    : best == kGrid - 1 ? HolderOptimum::Boundary::kUpper
                                        : HolderOptimum::Boundary::kInterior;

  // Golden-section refinement inside the neighbouring grid cells.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = us[std::max(best - 1, 0)];
  double b = us[std::min(best + 1, kGrid - 1)];
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > kRelTol * std::max(std::abs(a), std::abs(b))) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double u_mid = 0.5 * (a + b);
  const double f_mid = f(u_mid);
  if (f_mid < result.value) {
    result.value = f_mid;
    result.p_star = p_of(u_mid);
  }
  return result;
}

BoundValue expectation_bound(std::span<const PathSummary> paths, const ExpectationSpec& spec) {
  const ExpectationEstimator estimator(paths, spec);
  double value = 0.0;
  double p_star = 2.0;
  if (spec.kind == FormulaId::kSymmetricGaussianExpect) {
    value = estimator(2.0);
  } else {
    const auto opt = optimize_holder_p([&](double p) { return estimator(p); });
    value = opt.value;
    p_star = opt.p_star;
  }
  ParamList params{{"x", spec.x}, {"holder_p", p_star}};
  if (spec.kind == FormulaId::kArExpect) {
    value *= 2.0;
    params.emplace_back("sigma2", spec.sigma2);
    params.emplace_back("C", spec.C);
    params.emplace_back("theta_abs", spec.theta_abs);
  }
  return BoundValue::make(spec.kind, value, std::move(params));
}

Verdict check_domination(const EmpiricalTail& empirical, const BoundValue& bound) {
  return {!(empirical.ci_low > bound.clamped), bound.clamped - empirical.p_hat};
}

// -------------------------------------------------------- supermartingales

std::vector<SupermartingaleRow> supermartingale_suite(std::span<const PathSummary> paths,
                                                      Functional functional,
                                                      std::span<const double> lambda_grid) {
  if (paths.size() < 2) throw DomainError("supermartingale_suite: need at least two paths");
  std::vector<SupermartingaleRow> rows;
  const double n = static_cast<double>(paths.size());
  for (double lambda : lambda_grid) {
    CompensatedSum sum;
    CompensatedSum sum_sq;
    for (const auto& p : paths) {
      const double v = functional == Functional::kU ? u_functional(p, lambda) : w_functional(p, lambda);
      sum.add(v);
      sum_sq.add(v * v);
    }
    const double mean = sum.value() / n;
    const double var = std::max(0.0, (sum_sq.value() - n * mean * mean) / (n - 1.0));
    const double se = std::sqrt(var / n);
    rows.push_back({lambda, mean, se, mean <= 1.0 + 3.0 * se});
  }
  return rows;
}

std::vector<SupermartingaleRow> supermartingale_suite(const IncrementModel& model,
                                                      Functional functional,
                                                      std::span<const double> lambda_grid,
                                                      std::size_t reps, std::uint64_t master_seed,
                                                      unsigned workers) {
  if (model.lower_bound() < -1.0) {
    throw DomainError("supermartingale_suite: increments must be bounded below by -1");
  }
  for (double l : lambda_grid) {
    if (functional == Functional::kU) {
      psi(l);
    } else {
      phi(l);
    }
  }
  const auto paths = simulate_batch(model, reps, master_seed, workers);
  return supermartingale_suite(paths, functional, lambda_grid);
}

// ------------------------------------------------------ two-term splitting

TwoTermReport two_term_decomposition_check(const IncrementModel& model, double x, double epsilon,
                                           double moment_p, std::size_t reps,
                                           std::uint64_t master_seed, double level,
                                           unsigned workers) {
  if (!model.is_iid()) throw DomainError("two_term_decomposition_check: requires an i.i.d. model");
  if (model.lower_bound() < -1.0) {
    throw DomainError("two_term_decomposition_check: increments must be bounded below by -1");
  }
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw DomainError("two_term_decomposition_check: epsilon must lie in (0,1)");
  }
  if (!(x > 0.0)) throw DomainError("two_term_decomposition_check: x must be > 0");
  const auto paths = simulate_batch(model, reps, master_seed, workers);
  const double m = model.multiplier;
  const double b2 = static_cast<double>(model.n) * m * m * model.iid_spec().variance();
  const double threshold = b2 * (1.0 - epsilon);

  std::size_t total = 0;
  std::size_t first = 0;
  std::size_t second = 0;
  bool holds = true;
  for (const auto& p : paths) {
    const bool t = p.sq_var > 0.0 && p.sum >= x * p.sq_var;
    const bool f = t && p.sq_var >= threshold;
    const bool s = p.sq_var < threshold;
    total += t;
    first += f;
    second += s;
    if (t && !f && !s) holds = false;
  }

  TwoTermReport r;
  r.total = make_empirical_tail(total, reps, level);
  r.first = make_empirical_tail(first, reps, level);
  r.second = make_empirical_tail(second, reps, level);
  r.decomposition_holds = holds;
  r.first_bound = selfnorm_fixed_lb(x, threshold).relaxed;
  const double sum_pmoment =
      static_cast<double>(model.n) * std::pow(m, 2.0 * moment_p) * model.iid_spec().moment_2p(moment_p);
  r.second_bound = chen_lower_tail(b2 * epsilon, sum_pmoment, moment_p);
  r.first_verdict = check_domination(r.first, r.first_bound);
  r.second_verdict = check_domination(r.second, r.second_bound);
  const double combined = std::min(1.0, r.first_bound.raw + r.second_bound.raw);
  r.total_verdict = {!(r.total.ci_low > combined), combined - r.total.p_hat};
  return r;
}

// --------------------------------------------------------------- rescaling

PathSummary rescale(const PathSummary& path, double a) {
  if (!(a > 0.0)) throw DomainError("rescale: a must be > 0");
  PathSummary p = path;
  p.sum = path.sum / a;
  p.sq_var = path.sq_var / (a * a);
  p.cond_var = path.cond_var / (a * a);
  return p;
}

TailEvent rescale(const TailEvent& event, double a) {
  if (!(a > 0.0)) throw DomainError("rescale: a must be > 0");
  if (event.is_ar()) throw DomainError("rescale: AR events are not rescaled");
  TailEvent e = event;
  switch (event.kind) {
    case TailEventKind::kSelfNormUpper:
    case TailEventKind::kSelfNormUpperJoint:
    case TailEventKind::kNormLower:
    case TailEventKind::kNormLowerJoint:
      e.x = rescale_to_unit_lb(a, event.x);
      e.y = event.y / (a * a);
      break;
    case TailEventKind::kSelfNormSqrtWindow:
    case TailEventKind::kNormSqrtWindow:
    case TailEventKind::kTstat: e.b = event.b / a; break;
    case TailEventKind::kChenLower: e.y = event.y / (a * a); break;
    default: break;
  }
  return e;
}

// ------------------------------------------------------------------ report

bool VerificationReport::all_pass() const {
  return std::all_of(cases.begin(), cases.end(), [](const CaseRecord& c) { return c.verdict.pass; });
}

const char* const kReportCsvHeader =
    "event,bound,model,n,x,y,b,M,reps,p_hat,ci_low,ci_high,bound_raw,bound_clamped,verdict";

void write_report_json(std::ostream& out, const VerificationReport& report) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["schema_version"] = VerificationReport::kSchemaVersion;
  j["master_seed"] = report.master_seed;
  j["ci_level"] = report.ci_level;
  j["all_pass"] = report.all_pass();
  ordered_json cases = ordered_json::array();
  for (const auto& c : report.cases) {
    ordered_json event;
    event["kind"] = to_string(c.event.kind);
    event["x"] = c.event.x;
    if (c.event.uses_y()) event["y"] = c.event.y;
    if (c.event.uses_window()) {
      event["b"] = c.event.b;
      event["M"] = c.event.M;
    }
    ordered_json params = ordered_json::object();
    for (const auto& [k, v] : c.bound.params) params[k] = v;
    ordered_json rec;
    rec["event"] = event;
    rec["model"] = c.model_id;
    rec["n"] = c.n;
    rec["seed"] = c.seed;
    rec["bound"] = {{"formula_id", to_string(c.bound.formula)},
                    {"raw", c.bound.raw},
                    {"clamped", c.bound.clamped},
                    {"params", params}};
    rec["empirical"] = {{"hits", c.empirical.hits},   {"reps", c.empirical.reps},
                        {"p_hat", c.empirical.p_hat}, {"ci_low", c.empirical.ci_low},
                        {"ci_high", c.empirical.ci_high}};
    rec["verdict"] = c.verdict.pass ? "PASS" : "FAIL";
    rec["slack"] = c.verdict.slack;
    cases.push_back(std::move(rec));
  }
  j["cases"] = std::move(cases);
  out << j.dump(2) << '\n';
}

void write_report_csv(std::ostream& out, const VerificationReport& report) {
  out << kReportCsvHeader << '\n';
  for (const auto& c : report.cases) {
    const auto& e = c.event;
    out << to_string(e.kind) << ',' << to_string(c.bound.formula) << ',' << csv_field(c.model_id)
        << ',' << c.n << ',' << format_double(e.x) << ',';
    if (e.uses_y()) {
      out << format_double(e.y);
    } else {
      // the two-term i.i.d. bound carries its own split level y
      for (const auto& [k, v] : c.bound.params) {
        if (k == "y") out << format_double(v);
      }
    }
    out << ',';
    if (e.uses_window()) out << format_double(e.b) << ',' << format_double(e.M);
    else out << ',';
    out << ',' << c.empirical.reps << ',' << format_double(c.empirical.p_hat) << ','
        << format_double(c.empirical.ci_low) << ',' << format_double(c.empirical.ci_high) << ','
        << format_double(c.bound.raw) << ',' << format_double(c.bound.clamped) << ','
        << (c.verdict.pass ? "PASS" : "FAIL") << '\n';
  }
}

}  // namespace selfnorm
