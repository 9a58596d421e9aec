#include "selfnorm/sim.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include <boost/math/distributions/normal.hpp>

#include "selfnorm/error.hpp"
#include "selfnorm/rates.hpp"
#include "selfnorm/rng.hpp"

namespace selfnorm {
namespace {

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

double clamp_scale(double s) {
  if (!(s > 0.0)) throw DomainError("scale rule returned a non-positive scale");
  return std::min(s, 1.0);
}

// Calls visit(xi, conditional_variance) for every step of one replication.
template <typename Visit>
void generate_increments(const IncrementModel& model, std::uint64_t seed, std::uint64_t replication,
                         std::vector<double>& history, Visit&& visit) {
  const CounterRng rng(seed, replication);
  const double m = model.multiplier;
  if (const auto* iid = std::get_if<IidModel>(&model.law)) {
    const double step_var = m * m * iid->spec.variance();
    for (std::size_t k = 0; k < model.n; ++k) {
      visit(m * iid->spec.sample(rng.uniform(k)), step_var);
    }
    return;
  }
  const auto& cs = std::get<CondSymmetricModel>(model.law);
  const double base_var = cs.base.variance();
  history.clear();
  double sum = 0.0;
  double sq = 0.0;
  for (std::size_t k = 0; k < model.n; ++k) {
    const History h{k + 1, sum, sq, std::span<const double>(history.data(), history.size())};
    const double scale = clamp_scale(cs.scale_rule(h));
    const double xi = m * scale * cs.base.sample(rng.uniform(k));
    history.push_back(xi);
    sum += xi;
    sq += xi * xi;
    visit(xi, m * m * scale * scale * base_var);
  }
}

// Welford accumulation of the Student statistic.
struct TStatAccumulator {
  std::size_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double v) {
    ++count;
    const double delta = v - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (v - mean);
  }

  double value() const {
    if (count < 2) return PathSummary::kAbsent;
    if (m2 <= 0.0) {
      if (mean > 0.0) return std::numeric_limits<double>::infinity();
      if (mean < 0.0) return -std::numeric_limits<double>::infinity();
      return PathSummary::kAbsent;
    }
    const double n = static_cast<double>(count);
    return std::sqrt(n) * mean / std::sqrt(m2 / (n - 1.0));
  }
};

double normal_quantile_two_sided(double level) {
  if (!(level > 0.0 && level < 1.0)) throw DomainError("confidence level must lie in (0,1)");
  return boost::math::quantile(boost::math::normal(), 1.0 - (1.0 - level) / 2.0);
}

template <typename Sampler>
HeavyOnLeftReport truncated_mean_check(Sampler&& sampler, std::span<const double> a_grid,
                                       std::size_t reps, double level) {
  if (reps < 2) throw DomainError("heavy_on_left_test: reps must be >= 2");
  for (double a : a_grid) {
    if (!(a > 0.0)) throw DomainError("heavy_on_left_test: truncation levels must be > 0");
  }
  const double z = normal_quantile_two_sided(level);
  std::vector<double> values(reps);
  for (std::size_t r = 0; r < reps; ++r) values[r] = sampler(r);

  HeavyOnLeftReport report;
  for (double a : a_grid) {
    double mean = 0.0;
    double m2 = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
      const double t = truncate(values[r], a);
      const double delta = t - mean;
      mean += delta / static_cast<double>(r + 1);
      m2 += delta * (t - mean);
    }
    const double se = std::sqrt(m2 / static_cast<double>(reps - 1) / static_cast<double>(reps));
    TruncatedMeanRow row{a, mean, mean - z * se, mean + z * se, false};
    row.violated = row.ci_low > 0.0;
    report.consistent = report.consistent && !row.violated;
    report.rows.push_back(row);
  }
  return report;
}

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

double parse_number(const std::string& field, std::size_t line_no) {
  const std::string t = trim(field);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(v)) {
    throw ConfigError("line " + std::to_string(line_no) + ": cannot parse number '" + t + "'");
  }
  return v;
}

}  // namespace

// ---------------------------------------------------------------- DistSpec

DistSpec DistSpec::rademacher() { return {Kind::kRademacher, 0.0}; }

DistSpec DistSpec::two_point(double q) {
  DistSpec s{Kind::kTwoPoint, q};
  s.validate();
  return s;
}

DistSpec DistSpec::uniform_sym(double half_width) {
  DistSpec s{Kind::kUniformSym, half_width};
  s.validate();
  return s;
}

DistSpec DistSpec::uniform_noise(double C) {
  DistSpec s{Kind::kUniformNoise, C};
  s.validate();
  return s;
}

void DistSpec::validate() const {
  switch (kind) {
    case Kind::kRademacher: return;
    case Kind::kTwoPoint:
      if (!(param > 0.0 && param < 1.0)) throw DomainError("two_point: q must lie in (0,1)");
      return;
    case Kind::kUniformSym:
      if (!(param > 0.0 && param <= 1.0)) {
        throw DomainError("uniform_sym: half width must lie in (0,1]");
      }
      return;
    case Kind::kUniformNoise:
      if (!(param > 0.0 && std::isfinite(param))) throw DomainError("uniform_noise: C must be > 0");
      return;
  }
}

double DistSpec::variance() const {
  switch (kind) {
    case Kind::kRademacher: return 1.0;
    case Kind::kTwoPoint: return (1.0 - param) / param;
    case Kind::kUniformSym:
    case Kind::kUniformNoise: return param * param / 3.0;
  }
  return 0.0;
}

double DistSpec::lower_bound() const {
  switch (kind) {
    case Kind::kRademacher:
    case Kind::kTwoPoint: return -1.0;
    case Kind::kUniformSym:
    case Kind::kUniformNoise: return -param;
  }
  return 0.0;
}

double DistSpec::upper_bound() const {
  switch (kind) {
    case Kind::kRademacher: return 1.0;
    case Kind::kTwoPoint: return (1.0 - param) / param;
    case Kind::kUniformSym:
    case Kind::kUniformNoise: return param;
  }
  return 0.0;
}

double DistSpec::moment_2p(double p) const {
  if (!(p > 0.0)) throw DomainError("moment_2p: p must be > 0");
  switch (kind) {
    case Kind::kRademacher: return 1.0;
    case Kind::kTwoPoint:
      return (1.0 - param) + param * std::pow((1.0 - param) / param, 2.0 * p);
    case Kind::kUniformSym:
    case Kind::kUniformNoise: return std::pow(param, 2.0 * p) / (2.0 * p + 1.0);
  }
  return 0.0;
}

bool DistSpec::symmetric() const {
  return kind != Kind::kTwoPoint || param == 0.5;
}

double DistSpec::sample(double u) const {
  switch (kind) {
    case Kind::kRademacher: return u < 0.5 ? -1.0 : 1.0;
    case Kind::kTwoPoint: return u < param ? (1.0 - param) / param : -1.0;
    case Kind::kUniformSym:
    case Kind::kUniformNoise: return param * (2.0 * u - 1.0);
  }
  return 0.0;
}

std::string DistSpec::id() const {
  switch (kind) {
    case Kind::kRademacher: return "rademacher";
    case Kind::kTwoPoint: return "two_point(q=" + short_number(param) + ")";
    case Kind::kUniformSym: return "uniform_sym(w=" + short_number(param) + ")";
    case Kind::kUniformNoise: return "uniform_noise(C=" + short_number(param) + ")";
  }
  return "unknown";
}

// ---------------------------------------------------------- IncrementModel

ScaleRule default_scale_rule() {
  return [](const History& h) { return 1.0 / std::sqrt(1.0 + h.sq_sum / static_cast<double>(h.k)); };
}

IncrementModel IncrementModel::iid(DistSpec spec, std::size_t n, double multiplier) {
  IncrementModel m{IidModel{spec}, n, multiplier};
  m.validate();
  return m;
}

IncrementModel IncrementModel::cond_symmetric(DistSpec base, std::size_t n, ScaleRule rule,
                                              std::string rule_name) {
  IncrementModel m{CondSymmetricModel{base, std::move(rule), std::move(rule_name)}, n, 1.0};
  m.validate();
  return m;
}

void IncrementModel::validate() const {
  if (n < 1) throw DomainError("increment model: n must be >= 1");
  if (!(multiplier > 0.0 && std::isfinite(multiplier))) {
    throw DomainError("increment model: multiplier must be > 0");
  }
  if (const auto* iid = std::get_if<IidModel>(&law)) {
    iid->spec.validate();
    if (iid->spec.kind == DistSpec::Kind::kUniformNoise) {
      throw DomainError("increment model: uniform_noise is reserved for AR drivers");
    }
    return;
  }
  const auto& cs = std::get<CondSymmetricModel>(law);
  cs.base.validate();
  if (!cs.base.symmetric() || cs.base.kind == DistSpec::Kind::kUniformNoise) {
    throw DomainError("cond_symmetric: base law must be a symmetric increment law");
  }
  if (!cs.scale_rule) throw DomainError("cond_symmetric: missing scale rule");
}

double IncrementModel::lower_bound() const {
  if (const auto* iid = std::get_if<IidModel>(&law)) return multiplier * iid->spec.lower_bound();
  return multiplier * std::get<CondSymmetricModel>(law).base.lower_bound();
}

bool IncrementModel::is_iid() const { return std::holds_alternative<IidModel>(law); }

bool IncrementModel::conditionally_symmetric() const {
  if (const auto* iid = std::get_if<IidModel>(&law)) return iid->spec.symmetric();
  return true;
}

const DistSpec& IncrementModel::iid_spec() const {
  const auto* iid = std::get_if<IidModel>(&law);
  if (iid == nullptr) throw DomainError("model is not i.i.d.");
  return iid->spec;
}

std::string IncrementModel::id() const {
  std::string out;
  if (const auto* iid = std::get_if<IidModel>(&law)) {
    out = iid->spec.id();
  } else {
    const auto& cs = std::get<CondSymmetricModel>(law);
    out = "cond_symmetric(" + cs.base.id() + ",rule=" + cs.rule_name + ")";
  }
  if (multiplier != 1.0) out = short_number(multiplier) + "*" + out;
  return out;
}

// -------------------------------------------------------------- Trajectory

Trajectory trajectory_from_increments(std::span<const double> increments,
                                      std::optional<std::span<const double>> step_variances,
                                      std::string model_id) {
  if (step_variances && step_variances->size() != increments.size()) {
    throw DomainError("trajectory: step variance count does not match increments");
  }
  Trajectory t;
  t.model_id = std::move(model_id);
  t.increments.assign(increments.begin(), increments.end());
  t.partial_sums.reserve(increments.size());
  t.sq_variation.reserve(increments.size());
  double s = 0.0;
  double q = 0.0;
  for (double xi : increments) {
    s += xi;
    q += xi * xi;
    t.partial_sums.push_back(s);
    t.sq_variation.push_back(q);
  }
  if (step_variances) {
    std::vector<double> cv;
    cv.reserve(increments.size());
    double c = 0.0;
    for (double v : *step_variances) {
      c += v;
      cv.push_back(c);
    }
    t.cond_variance = std::move(cv);
  }
  return t;
}

Trajectory simulate_trajectory(const IncrementModel& model, std::uint64_t seed,
                               std::uint64_t replication) {
  model.validate();
  std::vector<double> xs;
  std::vector<double> vars;
  std::vector<double> history;
  xs.reserve(model.n);
  vars.reserve(model.n);
  generate_increments(model, seed, replication, history, [&](double xi, double v) {
    xs.push_back(xi);
    vars.push_back(v);
  });
  Trajectory t = trajectory_from_increments(xs, std::span<const double>(vars), model.id());
  t.seed = seed;
  t.replication = replication;
  return t;
}

PathSummary summarize(const Trajectory& traj) {
  PathSummary p;
  p.n = traj.size();
  if (p.n == 0) return p;
  p.sum = traj.partial_sums.back();
  p.sq_var = traj.sq_variation.back();
  if (traj.cond_variance) p.cond_var = traj.cond_variance->back();
  TStatAccumulator acc;
  for (double xi : traj.increments) acc.add(xi);
  p.t_stat = acc.value();
  return p;
}

PathSummary simulate_summary(const IncrementModel& model, std::uint64_t seed,
                             std::uint64_t replication) {
  model.validate();
  PathSummary p;
  p.n = model.n;
  p.cond_var = 0.0;
  TStatAccumulator acc;
  thread_local std::vector<double> history;
  generate_increments(model, seed, replication, history, [&](double xi, double v) {
    p.sum += xi;
    p.sq_var += xi * xi;
    p.cond_var += v;
    acc.add(xi);
  });
  p.t_stat = acc.value();
  return p;
}

// ------------------------------------------------------------------- AR(1)

void ArModel::validate() const {
  if (n < 1) throw DomainError("ar1: n must be >= 1");
  if (!(std::abs(theta) < 1.0)) throw DomainError("ar1: |theta| must be < 1");
  noise.validate();
  if (noise.kind != DistSpec::Kind::kUniformNoise) {
    throw DomainError("ar1: noise must be uniform_noise(C)");
  }
}

std::string ArModel::id() const {
  return "ar1(theta=" + short_number(theta) + ",C=" + short_number(noise.param) + ")";
}

double ARPath::design_energy() const {
  double e = 0.0;
  for (std::size_t k = 1; k < x.size(); ++k) e += x[k - 1] * x[k - 1];
  return e;
}

double ARPath::cross() const {
  double c = 0.0;
  for (std::size_t k = 1; k < x.size(); ++k) c += x[k - 1] * x[k];
  return c;
}

double ARPath::noise_cross() const {
  if (noise.size() != x.size()) throw DomainError("ar path: noise sequence not available");
  double c = 0.0;
  for (std::size_t k = 1; k < x.size(); ++k) c += x[k - 1] * noise[k];
  return c;
}

ARPath simulate_ar1(const ArModel& model, std::uint64_t seed, std::uint64_t replication) {
  model.validate();
  const CounterRng rng(seed, replication);
  ARPath path;
  path.C = model.noise.param;
  path.theta_true = model.theta;
  path.x.reserve(model.n + 1);
  path.noise.reserve(model.n + 1);
  double prev = 0.0;
  for (std::size_t k = 0; k <= model.n; ++k) {
    const double eps = model.noise.sample(rng.uniform(k));
    const double xk = k == 0 ? eps : model.theta * prev + eps;
    path.noise.push_back(eps);
    path.x.push_back(xk);
    prev = xk;
  }
  return path;
}

LeastSquaresFit ls_estimate(std::span<const double> x) {
  if (x.size() < 2) throw DegenerateInputError("ls_estimate: need at least two observations");
  LeastSquaresFit fit;
  fit.n = x.size() - 1;
  for (std::size_t k = 1; k < x.size(); ++k) {
    fit.design_energy += x[k - 1] * x[k - 1];
    fit.cross += x[k - 1] * x[k];
  }
  if (!(fit.design_energy > 0.0)) {
    throw DegenerateInputError("ls_estimate: design energy is zero");
  }
  fit.theta_hat = fit.cross / fit.design_energy;
  return fit;
}

LeastSquaresFit ls_estimate(const ARPath& path) { return ls_estimate(std::span<const double>(path.x)); }

PathSummary summarize(const ARPath& path) {
  const LeastSquaresFit fit = ls_estimate(path);
  PathSummary p;
  p.n = fit.n;
  p.theta_hat = fit.theta_hat;
  p.energy = fit.design_energy;
  if (path.theta_true) p.theta_true = *path.theta_true;
  return p;
}

PathSummary simulate_summary(const ArModel& model, std::uint64_t seed, std::uint64_t replication) {
  const CounterRng rng(seed, replication);
  double prev = model.noise.sample(rng.uniform(0));
  double energy = 0.0;
  double cross = 0.0;
  for (std::size_t k = 1; k <= model.n; ++k) {
    const double xk = model.theta * prev + model.noise.sample(rng.uniform(k));
    energy += prev * prev;
    cross += prev * xk;
    prev = xk;
  }
  if (!(energy > 0.0)) throw DegenerateInputError("simulated AR path has zero design energy");
  PathSummary p;
  p.n = model.n;
  p.theta_hat = cross / energy;
  p.theta_true = model.theta;
  p.energy = energy;
  return p;
}

double t_statistic(std::span<const double> sample) {
  if (sample.size() < 2) throw DegenerateInputError("t_statistic: need n >= 2");
  TStatAccumulator acc;
  for (double v : sample) acc.add(v);
  if (!(acc.m2 > 0.0)) throw DegenerateInputError("t_statistic: sample is constant");
  return acc.value();
}

// ------------------------------------------------------- supermartingales

double u_functional(const PathSummary& path, double lambda) {
  return std::exp(lambda * path.sum + psi(lambda) * path.sq_var);
}

double u_functional(const Trajectory& traj, double lambda) {
  if (traj.size() == 0) {
    psi(lambda);
    return 1.0;
  }
  return std::exp(lambda * traj.partial_sums.back() + psi(lambda) * traj.sq_variation.back());
}

double w_functional(const PathSummary& path, double lambda) {
  if (!path.has_cond_var()) throw DomainError("w_functional: conditional variance not available");
  return std::exp(-lambda * path.sum - phi(lambda) * path.cond_var);
}

double w_functional(const Trajectory& traj, double lambda) {
  if (!traj.cond_variance) throw DomainError("w_functional: conditional variance not available");
  if (traj.size() == 0) {
    phi(lambda);
    return 1.0;
  }
  return std::exp(-lambda * traj.partial_sums.back() - phi(lambda) * traj.cond_variance->back());
}

// ----------------------------------------------------------- heavy on left

double truncate(double x, double a) {
  const double m = std::min(std::abs(x), a);
  return x > 0.0 ? m : (x < 0.0 ? -m : 0.0);
}

HeavyOnLeftReport heavy_on_left_test(const DistSpec& spec, std::span<const double> a_grid,
                                     std::size_t reps, std::uint64_t seed, double level) {
  spec.validate();
  return truncated_mean_check(
      [&](std::size_t r) { return spec.sample(CounterRng(seed, r).uniform(0)); }, a_grid, reps,
      level);
}

HeavyOnLeftReport heavy_on_left_test(const IncrementModel& model, std::size_t step,
                                     std::span<const double> a_grid, std::size_t reps,
                                     std::uint64_t seed, double level) {
  model.validate();
  if (step < 1 || step > model.n) throw DomainError("heavy_on_left_test: step out of range");
  const IncrementModel prefix{model.law, step, model.multiplier};
  return truncated_mean_check(
      [&](std::size_t r) { return simulate_trajectory(prefix, seed, r).increments.back(); }, a_grid,
      reps, level);
}

// --------------------------------------------------------------------- CSV

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_ar_csv(std::ostream& out, const ARPath& path) {
  out << "k,x\n";
  for (std::size_t k = 0; k < path.x.size(); ++k) out << k << ',' << format_double(path.x[k]) << '\n';
}

std::vector<double> read_series_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::vector<double> xs;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    if (!header_seen) {
      std::string compact;
      for (char c : line) {
        if (!std::isspace(static_cast<unsigned char>(c))) compact.push_back(c);
      }
      if (compact != "k,x") throw ConfigError("series CSV: expected header 'k,x'");
      header_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected two fields 'k,x'");
    }
    const double k = parse_number(line.substr(0, comma), line_no);
    if (k != static_cast<double>(xs.size())) {
      throw ConfigError("line " + std::to_string(line_no) + ": k must run 0,1,2,... in order");
    }
    xs.push_back(parse_number(line.substr(comma + 1), line_no));
  }
  if (!header_seen) throw ConfigError("series CSV: empty input");
  return xs;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << "k,xi,S,sq_var,cond_var\n";
  for (std::size_t k = 0; k < traj.size(); ++k) {
    out << (k + 1) << ',' << format_double(traj.increments[k]) << ','
        << format_double(traj.partial_sums[k]) << ',' << format_double(traj.sq_variation[k]) << ',';
    if (traj.cond_variance) out << format_double((*traj.cond_variance)[k]);
    out << '\n';
  }
}

}  // namespace selfnorm
