#include "selfnorm/config.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "selfnorm/error.hpp"
#include "selfnorm/rng.hpp"

namespace selfnorm {
namespace {

using nlohmann::json;

constexpr std::array<std::string_view, 5> kGridKeys{"x", "y", "b", "M", "moment_p"};

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError(where + ": " + what);
}

double get_number(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) fail(where, std::string("missing field '") + key + "'");
  if (!j[key].is_number()) fail(where, std::string("field '") + key + "' must be a number");
  return j[key].get<double>();
}

DistSpec parse_dist(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    fail(where, "distribution needs a string 'kind'");
  }
  const auto kind = j["kind"].get<std::string>();
  DistSpec d;
  if (kind == "rademacher") {
    d = DistSpec::rademacher();
  } else if (kind == "two_point") {
    d = DistSpec::two_point(get_number(j, "q", where));
  } else if (kind == "uniform_sym") {
    d = DistSpec::uniform_sym(get_number(j, "half_width", where));
  } else {
    fail(where, "unknown distribution '" + kind + "'");
  }
  return d;
}

std::size_t parse_length(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 1) fail(where, "'n' must be a positive integer");
  return j.get<std::size_t>();
}

ModelSpec parse_model(const json& j, std::size_t n, const std::string& where) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    fail(where, "model needs a string 'kind'");
  }
  const auto kind = j["kind"].get<std::string>();
  ModelSpec spec;
  if (kind == "iid") {
    if (!j.contains("dist")) fail(where, "iid model needs 'dist'");
    const double mult = j.contains("multiplier") ? get_number(j, "multiplier", where) : 1.0;
    spec.model = IncrementModel::iid(parse_dist(j["dist"], where), n, mult);
  } else if (kind == "cond_symmetric") {
    if (!j.contains("base")) fail(where, "cond_symmetric model needs 'base'");
    spec.model = IncrementModel::cond_symmetric(parse_dist(j["base"], where), n);
  } else if (kind == "ar1") {
    ArModel ar;
    ar.n = n;
    ar.theta = get_number(j, "theta", where);
    ar.noise = DistSpec::uniform_noise(get_number(j, "C", where));
    spec.model = ar;
    spec.theta_abs_max =
        j.contains("theta_abs_max") ? get_number(j, "theta_abs_max", where) : std::abs(ar.theta);
    if (!(spec.theta_abs_max >= std::abs(ar.theta) && spec.theta_abs_max < 1.0)) {
      fail(where, "theta_abs_max must satisfy |theta| <= theta_abs_max < 1");
    }
  } else {
    fail(where, "unknown model kind '" + kind + "'");
  }
  try {
    std::visit([](const auto& m) { m.validate(); }, spec.model);
  } catch (const DomainError& e) {
    fail(where, e.what());
  }
  return spec;
}

bool has_increments(const ModelSpec& m) { return std::holds_alternative<IncrementModel>(m.model); }

const IncrementModel* increments(const ModelSpec& m) { return std::get_if<IncrementModel>(&m.model); }

bool lower_bounded_by_one(const ModelSpec& m) {
  const auto* inc = increments(m);
  return inc != nullptr && inc->lower_bound() >= -1.0;
}

bool iid_model(const ModelSpec& m) {
  const auto* inc = increments(m);
  return inc != nullptr && inc->is_iid();
}

bool cond_symmetric(const ModelSpec& m) {
  const auto* inc = increments(m);
  return inc != nullptr && inc->conditionally_symmetric();
}

double iid_sigma2(const IncrementModel& m) {
  return m.multiplier * m.multiplier * m.iid_spec().variance();
}

double iid_m2p(const IncrementModel& m, double moment_p) {
  return std::pow(m.multiplier, 2.0 * moment_p) * m.iid_spec().moment_2p(moment_p);
}

}  // namespace

double ModelSpec::ar_sigma2() const {
  const double c = ar_C();
  return c * c / 3.0;
}

double ModelSpec::ar_C() const {
  const auto* ar = std::get_if<ArModel>(&model);
  if (ar == nullptr) throw DomainError("not an AR model");
  return ar->noise.param;
}

double ModelSpec::window_variance() const {
  if (const auto* ar = std::get_if<ArModel>(&model)) {
    // stationary variance of X, which drives the design energy
    return ar_sigma2() / (1.0 - ar->theta * ar->theta);
  }
  const auto& inc = std::get<IncrementModel>(model);
  const DistSpec& d = inc.is_iid() ? inc.iid_spec() : std::get<CondSymmetricModel>(inc.law).base;
  return inc.multiplier * inc.multiplier * d.variance();
}

std::vector<CasePoint> CaseSpec::expand() const {
  std::vector<CasePoint> points{CasePoint{}};
  points.front().event.kind = event;
  for (const auto& [key, values] : grid) {
    std::vector<CasePoint> next;
    next.reserve(points.size() * values.size());
    for (const auto& p : points) {
      for (double v : values) {
        CasePoint q = p;
        if (key == "x") q.event.x = v;
        else if (key == "y") q.event.y = v;
        else if (key == "b") q.event.b = v;
        else if (key == "M") q.event.M = v;
        else if (key == "moment_p") q.moment_p = v;
        next.push_back(q);
      }
    }
    points = std::move(next);
  }
  const bool has_y = std::any_of(grid.begin(), grid.end(), [](const auto& g) { return g.first == "y"; });
  for (auto& p : points) {
    if (has_y && !p.event.uses_y()) {
      p.split_y = p.event.y;
      p.event.y = 0.0;
    }
  }
  return points;
}

void check_applicable(FormulaId bound, TailEventKind event, const ModelSpec& model) {
  using F = FormulaId;
  using E = TailEventKind;
  const std::string name(to_string(bound));
  const auto need = [&](bool ok, const std::string& why) {
    if (!ok) throw ConfigError("bound '" + name + "' " + why);
  };
  const auto events = [&](std::initializer_list<E> allowed) {
    for (E e : allowed) {
      if (e == event) return;
    }
    throw ConfigError("bound '" + name + "' does not apply to event '" + std::string(to_string(event)) + "'");
  };
  const bool lb = lower_bounded_by_one(model);
  switch (bound) {
    case F::kBennettVarianceForm:
    case F::kBennettSumForm:
      events({E::kNormLower});
      need(iid_model(model) && lb, "requires independent increments bounded below by -1");
      break;
    case F::kDlpFixedLb:
      events({E::kSelfNormUpperJoint});
      need(cond_symmetric(model), "requires conditionally symmetric increments");
      break;
    case F::kSelfnormFixedLbExact:
    case F::kSelfnormFixedLbRelaxed:
      events({E::kSelfNormUpperJoint});
      need(lb, "requires increments bounded below by -1");
      break;
    case F::kNormalizedLowerFixedLbExact:
    case F::kNormalizedLowerFixedLbRelaxed:
      events({E::kNormLowerJoint});
      need(lb, "requires increments bounded below by -1");
      break;
    case F::kPeelingSelfnorm:
      events({E::kSelfNormSqrtWindow});
      need(lb, "requires increments bounded below by -1");
      break;
    case F::kPeelingNormalized:
      events({E::kNormSqrtWindow});
      need(lb, "requires increments bounded below by -1");
      break;
    case F::kIidSelfnorm:
    case F::kIidSelfnormAuto:
      events({E::kSelfNormUpper});
      need(iid_model(model) && lb, "requires i.i.d. increments bounded below by -1");
      break;
    case F::kTstatPeeling:
      events({E::kTstat});
      need(lb, "requires increments bounded below by -1");
      break;
    case F::kArFixedLb:
    case F::kArExpect:
      events({E::kArAbs});
      break;
    case F::kArGaussianBaseline:
      throw ConfigError("bound '" + name + "' assumes Gaussian noise and is not verified on bounded noise");
    case F::kArPeeling:
      events({E::kArSqrtWindow});
      break;
    case F::kChenLowerTail:
      events({E::kChenLower});
      need(iid_model(model), "requires independent increments");
      break;
    case F::kSelfnormExpectExact:
    case F::kSelfnormExpectRelaxed:
    case F::kSelfnormExpectUnconditional:
      events({E::kSelfNormUpper, E::kSelfNormUpperJoint});
      need(lb, "requires increments bounded below by -1");
      break;
    case F::kNormalizedLowerExpectExact:
    case F::kNormalizedLowerExpectRelaxed:
    case F::kNormalizedLowerExpectUnconditional:
      events({E::kNormLower, E::kNormLowerJoint});
      need(lb, "requires increments bounded below by -1");
      break;
    case F::kSymmetricGaussianExpect:
    case F::kHeavyLeftGaussianExpect:
      events({E::kSelfNormUpper, E::kSelfNormUpperJoint});
      need(cond_symmetric(model), "requires conditionally symmetric increments");
      break;
  }
  const bool ar_event = event == E::kArAbs || event == E::kArSqrtWindow;
  need(ar_event == !has_increments(model), "event and model kinds do not match");
}

BoundValue evaluate_bound(FormulaId bound, const CasePoint& point, const ModelSpec& model,
                          std::span<const PathSummary> paths) {
  using F = FormulaId;
  const TailEvent& e = point.event;
  if (is_expectation_formula(bound)) {
    ExpectationSpec spec{bound, e.x, 0.0, 0.0, 0.0};
    if (bound == F::kArExpect) {
      spec.sigma2 = model.ar_sigma2();
      spec.C = model.ar_C();
      spec.theta_abs = model.theta_abs_max;
    }
    return expectation_bound(paths, spec);
  }
  const std::size_t n = std::visit([](const auto& m) { return m.n; }, model.model);
  switch (bound) {
    case F::kBennettVarianceForm:
      return bennett_variance_form(e.x, static_cast<double>(n) * iid_sigma2(*increments(model)));
    case F::kBennettSumForm: {
      const double v2 = static_cast<double>(n) * iid_sigma2(*increments(model));
      return bennett_sum_form(e.x * v2, v2);
    }
    case F::kDlpFixedLb: return dlp_fixed_lb(e.x, e.y);
    case F::kSelfnormFixedLbExact: return selfnorm_fixed_lb(e.x, e.y).exact;
    case F::kSelfnormFixedLbRelaxed: return selfnorm_fixed_lb(e.x, e.y).relaxed;
    case F::kNormalizedLowerFixedLbExact: return normalized_lower_fixed_lb(e.x, e.y).exact;
    case F::kNormalizedLowerFixedLbRelaxed: return normalized_lower_fixed_lb(e.x, e.y).relaxed;
    case F::kPeelingSelfnorm: return peeling_selfnorm(e.x, e.b, e.M);
    case F::kPeelingNormalized: return peeling_normalized(e.x, e.b, e.M);
    case F::kIidSelfnorm: {
      if (!point.split_y) throw ConfigError("iid_selfnorm_bound needs a 'y' grid (0 < y < sigma2)");
      const auto& m = *increments(model);
      return iid_selfnorm_bound(e.x, *point.split_y, static_cast<long>(n), iid_sigma2(m),
                                iid_m2p(m, point.moment_p), point.moment_p);
    }
    case F::kIidSelfnormAuto: {
      const auto& m = *increments(model);
      return iid_selfnorm_bound_auto(e.x, static_cast<long>(n), iid_sigma2(m),
                                     iid_m2p(m, point.moment_p), point.moment_p);
    }
    case F::kTstatPeeling: return tstat_peeling_bound(e.x, static_cast<long>(n), e.b, e.M);
    case F::kArFixedLb:
      return ar_fixed_lb(e.x, e.y, model.ar_sigma2(), model.ar_C(), model.theta_abs_max);
    case F::kArGaussianBaseline: return ar_gaussian_baseline(e.x, e.y);
    case F::kArPeeling:
      return ar_peeling(e.x, e.b, e.M, model.ar_sigma2(), model.ar_C(), model.theta_abs_max);
    case F::kChenLowerTail: {
      const auto& m = *increments(model);
      return chen_lower_tail(e.y, static_cast<double>(n) * iid_m2p(m, point.moment_p),
                             point.moment_p);
    }
    default: break;
  }
  throw ConfigError("bound '" + std::string(to_string(bound)) + "' cannot be evaluated");
}

ExperimentConfig parse_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config: top level must be an object");

  ExperimentConfig cfg;
  if (root.contains("schema_version")) {
    if (!root["schema_version"].is_number_integer()) fail("config", "schema_version must be an integer");
    cfg.schema_version = root["schema_version"].get<int>();
    if (cfg.schema_version != ExperimentConfig::kSchemaVersion) {
      fail("config", "unsupported schema_version " + std::to_string(cfg.schema_version));
    }
  }
  if (root.contains("master_seed")) {
    if (!root["master_seed"].is_number_unsigned()) fail("config", "master_seed must be a nonnegative integer");
    cfg.master_seed = root["master_seed"].get<std::uint64_t>();
  }
  if (root.contains("ci_level")) cfg.ci_level = get_number(root, "ci_level", "config");
  if (!(cfg.ci_level > 0.0 && cfg.ci_level < 1.0)) fail("config", "ci_level must lie in (0,1)");
  if (root.contains("output_dir")) {
    if (!root["output_dir"].is_string()) fail("config", "output_dir must be a string");
    cfg.output_dir = root["output_dir"].get<std::string>();
  }
  std::optional<std::size_t> default_reps;
  if (root.contains("reps")) {
    if (!root["reps"].is_number_unsigned()) fail("config", "reps must be a positive integer");
    default_reps = root["reps"].get<std::size_t>();
  }

  if (!root.contains("cases") || !root["cases"].is_array() || root["cases"].empty()) {
    fail("config", "'cases' must be a nonempty array");
  }
  std::size_t index = 0;
  for (const auto& jc : root["cases"]) {
    const std::string where = "case " + std::to_string(index++);
    if (!jc.is_object()) fail(where, "must be an object");

    const json& jn = jc.contains("n") ? jc["n"] : root.contains("n") ? root["n"] : json();
    if (jn.is_null()) fail(where, "no 'n' given");
    const std::size_t n = parse_length(jn, where);
    const json& jm = jc.contains("model") ? jc["model"] : root.contains("model") ? root["model"] : json();
    if (jm.is_null()) fail(where, "no 'model' given");

    CaseSpec cs;
    cs.model = parse_model(jm, n, where);

    if (!jc.contains("event") || !jc["event"].is_string()) fail(where, "needs a string 'event'");
    const auto ev = event_from_string(jc["event"].get<std::string>());
    if (!ev) fail(where, "unknown event '" + jc["event"].get<std::string>() + "'");
    cs.event = *ev;

    if (jc.contains("reps")) {
      if (!jc["reps"].is_number_unsigned()) fail(where, "reps must be a positive integer");
      cs.reps = jc["reps"].get<std::size_t>();
    } else if (default_reps) {
      cs.reps = *default_reps;
    }
    if (cs.reps < 1000) fail(where, "reps must be at least 1000 for verification");

    if (!jc.contains("params") || !jc["params"].is_object()) fail(where, "needs a 'params' object");
    const json& params = jc["params"];
    for (auto it = params.begin(); it != params.end(); ++it) {
      if (std::find(kGridKeys.begin(), kGridKeys.end(), it.key()) == kGridKeys.end()) {
        fail(where, "unknown parameter '" + it.key() + "'");
      }
    }
    for (std::string_view key : kGridKeys) {
      const std::string k(key);
      if (!params.contains(k)) continue;
      const json& g = params[k];
      std::vector<double> values;
      if (g.is_number()) {
        values.push_back(g.get<double>());
      } else if (g.is_array()) {
        for (const auto& v : g) {
          if (!v.is_number()) fail(where, "grid '" + k + "' must hold numbers");
          values.push_back(v.get<double>());
        }
      } else {
        fail(where, "grid '" + k + "' must be a number or an array");
      }
      if (values.empty()) fail(where, "grid '" + k + "' is empty");
      cs.grid.emplace_back(k, std::move(values));
    }

    TailEvent probe;
    probe.kind = cs.event;
    const auto has = [&](const char* k) { return params.contains(k); };
    if (!has("x") && cs.event != TailEventKind::kChenLower) fail(where, "grid 'x' is required");
    if (probe.uses_y() && !has("y")) fail(where, "event '" + jc["event"].get<std::string>() + "' needs a 'y' grid");
    if (probe.uses_window()) {
      // Window convention: b = 0.5 sqrt(n Var), M = 4 unless given.
      if (!has("b")) {
        cs.grid.emplace_back("b", std::vector<double>{0.5 * std::sqrt(static_cast<double>(n) *
                                                                      cs.model.window_variance())});
      }
      if (!has("M")) cs.grid.emplace_back("M", std::vector<double>{4.0});
      std::stable_sort(cs.grid.begin(), cs.grid.end(), [](const auto& a, const auto& b) {
        const auto rank = [](const std::string& k) {
          return std::find(kGridKeys.begin(), kGridKeys.end(), k) - kGridKeys.begin();
        };
        return rank(a.first) < rank(b.first);
      });
    }

    if (!jc.contains("bounds") || !jc["bounds"].is_array() || jc["bounds"].empty()) {
      fail(where, "'bounds' must be a nonempty array");
    }
    for (const auto& jb : jc["bounds"]) {
      if (!jb.is_string()) fail(where, "bound names must be strings");
      const auto f = formula_from_string(jb.get<std::string>());
      if (!f) fail(where, "unknown bound '" + jb.get<std::string>() + "'");
      try {
        check_applicable(*f, cs.event, cs.model);
      } catch (const ConfigError& e) {
        fail(where, e.what());
      }
      if (*f == FormulaId::kIidSelfnorm && !has("y")) fail(where, "iid_selfnorm_bound needs a 'y' grid");
      cs.bounds.push_back(*f);
    }

    try {
      for (const auto& p : cs.expand()) check_compatible(cs.model.model, p.event);
    } catch (const DomainError& e) {
      fail(where, e.what());
    }
    cfg.cases.push_back(std::move(cs));
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

VerificationReport run_verification(const ExperimentConfig& config, unsigned workers,
                                    double bound_factor) {
  VerificationReport report;
  report.master_seed = config.master_seed;
  report.ci_level = config.ci_level;
  for (std::size_t i = 0; i < config.cases.size(); ++i) {
    const CaseSpec& cs = config.cases[i];
    const std::uint64_t seed = derive_seed(config.master_seed, i);
    const auto paths = simulate_batch(cs.model.model, cs.reps, seed, workers);
    const std::string id = model_id(cs.model.model);
    const std::size_t n = model_length(cs.model.model);
    for (const auto& point : cs.expand()) {
      const EmpiricalTail emp = empirical_tail(paths, point.event, config.ci_level);
      for (FormulaId f : cs.bounds) {
        BoundValue bound = evaluate_bound(f, point, cs.model, paths);
        if (bound_factor != 1.0) bound = bound.scaled(bound_factor);
        CaseRecord rec{point.event, bound, id, n, seed, emp, check_domination(emp, bound)};
        report.cases.push_back(std::move(rec));
      }
    }
  }
  return report;
}

double ar_confidence_radius(double design_energy, double sigma2, double C, double theta_abs_max,
                            double alpha) {
  if (!(design_energy > 0.0)) throw DomainError("ar_confidence_radius: design energy must be > 0");
  if (!(sigma2 > 0.0)) throw DomainError("ar_confidence_radius: sigma2 must be > 0");
  if (!(C >= 0.0)) throw DomainError("ar_confidence_radius: C must be >= 0");
  if (!(theta_abs_max >= 0.0 && theta_abs_max < 1.0)) {
    throw DomainError("ar_confidence_radius: theta_abs_max must lie in [0,1)");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("ar_confidence_radius: alpha must lie in (0,1)");
  const double L = std::log(2.0 / alpha);
  const double kappa = C * C / (3.0 * (1.0 - theta_abs_max));
  const double y = design_energy;
  const double lk = L * kappa;
  return (lk + std::sqrt(lk * lk + 2.0 * L * sigma2 * y)) / y;
}

}  // namespace selfnorm
