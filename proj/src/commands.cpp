#include "selfnorm/commands.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "selfnorm/bounds.hpp"
#include "selfnorm/config.hpp"
#include "selfnorm/error.hpp"
#include "selfnorm/sim.hpp"
#include "selfnorm/verify.hpp"

namespace selfnorm {
namespace {

using nlohmann::ordered_json;

double parse_value(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("parameter '" + key + "': cannot parse '" + text + "' as a number");
  }
  return v;
}

class ParamMap {
 public:
  explicit ParamMap(const std::vector<std::string>& items) {
    for (const auto& item : items) {
      const auto eq = item.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw ConfigError("parameter '" + item + "' must have the form key=value");
      }
      const std::string key = item.substr(0, eq);
      if (values_.count(key) != 0) throw ConfigError("parameter '" + key + "' given twice");
      values_[key] = parse_value(key, item.substr(eq + 1));
    }
  }

  double get(const std::string& key) {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing parameter '" + key + "'");
    used_.insert(key);
    return it->second;
  }

  double get_or(const std::string& key, double fallback) {
    return values_.count(key) != 0 ? get(key) : fallback;
  }

  long get_count(const std::string& key) {
    const double v = get(key);
    if (v != std::floor(v) || v < 1.0 || v > 1e15) {
      throw ConfigError("parameter '" + key + "' must be a positive integer");
    }
    return static_cast<long>(v);
  }

  void check_all_used() const {
    for (const auto& [k, v] : values_) {
      if (used_.count(k) == 0) throw ConfigError("unknown parameter '" + k + "'");
    }
  }

 private:
  std::map<std::string, double> values_;
  std::set<std::string> used_;
};

ordered_json bound_json(const BoundValue& b) {
  ordered_json params = ordered_json::object();
  for (const auto& [k, v] : b.params) params[k] = v;
  return ordered_json{{"formula_id", to_string(b.formula)},
                      {"raw", b.raw},
                      {"clamped", b.clamped},
                      {"params", params}};
}

BoundValue evaluate_closed_form(FormulaId f, ParamMap& p) {
  using F = FormulaId;
  switch (f) {
    case F::kBennettVarianceForm: return bennett_variance_form(p.get("x"), p.get("v2"));
    case F::kBennettSumForm: return bennett_sum_form(p.get("x"), p.get("v2"));
    case F::kDlpFixedLb: return dlp_fixed_lb(p.get("x"), p.get("y"));
    case F::kSelfnormFixedLbExact: return selfnorm_fixed_lb(p.get("x"), p.get("y")).exact;
    case F::kSelfnormFixedLbRelaxed: return selfnorm_fixed_lb(p.get("x"), p.get("y")).relaxed;
    case F::kNormalizedLowerFixedLbExact: return normalized_lower_fixed_lb(p.get("x"), p.get("y")).exact;
    case F::kNormalizedLowerFixedLbRelaxed:
      return normalized_lower_fixed_lb(p.get("x"), p.get("y")).relaxed;
    case F::kPeelingSelfnorm: return peeling_selfnorm(p.get("x"), p.get("b"), p.get("M"));
    case F::kPeelingNormalized: return peeling_normalized(p.get("x"), p.get("b"), p.get("M"));
    case F::kIidSelfnorm: {
      const double x = p.get("x");
      const double y = p.get("y");
      const long n = p.get_count("n");
      return iid_selfnorm_bound(x, y, n, p.get("sigma2"), p.get("m2p"), p.get_or("moment_p", 2.0));
    }
    case F::kIidSelfnormAuto: {
      const double x = p.get("x");
      const long n = p.get_count("n");
      return iid_selfnorm_bound_auto(x, n, p.get("sigma2"), p.get("m2p"), p.get_or("moment_p", 2.0));
    }
    case F::kTstatPeeling: {
      const double x = p.get("x");
      const long n = p.get_count("n");
      return tstat_peeling_bound(x, n, p.get("b"), p.get("M"));
    }
    case F::kArFixedLb:
      return ar_fixed_lb(p.get("x"), p.get("y"), p.get("sigma2"), p.get("C"), p.get("theta_abs"));
    case F::kArGaussianBaseline: return ar_gaussian_baseline(p.get("x"), p.get("y"));
    case F::kArPeeling:
      return ar_peeling(p.get("x"), p.get("b"), p.get("M"), p.get("sigma2"), p.get("C"),
                        p.get("theta_abs"));
    case F::kChenLowerTail:
      return chen_lower_tail(p.get("y"), p.get("sum_pmoment"), p.get_or("moment_p", 2.0));
    default: break;
  }
  throw ConfigError("'" + std::string(to_string(f)) +
                    "' is an expectation-type bound; estimate it with 'verify'");
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path.string() + "'");
  f << text;
  if (!f) throw ConfigError("failed writing '" + path.string() + "'");
}

}  // namespace

int cmd_bound(const std::string& formula, const std::vector<std::string>& params, std::ostream& out,
              std::ostream& err) {
  try {
    ParamMap p(params);
    ordered_json j;
    if (formula == "selfnorm_fixed_lb" || formula == "normalized_lower_fixed_lb") {
      const double x = p.get("x");
      const double y = p.get("y");
      p.check_all_used();
      const BoundPair pair = formula == "selfnorm_fixed_lb" ? selfnorm_fixed_lb(x, y)
                                                           : normalized_lower_fixed_lb(x, y);
      j = ordered_json{{"formula_id", formula},
                       {"exact", bound_json(pair.exact)},
                       {"relaxed", bound_json(pair.relaxed)}};
    } else {
      const auto f = formula_from_string(formula);
      if (!f) throw ConfigError("unknown formula '" + formula + "'");
      const BoundValue b = evaluate_closed_form(*f, p);
      p.check_all_used();
      j = bound_json(b);
    }
    out << j.dump(2) << '\n';
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

int cmd_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err) {
  VerificationReport report;
  std::filesystem::path dir;
  try {
    if (opts.workers < 1) throw ConfigError("--workers must be >= 1");
    const ExperimentConfig cfg = load_config(opts.config_path);
    dir = opts.out_dir.value_or(cfg.output_dir.value_or("."));
    std::filesystem::create_directories(dir);
    report = run_verification(cfg, opts.workers, opts.falsify_bounds ? 1e-6 : 1.0);
    std::ostringstream js;
    write_report_json(js, report);
    write_file(dir / "report.json", js.str());
    std::ostringstream cs;
    write_report_csv(cs, report);
    write_file(dir / "report.csv", cs.str());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  std::size_t failures = 0;
  for (const auto& c : report.cases) {
    if (!c.verdict.pass) {
      ++failures;
      err << "FAIL " << to_string(c.event.kind) << " x=" << format_double(c.event.x) << ' '
          << to_string(c.bound.formula) << " on " << c.model_id << ": ci_low "
          << format_double(c.empirical.ci_low) << " > bound " << format_double(c.bound.clamped)
          << '\n';
    }
  }
  out << report.cases.size() << " cases, " << failures << " failed; reports in " << dir.string()
      << '\n';
  return failures == 0 ? kExitOk : kExitVerificationFailed;
}

int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    if (opts.n < 1) throw ConfigError("--n must be >= 1");
    std::ostringstream text;
    if (opts.kind == "iid") {
      DistSpec d;
      if (opts.dist == "rademacher") d = DistSpec::rademacher();
      else if (opts.dist == "two_point") d = DistSpec::two_point(opts.q);
      else if (opts.dist == "uniform_sym") d = DistSpec::uniform_sym(opts.half_width);
      else throw ConfigError("unknown --dist '" + opts.dist + "'");
      const IncrementModel m = opts.cond_symmetric ? IncrementModel::cond_symmetric(d, opts.n)
                                                   : IncrementModel::iid(d, opts.n);
      m.validate();
      write_trajectory_csv(text, simulate_trajectory(m, opts.seed, 0));
    } else if (opts.kind == "ar") {
      ArModel m{opts.n, opts.theta, DistSpec::uniform_noise(opts.C)};
      m.validate();
      write_ar_csv(text, simulate_ar1(m, opts.seed, 0));
    } else {
      throw ConfigError("simulate: model must be 'iid' or 'ar'");
    }
    if (opts.out_path.empty() || opts.out_path == "-") {
      out << text.str();
    } else {
      write_file(opts.out_path, text.str());
    }
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

int cmd_ar_fit(const ArFitOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    std::ifstream in(opts.csv_path);
    if (!in) throw ConfigError("cannot open '" + opts.csv_path + "'");
    const std::vector<double> series = read_series_csv(in);
    const LeastSquaresFit fit = ls_estimate(series);

    if (opts.sigma2.has_value() == opts.estimate_sigma2) {
      throw ConfigError("give exactly one of --sigma2 and --estimate-sigma2");
    }
    double sigma2 = 0.0;
    if (opts.sigma2) {
      sigma2 = *opts.sigma2;
    } else {
      double rss = 0.0;
      for (std::size_t k = 1; k < series.size(); ++k) {
        const double r = series[k] - fit.theta_hat * series[k - 1];
        rss += r * r;
      }
      sigma2 = rss / static_cast<double>(fit.n > 1 ? fit.n - 1 : 1);
    }
    const double radius = ar_confidence_radius(fit.design_energy, sigma2, opts.C, opts.theta_max, opts.alpha);

    ordered_json warnings = ordered_json::array();
    if (std::abs(fit.theta_hat) + radius >= opts.theta_max) {
      warnings.push_back("|theta_hat| + radius >= theta_max: the interval leaves the assumed range of theta");
    }
    if (opts.estimate_sigma2) {
      warnings.push_back("sigma2 estimated from residuals: the radius is not certified");
    }
    for (const auto& w : warnings) err << "warning: " << w.get<std::string>() << '\n';

    ordered_json j{{"theta_hat", fit.theta_hat},
                   {"design_energy", fit.design_energy},
                   {"n", fit.n},
                   {"sigma2", sigma2},
                   {"sigma2_certified", !opts.estimate_sigma2},
                   {"C", opts.C},
                   {"theta_abs_max", opts.theta_max},
                   {"alpha", opts.alpha},
                   {"confidence_radius", radius},
                   {"interval", {fit.theta_hat - radius, fit.theta_hat + radius}},
                   {"warnings", warnings}};
    out << j.dump(2) << '\n';
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace selfnorm
