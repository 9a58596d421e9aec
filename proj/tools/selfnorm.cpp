#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "selfnorm/commands.hpp"

int main(int argc, char** argv) {
  using namespace selfnorm;
  CLI::App app{"Tail bounds for self-normalized martingales: evaluate, simulate, verify, fit AR(1)"};
  app.require_subcommand(1);

  std::string formula;
  std::vector<std::string> params;
  auto* bound = app.add_subcommand("bound", "Evaluate a closed-form bound");
  bound->add_option("formula_id", formula, "Formula name, e.g. selfnorm_fixed_lb")->required();
  bound->add_option("--param,-p", params, "Parameter as key=value (repeatable)");

  VerifyOptions vopts;
  std::string out_dir;
  auto* verify = app.add_subcommand("verify", "Run a verification matrix from a JSON config");
  verify->add_option("config", vopts.config_path, "Experiment config (JSON)")->required();
  verify->add_option("--out", out_dir, "Directory for report.json and report.csv");
  verify->add_option("--workers", vopts.workers, "Simulation threads")->check(CLI::PositiveNumber);
  verify->add_flag("--falsify-bounds", vopts.falsify_bounds,
                   "Multiply every bound by 1e-6 to check that violations are detected");

  SimulateOptions sopts;
  auto* simulate = app.add_subcommand("simulate", "Write one simulated path as CSV");
  simulate->add_option("model", sopts.kind, "iid or ar")->required()->check(CLI::IsMember({"iid", "ar"}));
  simulate->add_option("--n", sopts.n, "Path length")->required();
  simulate->add_option("--seed", sopts.seed, "Seed")->required();
  simulate->add_option("--out", sopts.out_path, "Output CSV (default stdout)");
  simulate->add_option("--dist", sopts.dist, "rademacher, two_point or uniform_sym")
      ->check(CLI::IsMember({"rademacher", "two_point", "uniform_sym"}));
  simulate->add_option("--q", sopts.q, "two_point: probability of the upper atom");
  simulate->add_option("--half-width", sopts.half_width, "uniform_sym: half width (<= 1)");
  simulate->add_flag("--cond-symmetric", sopts.cond_symmetric,
                     "Scale increments by the built-in predictable rule");
  simulate->add_option("--theta", sopts.theta, "ar: autoregressive coefficient");
  simulate->add_option("--C", sopts.C, "ar: noise half width");

  ArFitOptions aopts;
  double sigma2 = 0.0;
  auto* arfit = app.add_subcommand("ar-fit", "Least-squares AR(1) fit with a certified radius");
  arfit->add_option("series", aopts.csv_path, "CSV with header k,x")->required();
  auto* sigma_opt = arfit->add_option("--sigma2", sigma2, "Noise variance (known)");
  auto* est_opt = arfit->add_flag("--estimate-sigma2", aopts.estimate_sigma2,
                                  "Estimate sigma2 from residuals (not certified)");
  sigma_opt->excludes(est_opt);
  arfit->add_option("--C", aopts.C, "Noise bound |eps| <= C")->required();
  arfit->add_option("--theta-max", aopts.theta_max, "Certified bound on |theta|, < 1")->required();
  arfit->add_option("--alpha", aopts.alpha, "Miscoverage level in (0,1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (*bound) return cmd_bound(formula, params, std::cout, std::cerr);
  if (*verify) {
    if (!out_dir.empty()) vopts.out_dir = out_dir;
    return cmd_verify(vopts, std::cout, std::cerr);
  }
  if (*simulate) return cmd_simulate(sopts, std::cout, std::cerr);
  if (*arfit) {
    if (sigma_opt->count() > 0) aopts.sigma2 = sigma2;
    return cmd_ar_fit(aopts, std::cout, std::cerr);
  }
  return kExitUsage;
}
