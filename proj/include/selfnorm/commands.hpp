#pragma once

// Subcommands of the selfnorm tool. Each returns the process exit code.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace selfnorm {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitUsage = 2;

/// `params` holds "key=value" strings. Prints the bound as JSON.
int cmd_bound(const std::string& formula, const std::vector<std::string>& params, std::ostream& out,
              std::ostream& err);

struct VerifyOptions {
  std::string config_path;
  std::optional<std::string> out_dir;
  unsigned workers = 1;
  bool falsify_bounds = false;  // multiply every bound by 1e-6
};

/// Writes report.json and report.csv; exit 0 iff every case passes.
int cmd_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err);

struct SimulateOptions {
  std::string kind;  // "iid" or "ar"
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::string out_path;
  std::string dist = "rademacher";
  double q = 0.3;
  double half_width = 1.0;
  bool cond_symmetric = false;
  double theta = 0.5;
  double C = 1.0;
};

int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err);

struct ArFitOptions {
  std::string csv_path;
  std::optional<double> sigma2;
  bool estimate_sigma2 = false;
  double C = 0.0;
  double theta_max = 0.0;
  double alpha = 0.05;
};

int cmd_ar_fit(const ArFitOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace selfnorm
