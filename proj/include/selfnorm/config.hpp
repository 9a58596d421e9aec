#pragma once

// Experiment configuration for the verification matrix, and the mapping from
// (bound, event, model) to a concrete BoundValue.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "selfnorm/bounds.hpp"
#include "selfnorm/verify.hpp"

namespace selfnorm {

struct ModelSpec {
  SimModel model;
  double theta_abs_max = 0.0;  // AR only: a certified bound on |theta|

  /// sigma^2 of the AR noise (uniform on [-C, C]).
  double ar_sigma2() const;
  double ar_C() const;
  /// Variance scale used by the default window b = 0.5 sqrt(n Var).
  double window_variance() const;
};

/// One evaluation point of a case: the event plus bound-only parameters.
struct CasePoint {
  TailEvent event;
  double moment_p = 2.0;
  std::optional<double> split_y;  // y of the two-term i.i.d. bound
};

struct CaseSpec {
  TailEventKind event = TailEventKind::kSelfNormUpper;
  /// Grids in the fixed key order x, y, b, M, moment_p; absent keys are omitted.
  std::vector<std::pair<std::string, std::vector<double>>> grid;
  std::vector<FormulaId> bounds;
  std::size_t reps = 100000;
  ModelSpec model;

  std::vector<CasePoint> expand() const;
};

struct ExperimentConfig {
  static constexpr int kSchemaVersion = 1;

  int schema_version = kSchemaVersion;
  std::vector<CaseSpec> cases;
  std::uint64_t master_seed = 0;
  double ci_level = 0.99;
  std::optional<std::string> output_dir;
};

/// Throws ConfigError with a message naming the offending case or field.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::string& path);

/// Throws ConfigError unless `bound` is stated for `event` under the model's hypotheses.
void check_applicable(FormulaId bound, TailEventKind event, const ModelSpec& model);

/// Evaluates `bound` at `point`; expectation-type bounds are estimated on `paths`.
BoundValue evaluate_bound(FormulaId bound, const CasePoint& point, const ModelSpec& model,
                          std::span<const PathSummary> paths);

/// Runs every case. Case i simulates one batch with seed derive_seed(master_seed, i)
/// shared by all of its grid points and bounds. Bounds are multiplied by
/// `bound_factor` before the verdict (1 in normal use).
VerificationReport run_verification(const ExperimentConfig& config, unsigned workers = 1,
                                    double bound_factor = 1.0);

/// Positive root x of 2 exp{-x^2 y / (2(sigma2 + x kappa))} = alpha,
/// kappa = C^2 / (3(1 - theta_abs_max)).
double ar_confidence_radius(double design_energy, double sigma2, double C, double theta_abs_max,
                            double alpha);

}  // namespace selfnorm
