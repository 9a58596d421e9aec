#pragma once

// Monte Carlo estimation of tail probabilities and expectation-type bounds,
// and the domination checks that compare them against the closed forms.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "selfnorm/bounds.hpp"
#include "selfnorm/sim.hpp"

namespace selfnorm {

using SimModel = std::variant<IncrementModel, ArModel>;

std::string model_id(const SimModel& model);
std::size_t model_length(const SimModel& model);

enum class TailEventKind {
  kSelfNormUpper,        // S/[S] >= x
  kSelfNormUpperJoint,   // S/[S] >= x, [S] >= y
  kNormLower,            // S/<S> <= -x
  kNormLowerJoint,       // S/<S> <= -x, <S> >= y
  kSelfNormSqrtWindow,   // S/sqrt([S]) >= x, b <= sqrt([S]) <= bM
  kNormSqrtWindow,       // -S/sqrt(<S>) >= x, b <= sqrt(<S>) <= bM
  kTstat,                // T_n >= x, b <= sqrt([S]) <= bM
  kArAbs,                // |theta_hat - theta| >= x, energy >= y
  kArSqrtWindow,         // |theta_hat - theta| sqrt(energy) >= x, b <= sqrt(energy) <= bM
  kChenLower,            // [S] <= <S> - y  (sum of xi^2 below its mean by y)
};

std::string_view to_string(TailEventKind kind);
std::optional<TailEventKind> event_from_string(std::string_view name);

struct TailEvent {
  TailEventKind kind = TailEventKind::kSelfNormUpper;
  double x = 0.0;
  double y = 0.0;
  double b = 0.0;
  double M = 1.0;

  bool occurs(const PathSummary& path) const;
  bool needs_cond_var() const;
  bool is_ar() const;
  bool uses_y() const;
  bool uses_window() const;
};

/// Throws DomainError when `event` cannot be evaluated on paths of `model`.
void check_compatible(const SimModel& model, const TailEvent& event);

struct EmpiricalTail {
  std::size_t hits = 0;
  std::size_t reps = 0;
  double p_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 1.0;
  double level = 0.99;
};

/// Exact two-sided binomial interval at confidence `level`.
std::pair<double, double> clopper_pearson(std::size_t hits, std::size_t reps, double level);
EmpiricalTail make_empirical_tail(std::size_t hits, std::size_t reps, double level);

/// Simulates `reps` independent paths; replication r uses stream (seed, r), so
/// the result does not depend on `workers`.
std::vector<PathSummary> simulate_batch(const SimModel& model, std::size_t reps, std::uint64_t seed,
                                        unsigned workers = 1);

EmpiricalTail empirical_tail(std::span<const PathSummary> paths, const TailEvent& event,
                             double level = 0.99);
EmpiricalTail empirical_tail(const SimModel& model, const TailEvent& event, std::size_t reps,
                             std::uint64_t master_seed, double level = 0.99, unsigned workers = 1);

/// Parameters of an expectation-type bound. `kind` must satisfy
/// is_expectation_formula(); the AR fields are used by FormulaId::kArExpect only.
struct ExpectationSpec {
  FormulaId kind = FormulaId::kSelfnormExpectExact;
  double x = 0.0;
  double sigma2 = 0.0;
  double C = 0.0;
  double theta_abs = 0.0;
};

/// p -> (mean over paths of exp{-(p-1) rate weight} indicator)^{1/p}.
///
/// Rates and weights are precomputed once so that every holder_p is evaluated on
/// the same paths.
class ExpectationEstimator {
 public:
  ExpectationEstimator(std::span<const PathSummary> paths, const ExpectationSpec& spec);
  double operator()(double holder_p) const;
  std::size_t size() const { return exponents_.size(); }

 private:
  std::vector<double> exponents_;  // rate * weight, only for paths where the indicator fires
  double min_exponent_ = 0.0;
  std::size_t total_ = 0;
};

double expectation_bound_estimate(std::span<const PathSummary> paths, const ExpectationSpec& spec,
                                  double holder_p);

struct HolderOptimum {
  enum class Boundary { kInterior, kLower, kUpper };
  double p_star = 2.0;
  double value = 0.0;
  Boundary boundary = Boundary::kInterior;
};

/// Minimizes `estimator` over p in [p_min, p_max] via u = 1 - 1/p: a 64-point
/// grid in u followed by golden-section refinement around the best grid point.
HolderOptimum optimize_holder_p(const std::function<double(double)>& estimator,
                                double p_min = 1.0 + 1e-6, double p_max = 1e6);

/// The expectation bound as a BoundValue: optimized over p except for the
/// symmetric Gaussian form, which is fixed at p = 2. The AR form carries the
/// factor 2 of its two-sided event.
BoundValue expectation_bound(std::span<const PathSummary> paths, const ExpectationSpec& spec);

struct Verdict {
  bool pass = true;
  double slack = 0.0;  // bound.clamped - p_hat
};

/// FAIL only when the lower confidence limit exceeds the clamped bound.
Verdict check_domination(const EmpiricalTail& empirical, const BoundValue& bound);

enum class Functional { kU, kW };

struct SupermartingaleRow {
  double lambda = 0.0;
  double mean = 0.0;
  double se = 0.0;
  bool pass = true;  // mean <= 1 + 3 se
};

std::vector<SupermartingaleRow> supermartingale_suite(std::span<const PathSummary> paths,
                                                      Functional functional,
                                                      std::span<const double> lambda_grid);
std::vector<SupermartingaleRow> supermartingale_suite(const IncrementModel& model,
                                                      Functional functional,
                                                      std::span<const double> lambda_grid,
                                                      std::size_t reps, std::uint64_t master_seed,
                                                      unsigned workers = 1);

struct TwoTermReport {
  EmpiricalTail total;   // S/[S] >= x
  EmpiricalTail first;   // S/[S] >= x, [S] >= B^2 (1 - eps)
  EmpiricalTail second;  // [S] < B^2 (1 - eps)
  BoundValue first_bound;
  BoundValue second_bound;
  bool decomposition_holds = true;  // every total hit is a first or second hit
  Verdict first_verdict;
  Verdict second_verdict;
  Verdict total_verdict;  // total vs first_bound + second_bound

  bool all_pass() const {
    return decomposition_holds && first_verdict.pass && second_verdict.pass && total_verdict.pass;
  }
};

/// Splits P(S/[S] >= x) at [S] = B_n^2 (1 - eps) for an i.i.d. model and checks
/// each part against its bound (self-normalized relaxed form, lower tail of [S]).
TwoTermReport two_term_decomposition_check(const IncrementModel& model, double x, double epsilon,
                                           double moment_p, std::size_t reps,
                                           std::uint64_t master_seed, double level = 0.99,
                                           unsigned workers = 1);

/// Path statistics after dividing every increment by a.
PathSummary rescale(const PathSummary& path, double a);
/// The event on rescaled paths that coincides with `event` on the original ones.
TailEvent rescale(const TailEvent& event, double a);

struct CaseRecord {
  TailEvent event;
  BoundValue bound;
  std::string model_id;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  EmpiricalTail empirical;
  Verdict verdict;
};

struct VerificationReport {
  static constexpr int kSchemaVersion = 1;

  std::uint64_t master_seed = 0;
  double ci_level = 0.99;
  std::vector<CaseRecord> cases;

  bool all_pass() const;
};

void write_report_json(std::ostream& out, const VerificationReport& report);
/// Flat CSV, one row per (event, grid point, bound).
void write_report_csv(std::ostream& out, const VerificationReport& report);
extern const char* const kReportCsvHeader;

}  // namespace selfnorm
