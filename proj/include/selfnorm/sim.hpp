#pragma once

// Martingale-difference and AR(1) path generators plus the statistics the
// tail bounds constrain: S_n, [S]_n, <S>_n, T_n and the least-squares theta.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace selfnorm {

/// Zero-mean law of a single increment or AR noise term.
struct DistSpec {
  enum class Kind { kRademacher, kTwoPoint, kUniformSym, kUniformNoise };

  Kind kind = Kind::kRademacher;
  double param = 0.0;  // q for two_point, half width for uniform_sym, C for uniform_noise

  static DistSpec rademacher();
  /// -1 with probability 1-q, (1-q)/q with probability q.
  static DistSpec two_point(double q);
  /// Uniform on [-w, w], w <= 1.
  static DistSpec uniform_sym(double half_width);
  /// Uniform on [-C, C]; AR driver only.
  static DistSpec uniform_noise(double C);

  void validate() const;
  double variance() const;
  double lower_bound() const;
  double upper_bound() const;
  /// E|xi|^{2p}.
  double moment_2p(double p) const;
  bool symmetric() const;
  /// Maps a uniform draw in [0,1) to a value of the law.
  double sample(double u) const;
  std::string id() const;
};

/// Information available to a predictable scale rule before step k (1-based).
struct History {
  std::size_t k = 1;
  double sum = 0.0;     // S_{k-1}
  double sq_sum = 0.0;  // [S]_{k-1}
  std::span<const double> increments;  // xi_1..xi_{k-1}
};

/// Predictable scale in (0,1]; the result is clamped into that interval.
using ScaleRule = std::function<double(const History&)>;

/// 1 / sqrt(1 + [S]_{k-1} / k).
ScaleRule default_scale_rule();

struct IidModel {
  DistSpec spec;
};

struct CondSymmetricModel {
  DistSpec base;  // must be symmetric
  ScaleRule scale_rule;
  std::string rule_name = "default";
};

struct IncrementModel {
  std::variant<IidModel, CondSymmetricModel> law;
  std::size_t n = 1;
  /// Increments are multiplied by this factor; the lower bound scales with it.
  double multiplier = 1.0;

  static IncrementModel iid(DistSpec spec, std::size_t n, double multiplier = 1.0);
  static IncrementModel cond_symmetric(DistSpec base, std::size_t n,
                                       ScaleRule rule = default_scale_rule(),
                                       std::string rule_name = "default");

  void validate() const;
  double lower_bound() const;
  bool is_iid() const;
  bool conditionally_symmetric() const;
  /// Law of a single increment for i.i.d. models.
  const DistSpec& iid_spec() const;
  std::string id() const;
};

struct Trajectory {
  std::vector<double> increments;
  std::vector<double> partial_sums;  // S_1..S_n
  std::vector<double> sq_variation;  // [S]_1..[S]_n
  std::optional<std::vector<double>> cond_variance;  // <S>_1..<S>_n
  std::string model_id;
  std::uint64_t seed = 0;
  std::uint64_t replication = 0;

  std::size_t size() const { return increments.size(); }
};

/// Builds the cumulative statistics from raw increments. `step_variances`
/// holds E[xi_k^2 | F_{k-1}] when known.
Trajectory trajectory_from_increments(std::span<const double> increments,
                                      std::optional<std::span<const double>> step_variances = {},
                                      std::string model_id = "explicit");

Trajectory simulate_trajectory(const IncrementModel& model, std::uint64_t seed,
                               std::uint64_t replication = 0);

struct ArModel {
  std::size_t n = 1;
  double theta = 0.0;
  DistSpec noise = DistSpec::uniform_noise(1.0);

  void validate() const;
  std::string id() const;
};

struct ARPath {
  std::vector<double> x;      // X_0..X_n
  std::vector<double> noise;  // eps_0..eps_n, empty for imported series
  double C = 0.0;
  std::optional<double> theta_true;

  std::size_t n() const { return x.empty() ? 0 : x.size() - 1; }
  /// sum_{k=1..n} X_{k-1}^2
  double design_energy() const;
  /// sum_{k=1..n} X_{k-1} X_k
  double cross() const;
  /// sum_{k=1..n} X_{k-1} eps_k; requires the noise sequence.
  double noise_cross() const;
};

ARPath simulate_ar1(const ArModel& model, std::uint64_t seed, std::uint64_t replication = 0);

struct LeastSquaresFit {
  double theta_hat = 0.0;
  double design_energy = 0.0;
  double cross = 0.0;
  std::size_t n = 0;
};

LeastSquaresFit ls_estimate(std::span<const double> x);
LeastSquaresFit ls_estimate(const ARPath& path);

/// Student's t statistic sqrt(n) mean / s. Throws for n < 2 or a constant sample.
double t_statistic(std::span<const double> sample);

/// Per-path statistics consumed by the Monte Carlo layer. Fields that do not
/// apply to a model are NaN.
struct PathSummary {
  static constexpr double kAbsent = std::numeric_limits<double>::quiet_NaN();

  std::size_t n = 0;
  double sum = 0.0;
  double sq_var = 0.0;
  double cond_var = kAbsent;
  double t_stat = kAbsent;  // +-inf for a constant nonzero sample
  double theta_hat = kAbsent;
  double theta_true = kAbsent;
  double energy = kAbsent;

  bool has_cond_var() const { return cond_var == cond_var; }
};

PathSummary summarize(const Trajectory& traj);
PathSummary simulate_summary(const IncrementModel& model, std::uint64_t seed,
                             std::uint64_t replication);
PathSummary summarize(const ARPath& path);
PathSummary simulate_summary(const ArModel& model, std::uint64_t seed, std::uint64_t replication);

/// U_n(lambda) = exp{lambda S_n + psi(lambda) [S]_n}, lambda in [0,1).
double u_functional(const Trajectory& traj, double lambda);
double u_functional(const PathSummary& path, double lambda);
/// W_n(lambda) = exp{-lambda S_n - phi(lambda) <S>_n}, lambda >= 0. Requires <S>.
double w_functional(const Trajectory& traj, double lambda);
double w_functional(const PathSummary& path, double lambda);

struct TruncatedMeanRow {
  double a = 0.0;
  double mean = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  bool violated = false;  // ci_low > 0
};

struct HeavyOnLeftReport {
  std::vector<TruncatedMeanRow> rows;
  bool consistent = true;  // no row violated
};

/// T_a(x) = min(|x|, a) sign(x).
double truncate(double x, double a);

/// Estimates E[T_a(X)] per a with a normal-approximation interval at `level`.
HeavyOnLeftReport heavy_on_left_test(const DistSpec& spec, std::span<const double> a_grid,
                                     std::size_t reps, std::uint64_t seed, double level = 0.99);
/// Same check for the `step`-th (1-based) increment of a model across replications.
HeavyOnLeftReport heavy_on_left_test(const IncrementModel& model, std::size_t step,
                                     std::span<const double> a_grid, std::size_t reps,
                                     std::uint64_t seed, double level = 0.99);

// CSV interchange.
void write_ar_csv(std::ostream& out, const ARPath& path);
/// Reads a "k,x" series; throws ConfigError on malformed input.
std::vector<double> read_series_csv(std::istream& in);
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

}  // namespace selfnorm
