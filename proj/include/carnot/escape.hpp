#pragma once

#include "carnot/integrator.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace carnot {

/// Escape slopes may undershoot 1/s by this much.
inline constexpr double kSlopeTolerance = 0.05;
/// A trace "returns" if D drops below this fraction of its running maximum
/// after first exceeding 1.
inline constexpr double kReturnFraction = 0.5;

struct CovectorSampling {
  int count = 0;
  std::uint64_t seed = 0;
};

struct ExperimentConfig {
  std::string algebra = "heisenberg";
  NormKind norm_kind = NormKind::euclidean;
  std::vector<Eigen::VectorXd> facets;
  /// Explicit covectors; used when `sampling` is empty.
  std::vector<Eigen::VectorXd> covectors;
  std::optional<CovectorSampling> sampling;
  double horizon = 100.0;
  double step = 1e-2;
  std::string out_dir = ".";
  /// Spacing of the rows written to CSV files (0: every sample).
  double sample_dt = 0.1;
  /// Worker threads for independent covector runs (0: hardware concurrency).
  int threads = 0;

  /// Throws InputError on T <= 0, h <= 0, h > T, or no covectors.
  void check() const;
};

ExperimentConfig parse_config_json(std::string_view text);
ExperimentConfig load_config_file(const std::string& path);

NormSpec make_norm(const ExperimentConfig& cfg, int horizontal_dim);

/// Covectors uniform on the sphere N(lambda) = 1: uniform point of the
/// simplex (normalized exponential draws) with independent random signs.
std::vector<Covector> sample_unit_covectors(int dim, int count, std::uint64_t seed);
std::vector<Covector> resolve_covectors(const ExperimentConfig& cfg, int dim);

enum class RunStatus { ok, constant, no_escape_regime, overflow };
std::string to_string(RunStatus status);

/// Least-squares slope of log D against log t over the samples with
/// t in [horizon / 10, horizon] and D > 1.
struct SlopeFit {
  std::optional<double> slope;
  std::size_t points = 0;
  double window_start = 0.0;
};
SlopeFit fit_escape_slope(std::span<const double> times, std::span<const double> distances, double horizon);

struct CovectorEscape {
  int index = 0;
  Covector lambda;
  double covector_norm = 0.0;
  RunStatus status = RunStatus::ok;
  std::string message;
  std::optional<double> slope;
  std::size_t fit_points = 0;
  /// min of D(t) / t^(1/s) over the fit window.
  std::optional<double> c_emp;
  /// First sample time with D > 1.
  std::optional<double> escape_time;
  /// min over t after escape_time of D(t) / max_{t' <= t} D(t').
  std::optional<double> min_return_ratio;
  double d_max = 0.0;
  std::vector<double> times;
  std::vector<double> distances;
};

struct EscapeReport {
  std::string algebra;
  int step = 0;
  double horizon = 0.0;
  std::vector<CovectorEscape> runs;
  std::optional<double> min_slope;
  std::optional<double> median_slope;
  /// min over runs of c_emp * N(lambda)^(1/s): the proxy escape constant.
  std::optional<double> min_scaled_constant;

  double slope_floor() const { return 1.0 / step - kSlopeTolerance; }
  bool slopes_pass() const;
  /// No run returns within kReturnFraction of its running maximum.
  bool no_return_pass() const;
  bool passed() const { return slopes_pass() && no_return_pass(); }
};

EscapeReport run_escape(const ExperimentConfig& cfg);
/// Same analysis on caller-supplied covectors over one group and norm.
EscapeReport run_escape(const CarnotGroup& group, const NormSpec& ns, std::span<const Covector> covectors,
                        double horizon, double step, double sample_dt, int threads = 0);
CovectorEscape analyze_escape(const GeodesicTrace& trace, int index, double sample_dt);

/// cov_idx,t,D,bound_rhs with bound_rhs = eps' (t / N)^(1/s) - 1.
void write_escape_csv(std::ostream& out, const EscapeReport& report);
/// cov_idx,N,status,slope,fit_points,c_emp,escape_time,min_return_ratio
void write_escape_summary_csv(std::ostream& out, const EscapeReport& report);

struct CovectorGrowth {
  int index = 0;
  Covector lambda;
  RunStatus status = RunStatus::ok;
  std::string message;
  /// sup over the trace of lambda(dilation_field) / (N max(D, D^s)).
  double sup_ratio = 0.0;
  std::vector<double> times;
  std::vector<double> ratios;
};

struct GrowthReport {
  std::string algebra;
  int step = 0;
  double horizon = 0.0;
  std::vector<CovectorGrowth> runs;
  /// max of sup_ratio over runs: the proxy constant C'.
  double proxy_constant = 0.0;
  bool all_finite() const;
};

/// lambda(dilation_field(g)) / (N(lambda) max(D, D^s)); nullopt at D = 0.
std::optional<double> growth_ratio(const CarnotGroup& group, const Covector& lambda, const GroupElement& g);

GrowthReport run_growth_bound(const ExperimentConfig& cfg);
GrowthReport run_growth_bound(const CarnotGroup& group, const NormSpec& ns, std::span<const Covector> covectors,
                              double horizon, double step, double sample_dt, int threads = 0);
void write_growth_csv(std::ostream& out, const GrowthReport& report);

/// Relative residual threshold of the end-point identity check.
inline constexpr double kPmpTolerance = 1e-5;

struct PmpCheck {
  int index = 0;
  Covector lambda;
  RunStatus status = RunStatus::ok;
  std::string message;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
};

struct PmpReport {
  std::string algebra;
  double horizon = 0.0;
  std::vector<PmpCheck> runs;
  double max_residual = 0.0;
  bool passed() const;
};

PmpReport run_pmp_check(const ExperimentConfig& cfg);
PmpReport run_pmp_check(const CarnotGroup& group, const NormSpec& ns, std::span<const Covector> covectors,
                        double horizon, double step, int threads = 0);
/// cov_idx,N,status,lhs,rhs,residual
void write_pmp_csv(std::ostream& out, const PmpReport& report);

struct HeisenbergComparison {
  int winding = 1;
  double step = 0.0;
  Covector lambda;
  Eigen::Vector3d closed_end;
  Eigen::Vector3d integrated_end;
  /// max over samples of the coordinate deviation from the closed form.
  double max_deviation = 0.0;
  double end_error = 0.0;
  /// max |speed - 1| of the closed form, from its analytic derivative.
  double closed_speed_deviation = 0.0;
  /// max |speed - 1| of the integrated control.
  double trace_speed_deviation = 0.0;
  double pmp_residual = 0.0;
  bool passed = false;
};

/// Closed-form point of the winding-circle lift with N turns.
Eigen::Vector3d heisenberg_circle_point(int winding, double t);
/// The covector (0, 1, 2 pi N) that generates it from the identity.
Covector heisenberg_circle_covector(int winding);

HeisenbergComparison example_heisenberg(int winding, double step);

struct FiliformScanRow {
  double top_coefficient = 0.0;
  double horizon = 0.0;
  CovectorEscape escape;
};

struct FiliformReport {
  int step = 0;
  int translations = 0;
  /// max over m <= translations and samples of |trace(c_m g0) - c_m trace(g0)|.
  double central_residual = 0.0;
  std::vector<FiliformScanRow> scan;
  bool passed = false;
};

struct FiliformOptions {
  std::uint64_t seed = 1;
  double horizon = 100.0;
  double step = 1e-2;
  /// central-translation check horizon
  double check_horizon = 5.0;
  int scan_count = 3;
  double sample_dt = 0.1;
};

FiliformReport example_filiform(int step, int translations, const FiliformOptions& options = {});

}  // namespace carnot
