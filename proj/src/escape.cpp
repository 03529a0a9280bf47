#include "carnot/escape.hpp"

#include "carnot/error.hpp"
#include "carnot/format.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>
#include <thread>

namespace carnot {

namespace {

// Runs fn(i) for i in [0, count) on a small pool. Results are written by
// index, so the outcome does not depend on scheduling.
template <class F>
void parallel_for(int count, int threads, F&& fn) {
  int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, std::max(1, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t stride_for(double sample_dt, double h) {
  if (sample_dt <= 0.0) return 1;
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(sample_dt / h)));
}

bool is_constant_trace(const GeodesicTrace& trace) {
  return trace.lambda.coeffs.cwiseAbs().maxCoeff() == 0.0 || trace.controls.cwiseAbs().maxCoeff() == 0.0;
}

std::optional<double> median(std::vector<double> v) {
  if (v.empty()) return std::nullopt;
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

std::string optional_field(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

}  // namespace

std::string to_string(RunStatus status) {
  switch (status) {
    case RunStatus::ok: return "ok";
    case RunStatus::constant: return "constant";
    case RunStatus::no_escape_regime: return "no-escape-regime";
    case RunStatus::overflow: return "overflow";
  }
  return "unknown";
}

std::vector<Covector> sample_unit_covectors(int dim, int count, std::uint64_t seed) {
  if (dim <= 0 || count < 0) throw InputError("invalid covector sampling request");
  std::mt19937_64 rng(seed);
  std::vector<Covector> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int c = 0; c < count; ++c) {
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) v(i) = -std::log1p(-uniform01(rng));
    const std::uint64_t signs = rng();
    v /= v.sum();
    for (int i = 0; i < dim; ++i) {
      if ((signs >> i) & 1u) v(i) = -v(i);
    }
    out.push_back({v});
  }
  return out;
}

std::vector<Covector> resolve_covectors(const ExperimentConfig& cfg, int dim) {
  if (cfg.sampling) return sample_unit_covectors(dim, cfg.sampling->count, cfg.sampling->seed);
  std::vector<Covector> out;
  for (const auto& c : cfg.covectors) {
    if (c.size() != dim) {
      throw InputError("covector of dimension " + std::to_string(c.size()) + " given for a group of dimension " +
                       std::to_string(dim));
    }
    out.push_back({c});
  }
  return out;
}

SlopeFit fit_escape_slope(std::span<const double> times, std::span<const double> distances, double horizon) {
  SlopeFit fit;
  fit.window_start = horizon / 10.0;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double t = times[k];
    if (t < fit.window_start || t > horizon || t <= 0.0 || !(distances[k] > 1.0)) continue;
    const double x = std::log(t);
    const double y = std::log(distances[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++fit.points;
  }
  if (fit.points < 2) return fit;
  const double n = static_cast<double>(fit.points);
  const double denom = n * sxx - sx * sx;
  if (denom <= 0.0) return fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  return fit;
}

CovectorEscape analyze_escape(const GeodesicTrace& trace, int index, double sample_dt) {
  const auto& group = trace.group;
  const int s = group.step();
  CovectorEscape run;
  run.index = index;
  run.lambda = trace.lambda;
  run.covector_norm = covector_norm(trace.lambda);

  std::vector<double> d(trace.size());
  for (std::size_t k = 0; k < trace.size(); ++k) d[k] = group.homogeneous_quasinorm(trace.point(k));
  run.d_max = *std::max_element(d.begin(), d.end());

  const std::size_t stride = stride_for(sample_dt, trace.step);
  for (std::size_t k = 0; k < trace.size(); ++k) {
    if (k % stride == 0 || k + 1 == trace.size()) {
      run.times.push_back(trace.times[k]);
      run.distances.push_back(d[k]);
    }
  }

  if (is_constant_trace(trace)) {
    run.status = RunStatus::constant;
    run.message = "zero control: constant curve";
    return run;
  }

  double running_max = 0.0;
  for (std::size_t k = 0; k < trace.size(); ++k) {
    running_max = std::max(running_max, d[k]);
    if (!run.escape_time && d[k] > 1.0) run.escape_time = trace.times[k];
    if (run.escape_time && trace.times[k] > *run.escape_time) {
      const double ratio = d[k] / running_max;
      run.min_return_ratio = run.min_return_ratio ? std::min(*run.min_return_ratio, ratio) : ratio;
    }
  }

  const SlopeFit fit = fit_escape_slope(trace.times, d, trace.horizon());
  run.slope = fit.slope;
  run.fit_points = fit.points;
  if (!fit.slope) {
    run.status = RunStatus::no_escape_regime;
    run.message = "D(t) <= 1 on the fit window";
    return run;
  }
  for (std::size_t k = 0; k < trace.size(); ++k) {
    const double t = trace.times[k];
    if (t < fit.window_start || !(d[k] > 1.0)) continue;
    const double c = d[k] / std::pow(t, 1.0 / s);
    run.c_emp = run.c_emp ? std::min(*run.c_emp, c) : c;
  }
  return run;
}

bool EscapeReport::slopes_pass() const {
  const double floor = slope_floor();
  return std::all_of(runs.begin(), runs.end(), [&](const CovectorEscape& r) { return !r.slope || *r.slope >= floor; });
}

bool EscapeReport::no_return_pass() const {
  return std::all_of(runs.begin(), runs.end(), [](const CovectorEscape& r) {
    return !r.min_return_ratio || *r.min_return_ratio >= kReturnFraction;
  });
}

EscapeReport run_escape(const CarnotGroup& group, const NormSpec& ns, std::span<const Covector> covectors,
                        double horizon, double step, double sample_dt, int threads) {
  EscapeReport report;
  report.algebra = group.algebra().name();
  report.step = group.step();
  report.horizon = horizon;
  report.runs.resize(covectors.size());
  const GroupElement start = group.identity();

  parallel_for(static_cast<int>(covectors.size()), threads, [&](int i) {
    const auto& lambda = covectors[static_cast<std::size_t>(i)];
    try {
      const GeodesicTrace trace = integrate_normal(group, ns, lambda, start, horizon, step);
      report.runs[static_cast<std::size_t>(i)] = analyze_escape(trace, i, sample_dt);
    } catch (const IntegrationError& e) {
      auto& run = report.runs[static_cast<std::size_t>(i)];
      run.index = i;
      run.lambda = lambda;
      run.covector_norm = covector_norm(lambda);
      run.status = RunStatus::overflow;
      run.message = std::string(e.what()) + " (last valid t = " + format_double(e.last_valid_time()) + ")";
    }
  });

  std::vector<double> slopes;
  const double inv_s = 1.0 / report.step;
  for (const auto& run : report.runs) {
    if (run.status != RunStatus::ok) continue;
    slopes.push_back(*run.slope);
    if (run.c_emp) {
      const double scaled = *run.c_emp * std::pow(run.covector_norm, inv_s);
      report.min_scaled_constant = report.min_scaled_constant ? std::min(*report.min_scaled_constant, scaled) : scaled;
    }
  }
  if (!slopes.empty()) report.min_slope = *std::min_element(slopes.begin(), slopes.end());
  report.median_slope = median(slopes);
  return report;
}

EscapeReport run_escape(const ExperimentConfig& cfg) {
  cfg.check();
  const CarnotGroup group(resolve_algebra(cfg.algebra));
  const NormSpec ns = make_norm(cfg, group.algebra().horizontal_dim());
  const auto covectors = resolve_covectors(cfg, group.dim());
  return run_escape(group, ns, covectors, cfg.horizon, cfg.step, cfg.sample_dt, cfg.threads);
}

void write_escape_csv(std::ostream& out, const EscapeReport& report) {
  out << "cov_idx,t,D,bound_rhs\n";
  const double inv_s = 1.0 / report.step;
  for (const auto& run : report.runs) {
    for (std::size_t k = 0; k < run.times.size(); ++k) {
      out << run.index << ',' << format_double(run.times[k]) << ',' << format_double(run.distances[k]) << ',';
      if (report.min_scaled_constant && run.covector_norm > 0.0) {
        const double rhs = *report.min_scaled_constant * std::pow(run.times[k] / run.covector_norm, inv_s) - 1.0;
        out << format_double(rhs);
      }
      out << '\n';
    }
  }
}

void write_escape_summary_csv(std::ostream& out, const EscapeReport& report) {
  out << "cov_idx,N,status,slope,fit_points,c_emp,escape_time,min_return_ratio\n";
  for (const auto& run : report.runs) {
    out << run.index << ',' << format_double(run.covector_norm) << ',' << to_string(run.status) << ','
        << optional_field(run.slope) << ',' << run.fit_points << ',' << optional_field(run.c_emp) << ','
        << optional_field(run.escape_time) << ',' << optional_field(run.min_return_ratio) << '\n';
  }
}

std::optional<double> growth_ratio(const CarnotGroup& group, const Covector& lambda, const GroupElement& g) {
  const double d = group.homogeneous_quasinorm(g);
  const double n = covector_norm(lambda);
  if (d == 0.0 || n == 0.0) return std::nullopt;
  const double lhs = lambda.coeffs.dot(group.dilation_field_coefficients(g));
  return lhs / (n * std::max(d, std::pow(d, group.step())));
}

bool GrowthReport::all_finite() const {
  return std::all_of(runs.begin(), runs.end(),
                     [](const CovectorGrowth& r) { return r.status != RunStatus::overflow && std::isfinite(r.sup_ratio); });
}

GrowthReport run_growth_bound(const CarnotGroup& group, const NormSpec& ns, std::span<const Covector> covectors,
                              double horizon, double step, double sample_dt, int threads) {
  GrowthReport report;
  report.algebra = group.algebra().name();
  report.step = group.step();
  report.horizon = horizon;
  report.runs.resize(covectors.size());
  const GroupElement start = group.identity();

  parallel_for(static_cast<int>(covectors.size()), threads, [&](int i) {
    auto& run = report.runs[static_cast<std::size_t>(i)];
    run.index = i;
    run.lambda = covectors[static_cast<std::size_t>(i)];
    try {
      const GeodesicTrace trace = integrate_normal(group, ns, run.lambda, start, horizon, step);
      if (is_constant_trace(trace)) {
        run.status = RunStatus::constant;
        run.message = "zero control: constant curve";
        return;
      }
      const std::size_t stride = stride_for(sample_dt, trace.step);
      for (std::size_t k = 0; k < trace.size(); ++k) {
        const auto ratio = growth_ratio(group, run.lambda, trace.point(k));
        if (!ratio) continue;
        run.sup_ratio = std::max(run.sup_ratio, *ratio);
        if (k % stride == 0 || k + 1 == trace.size()) {
          run.times.push_back(trace.times[k]);
          run.ratios.push_back(*ratio);
        }
      }
    } catch (const IntegrationError& e) {
      run.status = RunStatus::overflow;
      run.message = e.what();
    }
  });
  for (const auto& run : report.runs) {
    if (run.status == RunStatus::ok) report.proxy_constant = std::max(report.proxy_constant, run.sup_ratio);
  }
  return report;
}

GrowthReport run_growth_bound(const ExperimentConfig& cfg) {
  cfg.check();
  const CarnotGroup group(resolve_algebra(cfg.algebra));
  const NormSpec ns = make_norm(cfg, group.algebra().horizontal_dim());
  const auto covectors = resolve_covectors(cfg, group.dim());
  return run_growth_bound(group, ns, covectors, cfg.horizon, cfg.step, cfg.sample_dt, cfg.threads);
}

void write_growth_csv(std::ostream& out, const GrowthReport& report) {
  out << "cov_idx,t,ratio\n";
  for (const auto& run : report.runs) {
    for (std::size_t k = 0; k < run.times.size(); ++k) {
      out << run.index << ',' << format_double(run.times[k]) << ',' << format_double(run.ratios[k]) << '\n';
    }
  }
}

bool PmpReport::passed() const {
  return std::all_of(runs.begin(), runs.end(),
                     [](const PmpCheck& r) { return r.status != RunStatus::overflow && r.residual < kPmpTolerance; });
}

PmpReport run_pmp_check(const CarnotGroup& group, const NormSpec& ns, std::span<const Covector> covectors,
                        double horizon, double step, int threads) {
  PmpReport report;
  report.algebra = group.algebra().name();
  report.horizon = horizon;
  report.runs.resize(covectors.size());
  parallel_for(static_cast<int>(covectors.size()), threads, [&](int i) {
    auto& run = report.runs[static_cast<std::size_t>(i)];
    run.index = i;
    run.lambda = covectors[static_cast<std::size_t>(i)];
    try {
      const GeodesicTrace trace = integrate_normal(group, ns, run.lambda, group.identity(), horizon, step);
      if (is_constant_trace(trace)) run.status = RunStatus::constant;
      run.lhs = pmp_lhs(trace);
      run.rhs = pmp_rhs(trace);
      run.residual = pmp_identity_residual(group, ns, run.lambda, trace);
    } catch (const IntegrationError& e) {
      run.status = RunStatus::overflow;
      run.message = e.what();
    }
  });
  for (const auto& run : report.runs) {
    if (run.status != RunStatus::overflow) report.max_residual = std::max(report.max_residual, run.residual);
  }
  return report;
}

PmpReport run_pmp_check(const ExperimentConfig& cfg) {
  cfg.check();
  const CarnotGroup group(resolve_algebra(cfg.algebra));
  const NormSpec ns = make_norm(cfg, group.algebra().horizontal_dim());
  const auto covectors = resolve_covectors(cfg, group.dim());
  return run_pmp_check(group, ns, covectors, cfg.horizon, cfg.step, cfg.threads);
}

void write_pmp_csv(std::ostream& out, const PmpReport& report) {
  out << "cov_idx,N,status,lhs,rhs,residual\n";
  for (const auto& run : report.runs) {
    out << run.index << ',' << format_double(covector_norm(run.lambda)) << ',' << to_string(run.status) << ','
        << format_double(run.lhs) << ',' << format_double(run.rhs) << ',' << format_double(run.residual) << '\n';
  }
}

Eigen::Vector3d heisenberg_circle_point(int winding, double t) {
  const double w = 2.0 * std::numbers::pi * winding;
  const double pn = std::numbers::pi * winding;
  return {(std::cos(w * t) - 1.0) / w, std::sin(w * t) / w, (w * t - std::sin(w * t)) / (8.0 * pn * pn)};
}

Covector heisenberg_circle_covector(int winding) {
  return {Eigen::Vector3d(0.0, 1.0, 2.0 * std::numbers::pi * winding)};
}

HeisenbergComparison example_heisenberg(int winding, double step) {
  if (winding < 1) throw InputError("winding number must be at least 1");
  const CarnotGroup group(builtin::heisenberg());
  const NormSpec ns = NormSpec::euclidean(2);
  HeisenbergComparison cmp;
  cmp.winding = winding;
  cmp.lambda = heisenberg_circle_covector(winding);

  const GeodesicTrace trace = integrate_normal(group, ns, cmp.lambda, group.identity(), 1.0, step);
  cmp.step = trace.step;
  for (std::size_t k = 0; k < trace.size(); ++k) {
    const Eigen::Vector3d exact = heisenberg_circle_point(winding, trace.times[k]);
    cmp.max_deviation = std::max(cmp.max_deviation, (trace.points.col(static_cast<Eigen::Index>(k)) - exact).cwiseAbs().maxCoeff());
    cmp.trace_speed_deviation = std::max(cmp.trace_speed_deviation, std::abs(ns.norm(trace.control(k)) - 1.0));
    // speed of the closed form by central differences of its planar part
    constexpr double fd = 1e-5;
    const Eigen::Vector3d ahead = heisenberg_circle_point(winding, trace.times[k] + fd);
    const Eigen::Vector3d behind = heisenberg_circle_point(winding, trace.times[k] - fd);
    const double speed = (ahead.head<2>() - behind.head<2>()).norm() / (2.0 * fd);
    cmp.closed_speed_deviation = std::max(cmp.closed_speed_deviation, std::abs(speed - 1.0));
  }
  cmp.closed_end = heisenberg_circle_point(winding, 1.0);
  cmp.integrated_end = trace.points.col(static_cast<Eigen::Index>(trace.size() - 1));
  cmp.end_error = (cmp.integrated_end - cmp.closed_end).cwiseAbs().maxCoeff();
  cmp.pmp_residual = pmp_identity_residual(group, ns, cmp.lambda, trace);

  const Eigen::Vector3d expected_end(0.0, 0.0, 1.0 / (4.0 * std::numbers::pi * winding));
  cmp.passed = (cmp.closed_end - expected_end).cwiseAbs().maxCoeff() <= 1e-15 && cmp.max_deviation < 1e-6 &&
               cmp.end_error < 1e-6 && cmp.closed_speed_deviation < 1e-6;
  return cmp;
}

FiliformReport example_filiform(int s, int translations, const FiliformOptions& options) {
  if (s < 2) throw InputError("filiform step must be at least 2");
  if (translations < 1) throw InputError("need at least one central translation");
  const CarnotGroup group(builtin::filiform(s));
  const NormSpec ns = NormSpec::euclidean(2);
  const int n = group.dim();
  FiliformReport report;
  report.step = s;
  report.translations = translations;

  // central translations exp(m Y_s) act on normal curves sample by sample
  const Covector lambda = sample_unit_covectors(n, 1, options.seed).front();
  std::mt19937_64 rng(options.seed ^ 0x9e3779b97f4a7c15ull);
  GroupElement g0 = group.identity();
  for (int i = 0; i < n; ++i) g0.coords(i) = uniform01(rng) - 0.5;
  const GeodesicTrace base = integrate_normal(group, ns, lambda, g0, options.check_horizon, options.step);
  for (int m = 1; m <= translations; ++m) {
    GroupElement c = group.identity();
    c.coords(n - 1) = m;
    const GeodesicTrace moved = integrate_normal(group, ns, lambda, group.multiply(c, g0), options.check_horizon, options.step);
    for (std::size_t k = 0; k < base.size(); ++k) {
      const GroupElement expected = group.multiply(c, base.point(k));
      report.central_residual =
          std::max(report.central_residual, (moved.points.col(static_cast<Eigen::Index>(k)) - expected.coords).cwiseAbs().maxCoeff());
    }
  }

  // winding family: lambda = (0, 1, K) for s = 2, which is the circle lift;
  // for s >= 3 the horizontal part is X_1, since (0, 1, 0, ..., K) is a
  // relative equilibrium there and gives a straight line.
  bool slopes_ok = true;
  for (int j = 0; j < options.scan_count; ++j) {
    const double k_top = 2.0 * std::numbers::pi * std::pow(4.0, j);
    Covector scan{Eigen::VectorXd::Zero(n)};
    scan.coeffs(s == 2 ? 1 : 0) = 1.0;
    scan.coeffs(n - 1) = k_top;
    const double horizon = options.horizon * std::pow(4.0, j);
    const double h = std::min(options.step, 0.05 / k_top);
    FiliformScanRow row;
    row.top_coefficient = scan.coeffs(n - 1);
    row.horizon = horizon;
    row.escape = analyze_escape(integrate_normal(group, ns, scan, group.identity(), horizon, h), j, options.sample_dt);
    if (row.escape.slope && *row.escape.slope < 1.0 / s - kSlopeTolerance) slopes_ok = false;
    report.scan.push_back(std::move(row));
  }
  report.passed = report.central_residual < 1e-9 && slopes_ok;
  return report;
}

}  // namespace carnot
