#pragma once

#include "carnot/control.hpp"

#include <functional>
#include <iosfwd>
#include <vector>

namespace carnot {

/// Time-sampled normal curve with its control and diagnostics.
///
/// Sample k sits at t_k = k * step; column k of `points` is gamma(t_k) and
/// column k of `controls` is u(t_k). `local_errors[k]` estimates the local
/// error of the step from t_k to t_{k+1}.
struct GeodesicTrace {
  CarnotGroup group;
  NormSpec norm;
  Covector lambda;
  GroupElement start;
  double step = 0.0;
  std::vector<double> times;
  Matrix points;
  Matrix controls;
  std::vector<double> local_errors;

  std::size_t size() const noexcept { return times.size(); }
  GroupElement point(std::size_t k) const { return {points.col(static_cast<Eigen::Index>(k))}; }
  ControlValue control(std::size_t k) const { return controls.col(static_cast<Eigen::Index>(k)); }
  double horizon() const noexcept { return times.empty() ? 0.0 : times.back(); }
};

/// Integrates gamma' = left_jacobian(gamma) u(gamma), u = extract_control,
/// from `start` over [0, horizon] with classical RK4.
///
/// The step is shrunk, if needed, so that a whole number of steps ends at the
/// horizon. Throws IntegrationError on a non-finite state.
GeodesicTrace integrate_normal(const CarnotGroup& group, const NormSpec& ns, const Covector& lambda,
                               const GroupElement& start, double horizon, double step);

/// Piecewise-linear control on a uniform grid of [0, 1].
class ControlSignal {
 public:
  /// Column k of `values` is the control at t = k / (cols - 1).
  explicit ControlSignal(Matrix values);

  static ControlSignal sample(int nodes, int horizontal_dim,
                              const std::function<ControlValue(double)>& f);

  int nodes() const noexcept { return static_cast<int>(values_.cols()); }
  int horizontal_dim() const noexcept { return static_cast<int>(values_.rows()); }
  const Matrix& values() const noexcept { return values_; }
  double spacing() const noexcept { return 1.0 / (nodes() - 1); }

  ControlValue at(double t) const;
  /// Euclidean L^2 norm on [0, 1] by the trapezoidal rule.
  double l2_norm() const;

  ControlSignal operator*(double a) const { return ControlSignal(values_ * a); }
  ControlSignal operator+(const ControlSignal& o) const;
  ControlSignal operator-(const ControlSignal& o) const;

 private:
  Matrix values_;
};

/// gamma_u(1) for gamma' = left_jacobian(gamma) u(t), gamma(0) = start. Each
/// grid interval is split so that RK4 steps do not exceed `max_step`.
GroupElement end_point(const CarnotGroup& group, const ControlSignal& u, const GroupElement& start,
                       double max_step = 1e-3);

/// Central difference of the end-point map in direction v, in exponential
/// coordinates, with eps = 1e-5 (1 + ||u||_{L^2}).
Eigen::VectorXd end_point_directional(const CarnotGroup& group, const ControlSignal& u,
                                      const ControlSignal& v, const GroupElement& start,
                                      double max_step = 1e-3);

/// lambda(dEnd_u u) evaluated as lambda(dilation_field(gamma(T))) for the
/// rescaled control on [0, 1], i.e. T * lambda(P(gamma(T))).
double pmp_lhs(const GeodesicTrace& trace);
/// ||u_T||^2_{L^2} of the rescaled control: T * int_0^T ||u||^2 dt by trapezoid.
double pmp_rhs(const GeodesicTrace& trace);

/// |lambda(dEnd_u u) - ||u||^2_{L^2}| / max(1, ||u||^2_{L^2}) for a trace
/// started at the identity. The covector and norm must be the ones used to
/// produce the trace.
double pmp_identity_residual(const CarnotGroup& group, const NormSpec& ns, const Covector& lambda,
                             const GeodesicTrace& trace);

/// CSV with header t,g_1..g_n,u_1..u_m1,quasinorm,speed. `stride` keeps every
/// stride-th sample plus the last one.
void write_trace_csv(std::ostream& out, const GeodesicTrace& trace, std::size_t stride = 1);

}  // namespace carnot
