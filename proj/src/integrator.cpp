#include "carnot/integrator.hpp"

#include "carnot/error.hpp"
#include "carnot/format.hpp"

#include <cmath>
#include <ostream>

namespace carnot {

namespace {

int step_count(double horizon, double step) {
  const double ratio = horizon / step;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio)) return std::max(1, static_cast<int>(nearest));
  return static_cast<int>(std::ceil(ratio));
}

Eigen::VectorXd horizontal_velocity(const CarnotGroup& group, const Eigen::VectorXd& x, const ControlValue& u) {
  const int m1 = static_cast<int>(u.size());
  return group.left_jacobian({x}).leftCols(m1) * u;
}

bool same_norm(const NormSpec& a, const NormSpec& b) {
  if (a.kind() != b.kind() || a.horizontal_dim() != b.horizontal_dim()) return false;
  if (a.facets().size() != b.facets().size()) return false;
  for (std::size_t k = 0; k < a.facets().size(); ++k) {
    if (a.facets()[k] != b.facets()[k]) return false;
  }
  return true;
}

}  // namespace

GeodesicTrace integrate_normal(const CarnotGroup& group, const NormSpec& ns, const Covector& lambda,
                               const GroupElement& start, double horizon, double step) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw InputError("horizon must be positive");
  if (!(step > 0.0) || step > horizon) throw InputError("step must satisfy 0 < h <= T");
  if (lambda.dim() != group.dim()) throw InputError("covector has the wrong dimension");
  if (start.dim() != group.dim()) throw InputError("start point has the wrong dimension");
  if (ns.horizontal_dim() != group.algebra().horizontal_dim()) throw InputError("norm dimension does not match dim V_1");

  const int steps = step_count(horizon, step);
  const double h = horizon / steps;
  const int n = group.dim();
  const int m1 = ns.horizontal_dim();

  GeodesicTrace trace{group, ns, lambda, start, h, {}, Matrix(n, steps + 1), Matrix(m1, steps + 1), {}};
  trace.times.resize(static_cast<std::size_t>(steps) + 1);
  trace.local_errors.resize(static_cast<std::size_t>(steps), 0.0);

  auto control_at = [&](const Eigen::VectorXd& x) { return extract_control(group, ns, lambda, {x}); };
  auto field = [&](const Eigen::VectorXd& x) { return horizontal_velocity(group, x, control_at(x)); };

  Eigen::VectorXd x = start.coords;
  ControlValue u = control_at(x);
  Eigen::VectorXd k1 = horizontal_velocity(group, x, u);
  trace.times[0] = 0.0;
  trace.points.col(0) = x;
  trace.controls.col(0) = u;

  for (int k = 0; k < steps; ++k) {
    const Eigen::VectorXd k2 = field(x + 0.5 * h * k1);
    const Eigen::VectorXd k3 = field(x + 0.5 * h * k2);
    const Eigen::VectorXd k4 = field(x + h * k3);
    const Eigen::VectorXd next = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!next.allFinite()) {
      throw IntegrationError("non-finite state while integrating normal curve", k * h);
    }
    u = control_at(next);
    const Eigen::VectorXd k5 = horizontal_velocity(group, next, u);
    // embedded third-order solution y + h (k1/6 + k2/3 + k3/3 + k5/6)
    trace.local_errors[static_cast<std::size_t>(k)] = (h / 6.0) * (k4 - k5).norm();
    x = next;
    k1 = k5;
    trace.times[static_cast<std::size_t>(k) + 1] = (k + 1) * h;
    trace.points.col(k + 1) = x;
    trace.controls.col(k + 1) = u;
  }
  return trace;
}

ControlSignal::ControlSignal(Matrix values) : values_(std::move(values)) {
  if (values_.cols() < 2) throw InputError("control signal needs at least two nodes");
  if (values_.rows() < 1) throw InputError("control signal needs a positive dimension");
  if (!values_.allFinite()) throw InputError("control signal must be finite");
}

ControlSignal ControlSignal::sample(int nodes, int horizontal_dim, const std::function<ControlValue(double)>& f) {
  if (nodes < 2) throw InputError("control signal needs at least two nodes");
  Matrix values(horizontal_dim, nodes);
  for (int k = 0; k < nodes; ++k) values.col(k) = f(static_cast<double>(k) / (nodes - 1));
  return ControlSignal(std::move(values));
}

ControlValue ControlSignal::at(double t) const {
  const double pos = std::clamp(t, 0.0, 1.0) * (nodes() - 1);
  const int k = std::min(static_cast<int>(pos), nodes() - 2);
  const double w = pos - k;
  return (1.0 - w) * values_.col(k) + w * values_.col(k + 1);
}

double ControlSignal::l2_norm() const {
  const Eigen::VectorXd sq = values_.colwise().squaredNorm().transpose();
  const double integral = spacing() * (sq.sum() - 0.5 * (sq(0) + sq(sq.size() - 1)));
  return std::sqrt(integral);
}

ControlSignal ControlSignal::operator+(const ControlSignal& o) const {
  if (o.values_.rows() != values_.rows() || o.values_.cols() != values_.cols()) {
    throw InputError("control signals live on different grids");
  }
  return ControlSignal(values_ + o.values_);
}

ControlSignal ControlSignal::operator-(const ControlSignal& o) const { return *this + o * -1.0; }

GroupElement end_point(const CarnotGroup& group, const ControlSignal& u, const GroupElement& start, double max_step) {
  if (u.horizontal_dim() != group.algebra().horizontal_dim()) throw InputError("control dimension does not match dim V_1");
  if (start.dim() != group.dim()) throw InputError("start point has the wrong dimension");
  if (!(max_step > 0.0)) throw InputError("max_step must be positive");

  const double spacing = u.spacing();
  const int sub = std::max(1, static_cast<int>(std::ceil(spacing / max_step - 1e-9)));
  const double h = spacing / sub;
  auto field = [&](const Eigen::VectorXd& x, const ControlValue& c) { return horizontal_velocity(group, x, c); };

  Eigen::VectorXd x = start.coords;
  for (int k = 0; k + 1 < u.nodes(); ++k) {
    const ControlValue a = u.values().col(k);
    const ControlValue b = u.values().col(k + 1);
    for (int j = 0; j < sub; ++j) {
      const double w0 = static_cast<double>(j) / sub;
      const double w1 = static_cast<double>(j + 1) / sub;
      const double wm = 0.5 * (w0 + w1);
      const ControlValue c0 = (1.0 - w0) * a + w0 * b;
      const ControlValue cm = (1.0 - wm) * a + wm * b;
      const ControlValue c1 = (1.0 - w1) * a + w1 * b;
      const Eigen::VectorXd k1 = field(x, c0);
      const Eigen::VectorXd k2 = field(x + 0.5 * h * k1, cm);
      const Eigen::VectorXd k3 = field(x + 0.5 * h * k2, cm);
      const Eigen::VectorXd k4 = field(x + h * k3, c1);
      x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if (!x.allFinite()) throw IntegrationError("non-finite state in end-point map", (k + w0) * spacing);
    }
  }
  return {x};
}

Eigen::VectorXd end_point_directional(const CarnotGroup& group, const ControlSignal& u, const ControlSignal& v,
                                      const GroupElement& start, double max_step) {
  const double eps = 1e-5 * (1.0 + u.l2_norm());
  const GroupElement plus = end_point(group, u + v * eps, start, max_step);
  const GroupElement minus = end_point(group, u - v * eps, start, max_step);
  return (plus.coords - minus.coords) / (2.0 * eps);
}

double pmp_lhs(const GeodesicTrace& trace) {
  const GroupElement end = trace.point(trace.size() - 1);
  return trace.horizon() * trace.lambda.coeffs.dot(trace.group.dilation_field_coefficients(end));
}

double pmp_rhs(const GeodesicTrace& trace) {
  double integral = 0.0;
  double prev = 0.0;
  for (std::size_t k = 0; k < trace.size(); ++k) {
    const double r = trace.norm.norm(trace.control(k));
    const double sq = r * r;
    if (k > 0) integral += 0.5 * (prev + sq) * (trace.times[k] - trace.times[k - 1]);
    prev = sq;
  }
  return trace.horizon() * integral;
}

double pmp_identity_residual(const CarnotGroup& group, const NormSpec& ns, const Covector& lambda,
                             const GeodesicTrace& trace) {
  if (lambda.dim() != trace.lambda.dim() || lambda.coeffs != trace.lambda.coeffs) {
    throw InputError("covector does not match the trace");
  }
  if (!same_norm(ns, trace.norm)) throw InputError("norm does not match the trace");
  if (group.algebra().constants() != trace.group.algebra().constants()) {
    throw InputError("group does not match the trace");
  }
  if (trace.start.coords.cwiseAbs().maxCoeff() != 0.0) {
    throw InputError("the end-point identity needs a trace started at the identity");
  }
  const double rhs = pmp_rhs(trace);
  return std::abs(pmp_lhs(trace) - rhs) / std::max(1.0, rhs);
}

void write_trace_csv(std::ostream& out, const GeodesicTrace& trace, std::size_t stride) {
  const int n = trace.group.dim();
  const int m1 = trace.norm.horizontal_dim();
  out << "t";
  for (int i = 1; i <= n; ++i) out << ",g_" << i;
  for (int i = 1; i <= m1; ++i) out << ",u_" << i;
  out << ",quasinorm,speed\n";
  stride = std::max<std::size_t>(stride, 1);
  for (std::size_t k = 0; k < trace.size(); ++k) {
    if (k % stride != 0 && k + 1 != trace.size()) continue;
    const GroupElement g = trace.point(k);
    const ControlValue u = trace.control(k);
    out << format_double(trace.times[k]);
    for (int i = 0; i < n; ++i) out << ',' << format_double(g.coords(i));
    for (int i = 0; i < m1; ++i) out << ',' << format_double(u(i));
    out << ',' << format_double(trace.group.homogeneous_quasinorm(g)) << ',' << format_double(trace.norm.norm(u))
        << '\n';
  }
}

}  // namespace carnot
