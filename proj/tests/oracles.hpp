#pragma once

// Reference computations that do not go through the library's BCH, ad-series
// or control selection code.

#include "carnot/group.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <random>

namespace oracle {

// Faithful matrix representation of the filiform algebra of step s
// (basis X_1, Y_1..Y_s, [X_1, Y_i] = Y_{i+1}) by (s+1)x(s+1) strictly upper
// triangular matrices: X_1 -> sum_{k=2}^{s} E_{k,k+1}, Y_i -> (-1)^(i+1) E_{1,i+1}.
// Heisenberg is the case s = 2.
struct FiliformRep {
  int s;

  Eigen::MatrixXd encode(const Eigen::VectorXd& x) const {
    const int d = s + 1;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
    for (int k = 1; k < s; ++k) m(k, k + 1) = x(0);
    for (int i = 1; i <= s; ++i) m(0, i) = (i % 2 == 1 ? 1.0 : -1.0) * x(i);
    return m;
  }

  Eigen::VectorXd decode(const Eigen::MatrixXd& m) const {
    Eigen::VectorXd x(s + 1);
    x(0) = s >= 2 ? m(1, 2) : 0.0;
    for (int i = 1; i <= s; ++i) x(i) = (i % 2 == 1 ? 1.0 : -1.0) * m(0, i);
    return x;
  }
};

// exp and log of nilpotent matrices are finite sums.
inline Eigen::MatrixXd nil_exp(const Eigen::MatrixXd& a) {
  const auto d = a.rows();
  Eigen::MatrixXd result = Eigen::MatrixXd::Identity(d, d);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(d, d);
  for (int k = 1; k <= d; ++k) {
    term = term * a / static_cast<double>(k);
    result += term;
  }
  return result;
}

inline Eigen::MatrixXd nil_log(const Eigen::MatrixXd& g) {
  const auto d = g.rows();
  const Eigen::MatrixXd n = g - Eigen::MatrixXd::Identity(d, d);
  Eigen::MatrixXd result = Eigen::MatrixXd::Zero(d, d);
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(d, d);
  for (int k = 1; k <= d; ++k) {
    power = power * n;
    result += ((k % 2 == 1) ? 1.0 : -1.0) * power / static_cast<double>(k);
  }
  return result;
}

inline Eigen::VectorXd filiform_product(int s, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const FiliformRep rep{s};
  return rep.decode(nil_log(nil_exp(rep.encode(x)) * nil_exp(rep.encode(y))));
}

// Ad_g y computed as G y G^{-1} in the representation.
inline Eigen::VectorXd filiform_adjoint_apply(int s, const Eigen::VectorXd& g, const Eigen::VectorXd& y) {
  const FiliformRep rep{s};
  const Eigen::MatrixXd G = nil_exp(rep.encode(g));
  const Eigen::MatrixXd Ginv = nil_exp(-rep.encode(g));
  return rep.decode(G * rep.encode(y) * Ginv);
}

// Heisenberg group law as printed in the source text.
inline Eigen::Vector3d heisenberg_product(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  return {a(0) + b(0), a(1) + b(1), a(2) + b(2) - 0.5 * (b(0) * a(1) - a(0) * b(1))};
}

// Lift of the circle of radius 1/(2 pi N) travelled N times, unit speed.
inline Eigen::Vector3d heisenberg_circle(int N, double t) {
  const double w = 2.0 * std::numbers::pi * N;
  return {(std::cos(w * t) - 1.0) / w, std::sin(w * t) / w, (w * t - std::sin(w * t)) / (2.0 * w * w)};
}

inline Eigen::Vector2d heisenberg_circle_velocity(int N, double t) {
  const double w = 2.0 * std::numbers::pi * N;
  return {-std::sin(w * t), std::cos(w * t)};
}

// Integrates g' = J(g) v for a fixed vector v with many small RK4 steps,
// J given by a callable. Used to cross-check products against flows.
template <class Field>
Eigen::VectorXd flow(Field&& f, Eigen::VectorXd x, double horizon, int steps) {
  const double h = horizon / steps;
  for (int k = 0; k < steps; ++k) {
    const Eigen::VectorXd k1 = f(x);
    const Eigen::VectorXd k2 = f(x + 0.5 * h * k1);
    const Eigen::VectorXd k3 = f(x + 0.5 * h * k2);
    const Eigen::VectorXd k4 = f(x + h * k3);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return x;
}

inline Eigen::VectorXd random_vector(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = dist(rng);
  return v;
}

// Brute force of the defining inequality of the sub-differential of
// E = ||.||^2 / 2 at v: a(w - v) <= E(w) - E(v) for all w on a grid of
// [-radius, radius]^m with the given spacing. Returns the worst violation.
template <class Norm>
double subdifferential_violation(Norm&& norm, const Eigen::VectorXd& a, const Eigen::VectorXd& v, double radius,
                                 double spacing) {
  const int m = static_cast<int>(v.size());
  const int per_axis = static_cast<int>(std::lround(2.0 * radius / spacing)) + 1;
  const double ev = 0.5 * norm(v) * norm(v);
  double worst = -INFINITY;
  Eigen::VectorXd w(m);
  std::vector<int> idx(static_cast<std::size_t>(m), 0);
  while (true) {
    for (int i = 0; i < m; ++i) w(i) = -radius + spacing * idx[static_cast<std::size_t>(i)];
    const double nw = norm(w);
    worst = std::max(worst, a.dot(w - v) - (0.5 * nw * nw - ev));
    int i = 0;
    while (i < m && ++idx[static_cast<std::size_t>(i)] == per_axis) idx[static_cast<std::size_t>(i++)] = 0;
    if (i == m) break;
  }
  return worst;
}

}  // namespace oracle
