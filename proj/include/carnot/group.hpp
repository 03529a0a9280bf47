#pragma once

#include "carnot/algebra.hpp"

#include <memory>

namespace carnot {

/// Point of the group in exponential coordinates of the first kind:
/// g = exp(sum_i coords_i X_i).
struct GroupElement {
  Eigen::VectorXd coords;

  static GroupElement identity(int n) { return {Eigen::VectorXd::Zero(n)}; }
  int dim() const noexcept { return static_cast<int>(coords.size()); }
};

/// Right-invariant co-vector, stored through its values lambda(X_i) at the
/// identity.
struct Covector {
  Eigen::VectorXd coeffs;

  int dim() const noexcept { return static_cast<int>(coeffs.size()); }
};

/// Covector norm N(lambda) = sum_i |lambda(X_i)|.
double covector_norm(const Covector& lambda);

/// Carnot group of a stratified algebra of step at most 6.
///
/// All maps are written in exponential coordinates of the first kind, where
/// dilations are diagonal, the inverse is negation, and the BCH series is a
/// finite sum of nested brackets of length at most s.
class CarnotGroup {
 public:
  static constexpr int kMaxStep = 6;

  explicit CarnotGroup(StratifiedAlgebra algebra);

  const StratifiedAlgebra& algebra() const noexcept { return *algebra_; }
  int dim() const noexcept { return algebra_->dim(); }
  int step() const noexcept { return algebra_->step(); }

  GroupElement identity() const { return GroupElement::identity(dim()); }
  GroupElement inverse(const GroupElement& g) const;
  GroupElement multiply(const GroupElement& g, const GroupElement& h) const;
  GroupElement dilate(double tau, const GroupElement& g) const;

  /// Ad_g = exp(ad_x), x = log g.
  Matrix adjoint(const GroupElement& g) const;

  /// Differential at the identity of h -> g h (left) and h -> h g (right).
  Matrix left_jacobian(const GroupElement& g) const;
  Matrix right_jacobian(const GroupElement& g) const;

  /// d/dtau delta_tau(g) at tau = 1.
  Eigen::VectorXd dilation_field(const GroupElement& g) const;

  /// Coefficients P_i(g) of the dilation field in the right-invariant frame:
  /// dilation_field(g) = sum_i P_i(g) X_i^dagger(g).
  Eigen::VectorXd dilation_field_coefficients(const GroupElement& g) const;

  /// max_i |g_i|^(1/d_i); bi-Lipschitz to the distance from the identity.
  double homogeneous_quasinorm(const GroupElement& g) const;

  /// Whether g commutes with every element (ad_{log g} = 0).
  bool is_central(const GroupElement& g, double tol = 0.0) const;

 private:
  void check(const GroupElement& g, const char* what) const;
  /// sum_k coeffs[k] * ad^k, truncated by nilpotency.
  Matrix ad_series(const GroupElement& g, std::span<const double> coeffs) const;

  std::shared_ptr<const StratifiedAlgebra> algebra_;
};

}  // namespace carnot
