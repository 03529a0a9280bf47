#pragma once

#include "carnot/group.hpp"

#include <string>
#include <vector>

namespace carnot {

/// u(t) in V_1, in the adapted basis.
using ControlValue = Eigen::VectorXd;

enum class NormKind { euclidean, l1, linfty, polyhedral };

std::string to_string(NormKind kind);
NormKind norm_kind_from_string(const std::string& name);

/// Left-invariant norm on the first stratum.
///
/// A polyhedral norm is ||v|| = max_k a_k(v) over a symmetric, spanning set of
/// facet functionals a_k. Its unit ball is a polytope whose vertices are
/// enumerated at construction; dual norms and optimal faces are taken over
/// those vertices.
class NormSpec {
 public:
  NormSpec(NormKind kind, int horizontal_dim, std::vector<Eigen::VectorXd> facets = {});

  static NormSpec euclidean(int m) { return NormSpec(NormKind::euclidean, m); }
  static NormSpec l1(int m) { return NormSpec(NormKind::l1, m); }
  static NormSpec linfty(int m) { return NormSpec(NormKind::linfty, m); }
  static NormSpec polyhedral(std::vector<Eigen::VectorXd> facets);

  NormKind kind() const noexcept { return kind_; }
  int horizontal_dim() const noexcept { return m_; }
  const std::vector<Eigen::VectorXd>& facets() const noexcept { return facets_; }
  /// Vertices of the unit ball (polyhedral only).
  const std::vector<Eigen::VectorXd>& vertices() const noexcept { return vertices_; }

  double norm(const ControlValue& v) const;
  /// ||a||_* = max_{||v|| <= 1} a(v).
  double dual_norm(const Eigen::VectorXd& a) const;

 private:
  void check(const Eigen::VectorXd& v) const;

  NormKind kind_;
  int m_;
  std::vector<Eigen::VectorXd> facets_;
  std::vector<Eigen::VectorXd> vertices_;
};

/// E(v) = ||v||^2 / 2.
double energy(const NormSpec& ns, const ControlValue& v);

/// a belongs to the sub-differential of E at v, tested through the dual-norm
/// characterization a(v) = ||v||^2 and ||a||_* = ||v||.
bool in_subdifferential(const NormSpec& ns, const Eigen::VectorXd& a, const ControlValue& v,
                        double tol = 1e-10);

/// The selected element of the sub-differential of E* = ||.||_*^2 / 2 at eta:
/// ||eta||_* times the mean of the vertices of the face of the unit ball on
/// which eta attains its maximum. For the euclidean norm this is eta itself.
ControlValue dual_energy_gradient(const NormSpec& ns, const Eigen::VectorXd& eta);

/// eta = (lambda o Ad_g) restricted to V_1.
Eigen::VectorXd horizontal_covector(const CarnotGroup& group, const Covector& lambda,
                                    const GroupElement& g);

/// Control u(g) solving lambda o Ad_g in the sub-differential of E at u.
ControlValue extract_control(const CarnotGroup& group, const NormSpec& ns, const Covector& lambda,
                             const GroupElement& g);

/// alpha * lambda; throws InputError unless alpha > 0.
Covector rescale_covector(const Covector& lambda, double alpha);

}  // namespace carnot
