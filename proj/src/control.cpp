#include "carnot/control.hpp"

#include "carnot/error.hpp"

#include <algorithm>
#include <cmath>

namespace carnot {

namespace {

constexpr double kZeroCovector = 1e-14;
constexpr double kFaceTol = 1e-12;

// All k-subsets of {0..n-1}, visited in lexicographic order.
template <class F>
void for_each_subset(int n, int k, F&& f) {
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    f(idx);
    int p = k - 1;
    while (p >= 0 && idx[static_cast<std::size_t>(p)] == n - k + p) --p;
    if (p < 0) return;
    ++idx[static_cast<std::size_t>(p)];
    for (int q = p + 1; q < k; ++q) idx[static_cast<std::size_t>(q)] = idx[static_cast<std::size_t>(q - 1)] + 1;
  }
}

std::vector<Eigen::VectorXd> polytope_vertices(const std::vector<Eigen::VectorXd>& facets, int m) {
  const int nf = static_cast<int>(facets.size());
  std::vector<Eigen::VectorXd> vertices;
  for_each_subset(nf, m, [&](const std::vector<int>& idx) {
    Matrix a(m, m);
    for (int r = 0; r < m; ++r) a.row(r) = facets[static_cast<std::size_t>(idx[static_cast<std::size_t>(r)])].transpose();
    Eigen::FullPivLU<Matrix> lu(a);
    if (!lu.isInvertible()) return;
    const Eigen::VectorXd v = lu.solve(Eigen::VectorXd::Ones(m));
    for (const auto& f : facets) {
      if (f.dot(v) > 1.0 + 1e-9) return;
    }
    for (const auto& w : vertices) {
      if ((w - v).cwiseAbs().maxCoeff() <= 1e-9) return;
    }
    vertices.push_back(v);
  });
  return vertices;
}

}  // namespace

std::string to_string(NormKind kind) {
  switch (kind) {
    case NormKind::euclidean: return "euclidean";
    case NormKind::l1: return "l1";
    case NormKind::linfty: return "linfty";
    case NormKind::polyhedral: return "polyhedral";
  }
  return "unknown";
}

NormKind norm_kind_from_string(const std::string& name) {
  if (name == "euclidean" || name == "l2") return NormKind::euclidean;
  if (name == "l1") return NormKind::l1;
  if (name == "linfty" || name == "linf") return NormKind::linfty;
  if (name == "polyhedral") return NormKind::polyhedral;
  throw InputError("unknown norm kind '" + name + "'");
}

NormSpec::NormSpec(NormKind kind, int horizontal_dim, std::vector<Eigen::VectorXd> facets)
    : kind_(kind), m_(horizontal_dim), facets_(std::move(facets)) {
  if (m_ <= 0) throw InputError("norm needs a positive horizontal dimension");
  if (kind_ != NormKind::polyhedral) {
    if (!facets_.empty()) throw InputError("facets are only meaningful for polyhedral norms");
    return;
  }
  if (m_ > 4) throw InputError("polyhedral norms are limited to dim V_1 <= 4");
  for (const auto& a : facets_) {
    if (a.size() != m_) throw InputError("facet functional has the wrong dimension");
    if (!a.allFinite()) throw InputError("facet functional must be finite");
  }
  for (const auto& a : facets_) {
    const bool mirrored = std::any_of(facets_.begin(), facets_.end(), [&](const Eigen::VectorXd& b) {
      return (a + b).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + a.cwiseAbs().maxCoeff());
    });
    if (!mirrored) throw InputError("polyhedral facet set must be symmetric (a and -a)");
  }
  Matrix span(m_, static_cast<Eigen::Index>(facets_.size()));
  for (std::size_t k = 0; k < facets_.size(); ++k) span.col(static_cast<Eigen::Index>(k)) = facets_[k];
  if (facets_.empty() || Eigen::FullPivLU<Matrix>(span).rank() < m_) {
    throw InputError("polyhedral facets must span the dual of V_1");
  }
  vertices_ = polytope_vertices(facets_, m_);
}

NormSpec NormSpec::polyhedral(std::vector<Eigen::VectorXd> facets) {
  if (facets.empty()) throw InputError("polyhedral norm needs facets");
  const int m = static_cast<int>(facets.front().size());
  return NormSpec(NormKind::polyhedral, m, std::move(facets));
}

void NormSpec::check(const Eigen::VectorXd& v) const {
  if (v.size() != m_) {
    throw InputError("expected a V_1 vector of dimension " + std::to_string(m_) + ", got " +
                     std::to_string(v.size()));
  }
}

double NormSpec::norm(const ControlValue& v) const {
  check(v);
  switch (kind_) {
    case NormKind::euclidean: return v.norm();
    case NormKind::l1: return v.lpNorm<1>();
    case NormKind::linfty: return v.lpNorm<Eigen::Infinity>();
    case NormKind::polyhedral: {
      double best = 0.0;
      for (const auto& a : facets_) best = std::max(best, a.dot(v));
      return best;
    }
  }
  return 0.0;
}

double NormSpec::dual_norm(const Eigen::VectorXd& a) const {
  check(a);
  switch (kind_) {
    case NormKind::euclidean: return a.norm();
    case NormKind::l1: return a.lpNorm<Eigen::Infinity>();
    case NormKind::linfty: return a.lpNorm<1>();
    case NormKind::polyhedral: {
      double best = 0.0;
      for (const auto& v : vertices_) best = std::max(best, a.dot(v));
      return best;
    }
  }
  return 0.0;
}

double energy(const NormSpec& ns, const ControlValue& v) {
  const double r = ns.norm(v);
  return 0.5 * r * r;
}

bool in_subdifferential(const NormSpec& ns, const Eigen::VectorXd& a, const ControlValue& v, double tol) {
  if (tol < 0.0) throw InputError("tolerance must be non-negative");
  const double r = ns.norm(v);
  return std::abs(a.dot(v) - r * r) <= tol && std::abs(ns.dual_norm(a) - r) <= tol;
}

ControlValue dual_energy_gradient(const NormSpec& ns, const Eigen::VectorXd& eta) {
  const int m = ns.horizontal_dim();
  if (eta.size() != m) throw InputError("covector restriction has the wrong dimension");
  if (eta.cwiseAbs().maxCoeff() <= kZeroCovector) return ControlValue::Zero(m);

  switch (ns.kind()) {
    case NormKind::euclidean: return eta;
    case NormKind::l1: {
      // face of the cross-polytope: sign(eta_i) e_i for the maximal |eta_i|
      const double top = eta.lpNorm<Eigen::Infinity>();
      ControlValue u = ControlValue::Zero(m);
      int count = 0;
      for (int i = 0; i < m; ++i) {
        if (std::abs(eta(i)) >= top * (1.0 - kFaceTol)) {
          u(i) = eta(i) > 0 ? 1.0 : -1.0;
          ++count;
        }
      }
      return u * (top / count);
    }
    case NormKind::linfty: {
      // face of the cube: coordinates with eta_i = 0 average to zero
      const double total = eta.lpNorm<1>();
      const double cutoff = kFaceTol * eta.lpNorm<Eigen::Infinity>();
      ControlValue u = ControlValue::Zero(m);
      for (int i = 0; i < m; ++i) {
        if (std::abs(eta(i)) > cutoff) u(i) = eta(i) > 0 ? total : -total;
      }
      return u;
    }
    case NormKind::polyhedral: {
      const double best = ns.dual_norm(eta);
      double scale = 0.0;
      for (const auto& v : ns.vertices()) scale = std::max(scale, v.cwiseAbs().maxCoeff());
      const double cutoff = best - kFaceTol * (1.0 + eta.cwiseAbs().maxCoeff() * scale);
      ControlValue mean = ControlValue::Zero(m);
      int count = 0;
      for (const auto& v : ns.vertices()) {
        if (eta.dot(v) >= cutoff) {
          mean += v;
          ++count;
        }
      }
      return mean * (best / count);
    }
  }
  return ControlValue::Zero(m);
}

Eigen::VectorXd horizontal_covector(const CarnotGroup& group, const Covector& lambda, const GroupElement& g) {
  if (lambda.dim() != group.dim()) throw InputError("covector has the wrong dimension");
  const int m1 = group.algebra().horizontal_dim();
  const Matrix ad = group.adjoint(g);
  return ad.leftCols(m1).transpose() * lambda.coeffs;
}

ControlValue extract_control(const CarnotGroup& group, const NormSpec& ns, const Covector& lambda,
                             const GroupElement& g) {
  if (ns.horizontal_dim() != group.algebra().horizontal_dim()) {
    throw InputError("norm dimension does not match dim V_1");
  }
  return dual_energy_gradient(ns, horizontal_covector(group, lambda, g));
}

Covector rescale_covector(const Covector& lambda, double alpha) {
  if (!(alpha > 0.0)) throw InputError("rescale factor must be positive");
  return {alpha * lambda.coeffs};
}

}  // namespace carnot
