#include "carnot/group.hpp"

#include "bch.hpp"
#include "carnot/error.hpp"

#include <array>
#include <cmath>

namespace carnot {

namespace {

// Taylor coefficients of exp(z), truncated at z^5.
constexpr std::array<double, 6> kExp = {1.0, 1.0, 1.0 / 2, 1.0 / 6, 1.0 / 24, 1.0 / 120};
// z / (1 - exp(-z)) = sum_k B_k^+ z^k / k!, truncated at z^5.
constexpr std::array<double, 6> kLeftDexp = {1.0, 1.0 / 2, 1.0 / 12, 0.0, -1.0 / 720, 0.0};

}  // namespace

double covector_norm(const Covector& lambda) { return lambda.coeffs.lpNorm<1>(); }

CarnotGroup::CarnotGroup(StratifiedAlgebra algebra)
    : algebra_(std::make_shared<const StratifiedAlgebra>(std::move(algebra))) {
  if (algebra_->step() > kMaxStep) {
    throw InputError("groups of step " + std::to_string(algebra_->step()) +
                     " are not supported (maximum " + std::to_string(kMaxStep) + ")");
  }
}

void CarnotGroup::check(const GroupElement& g, const char* what) const {
  if (g.dim() != dim()) {
    throw InputError(std::string(what) + ": expected dimension " + std::to_string(dim()) + ", got " +
                     std::to_string(g.dim()));
  }
}

GroupElement CarnotGroup::inverse(const GroupElement& g) const {
  check(g, "inverse");
  return {-g.coords};
}

GroupElement CarnotGroup::multiply(const GroupElement& g, const GroupElement& h) const {
  check(g, "multiply");
  check(h, "multiply");
  const Matrix ad_x = algebra_->adjoint_operator(g.coords);
  const Matrix ad_y = algebra_->adjoint_operator(h.coords);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(dim());
  Eigen::VectorXd v(dim());
  for (const auto& term : detail::bch_terms(step())) {
    const int last = term.length - 1;
    v = ((term.letters >> last) & 1u) ? h.coords : g.coords;
    for (int p = last - 1; p >= 0; --p) {
      v = (((term.letters >> p) & 1u) ? ad_y : ad_x) * v;
    }
    z += term.coeff * v;
  }
  return {z};
}

GroupElement CarnotGroup::dilate(double tau, const GroupElement& g) const {
  check(g, "dilate");
  GroupElement out = g;
  for (int i = 0; i < dim(); ++i) out.coords(i) *= std::pow(tau, algebra_->degree(i));
  return out;
}

Matrix CarnotGroup::ad_series(const GroupElement& g, std::span<const double> coeffs) const {
  const Matrix ad = algebra_->adjoint_operator(g.coords);
  Matrix out = Matrix::Identity(dim(), dim()) * coeffs[0];
  Matrix power = Matrix::Identity(dim(), dim());
  for (int k = 1; k < step() && k < static_cast<int>(coeffs.size()); ++k) {
    power = power * ad;
    if (coeffs[static_cast<std::size_t>(k)] != 0.0) out += coeffs[static_cast<std::size_t>(k)] * power;
  }
  return out;
}

Matrix CarnotGroup::adjoint(const GroupElement& g) const {
  check(g, "adjoint");
  return ad_series(g, kExp);
}

Matrix CarnotGroup::left_jacobian(const GroupElement& g) const {
  check(g, "left_jacobian");
  return ad_series(g, kLeftDexp);
}

Matrix CarnotGroup::right_jacobian(const GroupElement& g) const {
  check(g, "right_jacobian");
  return left_jacobian(g) * adjoint(inverse(g));
}

Eigen::VectorXd CarnotGroup::dilation_field(const GroupElement& g) const {
  check(g, "dilation_field");
  Eigen::VectorXd v(dim());
  for (int i = 0; i < dim(); ++i) v(i) = algebra_->degree(i) * g.coords(i);
  return v;
}

Eigen::VectorXd CarnotGroup::dilation_field_coefficients(const GroupElement& g) const {
  check(g, "dilation_field_coefficients");
  // right_jacobian is unipotent, so the solve is always well posed
  return right_jacobian(g).partialPivLu().solve(dilation_field(g));
}

double CarnotGroup::homogeneous_quasinorm(const GroupElement& g) const {
  check(g, "homogeneous_quasinorm");
  double q = 0.0;
  for (int i = 0; i < dim(); ++i) {
    const double a = std::abs(g.coords(i));
    const int d = algebra_->degree(i);
    q = std::max(q, d == 1 ? a : std::pow(a, 1.0 / d));
  }
  return q;
}

bool CarnotGroup::is_central(const GroupElement& g, double tol) const {
  check(g, "is_central");
  const Matrix ad = algebra_->adjoint_operator(g.coords);
  return ad.size() == 0 || ad.cwiseAbs().maxCoeff() <= tol;
}

}  // namespace carnot
