#include "carnot/algebra.hpp"

#include "carnot/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace carnot {

namespace {

int matrix_rank(const Matrix& m, double tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol) ++rank;
  }
  return rank;
}

}  // namespace

StratifiedAlgebra::StratifiedAlgebra(std::vector<int> strata_dims, std::vector<double> constants,
                                     std::string name)
    : strata_(std::move(strata_dims)), c_(std::move(constants)), name_(std::move(name)) {
  if (strata_.empty()) throw InputError("algebra needs at least one stratum");
  for (int m : strata_) {
    if (m <= 0) throw InputError("strata dimensions must be positive");
  }
  n_ = std::accumulate(strata_.begin(), strata_.end(), 0);
  const auto n = static_cast<std::size_t>(n_);
  if (c_.size() != n * n * n) {
    throw InputError("expected " + std::to_string(n * n * n) + " structure constants, got " +
                     std::to_string(c_.size()));
  }
  for (double v : c_) {
    if (!std::isfinite(v)) throw InputError("structure constants must be finite");
  }
  degrees_.reserve(n);
  for (std::size_t j = 0; j < strata_.size(); ++j) {
    degrees_.insert(degrees_.end(), static_cast<std::size_t>(strata_[j]), static_cast<int>(j) + 1);
  }
}

StratifiedAlgebra StratifiedAlgebra::from_brackets(std::vector<int> strata_dims,
                                                   std::span<const Bracket> brackets,
                                                   std::string name) {
  const int n = std::accumulate(strata_dims.begin(), strata_dims.end(), 0);
  std::vector<double> c(static_cast<std::size_t>(n) * n * n, 0.0);
  auto at = [&](int i, int j, int k) -> double& {
    return c[(static_cast<std::size_t>(i) * n + j) * n + k];
  };
  for (const auto& b : brackets) {
    if (b.i < 0 || b.j < 0 || b.k < 0 || b.i >= n || b.j >= n || b.k >= n) {
      throw InputError("bracket index out of range");
    }
    if (b.i >= b.j) throw InputError("from_brackets expects pairs with i < j");
    at(b.i, b.j, b.k) += b.coeff;
    at(b.j, b.i, b.k) -= b.coeff;
  }
  return StratifiedAlgebra(std::move(strata_dims), std::move(c), std::move(name));
}

int StratifiedAlgebra::stratum_begin(int j) const {
  if (j < 1 || j > step()) throw InputError("stratum index out of range");
  return std::accumulate(strata_.begin(), strata_.begin() + (j - 1), 0);
}

AlgebraVector StratifiedAlgebra::basis(int i) const {
  if (i < 0 || i >= n_) throw InputError("basis index out of range");
  return AlgebraVector::Unit(n_, i);
}

void StratifiedAlgebra::check_dim(const AlgebraVector& x, const char* what) const {
  if (x.size() != n_) {
    throw InputError(std::string(what) + ": expected dimension " + std::to_string(n_) + ", got " +
                     std::to_string(x.size()));
  }
}

AlgebraVector StratifiedAlgebra::bracket(const AlgebraVector& x, const AlgebraVector& y) const {
  check_dim(x, "bracket");
  check_dim(y, "bracket");
  AlgebraVector out = AlgebraVector::Zero(n_);
  for (int i = 0; i < n_; ++i) {
    if (x(i) == 0.0) continue;
    for (int j = 0; j < n_; ++j) {
      const double w = x(i) * y(j);
      if (w == 0.0) continue;
      const double* row = &c_[(static_cast<std::size_t>(i) * n_ + j) * n_];
      for (int k = 0; k < n_; ++k) out(k) += w * row[k];
    }
  }
  return out;
}

Matrix StratifiedAlgebra::adjoint_operator(const AlgebraVector& x) const {
  check_dim(x, "adjoint_operator");
  Matrix ad = Matrix::Zero(n_, n_);
  for (int i = 0; i < n_; ++i) {
    if (x(i) == 0.0) continue;
    for (int j = 0; j < n_; ++j) {
      const double* row = &c_[(static_cast<std::size_t>(i) * n_ + j) * n_];
      for (int k = 0; k < n_; ++k) ad(k, j) += x(i) * row[k];
    }
  }
  return ad;
}

bool ValidationReport::all_passed() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

const ValidationCheck* ValidationReport::find(std::string_view name) const noexcept {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

ValidationReport validate(const StratifiedAlgebra& a, double tol) {
  const int n = a.dim();
  const int s = a.step();
  double cmax = 0.0;
  for (double v : a.constants()) cmax = std::max(cmax, std::abs(v));
  const double scale = std::max(1.0, cmax);

  ValidationReport report;

  ValidationCheck anti;
  anti.name = "antisymmetry";
  for (int i = 0; i < n && anti.passed; ++i) {
    for (int j = i; j < n && anti.passed; ++j) {
      for (int k = 0; k < n; ++k) {
        if (std::abs(a.constant(i, j, k) + a.constant(j, i, k)) > tol) {
          anti.passed = false;
          anti.counterexample = {i, j, k};
          anti.detail = "c_ij^k + c_ji^k != 0";
          break;
        }
      }
    }
  }
  report.checks.push_back(anti);

  ValidationCheck jacobi;
  jacobi.name = "jacobi";
  const double jtol = tol * scale * scale * n;
  for (int i = 0; i < n && jacobi.passed; ++i) {
    const auto xi = a.basis(i);
    for (int j = i + 1; j < n && jacobi.passed; ++j) {
      const auto xj = a.basis(j);
      for (int k = j + 1; k < n; ++k) {
        const auto xk = a.basis(k);
        const AlgebraVector cyc = a.bracket(xi, a.bracket(xj, xk)) +
                                  a.bracket(xj, a.bracket(xk, xi)) +
                                  a.bracket(xk, a.bracket(xi, xj));
        if (cyc.cwiseAbs().maxCoeff() > jtol) {
          jacobi.passed = false;
          jacobi.counterexample = {i, j, k};
          jacobi.detail = "cyclic sum of nested brackets is nonzero";
          break;
        }
      }
    }
  }
  report.checks.push_back(jacobi);

  ValidationCheck grading;
  grading.name = "grading";
  for (int i = 0; i < n && grading.passed; ++i) {
    for (int j = 0; j < n && grading.passed; ++j) {
      for (int k = 0; k < n; ++k) {
        if (std::abs(a.constant(i, j, k)) > tol && a.degree(k) != a.degree(i) + a.degree(j)) {
          grading.passed = false;
          grading.counterexample = {i, j, k};
          grading.detail = "bracket leaves stratum d_i + d_j";
          break;
        }
      }
    }
  }
  report.checks.push_back(grading);

  // [V_1, V_j] must span V_{j+1}.
  ValidationCheck generation;
  generation.name = "generation";
  const int m1 = a.horizontal_dim();
  for (int j = 1; j < s && generation.passed; ++j) {
    const int lo = a.stratum_begin(j);
    const int mj = a.strata_dims()[static_cast<std::size_t>(j - 1)];
    const int next_lo = a.stratum_begin(j + 1);
    const int mnext = a.strata_dims()[static_cast<std::size_t>(j)];
    Matrix cols(mnext, m1 * mj);
    for (int p = 0; p < m1; ++p) {
      for (int q = 0; q < mj; ++q) {
        cols.col(p * mj + q) = a.bracket(a.basis(p), a.basis(lo + q)).segment(next_lo, mnext);
      }
    }
    const int rank = matrix_rank(cols, tol * scale);
    if (rank < mnext) {
      generation.passed = false;
      generation.detail = "[V_1, V_" + std::to_string(j) + "] has rank " + std::to_string(rank) +
                          " < dim V_" + std::to_string(j + 1) + " = " + std::to_string(mnext);
    }
  }
  report.checks.push_back(generation);

  // Lower central series g^1 = g, g^{k+1} = [g, g^k] must vanish at k = s + 1.
  ValidationCheck nilpotency;
  nilpotency.name = "nilpotency";
  Matrix layer = Matrix::Identity(n, n);
  for (int k = 1; k <= s && layer.cols() > 0; ++k) {
    Matrix next(n, n * layer.cols());
    for (int i = 0; i < n; ++i) {
      const Matrix ad = a.adjoint_operator(a.basis(i));
      next.middleCols(i * layer.cols(), layer.cols()) = ad * layer;
    }
    if (next.size() == 0 || next.cwiseAbs().maxCoeff() <= tol * scale) {
      layer.resize(n, 0);
      break;
    }
    Eigen::JacobiSVD<Matrix> svd(next, Eigen::ComputeThinU);
    int rank = 0;
    for (Eigen::Index r = 0; r < svd.singularValues().size(); ++r) {
      if (svd.singularValues()(r) > tol * scale) ++rank;
    }
    layer = svd.matrixU().leftCols(rank);
  }
  if (layer.cols() > 0) {
    nilpotency.passed = false;
    nilpotency.detail = "term " + std::to_string(s + 1) + " of the lower central series has dimension " +
                        std::to_string(layer.cols());
  }
  report.checks.push_back(nilpotency);

  return report;
}

namespace builtin {

StratifiedAlgebra heisenberg() {
  const StratifiedAlgebra::Bracket b[] = {{0, 1, 2, 1.0}};
  return StratifiedAlgebra::from_brackets({2, 1}, b, "heisenberg");
}

StratifiedAlgebra filiform(int step) {
  if (step < 2) throw InputError("filiform step must be at least 2");
  // basis order: X_1, Y_1, Y_2, ..., Y_s
  std::vector<StratifiedAlgebra::Bracket> b;
  for (int i = 1; i < step; ++i) b.push_back({0, i, i + 1, 1.0});
  std::vector<int> strata(static_cast<std::size_t>(step), 1);
  strata.front() = 2;
  return StratifiedAlgebra::from_brackets(std::move(strata), b, "filiform" + std::to_string(step));
}

StratifiedAlgebra free_step2_rank3() {
  // X_1, X_2, X_3, then [X_1,X_2], [X_1,X_3], [X_2,X_3]
  const StratifiedAlgebra::Bracket b[] = {{0, 1, 3, 1.0}, {0, 2, 4, 1.0}, {1, 2, 5, 1.0}};
  return StratifiedAlgebra::from_brackets({3, 3}, b, "free-step2-rank3");
}

std::optional<StratifiedAlgebra> by_name(std::string_view name) {
  if (name == "heisenberg") return heisenberg();
  if (name == "free-step2-rank3") return free_step2_rank3();
  if (name.size() == 9 && name.substr(0, 8) == "filiform") {
    const int s = name[8] - '0';
    if (s >= 2 && s <= 6) return filiform(s);
  }
  return std::nullopt;
}

std::vector<std::string> names() {
  return {"heisenberg", "filiform2", "filiform3", "filiform4",
          "filiform5",  "filiform6", "free-step2-rank3"};
}

}  // namespace builtin

}  // namespace carnot
