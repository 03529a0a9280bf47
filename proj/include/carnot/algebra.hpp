#pragma once

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace carnot {

using AlgebraVector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Stratified nilpotent Lie algebra g = V_1 + ... + V_s given by dense
/// structure constants in a basis adapted to the stratification.
///
/// Indices are 0-based in the C++ interface. The constant c(i, j, k) is the
/// k-th coefficient of [X_i, X_j]. The object is immutable once built.
class StratifiedAlgebra {
 public:
  /// `constants` is laid out as c[(i * n + j) * n + k]. Only shape is checked
  /// here; axioms are checked by validate().
  StratifiedAlgebra(std::vector<int> strata_dims, std::vector<double> constants,
                    std::string name = {});

  /// Builds from the nonzero brackets [X_i, X_j] = sum_k coeff X_k with i < j;
  /// the (j, i) entries are filled by antisymmetry.
  struct Bracket {
    int i;
    int j;
    int k;
    double coeff;
  };
  static StratifiedAlgebra from_brackets(std::vector<int> strata_dims,
                                         std::span<const Bracket> brackets,
                                         std::string name = {});

  int dim() const noexcept { return n_; }
  int step() const noexcept { return static_cast<int>(strata_.size()); }
  int horizontal_dim() const noexcept { return strata_.front(); }
  const std::vector<int>& strata_dims() const noexcept { return strata_; }
  /// Degree d_i in {1..s} of basis vector i.
  int degree(int i) const { return degrees_.at(static_cast<std::size_t>(i)); }
  const std::vector<int>& degrees() const noexcept { return degrees_; }
  /// First basis index of stratum j (1-based stratum number).
  int stratum_begin(int j) const;
  const std::string& name() const noexcept { return name_; }

  double constant(int i, int j, int k) const noexcept {
    return c_[(static_cast<std::size_t>(i) * n_ + j) * n_ + k];
  }
  const std::vector<double>& constants() const noexcept { return c_; }

  AlgebraVector basis(int i) const;

  AlgebraVector bracket(const AlgebraVector& x, const AlgebraVector& y) const;

  /// Matrix of ad_x = [x, .]; column j is [x, X_j].
  Matrix adjoint_operator(const AlgebraVector& x) const;

 private:
  void check_dim(const AlgebraVector& x, const char* what) const;

  int n_ = 0;
  std::vector<int> strata_;
  std::vector<int> degrees_;
  std::vector<double> c_;
  std::string name_;
};

struct ValidationCheck {
  std::string name;
  bool passed = true;
  /// First offending 0-based index triple, when the check has one.
  std::optional<std::array<int, 3>> counterexample;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;

  bool all_passed() const noexcept;
  const ValidationCheck* find(std::string_view name) const noexcept;
};

/// Checks antisymmetry, Jacobi, grading, generation and nilpotency.
/// `tol` is absolute on the structure constants.
ValidationReport validate(const StratifiedAlgebra& algebra, double tol = 1e-12);

namespace builtin {

StratifiedAlgebra heisenberg();
/// Filiform algebra of the first type with basis X_1, Y_1, ..., Y_s and
/// brackets [X_1, Y_i] = Y_{i+1}.
StratifiedAlgebra filiform(int step);
/// Free nilpotent algebra of step 2 on three generators.
StratifiedAlgebra free_step2_rank3();

/// heisenberg, filiform2..filiform6, free-step2-rank3.
std::optional<StratifiedAlgebra> by_name(std::string_view name);
std::vector<std::string> names();

}  // namespace builtin

/// Parses the JSON definition document: {"strata": [...], "brackets":
/// {"i,j": [[k, c], ...]}} with 1-based indices. Throws InputError.
StratifiedAlgebra parse_algebra_json(std::string_view text, std::string name = {});
StratifiedAlgebra load_algebra_file(const std::string& path);
/// A built-in name or a path to a definition file.
StratifiedAlgebra resolve_algebra(const std::string& name_or_path);

std::string to_json(const StratifiedAlgebra& algebra);

}  // namespace carnot
