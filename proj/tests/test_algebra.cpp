#include "carnot/algebra.hpp"
#include "carnot/error.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

using namespace carnot;

namespace {

Eigen::VectorXd e(int n, int i) { return Eigen::VectorXd::Unit(n, i); }

}  // namespace

TEST_CASE("heisenberg bracket of X and Y is Z") {
  const auto h = builtin::heisenberg();
  CHECK(h.dim() == 3);
  CHECK(h.step() == 2);
  CHECK(h.horizontal_dim() == 2);
  const Eigen::VectorXd z = h.bracket(e(3, 0), e(3, 1));
  CHECK(z.isApprox(e(3, 2)));
  CHECK(h.bracket(e(3, 1), e(3, 0)).isApprox(-e(3, 2)));
}

TEST_CASE("bracket of a vector with itself vanishes") {
  std::mt19937_64 rng(3);
  for (const auto& name : builtin::names()) {
    const auto a = *builtin::by_name(name);
    for (int trial = 0; trial < 10; ++trial) {
      const Eigen::VectorXd x = oracle::random_vector(rng, a.dim());
      CHECK(a.bracket(x, x).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("filiform step 3 brackets") {
  const auto f = builtin::filiform(3);
  REQUIRE(f.dim() == 4);
  // basis X1, Y1, Y2, Y3
  CHECK(f.bracket(e(4, 0), e(4, 2)).isApprox(e(4, 3)));
  CHECK(f.bracket(e(4, 1), e(4, 2)).isZero());
  CHECK(f.bracket(e(4, 0), e(4, 1)).isApprox(e(4, 2)));
  CHECK(f.degrees() == std::vector<int>{1, 1, 2, 3});
}

TEST_CASE("degrees follow the strata") {
  const auto a = builtin::free_step2_rank3();
  CHECK(a.dim() == 6);
  CHECK(a.degrees() == std::vector<int>{1, 1, 1, 2, 2, 2});
  CHECK(a.stratum_begin(1) == 0);
  CHECK(a.stratum_begin(2) == 3);
}

TEST_CASE("adjoint operator") {
  const auto h = builtin::heisenberg();
  CHECK(h.adjoint_operator(Eigen::VectorXd::Zero(3)).isZero());

  const Matrix adx = h.adjoint_operator(e(3, 0));
  Matrix expected = Matrix::Zero(3, 3);
  expected(2, 1) = 1.0;  // Y -> Z
  CHECK(adx == expected);

  std::mt19937_64 rng(11);
  for (const auto& name : builtin::names()) {
    const auto a = *builtin::by_name(name);
    const Eigen::VectorXd x = oracle::random_vector(rng, a.dim());
    const Matrix ad = a.adjoint_operator(x);
    for (int j = 0; j < a.dim(); ++j) CHECK((ad.col(j) - a.bracket(x, e(a.dim(), j))).norm() < 1e-15);
    Matrix power = Matrix::Identity(a.dim(), a.dim());
    for (int k = 0; k < a.step(); ++k) power = power * ad;
    CHECK(power.cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("jacobi identity and grading on random vectors") {
  std::mt19937_64 rng(5);
  for (const auto& name : builtin::names()) {
    const auto a = *builtin::by_name(name);
    for (int trial = 0; trial < 20; ++trial) {
      const Eigen::VectorXd x = oracle::random_vector(rng, a.dim());
      const Eigen::VectorXd y = oracle::random_vector(rng, a.dim());
      const Eigen::VectorXd z = oracle::random_vector(rng, a.dim());
      const Eigen::VectorXd jac =
          a.bracket(x, a.bracket(y, z)) + a.bracket(y, a.bracket(z, x)) + a.bracket(z, a.bracket(x, y));
      CHECK(jac.norm() < 1e-12 * (1.0 + x.norm() * y.norm() * z.norm()));
    }
    // homogeneous pieces bracket into the sum of their degrees
    for (int da = 1; da <= a.step(); ++da) {
      for (int db = 1; db <= a.step(); ++db) {
        Eigen::VectorXd x = Eigen::VectorXd::Zero(a.dim());
        Eigen::VectorXd y = Eigen::VectorXd::Zero(a.dim());
        for (int i = 0; i < a.dim(); ++i) {
          if (a.degree(i) == da) x(i) = 1.0 + i;
          if (a.degree(i) == db) y(i) = 2.0 - i;
        }
        const Eigen::VectorXd b = a.bracket(x, y);
        for (int k = 0; k < a.dim(); ++k) {
          if (a.degree(k) != da + db) CHECK(b(k) == 0.0);
        }
      }
    }
  }
}

TEST_CASE("validate passes on every built-in") {
  for (const auto& name : builtin::names()) {
    CAPTURE(name);
    const auto report = validate(*builtin::by_name(name));
    CHECK(report.all_passed());
    CHECK(report.checks.size() == 5);
  }
  CHECK(builtin::names().size() == 7);
  CHECK(builtin::by_name("filiform6").has_value());
  CHECK_FALSE(builtin::by_name("filiform7").has_value());
}

TEST_CASE("validate reports the antisymmetry counterexample") {
  std::vector<double> c(27, 0.0);
  c[(0 * 3 + 1) * 3 + 2] = 1.0;  // c_12^3
  c[(1 * 3 + 0) * 3 + 2] = 1.0;  // c_21^3, wrong sign
  const StratifiedAlgebra bad({2, 1}, c);
  const auto report = validate(bad);
  CHECK_FALSE(report.all_passed());
  const auto* anti = report.find("antisymmetry");
  REQUIRE(anti != nullptr);
  CHECK_FALSE(anti->passed);
  REQUIRE(anti->counterexample.has_value());
  CHECK(*anti->counterexample == std::array<int, 3>{0, 1, 2});
}

TEST_CASE("abelian plane declared with two strata fails generation") {
  const StratifiedAlgebra flat({1, 1}, std::vector<double>(8, 0.0));
  const auto report = validate(flat);
  CHECK_FALSE(report.find("generation")->passed);
  CHECK(report.find("antisymmetry")->passed);
  CHECK(report.find("jacobi")->passed);
}

TEST_CASE("validate catches grading and jacobi violations") {
  // [X1, X2] = X2 in strata (2, 1): wrong degree
  std::vector<double> c(27, 0.0);
  c[(0 * 3 + 1) * 3 + 1] = 1.0;
  c[(1 * 3 + 0) * 3 + 1] = -1.0;
  c[(0 * 3 + 1) * 3 + 2] = 1.0;
  c[(1 * 3 + 0) * 3 + 2] = -1.0;
  const auto r = validate(StratifiedAlgebra({2, 1}, c));
  CHECK_FALSE(r.find("grading")->passed);

  // X1, X2 | Y | Z1, Z2 | W with [X1,X2]=Y, [X1,Y]=Z1, [X2,Y]=Z2, [X1,Z2]=W:
  // jacobi on (X1, X2, Y) gives [X1,Z2] - [X2,Z1] = W
  const std::array<StratifiedAlgebra::Bracket, 4> br{{{0, 1, 2, 1.0}, {0, 2, 3, 1.0}, {1, 2, 4, 1.0}, {0, 4, 5, 1.0}}};
  const auto rj = validate(StratifiedAlgebra::from_brackets({2, 1, 2, 1}, br));
  CHECK(rj.find("antisymmetry")->passed);
  CHECK(rj.find("grading")->passed);
  CHECK_FALSE(rj.find("jacobi")->passed);
  CHECK(rj.find("jacobi")->counterexample.has_value());
}

TEST_CASE("constructor rejects malformed shapes") {
  CHECK_THROWS_AS(StratifiedAlgebra({2, 1}, std::vector<double>(26, 0.0)), InputError);
  CHECK_THROWS_AS(StratifiedAlgebra({}, {}), InputError);
  CHECK_THROWS_AS(StratifiedAlgebra({2, 0}, std::vector<double>(8, 0.0)), InputError);
  const auto h = builtin::heisenberg();
  CHECK_THROWS_AS(h.bracket(Eigen::VectorXd::Zero(2), Eigen::VectorXd::Zero(3)), InputError);
  CHECK_THROWS_AS(h.adjoint_operator(Eigen::VectorXd::Zero(4)), InputError);
}

TEST_CASE("json definition round trip") {
  const std::string text = R"({"strata": [2, 1], "brackets": {"1,2": [[3, 1]]}, "name": "h3"})";
  const auto a = parse_algebra_json(text);
  CHECK(a.name() == "h3");
  CHECK(a.constants() == builtin::heisenberg().constants());

  const auto again = parse_algebra_json(to_json(builtin::filiform(4)));
  CHECK(again.constants() == builtin::filiform(4).constants());
  CHECK(again.strata_dims() == builtin::filiform(4).strata_dims());
}

TEST_CASE("json definition keeps explicit mirror entries") {
  // an inconsistent mirror is kept so validate can report it
  const std::string text = R"({"strata": [2, 1], "brackets": {"1,2": [[3, 1]], "2,1": [[3, 1]]}})";
  const auto a = parse_algebra_json(text);
  const auto r = validate(a);
  CHECK_FALSE(r.find("antisymmetry")->passed);
  CHECK(*r.find("antisymmetry")->counterexample == std::array<int, 3>{0, 1, 2});
}

TEST_CASE("json definition errors") {
  CHECK_THROWS_AS(parse_algebra_json("not json"), InputError);
  CHECK_THROWS_AS(parse_algebra_json(R"({"brackets": {}})"), InputError);
  CHECK_THROWS_AS(parse_algebra_json(R"({"strata": [2, -1]})"), InputError);
  CHECK_THROWS_AS(parse_algebra_json(R"({"strata": [2, 1], "brackets": {"1-2": [[3, 1]]}})"), InputError);
  CHECK_THROWS_AS(parse_algebra_json(R"({"strata": [2, 1], "brackets": {"1,4": [[3, 1]]}})"), InputError);
  CHECK_THROWS_AS(parse_algebra_json(R"({"strata": [2, 1], "brackets": {"1,2": [[4, 1]]}})"), InputError);
  CHECK_THROWS_AS(parse_algebra_json(R"({"strata": [2, 1], "brackets": {"1,2": [3, 1]}})"), InputError);
  CHECK_THROWS_AS(load_algebra_file("/nonexistent/algebra.json"), InputError);
  CHECK_THROWS_AS(resolve_algebra("no-such-algebra"), InputError);
}

TEST_CASE("definition file named by its stem") {
  const auto dir = std::filesystem::temp_directory_path() / "carnot_algebra_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "myheis.json";
  {
    std::ofstream out(path);
    out << R"({"strata": [2, 1], "brackets": {"1,2": [[3, 1]]}})";
  }
  const auto a = resolve_algebra(path.string());
  CHECK(a.name() == "myheis");
  CHECK(validate(a).all_passed());
  CHECK(resolve_algebra("filiform3").name() == "filiform3");
}
