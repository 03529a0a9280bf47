#include "carnot/error.hpp"
#include "carnot/integrator.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <numbers>
#include <random>
#include <sstream>

using namespace carnot;

namespace {

Covector circle_covector(int N) { return {Eigen::Vector3d(0.0, 1.0, 2.0 * std::numbers::pi * N)}; }

double closed_form_error(const GeodesicTrace& tr, int N) {
  double worst = 0.0;
  for (std::size_t k = 0; k < tr.size(); ++k) {
    worst = std::max(worst, (tr.point(k).coords - oracle::heisenberg_circle(N, tr.times[k])).cwiseAbs().maxCoeff());
  }
  return worst;
}

ControlSignal random_signal(std::mt19937_64& rng, int m, int nodes) {
  // smooth random control: a few random Fourier modes
  const Eigen::VectorXd a = oracle::random_vector(rng, m);
  const Eigen::VectorXd b = oracle::random_vector(rng, m);
  const Eigen::VectorXd c = oracle::random_vector(rng, m);
  return ControlSignal::sample(nodes, m, [&](double t) {
    return ControlValue(a + b * std::cos(2 * std::numbers::pi * t) + c * std::sin(4 * std::numbers::pi * t));
  });
}

}  // namespace

TEST_CASE("zero covector gives a constant trace") {
  const CarnotGroup G(builtin::filiform(4));
  const GroupElement g0{Eigen::VectorXd::LinSpaced(5, -1, 1)};
  const auto tr = integrate_normal(G, NormSpec::euclidean(2), {Eigen::VectorXd::Zero(5)}, g0, 7.0, 0.5);
  CHECK(tr.size() == 15);
  for (std::size_t k = 0; k < tr.size(); ++k) {
    CHECK(tr.point(k).coords == g0.coords);
    CHECK(tr.control(k).isZero());
  }
  CHECK(pmp_identity_residual(G, NormSpec::euclidean(2), {Eigen::VectorXd::Zero(5)},
                              integrate_normal(G, NormSpec::euclidean(2), {Eigen::VectorXd::Zero(5)}, G.identity(),
                                               1.0, 0.1)) == 0.0);
}

TEST_CASE("trace layout") {
  const CarnotGroup H(builtin::heisenberg());
  const auto tr = integrate_normal(H, NormSpec::euclidean(2), circle_covector(1), H.identity(), 1.0, 0.3);
  // the step shrinks so that whole steps reach the horizon
  CHECK(tr.size() == 5);
  CHECK(tr.step == doctest::Approx(0.25));
  CHECK(tr.times.front() == 0.0);
  CHECK(tr.horizon() == 1.0);
  for (std::size_t k = 1; k < tr.size(); ++k) CHECK(tr.times[k] > tr.times[k - 1]);
  CHECK(tr.local_errors.size() + 1 >= tr.size());
  for (std::size_t k = 0; k < tr.size(); ++k) {
    CHECK((extract_control(H, tr.norm, tr.lambda, tr.point(k)) - tr.control(k)).norm() < 1e-10);
  }
  CHECK_THROWS_AS(integrate_normal(H, NormSpec::euclidean(2), circle_covector(1), H.identity(), 0.0, 0.1), InputError);
  CHECK_THROWS_AS(integrate_normal(H, NormSpec::euclidean(2), circle_covector(1), H.identity(), 1.0, 2.0), InputError);
  CHECK_THROWS_AS(integrate_normal(H, NormSpec::euclidean(3), circle_covector(1), H.identity(), 1.0, 0.1), InputError);
}

TEST_CASE("heisenberg circle lifts") {
  const CarnotGroup H(builtin::heisenberg());
  for (int N : {1, 2, 5}) {
    CAPTURE(N);
    const auto tr = integrate_normal(H, NormSpec::euclidean(2), circle_covector(N), H.identity(), 1.0, 1e-4);
    const Eigen::VectorXd end = tr.point(tr.size() - 1).coords;
    CHECK(std::abs(end(0)) < 1e-8);
    CHECK(std::abs(end(1)) < 1e-8);
    CHECK(std::abs(end(2) - 1.0 / (4.0 * std::numbers::pi * N)) < 1e-8);
    CHECK(closed_form_error(tr, N) < 1e-6);
    double lo = INFINITY, hi = 0.0;
    for (std::size_t k = 0; k < tr.size(); ++k) {
      const double sp = tr.control(k).norm();
      lo = std::min(lo, sp);
      hi = std::max(hi, sp);
      const Eigen::Vector2d vel = oracle::heisenberg_circle_velocity(N, tr.times[k]);
      CHECK(vel.norm() == doctest::Approx(1.0).epsilon(1e-14));
    }
    CHECK(hi - lo < 1e-8);
    CHECK(pmp_identity_residual(H, tr.norm, tr.lambda, tr) < 1e-6);
  }
}

TEST_CASE("fourth-order convergence") {
  const CarnotGroup H(builtin::heisenberg());
  const auto coarse = integrate_normal(H, NormSpec::euclidean(2), circle_covector(1), H.identity(), 1.0, 0.02);
  const auto fine = integrate_normal(H, NormSpec::euclidean(2), circle_covector(1), H.identity(), 1.0, 0.01);
  const double ratio = closed_form_error(coarse, 1) / closed_form_error(fine, 1);
  CHECK(ratio >= 12.0);
  CHECK(ratio <= 20.0);
}

TEST_CASE("speed is constant for the euclidean norm") {
  std::mt19937_64 rng(1);
  for (int s : {3, 4}) {
    const CarnotGroup G(builtin::filiform(s));
    const Covector l{oracle::random_vector(rng, G.dim())};
    const auto tr = integrate_normal(G, NormSpec::euclidean(2), l, G.identity(), 20.0, 1e-2);
    double lo = INFINITY, hi = 0.0;
    for (std::size_t k = 0; k < tr.size(); ++k) {
      lo = std::min(lo, tr.control(k).norm());
      hi = std::max(hi, tr.control(k).norm());
    }
    CHECK(hi - lo < 1e-8);
  }
}

TEST_CASE("restarting from a sample reproduces the rest of the trace") {
  std::mt19937_64 rng(2);
  const CarnotGroup G(builtin::filiform(3));
  const Covector l{oracle::random_vector(rng, 4)};
  const auto tr = integrate_normal(G, NormSpec::euclidean(2), l, G.identity(), 6.0, 1e-2);
  const std::size_t k0 = 200;
  const auto rest = integrate_normal(G, NormSpec::euclidean(2), l, tr.point(k0), 4.0, 1e-2);
  double worst = 0.0;
  for (std::size_t k = 0; k < rest.size(); ++k) {
    worst = std::max(worst, (rest.point(k).coords - tr.point(k0 + k).coords).cwiseAbs().maxCoeff());
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("central translations commute with the flow") {
  std::mt19937_64 rng(3);
  const CarnotGroup G(builtin::filiform(3));
  const Covector l{oracle::random_vector(rng, 4)};
  const GroupElement g0{oracle::random_vector(rng, 4)};
  GroupElement c = G.identity();
  c.coords(3) = 2.0;
  REQUIRE(G.is_central(c));
  const auto base = integrate_normal(G, NormSpec::euclidean(2), l, g0, 5.0, 1e-2);
  const auto moved = integrate_normal(G, NormSpec::euclidean(2), l, G.multiply(c, g0), 5.0, 1e-2);
  double worst = 0.0;
  for (std::size_t k = 0; k < base.size(); ++k) {
    worst = std::max(worst, (moved.point(k).coords - G.multiply(c, base.point(k)).coords).cwiseAbs().maxCoeff());
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("polyhedral traces integrate") {
  std::mt19937_64 rng(4);
  const CarnotGroup G(builtin::filiform(3));
  const NormSpec l1 = NormSpec::l1(2);
  const Covector l{oracle::random_vector(rng, 4)};
  const auto tr = integrate_normal(G, l1, l, G.identity(), 5.0, 1e-3);
  CHECK(tr.points.allFinite());
  for (std::size_t k = 0; k < tr.size(); k += 50) {
    CHECK(in_subdifferential(l1, horizontal_covector(G, l, tr.point(k)), tr.control(k), 1e-10));
  }
}

TEST_CASE("control signals") {
  const ControlSignal u(Matrix::Ones(2, 3));
  CHECK(u.nodes() == 3);
  CHECK(u.spacing() == 0.5);
  CHECK(u.at(0.25).isApprox(Eigen::Vector2d(1, 1)));
  CHECK(u.l2_norm() == doctest::Approx(std::sqrt(2.0)));
  Matrix ramp(1, 2);
  ramp << 0.0, 2.0;
  CHECK(ControlSignal(ramp).at(0.75)(0) == doctest::Approx(1.5));
  CHECK_THROWS_AS(ControlSignal(Matrix::Ones(2, 1)), InputError);
  CHECK_THROWS_AS(u + ControlSignal(Matrix::Ones(2, 4)), InputError);
}

TEST_CASE("end-point map") {
  const CarnotGroup H(builtin::heisenberg());
  const GroupElement g0{Eigen::Vector3d(0.1, 0.2, 0.3)};
  CHECK(end_point(H, ControlSignal(Matrix::Zero(2, 5)), g0).coords == g0.coords);

  // the derivative of the circle lift, sampled on a fine grid
  const auto u = ControlSignal::sample(20001, 2, [](double t) { return ControlValue(oracle::heisenberg_circle_velocity(1, t)); });
  const Eigen::VectorXd end = end_point(H, u, H.identity(), 1e-4).coords;
  CHECK((end - Eigen::Vector3d(0, 0, 1.0 / (4.0 * std::numbers::pi))).cwiseAbs().maxCoeff() < 1e-8);

  // constant control: a one-parameter subgroup
  Matrix c(2, 2);
  c << 0.3, 0.3, -0.7, -0.7;
  CHECK(end_point(H, ControlSignal(c), H.identity()).coords.isApprox(Eigen::Vector3d(0.3, -0.7, 0)));
}

TEST_CASE("end-point dilation equivariance and directional derivatives") {
  std::mt19937_64 rng(5);
  for (const auto& name : {"heisenberg", "filiform3", "free-step2-rank3"}) {
    CAPTURE(name);
    const CarnotGroup G(*builtin::by_name(name));
    const int m = G.algebra().horizontal_dim();
    const ControlSignal u = random_signal(rng, m, 101);
    const GroupElement end = end_point(G, u, G.identity());
    for (double tau : {0.5, 2.0}) {
      const GroupElement scaled = end_point(G, u * tau, G.identity());
      CHECK((scaled.coords - G.dilate(tau, end).coords).cwiseAbs().maxCoeff() < 1e-8);
    }
    CHECK(end_point_directional(G, u, u * 0.0, G.identity()).isZero());
    const Eigen::VectorXd along_u = end_point_directional(G, u, u, G.identity());
    CHECK((along_u - G.dilation_field(end)).cwiseAbs().maxCoeff() < 1e-6);

    const ControlSignal v1 = random_signal(rng, m, 101);
    const ControlSignal v2 = random_signal(rng, m, 101);
    const Eigen::VectorXd sum = end_point_directional(G, u, v1 + v2, G.identity());
    const Eigen::VectorXd parts =
        end_point_directional(G, u, v1, G.identity()) + end_point_directional(G, u, v2, G.identity());
    CHECK((sum - parts).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("pmp identity residual") {
  std::mt19937_64 rng(6);
  const CarnotGroup F(builtin::filiform(3));
  const NormSpec ns = NormSpec::euclidean(2);
  Covector l{oracle::random_vector(rng, 4)};
  l.coeffs /= covector_norm(l);
  const auto tr = integrate_normal(F, ns, l, F.identity(), 1.0, 1e-3);
  CHECK(pmp_identity_residual(F, ns, l, tr) < 1e-5);
  // both sides scale the same way with the horizon
  const auto longer = integrate_normal(F, ns, l, F.identity(), 10.0, 1e-2);
  CHECK(pmp_identity_residual(F, ns, l, longer) < 1e-5);
  CHECK(pmp_lhs(longer) > 0.0);

  Covector other = l;
  other.coeffs(0) += 1.0;
  CHECK_THROWS_AS(pmp_identity_residual(F, ns, other, tr), InputError);
  CHECK_THROWS_AS(pmp_identity_residual(F, NormSpec::l1(2), l, tr), InputError);
  const auto shifted = integrate_normal(F, ns, l, {Eigen::Vector4d(1, 0, 0, 0)}, 1.0, 1e-2);
  CHECK_THROWS_AS(pmp_identity_residual(F, ns, l, shifted), InputError);
}

TEST_CASE("trace csv") {
  const CarnotGroup H(builtin::heisenberg());
  const auto tr = integrate_normal(H, NormSpec::euclidean(2), circle_covector(1), H.identity(), 1.0, 0.1);
  std::ostringstream out;
  write_trace_csv(out, tr, 3);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,g_1,g_2,g_3,u_1,u_2,quasinorm,speed");
  int rows = 0;
  std::string last;
  while (std::getline(in, line)) {
    ++rows;
    last = line;
  }
  CHECK(rows == 5);  // samples 0, 3, 6, 9 and the last one
  CHECK(last.rfind("1,", 0) == 0);
}
