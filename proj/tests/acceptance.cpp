// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include "carnot/escape.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

using namespace carnot;

namespace {

constexpr std::uint64_t kSeed = 7;

int failures = 0;

void report(bool ok, const char* id, const std::string& detail) {
  std::printf("%s  %-28s %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// max coordinate error against the closed-form circle lift over all samples
double heisenberg_error(int N, double h) {
  const CarnotGroup H(builtin::heisenberg());
  const Covector l{Eigen::Vector3d(0.0, 1.0, 2.0 * std::numbers::pi * N)};
  const auto tr = integrate_normal(H, NormSpec::euclidean(2), l, H.identity(), 1.0, h);
  double err = 0.0;
  for (std::size_t k = 0; k < tr.size(); ++k) {
    const Eigen::Vector3d exact = oracle::heisenberg_circle(N, tr.times[k]);
    err = std::max(err, (tr.points.col(static_cast<Eigen::Index>(k)) - exact).cwiseAbs().maxCoeff());
  }
  return err;
}

std::vector<EscapeReport> escape_runs;

void heisenberg_endpoint() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0, worst_end = 0.0;
  for (int N : {1, 2, 5}) {
    worst = std::max(worst, heisenberg_error(N, 1e-4));
    const Eigen::Vector3d end = oracle::heisenberg_circle(N, 1.0);
    worst_end = std::max(worst_end, (end - Eigen::Vector3d(0, 0, 1.0 / (4 * std::numbers::pi * N))).norm());
  }
  const double secs = seconds_since(t0);
  report(worst < 1e-6 && worst_end < 1e-15 && secs < 5.0, "heisenberg-endpoint",
         fmt("N=1,2,5 h=1e-4: max coord error %.3e (< 1e-6), closed-form end offset %.1e, %.2f s (< 5 s)", worst,
             worst_end, secs));
}

void pmp_identity() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  std::string per;
  for (const char* name : {"heisenberg", "filiform3", "filiform4"}) {
    const CarnotGroup G(*builtin::by_name(name));
    const auto cov = sample_unit_covectors(G.dim(), 20, kSeed);
    const auto r = run_pmp_check(G, NormSpec::euclidean(G.algebra().horizontal_dim()), cov, 10.0, 1e-2);
    worst = std::max(worst, r.max_residual);
    per += fmt(" %s=%.2e", name, r.max_residual);
  }
  const double secs = seconds_since(t0);
  report(worst < 1e-5 && secs < 30.0, "pmp-identity",
         fmt("20 covectors each, T=10 h=1e-2:%s (< 1e-5), %.2f s (< 30 s)", per.c_str(), secs));
}

void dilation_field() {
  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> tau_dist(0.2, 5.0);
  double hom = 0.0, fd_ratio_lo = 1e300, fd_ratio_hi = 0.0, fd_worst = 0.0;
  for (const auto& name : builtin::names()) {
    const CarnotGroup G(*builtin::by_name(name));
    for (int k = 0; k < 100; ++k) {
      const GroupElement g{oracle::random_vector(rng, G.dim(), 2.0)};
      const double tau = tau_dist(rng);
      const Eigen::VectorXd P = G.dilation_field_coefficients(g);
      const Eigen::VectorXd Pt = G.dilation_field_coefficients(G.dilate(tau, g));
      const double scale = P.cwiseAbs().maxCoeff();
      for (int i = 0; i < G.dim(); ++i) {
        hom = std::max(hom, std::abs(Pt(i) / std::pow(tau, G.algebra().degree(i)) - P(i)) / scale);
      }
      // O(eps): halving eps halves the error
      const Eigen::VectorXd V = G.dilation_field(g);
      auto fd_err = [&](double eps) {
        return ((G.dilate(1.0 + eps, g).coords - g.coords) / eps - V).norm() / V.norm();
      };
      const double e1 = fd_err(1e-4), e2 = fd_err(5e-5);
      fd_worst = std::max(fd_worst, e1);
      fd_ratio_lo = std::min(fd_ratio_lo, e1 / e2);
      fd_ratio_hi = std::max(fd_ratio_hi, e1 / e2);
    }
  }
  const bool fd_ok = fd_worst < 1e-4 * 10 && fd_ratio_lo > 1.8 && fd_ratio_hi < 2.2;
  report(hom < 1e-10 && fd_ok, "dilation-field",
         fmt("100 (g,tau) x 7 groups: homogeneity rel err %.2e (< 1e-10); FD rel err at eps=1e-4 %.2e, "
             "halving ratio in [%.3f, %.3f]",
             hom, fd_worst, fd_ratio_lo, fd_ratio_hi));
}

void endpoint_equivariance() {
  std::mt19937_64 rng(kSeed);
  double worst = 0.0;
  for (const auto& name : builtin::names()) {
    const CarnotGroup G(*builtin::by_name(name));
    const int m = G.algebra().horizontal_dim();
    for (int k = 0; k < 5; ++k) {
      Matrix values(m, 21);
      for (int j = 0; j < 21; ++j) values.col(j) = oracle::random_vector(rng, m);
      const ControlSignal u(values);
      const GroupElement end = end_point(G, u, G.identity());
      for (double tau : {0.5, 2.0}) {
        const GroupElement scaled = end_point(G, u * tau, G.identity());
        worst = std::max(worst, (scaled.coords - G.dilate(tau, end).coords).cwiseAbs().maxCoeff());
      }
    }
  }
  report(worst < 1e-8, "endpoint-dilation",
         fmt("5 random controls x 7 groups, tau=0.5,2: max deviation %.2e (< 1e-8)", worst));
}

void escape_exponent() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string per;
  for (int s : {2, 3, 4}) {
    const CarnotGroup G(builtin::filiform(s));
    const auto cov = sample_unit_covectors(G.dim(), 50, kSeed);
    auto r = run_escape(G, NormSpec::euclidean(2), cov, 100.0, 1e-2, 0.1);
    std::size_t below = 0;
    for (const auto& run : r.runs) below += run.slope && *run.slope < r.slope_floor();
    ok = ok && r.slopes_pass();
    per += fmt(" s=%d: min %.4f floor %.4f below %zu/%zu fitted;", s, r.min_slope.value_or(NAN), r.slope_floor(), below,
               r.runs.size());
    escape_runs.push_back(std::move(r));
  }
  const double secs = seconds_since(t0);
  report(ok && secs < 120.0, "escape-exponent",
         fmt("50 covectors, T=100 h=1e-2:%s %.1f s (< 120 s)", per.c_str(), secs));
}

void growth_bound() {
  const CarnotGroup H(builtin::heisenberg());
  const NormSpec ns = NormSpec::euclidean(2);
  const Covector l{Eigen::Vector3d(0.0, 1.0, 2.0 * std::numbers::pi)};
  const std::vector<Covector> one{l};
  const std::vector<Covector> two{rescale_covector(l, 2.0)};
  const auto r10 = run_growth_bound(H, ns, one, 10.0, 1e-2, 0.0);
  const auto r50 = run_growth_bound(H, ns, one, 50.0, 1e-2, 0.0);
  const double c10 = r10.proxy_constant, c50 = r50.proxy_constant;
  const double drift = std::abs(c50 - c10) / c10;

  // 2 lambda traverses the same curve twice as fast
  const auto r2 = run_growth_bound(H, ns, two, 5.0, 5e-3, 0.0);
  const double inv_sup = std::abs(r2.proxy_constant - c10) / c10;
  const auto tr = integrate_normal(H, ns, l, H.identity(), 10.0, 1e-2);
  double inv_point = 0.0;
  for (std::size_t k = 0; k < tr.size(); ++k) {
    const auto a = growth_ratio(H, l, tr.point(k));
    const auto b = growth_ratio(H, two[0], tr.point(k));
    if (a) inv_point = std::max(inv_point, std::abs(*a - *b) / std::abs(*a));
  }
  const bool bounded = r10.all_finite() && r50.all_finite();
  report(bounded && drift <= 0.10 && inv_sup < 1e-10 && inv_point < 1e-10, "growth-bound",
         fmt("lambda=(0,1,2pi): C'(T=10)=%.6f C'(T=50)=%.6f drift %.2f%% (<= 10%%); 2*lambda: sup %.1e, pointwise "
             "%.1e (< 1e-10); finite %s",
             c10, c50, 100.0 * drift, inv_sup, inv_point, bounded ? "yes" : "no"));
}

void central_translation() {
  const CarnotGroup G(builtin::filiform(3));
  const NormSpec ns = NormSpec::euclidean(2);
  std::mt19937_64 rng(kSeed);
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    const Covector l{oracle::random_vector(rng, 4)};
    const GroupElement g0{oracle::random_vector(rng, 4)};
    const auto base = integrate_normal(G, ns, l, g0, 5.0, 1e-2);
    for (int m = 1; m <= 3; ++m) {
      GroupElement c = G.identity();
      c.coords(3) = m;
      const auto moved = integrate_normal(G, ns, l, G.multiply(c, g0), 5.0, 1e-2);
      for (std::size_t j = 0; j < base.size(); ++j) {
        const Eigen::VectorXd expect = oracle::filiform_product(3, c.coords, base.points.col(static_cast<Eigen::Index>(j)));
        worst = std::max(worst, (moved.points.col(static_cast<Eigen::Index>(j)) - expect).cwiseAbs().maxCoeff());
      }
    }
  }
  const auto ex = example_filiform(3, 3, FiliformOptions{kSeed, 100.0, 1e-2, 5.0, 0, 0.1});
  report(worst < 1e-9 && ex.central_residual < 1e-9, "central-translation",
         fmt("filiform3, 10 random (lambda,g0), c=exp(mY3) m=1..3, T=5: residual %.2e, library example %.2e (< 1e-9)",
             worst, ex.central_residual));
}

void convergence_order() {
  const double e1 = heisenberg_error(1, 0.02), e2 = heisenberg_error(1, 0.01);
  const double ratio = e1 / e2;
  report(ratio >= 12.0 && ratio <= 20.0, "convergence-order",
         fmt("heisenberg N=1: err(h=0.02)=%.3e err(h=0.01)=%.3e ratio %.2f (in [12, 20])", e1, e2, ratio));
}

void subdifferential() {
  std::mt19937_64 rng(kSeed);
  const char* names[] = {"heisenberg", "filiform3", "filiform4"};
  double worst = -INFINITY;
  for (const auto& ns : {NormSpec::l1(2), NormSpec::linfty(2)}) {
    auto norm = [&](const Eigen::VectorXd& w) { return ns.norm(w); };
    for (int k = 0; k < 50; ++k) {
      const CarnotGroup G(*builtin::by_name(names[k % 3]));
      const Covector l{oracle::random_vector(rng, G.dim())};
      const GroupElement g{oracle::random_vector(rng, G.dim())};
      const ControlValue u = extract_control(G, ns, l, g);
      const Eigen::VectorXd eta = horizontal_covector(G, l, g);
      worst = std::max(worst, oracle::subdifferential_violation(norm, eta, u, 3.0, 0.05));
    }
  }
  report(worst <= 1e-12, "subdifferential-grid",
         fmt("l1 and linfty, 50 (lambda,g) each, grid radius 3 step 0.05: worst violation %.2e (<= 1e-12)", worst));
}

void no_return() {
  // the heisenberg circle joins the monitored runs
  const CarnotGroup H(builtin::heisenberg());
  const std::vector<Covector> circle{{Eigen::Vector3d(0.0, 1.0, 2.0 * std::numbers::pi)}};
  escape_runs.push_back(run_escape(H, NormSpec::euclidean(2), circle, 100.0, 1e-2, 0.1));
  std::size_t monitored = 0, returned = 0;
  double worst = INFINITY;
  for (const auto& r : escape_runs) {
    for (const auto& run : r.runs) {
      if (!run.min_return_ratio) continue;
      ++monitored;
      worst = std::min(worst, *run.min_return_ratio);
      returned += *run.min_return_ratio < kReturnFraction;
    }
  }
  report(returned == 0, "no-return",
         fmt("%zu escaped traces: min D(t)/running max after first D>1 = %.4f (>= %.1f), %zu returned", monitored, worst,
             kReturnFraction, returned));
}

}  // namespace

int main() {
  heisenberg_endpoint();
  pmp_identity();
  dilation_field();
  endpoint_equivariance();
  escape_exponent();
  growth_bound();
  central_translation();
  convergence_order();
  subdifferential();
  no_return();
  std::printf("%d failed\n", failures);
  return failures == 0 ? 0 : 1;
}
