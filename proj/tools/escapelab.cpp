// escapelab: command-line front end over the carnot C API.
//
// Exit codes: 0 when every contract checked by the subcommand holds, 1 when a
// contract is violated or a run fails, 2 on usage errors.

#include "carnot/carnot.h"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Failure reported by the library; message comes from carnot_last_error().
struct LibraryError : std::runtime_error {
  carnot_status code;
  LibraryError(carnot_status c, const std::string& what) : std::runtime_error(what), code(c) {}
};

void check(carnot_status st, const char* what) {
  if (st != CARNOT_OK) throw LibraryError(st, std::string(what) + ": " + carnot_last_error());
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Algebra = std::unique_ptr<carnot_algebra, Deleter<carnot_algebra, carnot_algebra_free>>;
using Validation = std::unique_ptr<carnot_validation, Deleter<carnot_validation, carnot_validation_free>>;
using Group = std::unique_ptr<carnot_group, Deleter<carnot_group, carnot_group_free>>;
using Norm = std::unique_ptr<carnot_norm, Deleter<carnot_norm, carnot_norm_free>>;
using Trace = std::unique_ptr<carnot_trace, Deleter<carnot_trace, carnot_trace_free>>;
using Config = std::unique_ptr<carnot_config, Deleter<carnot_config, carnot_config_free>>;
using EscapeReport = std::unique_ptr<carnot_escape_report, Deleter<carnot_escape_report, carnot_escape_report_free>>;
using GrowthReport = std::unique_ptr<carnot_growth_report, Deleter<carnot_growth_report, carnot_growth_report_free>>;
using PmpReport = std::unique_ptr<carnot_pmp_report, Deleter<carnot_pmp_report, carnot_pmp_report_free>>;
using FiliformReport =
    std::unique_ptr<carnot_filiform_report, Deleter<carnot_filiform_report, carnot_filiform_report_free>>;

std::string num(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string opt_num(int has, double v) { return has ? num(v) : std::string("-"); }

const char* run_status_name(int s) {
  switch (s) {
    case CARNOT_RUN_OK: return "ok";
    case CARNOT_RUN_CONSTANT: return "constant";
    case CARNOT_RUN_NO_ESCAPE_REGIME: return "no-escape-regime";
    case CARNOT_RUN_OVERFLOW: return "overflow";
  }
  return "?";
}

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v = 0.0;
    const char* b = item.data();
    while (*b == ' ') ++b;
    const auto res = std::from_chars(b, item.data() + item.size(), v);
    if (res.ec != std::errc() || res.ptr != item.data() + item.size()) {
      throw UsageError(std::string("bad number '") + item + "' in " + what);
    }
    out.push_back(v);
  }
  if (out.empty()) throw UsageError(std::string(what) + " is empty");
  return out;
}

// Flags shared by the experiment subcommands. Anything given here overrides
// the config file.
struct ExperimentFlags {
  std::string config;
  std::string algebra;
  std::string norm;
  std::vector<std::string> facets;
  std::optional<int> covectors;
  std::vector<std::string> lambdas;
  std::optional<std::uint64_t> seed;
  std::optional<double> horizon;
  std::optional<double> step;
  std::optional<double> sample_dt;
  std::optional<int> threads;
  std::string out;

  void attach(CLI::App* app) {
    app->add_option("--config", config, "experiment config (JSON)")->check(CLI::ExistingFile);
    app->add_option("--algebra", algebra, "built-in algebra name or definition file");
    app->add_option("--norm", norm, "euclidean | l1 | linfty | polyhedral");
    app->add_option("--facet", facets, "polyhedral facet functional, comma separated (repeatable)");
    app->add_option("--covectors", covectors, "number of sampled unit covectors")->check(CLI::PositiveNumber);
    app->add_option("--lambda", lambdas, "explicit covector, comma separated (repeatable)");
    app->add_option("--seed", seed, "covector sampling seed");
    app->add_option("--T", horizon, "horizon")->check(CLI::PositiveNumber);
    app->add_option("--h", step, "integration step")->check(CLI::PositiveNumber);
    app->add_option("--sample-dt", sample_dt, "spacing of CSV rows (0: all samples)")->check(CLI::NonNegativeNumber);
    app->add_option("--threads", threads, "worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
    app->add_option("--out", out, "output directory");
  }

  Config build() const {
    carnot_config* raw = nullptr;
    if (!config.empty()) {
      check(carnot_config_from_file(config.c_str(), &raw), "config");
    } else {
      check(carnot_config_create(&raw), "config");
    }
    Config cfg(raw);
    if (!algebra.empty()) check(carnot_config_set_algebra(cfg.get(), algebra.c_str()), "--algebra");

    if (!norm.empty() || !facets.empty()) {
      if (norm.empty()) throw UsageError("--facet requires --norm polyhedral");
      std::vector<double> flat;
      int m1 = 0;
      for (const auto& f : facets) {
        const auto row = parse_list(f, "--facet");
        if (m1 != 0 && static_cast<int>(row.size()) != m1) throw UsageError("facets must share one dimension");
        m1 = static_cast<int>(row.size());
        flat.insert(flat.end(), row.begin(), row.end());
      }
      check(carnot_config_set_norm(cfg.get(), norm.c_str(), flat.data(), facets.size(), m1), "--norm");
    }

    if (covectors && !lambdas.empty()) throw UsageError("give either --covectors or --lambda, not both");
    if (!lambdas.empty()) {
      if (seed) throw UsageError("--seed only applies to sampled covectors");
      std::vector<double> flat;
      int n = 0;
      for (const auto& l : lambdas) {
        const auto row = parse_list(l, "--lambda");
        if (n != 0 && static_cast<int>(row.size()) != n) throw UsageError("covectors must share one dimension");
        n = static_cast<int>(row.size());
        flat.insert(flat.end(), row.begin(), row.end());
      }
      check(carnot_config_set_covectors(cfg.get(), flat.data(), lambdas.size(), n), "--lambda");
    } else if (covectors) {
      // a seed from the config file counts; otherwise --seed is required
      if (!seed && !carnot_config_has_sampling(cfg.get())) {
        throw UsageError("--seed is required when sampling covectors");
      }
      if (seed) check(carnot_config_set_seed(cfg.get(), *seed), "--seed");
      check(carnot_config_set_sample_count(cfg.get(), *covectors), "--covectors");
    } else if (seed) {
      if (!carnot_config_has_sampling(cfg.get())) throw UsageError("--seed only applies to sampled covectors");
      check(carnot_config_set_seed(cfg.get(), *seed), "--seed");
    }

    if (horizon) check(carnot_config_set_horizon(cfg.get(), *horizon), "--T");
    if (step) check(carnot_config_set_step(cfg.get(), *step), "--h");
    if (sample_dt) check(carnot_config_set_sample_dt(cfg.get(), *sample_dt), "--sample-dt");
    if (threads) check(carnot_config_set_threads(cfg.get(), *threads), "--threads");
    if (!out.empty()) check(carnot_config_set_out_dir(cfg.get(), out.c_str()), "--out");
    return cfg;
  }
};

fs::path prepare_out(const std::string& dir) {
  fs::path p = dir.empty() ? fs::path(".") : fs::path(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw LibraryError(CARNOT_ERR_IO, "cannot create output directory '" + p.string() + "': " + ec.message());
  return p;
}

void print_config(const carnot_config* cfg) {
  std::cout << "algebra " << carnot_config_algebra(cfg) << "  T " << num(carnot_config_horizon(cfg)) << "  h "
            << num(carnot_config_step(cfg)) << '\n';
}

// ---- subcommands

int cmd_validate(const std::string& source, double tol, const std::string& out) {
  carnot_algebra* raw = nullptr;
  check(carnot_algebra_resolve(source.c_str(), &raw), "algebra");
  Algebra a(raw);
  carnot_validation* vraw = nullptr;
  check(carnot_algebra_validate(a.get(), tol, &vraw), "validate");
  Validation v(vraw);

  std::cout << "algebra " << carnot_algebra_name(a.get()) << ": dim " << carnot_algebra_dim(a.get()) << ", step "
            << carnot_algebra_step(a.get()) << ", rank " << carnot_algebra_horizontal_dim(a.get()) << '\n';
  std::ostringstream csv;
  csv << "check,passed,i,j,k,detail\n";
  for (size_t c = 0; c < carnot_validation_count(v.get()); ++c) {
    const char* name = nullptr;
    const char* detail = nullptr;
    int passed = 0;
    int triple[3] = {0, 0, 0};
    check(carnot_validation_check(v.get(), c, &name, &passed, triple, &detail), "validate");
    std::cout << "  " << (passed ? "PASS " : "FAIL ") << name;
    if (triple[0] != 0) std::cout << " at (" << triple[0] << ',' << triple[1] << ',' << triple[2] << ')';
    if (detail && *detail) std::cout << "  " << detail;
    std::cout << '\n';
    csv << name << ',' << passed << ',' << triple[0] << ',' << triple[1] << ',' << triple[2] << ",\"" << detail
        << "\"\n";
  }
  if (!out.empty()) {
    const fs::path file = prepare_out(out) / "validation.csv";
    std::ofstream f(file);
    if (!(f << csv.str())) throw LibraryError(CARNOT_ERR_IO, "cannot write " + file.string());
    std::cout << "wrote " << file.string() << '\n';
  }
  const bool ok = carnot_validation_all_passed(v.get());
  std::cout << (ok ? "valid" : "INVALID") << '\n';
  return ok ? kExitOk : kExitViolation;
}

int cmd_integrate(const ExperimentFlags& flags, const std::string& start_text, std::size_t stride) {
  Config cfg = flags.build();
  carnot_algebra* araw = nullptr;
  check(carnot_algebra_resolve(carnot_config_algebra(cfg.get()), &araw), "algebra");
  Algebra a(araw);
  carnot_group* graw = nullptr;
  check(carnot_group_create(a.get(), &graw), "group");
  Group g(graw);
  const int n = carnot_group_dim(g.get());
  const int m1 = carnot_algebra_horizontal_dim(a.get());

  carnot_norm* nraw = nullptr;
  check(carnot_config_make_norm(cfg.get(), m1, &nraw), "norm");
  Norm ns(nraw);

  size_t count = 0;
  check(carnot_config_covector_count(cfg.get(), &count), "covectors");
  if (count == 0) throw UsageError("integrate needs --lambda, --covectors with --seed, or covectors in --config");
  std::vector<double> flat(count * static_cast<size_t>(n));
  check(carnot_config_covectors(cfg.get(), n, flat.data()), "covectors");
  std::vector<std::vector<double>> covectors;
  for (size_t r = 0; r < count; ++r) covectors.emplace_back(flat.begin() + r * n, flat.begin() + (r + 1) * n);

  std::vector<double> start(n, 0.0);
  const bool from_identity = start_text.empty();
  if (!from_identity) {
    start = parse_list(start_text, "--start");
    if (static_cast<int>(start.size()) != n) throw UsageError("--start dimension does not match the group");
  }

  const fs::path dir = prepare_out(carnot_config_out_dir(cfg.get()));
  print_config(cfg.get());
  bool ok = true;
  for (std::size_t i = 0; i < covectors.size(); ++i) {
    carnot_trace* traw = nullptr;
    const carnot_status st = carnot_integrate_normal(g.get(), ns.get(), covectors[i].data(), start.data(),
                                                     carnot_config_horizon(cfg.get()), carnot_config_step(cfg.get()),
                                                     &traw);
    if (st == CARNOT_ERR_INTEGRATION) {
      std::cout << "  covector " << i << ": overflow (" << carnot_last_error() << ")\n";
      ok = false;
      continue;
    }
    check(st, "integrate");
    Trace tr(traw);
    const fs::path file = dir / ("trace_" + std::to_string(i) + ".csv");
    check(carnot_trace_write_csv(tr.get(), file.string().c_str(), stride), "trace csv");

    std::vector<double> end(n);
    double t_end = 0.0;
    check(carnot_trace_sample(tr.get(), carnot_trace_size(tr.get()) - 1, &t_end, end.data(), nullptr, nullptr),
          "trace");
    double qn = 0.0;
    check(carnot_group_quasinorm(g.get(), end.data(), &qn), "quasinorm");
    std::cout << "  covector " << i << ": " << carnot_trace_size(tr.get()) << " samples, h "
              << num(carnot_trace_step(tr.get())) << ", D(T) " << num(qn);
    if (from_identity) {
      double res = 0.0;
      check(carnot_trace_pmp_residual(g.get(), ns.get(), covectors[i].data(), tr.get(), &res), "pmp");
      std::cout << ", pmp residual " << num(res);
      if (!(res < 1e-5)) ok = false;
    }
    std::cout << "  -> " << file.string() << '\n';
  }
  std::cout << (ok ? "ok" : "FAILED") << '\n';
  return ok ? kExitOk : kExitViolation;
}

int cmd_escape(const ExperimentFlags& flags) {
  Config cfg = flags.build();
  carnot_escape_report* raw = nullptr;
  check(carnot_run_escape(cfg.get(), &raw), "escape");
  EscapeReport r(raw);
  const fs::path dir = prepare_out(carnot_config_out_dir(cfg.get()));
  check(carnot_escape_write_csv(r.get(), (dir / "escape.csv").string().c_str()), "escape csv");
  check(carnot_escape_write_summary_csv(r.get(), (dir / "escape_summary.csv").string().c_str()), "summary csv");

  carnot_escape_summary s{};
  check(carnot_escape_summary_get(r.get(), &s), "summary");
  print_config(cfg.get());
  std::cout << "step s = " << s.step << ", slope floor 1/s - 0.05 = " << num(s.slope_floor) << '\n';
  std::cout << "idx  N          status            slope     c_emp     t_escape  min_return\n";
  for (size_t i = 0; i < s.runs; ++i) {
    carnot_escape_run run{};
    check(carnot_escape_run_get(r.get(), i, &run), "run");
    auto cell = [](int has, double v) {
      char buf[32];
      if (has) std::snprintf(buf, sizeof buf, "%.4f", v); else std::snprintf(buf, sizeof buf, "-");
      return std::string(buf);
    };
    char line[256];
    std::snprintf(line, sizeof line, "%-4d %-10.4g %-17s %-9s %-9s %-9s %s\n", run.index, run.covector_norm,
                  run_status_name(run.status), cell(run.has_slope, run.slope).c_str(),
                  cell(run.has_c_emp, run.c_emp).c_str(), cell(run.has_escape_time, run.escape_time).c_str(),
                  cell(run.has_return_ratio, run.min_return_ratio).c_str());
    std::cout << line;
  }
  std::cout << "fitted " << s.fitted << "/" << s.runs << ", min slope " << opt_num(s.has_min_slope, s.min_slope)
            << ", median slope " << opt_num(s.has_min_slope, s.median_slope) << ", proxy constant "
            << opt_num(s.has_scaled_constant, s.min_scaled_constant) << '\n';
  std::cout << "slopes >= floor: " << (s.slopes_pass ? "PASS" : "FAIL")
            << "\nno return within 0.5 D_max: " << (s.no_return_pass ? "PASS" : "FAIL") << '\n';
  std::cout << "wrote " << (dir / "escape.csv").string() << ", " << (dir / "escape_summary.csv").string() << '\n';
  return s.slopes_pass && s.no_return_pass ? kExitOk : kExitViolation;
}

int cmd_growth(const ExperimentFlags& flags) {
  Config cfg = flags.build();
  carnot_growth_report* raw = nullptr;
  check(carnot_run_growth_bound(cfg.get(), &raw), "growth-bound");
  GrowthReport r(raw);
  const fs::path dir = prepare_out(carnot_config_out_dir(cfg.get()));
  check(carnot_growth_write_csv(r.get(), (dir / "growth.csv").string().c_str()), "growth csv");
  print_config(cfg.get());
  for (size_t i = 0; i < carnot_growth_report_count(r.get()); ++i) {
    int status = 0;
    double sup = 0.0;
    check(carnot_growth_run_get(r.get(), i, &status, &sup), "run");
    std::cout << "  covector " << i << ": " << run_status_name(status) << ", sup ratio " << num(sup) << '\n';
  }
  const bool ok = carnot_growth_all_finite(r.get());
  std::cout << "proxy constant C' = " << num(carnot_growth_proxy_constant(r.get())) << '\n'
            << "bounded: " << (ok ? "PASS" : "FAIL") << "\nwrote " << (dir / "growth.csv").string() << '\n';
  return ok ? kExitOk : kExitViolation;
}

int cmd_pmp(const ExperimentFlags& flags) {
  Config cfg = flags.build();
  carnot_pmp_report* raw = nullptr;
  check(carnot_run_pmp_check(cfg.get(), &raw), "pmp-check");
  PmpReport r(raw);
  const fs::path dir = prepare_out(carnot_config_out_dir(cfg.get()));
  check(carnot_pmp_write_csv(r.get(), (dir / "pmp.csv").string().c_str()), "pmp csv");
  print_config(cfg.get());
  for (size_t i = 0; i < carnot_pmp_report_count(r.get()); ++i) {
    int status = 0;
    double res = 0.0;
    check(carnot_pmp_run_get(r.get(), i, &status, &res), "run");
    std::cout << "  covector " << i << ": " << run_status_name(status) << ", residual " << num(res) << '\n';
  }
  const bool ok = carnot_pmp_passed(r.get());
  std::cout << "max residual " << num(carnot_pmp_max_residual(r.get())) << " (tol 1e-5): " << (ok ? "PASS" : "FAIL")
            << "\nwrote " << (dir / "pmp.csv").string() << '\n';
  return ok ? kExitOk : kExitViolation;
}

int cmd_heisenberg(int winding, double h, const std::string& out, std::size_t stride) {
  carnot_heisenberg_result r{};
  check(carnot_example_heisenberg(winding, h, &r), "example heisenberg");
  const fs::path dir = prepare_out(out);

  // trace of the matching covector next to the closed form
  carnot_algebra* araw = nullptr;
  check(carnot_algebra_builtin("heisenberg", &araw), "algebra");
  Algebra a(araw);
  carnot_group* graw = nullptr;
  check(carnot_group_create(a.get(), &graw), "group");
  Group g(graw);
  carnot_norm* nraw = nullptr;
  check(carnot_norm_create("euclidean", 2, nullptr, 0, &nraw), "norm");
  Norm ns(nraw);
  const double lambda[3] = {0.0, 1.0, 2.0 * std::numbers::pi * winding};
  carnot_trace* traw = nullptr;
  check(carnot_integrate_normal(g.get(), ns.get(), lambda, nullptr, 1.0, h, &traw), "integrate");
  Trace tr(traw);

  const fs::path file = dir / ("heisenberg_N" + std::to_string(winding) + ".csv");
  std::ofstream csv(file);
  csv << "t,x,y,z,x_closed,y_closed,z_closed,deviation\n";
  const size_t size = carnot_trace_size(tr.get());
  for (size_t k = 0; k < size; ++k) {
    if (k % (stride ? stride : 1) != 0 && k + 1 != size) continue;
    double t = 0.0, p[3], c[3];
    check(carnot_trace_sample(tr.get(), k, &t, p, nullptr, nullptr), "trace");
    check(carnot_heisenberg_circle_point(winding, t, c), "closed form");
    const double dev = std::max({std::fabs(p[0] - c[0]), std::fabs(p[1] - c[1]), std::fabs(p[2] - c[2])});
    csv << num(t) << ',' << num(p[0]) << ',' << num(p[1]) << ',' << num(p[2]) << ',' << num(c[0]) << ','
        << num(c[1]) << ',' << num(c[2]) << ',' << num(dev) << '\n';
  }
  if (!csv.flush()) throw LibraryError(CARNOT_ERR_IO, "cannot write " + file.string());

  std::cout << "Heisenberg circle lift, N = " << r.winding << ", h = " << num(r.step) << '\n'
            << "  closed end      (" << num(r.closed_end[0]) << ", " << num(r.closed_end[1]) << ", "
            << num(r.closed_end[2]) << ")  expected z = 1/(4 pi N) = " << num(1.0 / (4.0 * std::numbers::pi * winding))
            << '\n'
            << "  integrated end  (" << num(r.integrated_end[0]) << ", " << num(r.integrated_end[1]) << ", "
            << num(r.integrated_end[2]) << ")\n"
            << "  max deviation   " << num(r.max_deviation) << " (tol 1e-6)\n"
            << "  closed speed    |v| - 1 <= " << num(r.closed_speed_deviation) << '\n'
            << "  control speed   |u| - 1 <= " << num(r.trace_speed_deviation) << '\n'
            << "  pmp residual    " << num(r.pmp_residual) << '\n'
            << (r.passed ? "PASS" : "FAIL") << "\nwrote " << file.string() << '\n';
  return r.passed ? kExitOk : kExitViolation;
}

int cmd_filiform(int s, int translations, const carnot_filiform_options& opts, const std::string& out) {
  carnot_filiform_report* raw = nullptr;
  check(carnot_example_filiform(s, translations, &opts, &raw), "example filiform");
  FiliformReport r(raw);
  const fs::path dir = prepare_out(out);
  const fs::path file = dir / ("filiform" + std::to_string(s) + ".csv");
  std::ofstream csv(file);
  csv << "scan,K,T,status,slope,c_emp,min_return_ratio\n";

  const double residual = carnot_filiform_central_residual(r.get());
  std::cout << "filiform step " << s << ": central translation residual " << num(residual) << " over m = 1.."
            << translations << " (tol 1e-9)\n";
  for (size_t i = 0; i < carnot_filiform_scan_count(r.get()); ++i) {
    double k_top = 0.0, horizon = 0.0;
    carnot_escape_run run{};
    check(carnot_filiform_scan_get(r.get(), i, &k_top, &horizon, &run), "scan");
    std::cout << "  K " << num(k_top) << ", T " << num(horizon) << ": slope " << opt_num(run.has_slope, run.slope)
              << " (1/s = " << num(1.0 / s) << ")\n";
    csv << i << ',' << num(k_top) << ',' << num(horizon) << ',' << run_status_name(run.status) << ','
        << (run.has_slope ? num(run.slope) : "") << ',' << (run.has_c_emp ? num(run.c_emp) : "") << ','
        << (run.has_return_ratio ? num(run.min_return_ratio) : "") << '\n';
  }
  if (!csv.flush()) throw LibraryError(CARNOT_ERR_IO, "cannot write " + file.string());
  const bool ok = carnot_filiform_passed(r.get());
  std::cout << (ok ? "PASS" : "FAIL") << "\nwrote " << file.string() << '\n';
  return ok ? kExitOk : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"escapelab: normal curves in Carnot groups and their escape rates"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(carnot_version()));

  std::string validate_source;
  double validate_tol = 1e-12;
  std::string validate_out;
  auto* validate = app.add_subcommand("validate", "check the axioms of an algebra definition");
  validate->add_option("algebra", validate_source, "definition file or built-in name")->required();
  validate->add_option("--tol", validate_tol, "absolute tolerance on structure constants");
  validate->add_option("--out", validate_out, "also write validation.csv here");

  ExperimentFlags integrate_flags, escape_flags, growth_flags, pmp_flags;
  std::string start;
  std::size_t stride = 1;
  auto* integrate = app.add_subcommand("integrate", "integrate normal curves and write their traces");
  integrate_flags.attach(integrate);
  integrate->add_option("--start", start, "initial point, comma separated (default identity)");
  integrate->add_option("--stride", stride, "keep every stride-th sample")->check(CLI::PositiveNumber);

  auto* escape = app.add_subcommand("escape", "escape-rate experiment");
  escape_flags.attach(escape);
  auto* growth = app.add_subcommand("growth-bound", "growth ratio of the covector along traces");
  growth_flags.attach(growth);
  auto* pmp = app.add_subcommand("pmp-check", "end-point identity check");
  pmp_flags.attach(pmp);

  auto* example = app.add_subcommand("example", "worked examples");
  example->require_subcommand(1);
  int winding = 1;
  double heis_h = 1e-4;
  std::string heis_out = ".";
  std::size_t heis_stride = 100;
  auto* heis = example->add_subcommand("heisenberg", "lift of a circle travelled N times");
  heis->add_option("--N", winding, "winding number")->check(CLI::PositiveNumber);
  heis->add_option("--h", heis_h, "integration step")->check(CLI::PositiveNumber);
  heis->add_option("--out", heis_out, "output directory");
  heis->add_option("--stride", heis_stride, "keep every stride-th sample in the CSV")->check(CLI::PositiveNumber);

  int fil_s = 3;
  int fil_m = 3;
  std::string fil_out = ".";
  carnot_filiform_options fil_opts;
  carnot_filiform_options_default(&fil_opts);
  auto* fil = example->add_subcommand("filiform", "central translations and winding scan");
  fil->add_option("--s", fil_s, "step of the filiform algebra (2..6)")->check(CLI::Range(2, 6));
  fil->add_option("--m", fil_m, "number of central translations exp(m Y_s)")->check(CLI::PositiveNumber);
  fil->add_option("--seed", fil_opts.seed, "seed of the random covector and start");
  fil->add_option("--T", fil_opts.horizon, "base horizon of the scan")->check(CLI::PositiveNumber);
  fil->add_option("--h", fil_opts.step, "integration step")->check(CLI::PositiveNumber);
  fil->add_option("--check-T", fil_opts.check_horizon, "horizon of the translation check")->check(CLI::PositiveNumber);
  fil->add_option("--scan", fil_opts.scan_count, "number of scanned covectors")->check(CLI::NonNegativeNumber);
  fil->add_option("--out", fil_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << '\n' << app.help();
    return kExitUsage;
  }

  try {
    if (*validate) return cmd_validate(validate_source, validate_tol, validate_out);
    if (*integrate) return cmd_integrate(integrate_flags, start, stride);
    if (*escape) return cmd_escape(escape_flags);
    if (*growth) return cmd_growth(growth_flags);
    if (*pmp) return cmd_pmp(pmp_flags);
    if (*heis) return cmd_heisenberg(winding, heis_h, heis_out, heis_stride);
    if (*fil) return cmd_filiform(fil_s, fil_m, fil_opts, fil_out);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\nRun with --help for more information.\n";
    return kExitUsage;
  } catch (const LibraryError& e) {
    std::cerr << "error: " << e.what() << '\n';
    // bad input reaching the library is a usage problem, the rest is a failed run
    return e.code == CARNOT_ERR_INPUT ? kExitUsage : kExitViolation;
  }
  return kExitUsage;
}
