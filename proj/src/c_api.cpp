#include "carnot/carnot.h"

#include "carnot/error.hpp"
#include "carnot/escape.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <new>
#include <optional>
#include <string>

struct carnot_algebra {
  carnot::StratifiedAlgebra value;
};
struct carnot_validation {
  carnot::ValidationReport value;
};
struct carnot_group {
  carnot::CarnotGroup value;
};
struct carnot_norm {
  carnot::NormSpec value;
};
struct carnot_trace {
  carnot::GeodesicTrace value;
};
struct carnot_config {
  carnot::ExperimentConfig value;
  std::uint64_t pending_seed = 0;
};
struct carnot_escape_report {
  carnot::EscapeReport value;
};
struct carnot_growth_report {
  carnot::GrowthReport value;
};
struct carnot_pmp_report {
  carnot::PmpReport value;
};
struct carnot_filiform_report {
  carnot::FiliformReport value;
};

namespace {

thread_local std::string g_last_error;

carnot_status fail(carnot_status code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

template <class F>
carnot_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return CARNOT_OK;
  } catch (const carnot::InputError& e) {
    return fail(CARNOT_ERR_INPUT, e.what());
  } catch (const carnot::IntegrationError& e) {
    return fail(CARNOT_ERR_INTEGRATION, e.what());
  } catch (const std::bad_alloc&) {
    return fail(CARNOT_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(CARNOT_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(CARNOT_ERR_INTERNAL, "unknown error");
  }
}

void need(const void* p, const char* what) {
  if (p == nullptr) throw carnot::InputError(std::string(what) + " is null");
}

Eigen::VectorXd vec(const double* p, int n, const char* what) {
  need(p, what);
  return Eigen::Map<const Eigen::VectorXd>(p, n);
}

void put(const Eigen::VectorXd& v, double* out) {
  need(out, "output");
  std::memcpy(out, v.data(), sizeof(double) * static_cast<std::size_t>(v.size()));
}

// Eigen stores column-major; the C side is row-major.
void put_matrix(const carnot::Matrix& m, double* out) {
  need(out, "output");
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out[i * m.cols() + j] = m(i, j);
}

carnot::ControlSignal signal(const double* controls, std::size_t nodes, int m1) {
  need(controls, "controls");
  if (nodes < 2) throw carnot::InputError("a control needs at least two grid nodes");
  carnot::Matrix values(m1, static_cast<Eigen::Index>(nodes));
  for (std::size_t k = 0; k < nodes; ++k)
    for (int i = 0; i < m1; ++i) values(i, static_cast<Eigen::Index>(k)) = controls[k * m1 + i];
  return carnot::ControlSignal(std::move(values));
}

std::vector<Eigen::VectorXd> rows(const double* data, std::size_t count, int width) {
  std::vector<Eigen::VectorXd> out;
  if (count > 0) need(data, "rows");
  for (std::size_t r = 0; r < count; ++r) out.emplace_back(Eigen::Map<const Eigen::VectorXd>(data + r * width, width));
  return out;
}

template <class W>
carnot_status write_io(const char* path, W&& writer) {
  if (path == nullptr) return fail(CARNOT_ERR_INPUT, "path is null");
  std::ofstream out(path, std::ios::binary);
  if (!out) return fail(CARNOT_ERR_IO, std::string("cannot open '") + path + "' for writing");
  const carnot_status st = guarded([&] { writer(out); });
  if (st != CARNOT_OK) return st;
  out.flush();
  if (!out) return fail(CARNOT_ERR_IO, std::string("write failed for '") + path + "'");
  return CARNOT_OK;
}

int status_code(carnot::RunStatus s) {
  switch (s) {
    case carnot::RunStatus::ok: return CARNOT_RUN_OK;
    case carnot::RunStatus::constant: return CARNOT_RUN_CONSTANT;
    case carnot::RunStatus::no_escape_regime: return CARNOT_RUN_NO_ESCAPE_REGIME;
    case carnot::RunStatus::overflow: return CARNOT_RUN_OVERFLOW;
  }
  return CARNOT_RUN_OK;
}

void fill_run(const carnot::CovectorEscape& e, carnot_escape_run* out) {
  *out = carnot_escape_run{};
  out->index = e.index;
  out->status = status_code(e.status);
  out->covector_norm = e.covector_norm;
  out->has_slope = e.slope.has_value();
  out->slope = e.slope.value_or(NAN);
  out->fit_points = e.fit_points;
  out->has_c_emp = e.c_emp.has_value();
  out->c_emp = e.c_emp.value_or(NAN);
  out->has_escape_time = e.escape_time.has_value();
  out->escape_time = e.escape_time.value_or(NAN);
  out->has_return_ratio = e.min_return_ratio.has_value();
  out->min_return_ratio = e.min_return_ratio.value_or(NAN);
  out->d_max = e.d_max;
}

template <class T, class F>
carnot_status make(T** out, F&& build) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    *out = new T{build()};
  });
}

}  // namespace

extern "C" {

const char* carnot_version(void) { return "0.1.0"; }
const char* carnot_last_error(void) { return g_last_error.c_str(); }

// ---- algebra

carnot_status carnot_algebra_builtin(const char* name, carnot_algebra** out) {
  return make(out, [&] {
    need(name, "name");
    auto a = carnot::builtin::by_name(name);
    if (!a) throw carnot::InputError(std::string("unknown built-in algebra '") + name + "'");
    return std::move(*a);
  });
}

carnot_status carnot_algebra_from_file(const char* path, carnot_algebra** out) {
  return make(out, [&] {
    need(path, "path");
    return carnot::load_algebra_file(path);
  });
}

carnot_status carnot_algebra_from_json(const char* text, carnot_algebra** out) {
  return make(out, [&] {
    need(text, "text");
    return carnot::parse_algebra_json(text);
  });
}

carnot_status carnot_algebra_resolve(const char* name_or_path, carnot_algebra** out) {
  return make(out, [&] {
    need(name_or_path, "name");
    return carnot::resolve_algebra(name_or_path);
  });
}

carnot_status carnot_algebra_from_constants(const int* strata, size_t strata_count, const double* constants,
                                            size_t count, carnot_algebra** out) {
  return make(out, [&] {
    need(strata, "strata");
    need(constants, "constants");
    return carnot::StratifiedAlgebra(std::vector<int>(strata, strata + strata_count),
                                     std::vector<double>(constants, constants + count));
  });
}

void carnot_algebra_free(carnot_algebra* algebra) { delete algebra; }

int carnot_algebra_dim(const carnot_algebra* a) { return a ? a->value.dim() : 0; }
int carnot_algebra_step(const carnot_algebra* a) { return a ? a->value.step() : 0; }
int carnot_algebra_horizontal_dim(const carnot_algebra* a) { return a ? a->value.horizontal_dim() : 0; }
const char* carnot_algebra_name(const carnot_algebra* a) { return a ? a->value.name().c_str() : ""; }

carnot_status carnot_algebra_degrees(const carnot_algebra* a, int* out) {
  return guarded([&] {
    need(a, "algebra");
    need(out, "output");
    std::copy(a->value.degrees().begin(), a->value.degrees().end(), out);
  });
}

carnot_status carnot_algebra_bracket(const carnot_algebra* a, const double* x, const double* y, double* out) {
  return guarded([&] {
    need(a, "algebra");
    const int n = a->value.dim();
    put(a->value.bracket(vec(x, n, "x"), vec(y, n, "y")), out);
  });
}

carnot_status carnot_algebra_adjoint_operator(const carnot_algebra* a, const double* x, double* out) {
  return guarded([&] {
    need(a, "algebra");
    put_matrix(a->value.adjoint_operator(vec(x, a->value.dim(), "x")), out);
  });
}

carnot_status carnot_algebra_validate(const carnot_algebra* a, double tol, carnot_validation** out) {
  return make(out, [&] {
    need(a, "algebra");
    if (!(tol >= 0.0)) throw carnot::InputError("tolerance must be non-negative");
    return carnot::validate(a->value, tol);
  });
}

void carnot_validation_free(carnot_validation* r) { delete r; }
size_t carnot_validation_count(const carnot_validation* r) { return r ? r->value.checks.size() : 0; }
int carnot_validation_all_passed(const carnot_validation* r) { return r && r->value.all_passed() ? 1 : 0; }

carnot_status carnot_validation_check(const carnot_validation* r, size_t index, const char** name, int* passed,
                                      int triple[3], const char** detail) {
  return guarded([&] {
    need(r, "report");
    if (index >= r->value.checks.size()) throw carnot::InputError("check index out of range");
    const auto& c = r->value.checks[index];
    if (name) *name = c.name.c_str();
    if (passed) *passed = c.passed ? 1 : 0;
    if (triple) {
      for (int i = 0; i < 3; ++i) triple[i] = c.counterexample ? (*c.counterexample)[i] + 1 : 0;
    }
    if (detail) *detail = c.detail.c_str();
  });
}

// ---- group

carnot_status carnot_group_create(const carnot_algebra* a, carnot_group** out) {
  return make(out, [&] {
    need(a, "algebra");
    return carnot::CarnotGroup(a->value);
  });
}

void carnot_group_free(carnot_group* g) { delete g; }
int carnot_group_dim(const carnot_group* g) { return g ? g->value.dim() : 0; }
int carnot_group_step(const carnot_group* g) { return g ? g->value.step() : 0; }

#define CARNOT_GROUP_GUARD(...)          \
  return guarded([&] {                     \
    need(group, "group");                  \
    const auto& G = group->value;          \
    const int n = G.dim();                 \
    __VA_ARGS__;                           \
  })

carnot_status carnot_group_multiply(const carnot_group* group, const double* g, const double* h, double* out) {
  CARNOT_GROUP_GUARD(put(G.multiply({vec(g, n, "g")}, {vec(h, n, "h")}).coords, out));
}

carnot_status carnot_group_inverse(const carnot_group* group, const double* g, double* out) {
  CARNOT_GROUP_GUARD(put(G.inverse({vec(g, n, "g")}).coords, out));
}

carnot_status carnot_group_dilate(const carnot_group* group, double tau, const double* g, double* out) {
  CARNOT_GROUP_GUARD(put(G.dilate(tau, {vec(g, n, "g")}).coords, out));
}

carnot_status carnot_group_adjoint(const carnot_group* group, const double* g, double* out) {
  CARNOT_GROUP_GUARD(put_matrix(G.adjoint({vec(g, n, "g")}), out));
}

carnot_status carnot_group_left_jacobian(const carnot_group* group, const double* g, double* out) {
  CARNOT_GROUP_GUARD(put_matrix(G.left_jacobian({vec(g, n, "g")}), out));
}

carnot_status carnot_group_right_jacobian(const carnot_group* group, const double* g, double* out) {
  CARNOT_GROUP_GUARD(put_matrix(G.right_jacobian({vec(g, n, "g")}), out));
}

carnot_status carnot_group_dilation_field(const carnot_group* group, const double* g, double* out) {
  CARNOT_GROUP_GUARD(put(G.dilation_field({vec(g, n, "g")}), out));
}

carnot_status carnot_group_dilation_coefficients(const carnot_group* group, const double* g, double* out) {
  CARNOT_GROUP_GUARD(put(G.dilation_field_coefficients({vec(g, n, "g")}), out));
}

carnot_status carnot_group_quasinorm(const carnot_group* group, const double* g, double* out) {
  CARNOT_GROUP_GUARD(need(out, "output"); *out = G.homogeneous_quasinorm({vec(g, n, "g")}));
}

#undef CARNOT_GROUP_GUARD

double carnot_covector_norm(const double* lambda, size_t n) {
  if (lambda == nullptr) return 0.0;
  double s = 0.0;
  for (size_t i = 0; i < n; ++i) s += std::fabs(lambda[i]);
  return s;
}

carnot_status carnot_covector_rescale(const double* lambda, size_t n, double alpha, double* out) {
  return guarded([&] {
    const carnot::Covector c{vec(lambda, static_cast<int>(n), "lambda")};
    put(carnot::rescale_covector(c, alpha).coeffs, out);
  });
}

carnot_status carnot_sample_unit_covectors(int n, int count, uint64_t seed, double* out) {
  return guarded([&] {
    need(out, "output");
    if (n <= 0 || count < 0) throw carnot::InputError("dimension must be positive and count non-negative");
    const auto cs = carnot::sample_unit_covectors(n, count, seed);
    for (std::size_t r = 0; r < cs.size(); ++r) put(cs[r].coeffs, out + r * n);
  });
}

// ---- norms and controls

carnot_status carnot_norm_create(const char* kind, int m1, const double* facets, size_t facet_count,
                                 carnot_norm** out) {
  return make(out, [&] {
    need(kind, "kind");
    if (m1 <= 0) throw carnot::InputError("horizontal dimension must be positive");
    return carnot::NormSpec(carnot::norm_kind_from_string(kind), m1, rows(facets, facet_count, m1));
  });
}

void carnot_norm_free(carnot_norm* norm) { delete norm; }

carnot_status carnot_norm_value(const carnot_norm* norm, const double* v, double* out) {
  return guarded([&] {
    need(norm, "norm");
    need(out, "output");
    *out = norm->value.norm(vec(v, norm->value.horizontal_dim(), "v"));
  });
}

carnot_status carnot_norm_dual(const carnot_norm* norm, const double* a, double* out) {
  return guarded([&] {
    need(norm, "norm");
    need(out, "output");
    *out = norm->value.dual_norm(vec(a, norm->value.horizontal_dim(), "a"));
  });
}

carnot_status carnot_energy(const carnot_norm* norm, const double* v, double* out) {
  return guarded([&] {
    need(norm, "norm");
    need(out, "output");
    *out = carnot::energy(norm->value, vec(v, norm->value.horizontal_dim(), "v"));
  });
}

carnot_status carnot_in_subdifferential(const carnot_norm* norm, const double* a, const double* v, double tol,
                                        int* out) {
  return guarded([&] {
    need(norm, "norm");
    need(out, "output");
    const int m = norm->value.horizontal_dim();
    *out = carnot::in_subdifferential(norm->value, vec(a, m, "a"), vec(v, m, "v"), tol) ? 1 : 0;
  });
}

carnot_status carnot_extract_control(const carnot_group* group, const carnot_norm* norm, const double* lambda,
                                     const double* g, double* u) {
  return guarded([&] {
    need(group, "group");
    need(norm, "norm");
    const int n = group->value.dim();
    put(carnot::extract_control(group->value, norm->value, {vec(lambda, n, "lambda")}, {vec(g, n, "g")}), u);
  });
}

// ---- integration

carnot_status carnot_integrate_normal(const carnot_group* group, const carnot_norm* norm, const double* lambda,
                                      const double* g0, double horizon, double step, carnot_trace** out) {
  return make(out, [&] {
    need(group, "group");
    need(norm, "norm");
    const int n = group->value.dim();
    const carnot::GroupElement start =
        g0 ? carnot::GroupElement{vec(g0, n, "g0")} : group->value.identity();
    return carnot::integrate_normal(group->value, norm->value, {vec(lambda, n, "lambda")}, start, horizon, step);
  });
}

void carnot_trace_free(carnot_trace* trace) { delete trace; }
size_t carnot_trace_size(const carnot_trace* trace) { return trace ? trace->value.size() : 0; }
double carnot_trace_step(const carnot_trace* trace) { return trace ? trace->value.step : 0.0; }

carnot_status carnot_trace_sample(const carnot_trace* trace, size_t k, double* t, double* g, double* u,
                                  double* local_error) {
  return guarded([&] {
    need(trace, "trace");
    const auto& tr = trace->value;
    if (k >= tr.size()) throw carnot::InputError("sample index out of range");
    if (t) *t = tr.times[k];
    if (g) put(tr.point(k).coords, g);
    if (u) put(tr.control(k), u);
    if (local_error) *local_error = k < tr.local_errors.size() ? tr.local_errors[k] : 0.0;
  });
}

carnot_status carnot_trace_pmp_residual(const carnot_group* group, const carnot_norm* norm, const double* lambda,
                                        const carnot_trace* trace, double* out) {
  return guarded([&] {
    need(group, "group");
    need(norm, "norm");
    need(trace, "trace");
    need(out, "output");
    *out = carnot::pmp_identity_residual(group->value, norm->value, {vec(lambda, group->value.dim(), "lambda")},
                                         trace->value);
  });
}

carnot_status carnot_trace_write_csv(const carnot_trace* trace, const char* path, size_t stride) {
  if (trace == nullptr) return fail(CARNOT_ERR_INPUT, "trace is null");
  return write_io(path, [&](std::ostream& o) { carnot::write_trace_csv(o, trace->value, stride ? stride : 1); });
}

carnot_status carnot_end_point(const carnot_group* group, const double* controls, size_t nodes, const double* g0,
                               double max_step, double* out) {
  return guarded([&] {
    need(group, "group");
    const auto& G = group->value;
    const auto u = signal(controls, nodes, G.algebra().horizontal_dim());
    const carnot::GroupElement start = g0 ? carnot::GroupElement{vec(g0, G.dim(), "g0")} : G.identity();
    put(carnot::end_point(G, u, start, max_step).coords, out);
  });
}

carnot_status carnot_end_point_directional(const carnot_group* group, const double* controls,
                                           const double* direction, size_t nodes, const double* g0, double max_step,
                                           double* out) {
  return guarded([&] {
    need(group, "group");
    const auto& G = group->value;
    const int m1 = G.algebra().horizontal_dim();
    const auto u = signal(controls, nodes, m1);
    const auto v = signal(direction, nodes, m1);
    const carnot::GroupElement start = g0 ? carnot::GroupElement{vec(g0, G.dim(), "g0")} : G.identity();
    put(carnot::end_point_directional(G, u, v, start, max_step), out);
  });
}

// ---- experiments

carnot_status carnot_config_create(carnot_config** out) {
  return make(out, [] { return carnot::ExperimentConfig{}; });
}

carnot_status carnot_config_from_file(const char* path, carnot_config** out) {
  return make(out, [&] {
    need(path, "path");
    return carnot::load_config_file(path);
  });
}

carnot_status carnot_config_from_json(const char* text, carnot_config** out) {
  return make(out, [&] {
    need(text, "text");
    return carnot::parse_config_json(text);
  });
}

void carnot_config_free(carnot_config* config) { delete config; }

#define CARNOT_CONFIG_GUARD(...)    \
  return guarded([&] {               \
    need(config, "config");          \
    auto& cfg = config->value;       \
    __VA_ARGS__;                           \
  })

carnot_status carnot_config_set_algebra(carnot_config* config, const char* name_or_path) {
  CARNOT_CONFIG_GUARD(need(name_or_path, "algebra"); carnot::resolve_algebra(name_or_path); cfg.algebra = name_or_path);
}

carnot_status carnot_config_set_norm(carnot_config* config, const char* kind, const double* facets,
                                     size_t facet_count, int m1) {
  CARNOT_CONFIG_GUARD({
    need(kind, "kind");
    cfg.norm_kind = carnot::norm_kind_from_string(kind);
    cfg.facets = facet_count ? rows(facets, facet_count, m1) : std::vector<Eigen::VectorXd>{};
  });
}

carnot_status carnot_config_set_covectors(carnot_config* config, const double* covectors, size_t count, int n) {
  CARNOT_CONFIG_GUARD({
    if (n <= 0) throw carnot::InputError("covector dimension must be positive");
    cfg.covectors = rows(covectors, count, n);
    cfg.sampling.reset();
  });
}

carnot_status carnot_config_set_sampling(carnot_config* config, int count, uint64_t seed) {
  CARNOT_CONFIG_GUARD({
    if (count <= 0) throw carnot::InputError("covector count must be positive");
    cfg.sampling = carnot::CovectorSampling{count, seed};
  });
}

carnot_status carnot_config_set_sample_count(carnot_config* config, int count) {
  CARNOT_CONFIG_GUARD({
    if (count <= 0) throw carnot::InputError("covector count must be positive");
    const std::uint64_t seed = cfg.sampling ? cfg.sampling->seed : config->pending_seed;
    cfg.sampling = carnot::CovectorSampling{count, seed};
  });
}

carnot_status carnot_config_set_seed(carnot_config* config, uint64_t seed) {
  CARNOT_CONFIG_GUARD({
    config->pending_seed = seed;
    if (cfg.sampling) cfg.sampling->seed = seed;
  });
}

int carnot_config_has_sampling(const carnot_config* config) { return config && config->value.sampling ? 1 : 0; }

carnot_status carnot_config_set_horizon(carnot_config* config, double horizon) {
  CARNOT_CONFIG_GUARD({
    if (!(horizon > 0.0)) throw carnot::InputError("T must be positive");
    cfg.horizon = horizon;
  });
}

carnot_status carnot_config_set_step(carnot_config* config, double step) {
  CARNOT_CONFIG_GUARD({
    if (!(step > 0.0)) throw carnot::InputError("h must be positive");
    cfg.step = step;
  });
}

carnot_status carnot_config_set_sample_dt(carnot_config* config, double dt) {
  CARNOT_CONFIG_GUARD({
    if (!(dt >= 0.0)) throw carnot::InputError("sample_dt must be non-negative");
    cfg.sample_dt = dt;
  });
}

carnot_status carnot_config_set_threads(carnot_config* config, int threads) {
  CARNOT_CONFIG_GUARD({
    if (threads < 0) throw carnot::InputError("threads must be non-negative");
    cfg.threads = threads;
  });
}

carnot_status carnot_config_set_out_dir(carnot_config* config, const char* dir) {
  CARNOT_CONFIG_GUARD(need(dir, "out_dir"); cfg.out_dir = dir);
}

#undef CARNOT_CONFIG_GUARD

const char* carnot_config_out_dir(const carnot_config* c) { return c ? c->value.out_dir.c_str() : ""; }
const char* carnot_config_algebra(const carnot_config* c) { return c ? c->value.algebra.c_str() : ""; }
double carnot_config_horizon(const carnot_config* c) { return c ? c->value.horizon : 0.0; }
double carnot_config_step(const carnot_config* c) { return c ? c->value.step : 0.0; }

carnot_status carnot_config_make_norm(const carnot_config* config, int m1, carnot_norm** out) {
  return make(out, [&] {
    need(config, "config");
    return carnot::make_norm(config->value, m1);
  });
}

carnot_status carnot_config_covector_count(const carnot_config* config, size_t* out) {
  return guarded([&] {
    need(config, "config");
    need(out, "output");
    const auto& cfg = config->value;
    *out = cfg.sampling ? static_cast<size_t>(cfg.sampling->count) : cfg.covectors.size();
  });
}

carnot_status carnot_config_covectors(const carnot_config* config, int n, double* out) {
  return guarded([&] {
    need(config, "config");
    need(out, "output");
    const auto cs = carnot::resolve_covectors(config->value, n);
    for (std::size_t r = 0; r < cs.size(); ++r) put(cs[r].coeffs, out + r * n);
  });
}

carnot_status carnot_run_escape(const carnot_config* config, carnot_escape_report** out) {
  return make(out, [&] {
    need(config, "config");
    return carnot::run_escape(config->value);
  });
}

void carnot_escape_report_free(carnot_escape_report* r) { delete r; }

carnot_status carnot_escape_summary_get(const carnot_escape_report* report, carnot_escape_summary* out) {
  return guarded([&] {
    need(report, "report");
    need(out, "output");
    const auto& r = report->value;
    *out = carnot_escape_summary{};
    out->step = r.step;
    out->horizon = r.horizon;
    out->runs = r.runs.size();
    for (const auto& run : r.runs) out->fitted += run.slope ? 1 : 0;
    out->has_min_slope = r.min_slope.has_value();
    out->min_slope = r.min_slope.value_or(NAN);
    out->median_slope = r.median_slope.value_or(NAN);
    out->has_scaled_constant = r.min_scaled_constant.has_value();
    out->min_scaled_constant = r.min_scaled_constant.value_or(NAN);
    out->slope_floor = r.slope_floor();
    out->slopes_pass = r.slopes_pass() ? 1 : 0;
    out->no_return_pass = r.no_return_pass() ? 1 : 0;
  });
}

carnot_status carnot_escape_run_get(const carnot_escape_report* report, size_t index, carnot_escape_run* out) {
  return guarded([&] {
    need(report, "report");
    need(out, "output");
    if (index >= report->value.runs.size()) throw carnot::InputError("run index out of range");
    fill_run(report->value.runs[index], out);
  });
}

carnot_status carnot_escape_write_csv(const carnot_escape_report* report, const char* path) {
  if (report == nullptr) return fail(CARNOT_ERR_INPUT, "report is null");
  return write_io(path, [&](std::ostream& o) { carnot::write_escape_csv(o, report->value); });
}

carnot_status carnot_escape_write_summary_csv(const carnot_escape_report* report, const char* path) {
  if (report == nullptr) return fail(CARNOT_ERR_INPUT, "report is null");
  return write_io(path, [&](std::ostream& o) { carnot::write_escape_summary_csv(o, report->value); });
}

carnot_status carnot_run_growth_bound(const carnot_config* config, carnot_growth_report** out) {
  return make(out, [&] {
    need(config, "config");
    return carnot::run_growth_bound(config->value);
  });
}

void carnot_growth_report_free(carnot_growth_report* r) { delete r; }
size_t carnot_growth_report_count(const carnot_growth_report* r) { return r ? r->value.runs.size() : 0; }
double carnot_growth_proxy_constant(const carnot_growth_report* r) { return r ? r->value.proxy_constant : NAN; }
int carnot_growth_all_finite(const carnot_growth_report* r) { return r && r->value.all_finite() ? 1 : 0; }

carnot_status carnot_growth_run_get(const carnot_growth_report* report, size_t index, int* status,
                                    double* sup_ratio) {
  return guarded([&] {
    need(report, "report");
    if (index >= report->value.runs.size()) throw carnot::InputError("run index out of range");
    const auto& run = report->value.runs[index];
    if (status) *status = status_code(run.status);
    if (sup_ratio) *sup_ratio = run.sup_ratio;
  });
}

carnot_status carnot_growth_write_csv(const carnot_growth_report* report, const char* path) {
  if (report == nullptr) return fail(CARNOT_ERR_INPUT, "report is null");
  return write_io(path, [&](std::ostream& o) { carnot::write_growth_csv(o, report->value); });
}

carnot_status carnot_run_pmp_check(const carnot_config* config, carnot_pmp_report** out) {
  return make(out, [&] {
    need(config, "config");
    return carnot::run_pmp_check(config->value);
  });
}

void carnot_pmp_report_free(carnot_pmp_report* r) { delete r; }
size_t carnot_pmp_report_count(const carnot_pmp_report* r) { return r ? r->value.runs.size() : 0; }
double carnot_pmp_max_residual(const carnot_pmp_report* r) { return r ? r->value.max_residual : NAN; }
int carnot_pmp_passed(const carnot_pmp_report* r) { return r && r->value.passed() ? 1 : 0; }

carnot_status carnot_pmp_run_get(const carnot_pmp_report* report, size_t index, int* status, double* residual) {
  return guarded([&] {
    need(report, "report");
    if (index >= report->value.runs.size()) throw carnot::InputError("run index out of range");
    const auto& run = report->value.runs[index];
    if (status) *status = status_code(run.status);
    if (residual) *residual = run.residual;
  });
}

carnot_status carnot_pmp_write_csv(const carnot_pmp_report* report, const char* path) {
  if (report == nullptr) return fail(CARNOT_ERR_INPUT, "report is null");
  return write_io(path, [&](std::ostream& o) { carnot::write_pmp_csv(o, report->value); });
}

carnot_status carnot_example_heisenberg(int winding, double step, carnot_heisenberg_result* out) {
  return guarded([&] {
    need(out, "output");
    const auto r = carnot::example_heisenberg(winding, step);
    *out = carnot_heisenberg_result{};
    out->winding = r.winding;
    out->step = r.step;
    for (int i = 0; i < 3; ++i) {
      out->closed_end[i] = r.closed_end(i);
      out->integrated_end[i] = r.integrated_end(i);
    }
    out->max_deviation = r.max_deviation;
    out->end_error = r.end_error;
    out->closed_speed_deviation = r.closed_speed_deviation;
    out->trace_speed_deviation = r.trace_speed_deviation;
    out->pmp_residual = r.pmp_residual;
    out->passed = r.passed ? 1 : 0;
  });
}

carnot_status carnot_heisenberg_circle_point(int winding, double t, double out[3]) {
  return guarded([&] {
    need(out, "output");
    const Eigen::Vector3d p = carnot::heisenberg_circle_point(winding, t);
    for (int i = 0; i < 3; ++i) out[i] = p(i);
  });
}

void carnot_filiform_options_default(carnot_filiform_options* out) {
  if (out == nullptr) return;
  const carnot::FiliformOptions d;
  *out = carnot_filiform_options{d.seed, d.horizon, d.step, d.check_horizon, d.scan_count, d.sample_dt};
}

carnot_status carnot_example_filiform(int step, int translations, const carnot_filiform_options* options,
                                      carnot_filiform_report** out) {
  return make(out, [&] {
    carnot::FiliformOptions opts;
    if (options) {
      opts.seed = options->seed;
      opts.horizon = options->horizon;
      opts.step = options->step;
      opts.check_horizon = options->check_horizon;
      opts.scan_count = options->scan_count;
      opts.sample_dt = options->sample_dt;
    }
    return carnot::example_filiform(step, translations, opts);
  });
}

void carnot_filiform_report_free(carnot_filiform_report* r) { delete r; }
double carnot_filiform_central_residual(const carnot_filiform_report* r) {
  return r ? r->value.central_residual : NAN;
}
int carnot_filiform_passed(const carnot_filiform_report* r) { return r && r->value.passed ? 1 : 0; }
size_t carnot_filiform_scan_count(const carnot_filiform_report* r) { return r ? r->value.scan.size() : 0; }

carnot_status carnot_filiform_scan_get(const carnot_filiform_report* report, size_t index, double* top_coefficient,
                                       double* horizon, carnot_escape_run* run) {
  return guarded([&] {
    need(report, "report");
    if (index >= report->value.scan.size()) throw carnot::InputError("scan index out of range");
    const auto& row = report->value.scan[index];
    if (top_coefficient) *top_coefficient = row.top_coefficient;
    if (horizon) *horizon = row.horizon;
    if (run) fill_run(row.escape, run);
  });
}

}  // extern "C"
