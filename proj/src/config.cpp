#include "carnot/error.hpp"
#include "carnot/escape.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace carnot {

namespace {

using json = nlohmann::json;

Eigen::VectorXd to_vector(const json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + " must be a list of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw InputError(std::string(what) + " must be a list of numbers");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

double positive_number(const json& doc, const char* key) {
  if (!doc[key].is_number()) throw InputError(std::string("'") + key + "' must be a number");
  return doc[key].get<double>();
}

}  // namespace

void ExperimentConfig::check() const {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw InputError("T must be positive");
  if (!(step > 0.0) || step > horizon) throw InputError("h must satisfy 0 < h <= T");
  if (sample_dt < 0.0) throw InputError("sample_dt must be non-negative");
  if (sampling) {
    if (sampling->count <= 0) throw InputError("covector count must be positive");
  } else if (covectors.empty()) {
    throw InputError("no covectors: give an explicit list or {count, seed}");
  }
}

ExperimentConfig parse_config_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("config must be a JSON object");

  ExperimentConfig cfg;
  if (doc.contains("algebra")) {
    if (!doc["algebra"].is_string()) throw InputError("'algebra' must be a name or a path");
    cfg.algebra = doc["algebra"].get<std::string>();
  }
  if (doc.contains("norm")) {
    const auto& norm = doc["norm"];
    if (norm.is_string()) {
      cfg.norm_kind = norm_kind_from_string(norm.get<std::string>());
    } else if (norm.is_object() && norm.contains("kind") && norm["kind"].is_string()) {
      cfg.norm_kind = norm_kind_from_string(norm["kind"].get<std::string>());
      if (norm.contains("facets")) {
        if (!norm["facets"].is_array()) throw InputError("'facets' must be a list of functionals");
        for (const auto& f : norm["facets"]) cfg.facets.push_back(to_vector(f, "facet"));
      }
    } else {
      throw InputError("'norm' must be a kind name or {\"kind\": ..., \"facets\": [...]}");
    }
  }
  if (doc.contains("covectors")) {
    const auto& cov = doc["covectors"];
    if (cov.is_array()) {
      for (const auto& c : cov) cfg.covectors.push_back(to_vector(c, "covector"));
    } else if (cov.is_object()) {
      if (!cov.contains("count") || !cov["count"].is_number_integer()) {
        throw InputError("covector sampling needs an integer 'count'");
      }
      if (!cov.contains("seed") || !cov["seed"].is_number_unsigned()) {
        throw InputError("covector sampling needs a non-negative integer 'seed'");
      }
      cfg.sampling = CovectorSampling{cov["count"].get<int>(), cov["seed"].get<std::uint64_t>()};
    } else {
      throw InputError("'covectors' must be a list or {\"count\": n, \"seed\": s}");
    }
  }
  if (doc.contains("T")) cfg.horizon = positive_number(doc, "T");
  if (doc.contains("h")) cfg.step = positive_number(doc, "h");
  if (doc.contains("sample_dt")) cfg.sample_dt = positive_number(doc, "sample_dt");
  if (doc.contains("threads")) {
    if (!doc["threads"].is_number_integer()) throw InputError("'threads' must be an integer");
    cfg.threads = doc["threads"].get<int>();
  }
  if (doc.contains("out_dir")) {
    if (!doc["out_dir"].is_string()) throw InputError("'out_dir' must be a string");
    cfg.out_dir = doc["out_dir"].get<std::string>();
  }
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_json(buf.str());
}

NormSpec make_norm(const ExperimentConfig& cfg, int horizontal_dim) {
  if (cfg.norm_kind == NormKind::polyhedral) {
    return NormSpec(NormKind::polyhedral, horizontal_dim, cfg.facets);
  }
  return NormSpec(cfg.norm_kind, horizontal_dim);
}

}  // namespace carnot
