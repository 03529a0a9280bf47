#include "carnot/algebra.hpp"
#include "carnot/error.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace carnot {

namespace {

using json = nlohmann::json;

std::pair<int, int> parse_pair(const std::string& key) {
  const auto comma = key.find(',');
  if (comma == std::string::npos) throw InputError("bracket key '" + key + "' is not of the form \"i,j\"");
  auto parse_int = [&](std::string_view sv) {
    while (!sv.empty() && sv.front() == ' ') sv.remove_prefix(1);
    while (!sv.empty() && sv.back() == ' ') sv.remove_suffix(1);
    int v = 0;
    const auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), v);
    if (ec != std::errc{} || ptr != sv.data() + sv.size()) {
      throw InputError("bracket key '" + key + "' has a non-integer index");
    }
    return v;
  };
  const std::string_view sv(key);
  return {parse_int(sv.substr(0, comma)), parse_int(sv.substr(comma + 1))};
}

}  // namespace

StratifiedAlgebra parse_algebra_json(std::string_view text, std::string name) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("algebra file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("strata")) throw InputError("algebra file needs a 'strata' field");
  std::vector<int> strata;
  try {
    strata = doc.at("strata").get<std::vector<int>>();
  } catch (const json::exception&) {
    throw InputError("'strata' must be a list of integers");
  }
  if (strata.empty()) throw InputError("'strata' must not be empty");
  int n = 0;
  for (int m : strata) {
    if (m <= 0) throw InputError("strata dimensions must be positive");
    n += m;
  }
  if (name.empty() && doc.contains("name") && doc["name"].is_string()) name = doc["name"].get<std::string>();

  // explicit (i, j) -> coefficient vector; the mirror entry is filled by
  // antisymmetry only when the file does not give it.
  std::map<std::pair<int, int>, std::vector<double>> explicit_entries;
  if (doc.contains("brackets")) {
    const auto& br = doc["brackets"];
    if (!br.is_object()) throw InputError("'brackets' must be an object keyed by \"i,j\"");
    for (const auto& [key, entries] : br.items()) {
      const auto [i, j] = parse_pair(key);
      if (i < 1 || j < 1 || i > n || j > n) throw InputError("bracket key '" + key + "' out of range");
      auto& row = explicit_entries[{i - 1, j - 1}];
      row.assign(static_cast<std::size_t>(n), 0.0);
      if (!entries.is_array()) throw InputError("bracket '" + key + "' must be a list of [k, coefficient]");
      for (const auto& e : entries) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number()) {
          throw InputError("bracket '" + key + "' entries must be [k, coefficient]");
        }
        const int k = e[0].get<int>();
        if (k < 1 || k > n) throw InputError("bracket '" + key + "' target index out of range");
        row[static_cast<std::size_t>(k - 1)] += e[1].get<double>();
      }
    }
  }

  std::vector<double> c(static_cast<std::size_t>(n) * n * n, 0.0);
  auto put = [&](int i, int j, const std::vector<double>& row, double sign) {
    for (int k = 0; k < n; ++k) c[(static_cast<std::size_t>(i) * n + j) * n + k] = sign * row[static_cast<std::size_t>(k)];
  };
  for (const auto& [ij, row] : explicit_entries) {
    put(ij.first, ij.second, row, 1.0);
    if (ij.first != ij.second && !explicit_entries.contains({ij.second, ij.first})) {
      put(ij.second, ij.first, row, -1.0);
    }
  }
  return StratifiedAlgebra(std::move(strata), std::move(c), std::move(name));
}

StratifiedAlgebra load_algebra_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open algebra file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  auto stem = path.substr(path.find_last_of('/') + 1);
  if (const auto dot = stem.rfind('.'); dot != std::string::npos) stem.resize(dot);
  return parse_algebra_json(buf.str(), stem);
}

StratifiedAlgebra resolve_algebra(const std::string& name_or_path) {
  if (auto a = builtin::by_name(name_or_path)) return *std::move(a);
  return load_algebra_file(name_or_path);
}

std::string to_json(const StratifiedAlgebra& a) {
  const int n = a.dim();
  json brackets = json::object();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      bool nonzero = false;
      bool mirrored = true;
      for (int k = 0; k < n; ++k) {
        nonzero = nonzero || a.constant(i, j, k) != 0.0;
        mirrored = mirrored && a.constant(j, i, k) == -a.constant(i, j, k);
      }
      if (!nonzero || (i > j && mirrored)) continue;
      json entries = json::array();
      for (int k = 0; k < n; ++k) {
        if (a.constant(i, j, k) != 0.0) entries.push_back(json::array({k + 1, a.constant(i, j, k)}));
      }
      brackets[std::to_string(i + 1) + "," + std::to_string(j + 1)] = std::move(entries);
    }
  }
  json doc = {{"strata", a.strata_dims()}, {"brackets", std::move(brackets)}};
  if (!a.name().empty()) doc["name"] = a.name();
  return doc.dump(2);
}

}  // namespace carnot
