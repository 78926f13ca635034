// SPDX-License-Identifier: MIT
#include "hessborn/spec_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace hessborn {

using nlohmann::json;

namespace {

struct Builtin {
  const char* name;
  const char* text;
};

// Sample boxes keep every metric comfortably SPD and leave room for the
// geodesics used by the affine-chart witness.
const Builtin kBuiltins[] = {
    {"euclidean2", R"spec({
      "dimension": 2,
      "coordinates": ["u", "v"],
      "metric": {"components": [["1", "0"], ["0", "1"]]},
      "connection": {"kind": "flat"},
      "sample_box": [[-1, 1], [-1, 1]]
    })spec"},
    {"hessian-exp2", R"spec({
      "dimension": 2,
      "coordinates": ["u", "v"],
      "metric": {"potential": "exp(u) + exp(v)"},
      "connection": {"kind": "flat"},
      "sample_box": [[-1, 1], [-1, 1]]
    })spec"},
    {"flat-skew-metric", R"spec({
      "dimension": 2,
      "coordinates": ["u", "v"],
      "metric": {"components": [["1", "0"], ["0", "exp(u)"]]},
      "connection": {"kind": "flat"},
      "sample_box": [[-1, 1], [-1, 1]]
    })spec"},
    {"sphere2", R"spec({
      "dimension": 2,
      "coordinates": ["theta", "phi"],
      "metric": {"components": [["1", "0"], ["0", "sin(theta)^2"]]},
      "connection": {"kind": "levi-civita"},
      "sample_box": [[0.5, 2.6], [-1.5, 1.5]]
    })spec"},
    {"flat-torsionful", R"spec({
      "dimension": 2,
      "coordinates": ["u", "v"],
      "metric": {"components": [["1", "0"], ["0", "1"]]},
      "connection": {"kind": "explicit",
                     "gamma": [[["0", "1"], ["0", "0"]],
                               [["0", "0"], ["0", "0"]]]},
      "sample_box": [[-1, 1], [-1, 1]]
    })spec"},
    // Affine coordinates (a, b) with u = a, v = b + a^2. The connection is
    // the straight-line connection of (a, b) written in (u, v), and the
    // metric is the Euclidean metric of (a, b), so the pair is Hessian.
    {"pullback-flat", R"spec({
      "dimension": 2,
      "coordinates": ["u", "v"],
      "metric": {"components": [["1 + 4*u^2", "-2*u"], ["-2*u", "1"]]},
      "connection": {"kind": "explicit",
                     "gamma": [[["0", "0"], ["0", "0"]],
                               [["-2", "0"], ["0", "0"]]]},
      "sample_box": [[-1, 1], [-1, 1]]
    })spec"},
};

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw SpecError(path.empty() ? message : path + ": " + message);
}

const json& require(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) fail(path, std::string("missing field \"") + key + "\"");
  return *it;
}

Expr parse_expr(const json& node, const std::vector<std::string>& coords, const std::string& path) {
  if (node.is_number()) return Expr::parse(node.dump(), coords);
  if (!node.is_string()) fail(path, "expected an expression string");
  try {
    return Expr::parse(node.get<std::string>(), coords);
  } catch (const ParseError& e) {
    fail(path, e.what());
  }
}

std::vector<Expr> parse_grid(const json& node, const std::vector<std::string>& coords, const std::string& path,
                             int depth) {
  const int n = static_cast<int>(coords.size());
  if (depth == 0) return {parse_expr(node, coords, path)};
  if (!node.is_array()) fail(path, "expected an array");
  if (static_cast<int>(node.size()) != n)
    fail(path, "dimension mismatch: expected " + std::to_string(n) + " entries, found " + std::to_string(node.size()));
  std::vector<Expr> out;
  for (int i = 0; i < n; ++i) {
    auto sub = parse_grid(node[i], coords, path + "[" + std::to_string(i) + "]", depth - 1);
    out.insert(out.end(), sub.begin(), sub.end());
  }
  return out;
}

/// Mirrors g_ij and g_ji when their text differs.
void symmetrize(std::vector<Expr>& g, int n) {
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Expr& a = g[i * n + j];
      Expr& b = g[j * n + i];
      if (a.to_string() == b.to_string()) continue;
      const Expr avg = Expr::average(a, b);
      a = avg;
      b = avg;
    }
}

json read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open spec file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    throw SpecError(path.string() + ": JSON syntax error at byte " + std::to_string(e.byte));
  }
}

}  // namespace

ManifoldSpec parse_spec(const std::string& text, const std::string& name) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SpecError(name + ": JSON syntax error at byte " + std::to_string(e.byte));
  }
  return parse_spec(doc, name);
}

ManifoldSpec parse_spec(const json& doc, const std::string& name) {
  if (!doc.is_object()) fail("", "spec must be a JSON object");
  ManifoldSpec spec;
  spec.name = doc.contains("name") && doc["name"].is_string() ? doc["name"].get<std::string>() : name;

  const json& dim = require(doc, "dimension", "");
  if (!dim.is_number_integer()) fail("dimension", "expected an integer");
  const int n = dim.get<int>();
  if (n < 1 || n > 4) fail("dimension", "must be between 1 and 4, got " + std::to_string(n));

  const json& coords = require(doc, "coordinates", "");
  if (!coords.is_array()) fail("coordinates", "expected an array of names");
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (!coords[i].is_string()) fail("coordinates[" + std::to_string(i) + "]", "expected a string");
    spec.coords.push_back(coords[i].get<std::string>());
  }
  if (spec.dimension() != n)
    fail("coordinates", "dimension mismatch: dimension is " + std::to_string(n) + " but " +
                            std::to_string(spec.dimension()) + " coordinates are named");
  try {
    validate_coordinate_names(spec.coords);
  } catch (const std::invalid_argument& e) {
    fail("coordinates", e.what());
  }

  const json& metric = require(doc, "metric", "");
  const bool has_components = metric.is_object() && metric.contains("components");
  const bool has_potential = metric.is_object() && metric.contains("potential");
  if (has_components == has_potential) fail("metric", "give exactly one of \"components\" or \"potential\"");
  if (has_components) {
    spec.metric_components = parse_grid(metric["components"], spec.coords, "metric.components", 2);
    symmetrize(spec.metric_components, n);
  } else {
    spec.potential = parse_expr(metric["potential"], spec.coords, "metric.potential");
  }

  const json& connection = require(doc, "connection", "");
  const json& kind = require(connection, "kind", "connection");
  if (!kind.is_string()) fail("connection.kind", "expected a string");
  try {
    spec.connection = connection_kind_from_string(kind.get<std::string>());
  } catch (const SpecError& e) {
    fail("connection.kind", e.what());
  }
  if (spec.connection == ConnectionKind::Explicit)
    spec.gamma = parse_grid(require(connection, "gamma", "connection"), spec.coords, "connection.gamma", 3);
  else if (connection.contains("gamma"))
    fail("connection.gamma", "only allowed with kind \"explicit\"");

  const json& box = require(doc, "sample_box", "");
  if (!box.is_array() || static_cast<int>(box.size()) != n)
    fail("sample_box", "dimension mismatch: expected " + std::to_string(n) + " intervals");
  for (int i = 0; i < n; ++i) {
    const std::string path = "sample_box[" + std::to_string(i) + "]";
    const json& iv = box[i];
    if (!iv.is_array() || iv.size() != 2 || !iv[0].is_number() || !iv[1].is_number())
      fail(path, "expected [lo, hi]");
    const double lo = iv[0].get<double>(), hi = iv[1].get<double>();
    if (!(lo < hi)) fail(path, "lo must be below hi");
    spec.sample_box.emplace_back(lo, hi);
  }
  return spec;
}

std::vector<std::string> list_examples() {
  std::vector<std::string> out;
  for (const auto& b : kBuiltins) out.emplace_back(b.name);
  return out;
}

ManifoldSpec builtin_example(const std::string& name) {
  for (const auto& b : kBuiltins)
    if (name == b.name) return parse_spec(std::string(b.text), b.name);
  throw SpecError("unknown example name \"" + name + "\"");
}

std::vector<ManifoldSpec> builtin_corpus() {
  std::vector<ManifoldSpec> out;
  for (const auto& b : kBuiltins) out.push_back(parse_spec(std::string(b.text), b.name));
  return out;
}

ManifoldSpec load_spec(const std::string& source) {
  const auto names = list_examples();
  if (std::find(names.begin(), names.end(), source) != names.end()) return builtin_example(source);
  const std::filesystem::path path(source);
  if (!std::filesystem::is_regular_file(path))
    throw SpecError("\"" + source + "\" is neither a built-in example nor a spec file");
  try {
    return parse_spec(read_file(path), path.stem().string());
  } catch (const SpecError& e) {
    const std::string what = e.what();
    if (what.rfind(path.string(), 0) == 0) throw;
    throw SpecError(path.string() + ": " + what);
  }
}

std::vector<ManifoldSpec> load_corpus(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw SpecError("corpus directory not found: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::vector<ManifoldSpec> out;
  for (const auto& f : files) out.push_back(load_spec(f.string()));
  return out;
}

json spec_to_json(const ManifoldSpec& spec) {
  const int n = spec.dimension();
  json doc;
  doc["name"] = spec.name;
  doc["dimension"] = n;
  doc["coordinates"] = spec.coords;
  if (spec.potential) {
    doc["metric"] = {{"potential", spec.potential->source()}};
  } else {
    json rows = json::array();
    for (int i = 0; i < n; ++i) {
      json row = json::array();
      for (int j = 0; j < n; ++j) row.push_back(spec.metric_components[i * n + j].source());
      rows.push_back(row);
    }
    doc["metric"] = {{"components", rows}};
  }
  doc["connection"] = {{"kind", to_string(spec.connection)}};
  if (spec.connection == ConnectionKind::Explicit) {
    json g = json::array();
    for (int k = 0; k < n; ++k) {
      json plane = json::array();
      for (int i = 0; i < n; ++i) {
        json row = json::array();
        for (int j = 0; j < n; ++j) row.push_back(spec.gamma[(k * n + i) * n + j].source());
        plane.push_back(row);
      }
      g.push_back(plane);
    }
    doc["connection"]["gamma"] = g;
  }
  json box = json::array();
  for (const auto& [lo, hi] : spec.sample_box) box.push_back({lo, hi});
  doc["sample_box"] = box;
  return doc;
}

}  // namespace hessborn
