#include "mtlab/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "mtlab/errors.hpp"

namespace mtlab::io {
namespace {

const json& field(const json& j, const char* name, const std::string& where) {
  if (!j.is_object()) fail_input(where + ": expected an object");
  auto it = j.find(name);
  if (it == j.end()) fail_input(where + ": missing field '" + name + "'");
  return *it;
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) fail_input(where + ": expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) fail_input(where + ": non-finite number");
  return x;
}

std::vector<double> numbers(const json& j, const std::string& where) {
  if (!j.is_array()) fail_input(where + ": expected an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::size_t index(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 0) fail_input(where + ": expected a nonnegative integer");
  return j.get<std::size_t>();
}

// Library invariants become input errors naming the offending object.
template <class F>
auto checked(const std::string& where, F&& build) {
  try {
    return build();
  } catch (const InputError&) {
    throw;
  } catch (const Error& e) {
    throw InputError(where + ": " + e.what());
  }
}

}  // namespace

json parse(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail_input(source + ": " + e.what());
  }
}

json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail_input("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) fail_input("cannot write " + path);
  out << text;
}

void require_finite(const json& j, const std::string& where) {
  if (j.is_number_float() && !std::isfinite(j.get<double>())) fail_input("serialization: non-finite value at " + where);
  if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) require_finite(j[i], where + "[" + std::to_string(i) + "]");
  } else if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) require_finite(it.value(), where + "." + it.key());
  }
}

std::string dump(const json& j) {
  require_finite(j);
  return j.dump(2) + "\n";
}

json to_json(const RadialSpace& s) {
  auto r = s.radii();
  auto g = s.warps();
  auto v = s.nodal_volumes();
  return json{{"kind", "radial_space"},
              {"n", s.dimension()},
              {"label", s.label()},
              {"radii", std::vector<double>(r.begin(), r.end())},
              {"warp", std::vector<double>(g.begin(), g.end())},
              {"volumes", std::vector<double>(v.begin(), v.end())}};
}

RadialSpace space_from_json(const json& j) {
  const std::string where = "space";
  const json& nj = field(j, "n", where);
  if (!nj.is_number_integer()) fail_input(where + ".n: expected an integer");
  std::string label;
  if (j.contains("label") && j["label"].is_string()) label = j["label"].get<std::string>();
  auto radii = numbers(field(j, "radii", where), where + ".radii");
  auto warp = numbers(field(j, "warp", where), where + ".warp");
  auto volumes = numbers(field(j, "volumes", where), where + ".volumes");
  return checked(where, [&] {
    return RadialSpace::from_nodes(nj.get<int>(), std::move(radii), std::move(warp), std::move(volumes), label);
  });
}

json to_json(const ProfileTable& f) {
  json points = json::array();
  for (std::size_t i = 0; i < f.volumes.size(); ++i) points.push_back({{"t", f.volumes[i]}, {"phi", f.perimeters[i]}});
  return json{{"totalVolume", std::isinf(f.totalVolume) ? json(nullptr) : json(f.totalVolume)}, {"points", points}};
}

ProfileTable profile_from_json(const json& j) {
  const std::string where = "profile";
  ProfileTable f;
  const json& tv = field(j, "totalVolume", where);
  if (tv.is_null() || (tv.is_string() && tv.get<std::string>() == "inf")) {
    f.totalVolume = kInfinity;
  } else {
    f.totalVolume = number(tv, where + ".totalVolume");
  }
  const json& pts = field(j, "points", where);
  if (!pts.is_array()) fail_input(where + ".points: expected an array");
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const std::string w = where + ".points[" + std::to_string(i) + "]";
    f.volumes.push_back(number(field(pts[i], "t", w), w + ".t"));
    f.perimeters.push_back(number(field(pts[i], "phi", w), w + ".phi"));
  }
  checked(where, [&] {
    validate(f);
    return 0;
  });
  return f;
}

json to_json(const DiscreteMMS& s, const std::vector<double>* values) {
  json vertices = json::array();
  for (std::size_t i = 0; i < s.size(); ++i) {
    json v{{"id", i}, {"mu", s.measure(i)}};
    if (values) v["u"] = (*values)[i];
    vertices.push_back(v);
  }
  json edges = json::array();
  for (const Edge& e : s.edges()) edges.push_back({{"a", e.a}, {"b", e.b}, {"d", e.length}, {"w", e.weight}});
  json out{{"vertices", vertices}, {"edges", edges}};
  if (!s.label().empty()) out["label"] = s.label();
  return out;
}

GraphInput graph_from_json(const json& j) {
  const std::string where = "graph";
  const json& vs = field(j, "vertices", where);
  if (!vs.is_array() || vs.empty()) fail_input(where + ".vertices: expected a nonempty array");
  const std::size_t n = vs.size();
  std::vector<double> mu(n, 0.0), u(n, 0.0);
  std::vector<bool> seen(n, false);
  std::size_t withU = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string w = where + ".vertices[" + std::to_string(i) + "]";
    const std::size_t id = index(field(vs[i], "id", w), w + ".id");
    if (id >= n || seen[id]) fail_input(w + ".id: ids must be a permutation of 0.." + std::to_string(n - 1));
    seen[id] = true;
    mu[id] = number(field(vs[i], "mu", w), w + ".mu");
    if (!(mu[id] > 0.0)) fail_input(w + ".mu: vertex measures must be positive");
    if (vs[i].contains("u")) {
      u[id] = number(vs[i]["u"], w + ".u");
      ++withU;
    }
  }
  if (withU != 0 && withU != n) fail_input(where + ": 'u' must be given on every vertex or on none");
  std::vector<Edge> edges;
  const json& es = field(j, "edges", where);
  if (!es.is_array()) fail_input(where + ".edges: expected an array");
  for (std::size_t i = 0; i < es.size(); ++i) {
    const std::string w = where + ".edges[" + std::to_string(i) + "]";
    Edge e;
    e.a = index(field(es[i], "a", w), w + ".a");
    e.b = index(field(es[i], "b", w), w + ".b");
    if (es[i].contains("d")) e.length = number(es[i]["d"], w + ".d");
    if (es[i].contains("w")) e.weight = number(es[i]["w"], w + ".w");
    edges.push_back(e);
  }
  std::string label;
  if (j.contains("label") && j["label"].is_string()) label = j["label"].get<std::string>();
  GraphInput g;
  g.space = checked(where, [&] {
    return std::make_shared<const DiscreteMMS>(std::move(mu), std::move(edges), label);
  });
  if (withU == n) g.values = std::move(u);
  return g;
}

json to_json(const GrowthSamples& g) {
  json out{{"radii", g.radii}, {"ballVolumes", g.ballVolumes}};
  if (g.perimeters) out["perimeters"] = *g.perimeters;
  return out;
}

GrowthSamples growth_from_json(const json& j) {
  const std::string where = "samples";
  GrowthSamples g;
  g.radii = numbers(field(j, "radii", where), where + ".radii");
  g.ballVolumes = numbers(field(j, "ballVolumes", where), where + ".ballVolumes");
  if (j.contains("perimeters") && !j["perimeters"].is_null()) {
    g.perimeters = numbers(j["perimeters"], where + ".perimeters");
  }
  checked(where, [&] {
    validate(g);
    return 0;
  });
  return g;
}

}  // namespace mtlab::io
