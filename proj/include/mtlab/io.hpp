#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mtlab/discrete.hpp"
#include "mtlab/modelgeom.hpp"
#include "mtlab/radial.hpp"

namespace mtlab::io {

using nlohmann::json;

// Parse failures carry line and column; schema failures name the field.
json parse(const std::string& text, const std::string& source = "input");
json read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

// Pretty-printed text with shortest round-trip doubles. Throws InputError on
// any non-finite number.
std::string dump(const json& j);
void require_finite(const json& j, const std::string& where = "$");

json to_json(const RadialSpace& s);
RadialSpace space_from_json(const json& j);

// totalVolume = +inf is written as null.
json to_json(const ProfileTable& f);
ProfileTable profile_from_json(const json& j);

struct GraphInput {
  std::shared_ptr<const DiscreteMMS> space;
  std::optional<std::vector<double>> values;  // per-vertex "u", all or none
};

json to_json(const DiscreteMMS& s, const std::vector<double>* values = nullptr);
GraphInput graph_from_json(const json& j);

json to_json(const GrowthSamples& g);
GrowthSamples growth_from_json(const json& j);

}  // namespace mtlab::io
