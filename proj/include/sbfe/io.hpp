#pragma once

// Instance JSON format: {"k": int, "p": [float...], "c": [int...]} with "c"
// optional (unit cost). Policies in external formats are 1-based and refer
// to the variables' positions in the input file.

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sbfe/core.hpp"

namespace sbfe::io {

struct LoadedInstance {
  Instance instance;
  /// sorted position -> input position (0-based)
  std::vector<Index> index_map;
};

inline LoadedInstance parse_instance(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("instance JSON must be an object");
  if (!j.contains("k") || !j["k"].is_number_integer()) throw ValidationError("instance JSON needs integer field \"k\"");
  if (!j.contains("p") || !j["p"].is_array()) throw ValidationError("instance JSON needs array field \"p\"");
  std::vector<double> p;
  for (const auto& v : j["p"]) {
    if (!v.is_number()) throw ValidationError("\"p\" entries must be numbers");
    const double q = v.get<double>();
    if (q == 0.0 || q == 1.0) throw ValidationError("probabilities 0 and 1 are not allowed");
    p.push_back(q);
  }
  std::vector<Cost> c;
  if (j.contains("c")) {
    if (!j["c"].is_array()) throw ValidationError("\"c\" must be an array");
    for (const auto& v : j["c"]) {
      if (!v.is_number_integer()) throw ValidationError("\"c\" entries must be integers");
      c.push_back(v.get<Cost>());
    }
    if (c.size() != p.size()) throw ValidationError("\"c\" and \"p\" differ in length");
  }
  auto normalized = normalize(p, c, j["k"].get<int>());
  return LoadedInstance{std::move(normalized.instance), std::move(normalized.index_map)};
}

inline LoadedInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read instance file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("invalid JSON in " + path + ": " + e.what());
  }
  return parse_instance(j);
}

inline nlohmann::json instance_to_json(const Instance& inst) {
  nlohmann::json j;
  j["k"] = inst.k();
  j["p"] = std::vector<double>(inst.probabilities().begin(), inst.probabilities().end());
  j["c"] = std::vector<Cost>(inst.costs().begin(), inst.costs().end());
  return j;
}

/// Internal policy -> 1-based input positions.
inline std::vector<int> to_external(const PartialPolicy& pi, const std::vector<Index>& index_map) {
  std::vector<int> out;
  out.reserve(pi.size());
  for (Index i : pi) out.push_back(index_map.at(static_cast<std::size_t>(i)) + 1);
  return out;
}

/// 1-based input positions -> internal policy.
inline PartialPolicy from_external(const std::vector<int>& order, const std::vector<Index>& index_map) {
  std::vector<Index> inverse(index_map.size());
  for (std::size_t s = 0; s < index_map.size(); ++s) inverse[static_cast<std::size_t>(index_map[s])] = static_cast<Index>(s);
  std::vector<Index> out;
  out.reserve(order.size());
  for (int v : order) {
    if (v < 1 || v > static_cast<int>(index_map.size())) throw ValidationError("policy index out of range: " + std::to_string(v));
    out.push_back(inverse[static_cast<std::size_t>(v - 1)]);
  }
  return PartialPolicy(std::move(out));
}

/// "1,2,3" -> {1,2,3}. Empty string -> empty list.
inline std::vector<int> parse_index_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw ValidationError("not an integer in index list: " + item);
    }
    if (used != item.size()) throw ValidationError("not an integer in index list: " + item);
    out.push_back(v);
  }
  return out;
}

/// Accepts "1/E" or a value such as "0.5" whose reciprocal is an integer.
inline Epsilon parse_epsilon(const std::string& text) {
  try {
    if (auto slash = text.find('/'); slash != std::string::npos) {
      if (std::stoi(text.substr(0, slash)) != 1) throw ValidationError("eps must have the form 1/E");
      return Epsilon(std::stoi(text.substr(slash + 1)));
    }
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw ValidationError("cannot parse eps: " + text);
    if (!(v > 0.0) || v > 1.0) throw ValidationError("eps must lie in (0, 1]: " + text);
    const double inv = 1.0 / v;
    const double rounded = std::round(inv);
    if (std::abs(inv - rounded) > 1e-9) throw ValidationError("eps must have an integer reciprocal: " + text);
    return Epsilon(static_cast<int>(rounded));
  } catch (const std::logic_error& e) {
    if (dynamic_cast<const ValidationError*>(&e)) throw;
    throw ValidationError("cannot parse eps: " + text);
  }
}

}  // namespace sbfe::io
