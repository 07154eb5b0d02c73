#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "fairdisc/errors.hpp"
#include "fairdisc/types.hpp"

namespace fairdisc {

// Canonical JSON forms (compact, fields in the order shown, inner lists
// sorted ascending):
//   SetSystem        {"universe_size": m, "sets": [[...], ...]}
//   Coloring         {"num_colors": k, "assignment": [...]}
//   GroupedInstance  {"num_items": m, "groups": [...], "leaders": [...],
//                     "valuations": [[...], ...]}
//   Allocation       {"bundles": [[...], ...]}
// Parsers accept fields in any order and unsorted inner lists, reject
// unknown fields, and canonicalize on construction, so
// parse(serialize(x)) == x and serialize(parse(t)) is canonical.

namespace detail {

using Json = nlohmann::ordered_json;

inline Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("parse error at byte " + std::to_string(e.byte) + ": " + e.what(),
                     e.byte);
  }
}

inline void require_keys(const Json& j, const std::vector<std::string>& keys,
                         const char* what) {
  if (!j.is_object())
    throw ValidationError(std::string(what) + ": top-level value must be an object");
  for (const auto& k : keys)
    if (!j.contains(k))
      throw ValidationError(std::string(what) + ": missing field '" + k + "'");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const auto& k : keys) known = known || item.key() == k;
    if (!known)
      throw ValidationError(std::string(what) + ": unknown field '" + item.key() + "'");
  }
}

inline long long as_int(const Json& j, const char* what) {
  if (!j.is_number_integer())
    throw ValidationError(std::string(what) + ": expected an integer");
  return j.get<long long>();
}

template <typename T>
std::vector<T> as_int_list(const Json& j, const char* what) {
  if (!j.is_array())
    throw ValidationError(std::string(what) + ": expected a list");
  std::vector<T> out;
  out.reserve(j.size());
  for (const auto& v : j) out.push_back(static_cast<T>(as_int(v, what)));
  return out;
}

template <typename T>
std::vector<std::vector<T>> as_int_matrix(const Json& j, const char* what) {
  if (!j.is_array())
    throw ValidationError(std::string(what) + ": expected a list of lists");
  std::vector<std::vector<T>> out;
  out.reserve(j.size());
  for (const auto& row : j) out.push_back(as_int_list<T>(row, what));
  return out;
}

}  // namespace detail

inline std::string serialize_set_system(const SetSystem& s) {
  detail::Json j;
  j["universe_size"] = s.universe_size;
  j["sets"] = s.sets;
  return j.dump();
}

inline SetSystem parse_set_system(const std::string& text) {
  const auto j = detail::parse_json(text);
  detail::require_keys(j, {"universe_size", "sets"}, "set system");
  return SetSystem::make(
      static_cast<int>(detail::as_int(j["universe_size"], "set system universe_size")),
      detail::as_int_matrix<int>(j["sets"], "set system sets"));
}

inline std::string serialize_coloring(const Coloring& c) {
  detail::Json j;
  j["num_colors"] = c.num_colors;
  j["assignment"] = c.assignment;
  return j.dump();
}

inline Coloring parse_coloring(const std::string& text) {
  const auto j = detail::parse_json(text);
  detail::require_keys(j, {"num_colors", "assignment"}, "coloring");
  return Coloring::make(
      static_cast<int>(detail::as_int(j["num_colors"], "coloring num_colors")),
      detail::as_int_list<int>(j["assignment"], "coloring assignment"));
}

inline std::string serialize_instance(const GroupedInstance& inst) {
  detail::Json j;
  j["num_items"] = inst.num_items;
  j["groups"] = inst.group_of;
  j["leaders"] = inst.leaders;
  j["valuations"] = inst.valuations;
  return j.dump();
}

inline GroupedInstance parse_instance(const std::string& text) {
  const auto j = detail::parse_json(text);
  detail::require_keys(j, {"num_items", "groups", "leaders", "valuations"}, "instance");
  return GroupedInstance::make(
      static_cast<int>(detail::as_int(j["num_items"], "instance num_items")),
      detail::as_int_list<int>(j["groups"], "instance groups"),
      detail::as_int_list<int>(j["leaders"], "instance leaders"),
      detail::as_int_matrix<long long>(j["valuations"], "instance valuations"));
}

inline std::string serialize_allocation(const Allocation& a) {
  detail::Json j;
  j["bundles"] = a.bundles;
  return j.dump();
}

// The item count is implied: bundles must cover {0, ..., total-1}.
inline Allocation parse_allocation(const std::string& text) {
  const auto j = detail::parse_json(text);
  detail::require_keys(j, {"bundles"}, "allocation");
  auto bundles = detail::as_int_matrix<int>(j["bundles"], "allocation bundles");
  int total = 0;
  for (const auto& b : bundles) total += static_cast<int>(b.size());
  return Allocation::make(total, std::move(bundles));
}

}  // namespace fairdisc
