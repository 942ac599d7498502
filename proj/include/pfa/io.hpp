#pragma once

#include <fstream>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "pfa/envelope.hpp"
#include "pfa/theory.hpp"

namespace pfa {

// ---------------------------------------------------------------------------
// Configuration files. Rationals are written as "num/den" strings; every
// file carries a schemaVersion.
// ---------------------------------------------------------------------------

inline nlohmann::json interval_to_json(const Interval& I) {
  return nlohmann::json::array({rat_str(I.a), rat_str(I.b)});
}

inline Interval interval_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2)
    throw std::invalid_argument("interval: expected a two element array");
  return Interval(rat_parse(j[0].get<std::string>()), rat_parse(j[1].get<std::string>()));
}

inline nlohmann::json region_to_json(const DiskRegion& D) {
  nlohmann::json j;
  j["m"] = D.m;
  switch (D.kind) {
    case DiskRegion::Kind::All:
      j["kind"] = "all";
      break;
    case DiskRegion::Kind::Rect:
      j["kind"] = "rect";
      j["x"] = interval_to_json(*D.ix);
      if (D.m == 2) j["y"] = interval_to_json(*D.iy);
      break;
    case DiskRegion::Kind::Cells: {
      j["kind"] = "cells";
      j["pitch"] = rat_str(D.pitch);
      nlohmann::json cells = nlohmann::json::array();
      for (const auto& c : D.cells) cells.push_back(nlohmann::json::array({c.first, c.second}));
      j["cells"] = cells;
      break;
    }
  }
  return j;
}

inline DiskRegion region_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "all") return disk_all(j.at("m").get<int>());
  if (kind == "rect") {
    int m = j.at("m").get<int>();
    if (m == 1) return disk_interval(interval_from_json(j.at("x")));
    return disk_rect(interval_from_json(j.at("x")), interval_from_json(j.at("y")));
  }
  if (kind == "cells") {
    std::set<std::pair<long, long>> cells;
    for (const auto& c : j.at("cells"))
      cells.insert({c[0].get<long>(), c[1].get<long>()});
    return disk_cells(rat_parse(j.at("pitch").get<std::string>()), std::move(cells));
  }
  throw std::invalid_argument("region: unknown kind " + kind);
}

inline nlohmann::json budget_to_json(const HomotopyBudget& b) {
  return nlohmann::json{{"maxPolyDegree", b.maxPolyDegree}, {"gridRefinement", b.gridRefinement}};
}

inline HomotopyBudget budget_from_json(const nlohmann::json& j) {
  HomotopyBudget b;
  if (j.contains("maxPolyDegree")) b.maxPolyDegree = j.at("maxPolyDegree").get<int>();
  if (j.contains("gridRefinement")) b.gridRefinement = j.at("gridRefinement").get<int>();
  return b;
}

inline nlohmann::json l_configuration_to_json(const LConfiguration& c) {
  nlohmann::json j;
  j["schemaVersion"] = 1;
  j["kind"] = "l-configuration";
  j["name"] = c.name;
  j["d1"] = region_to_json(c.d1);
  j["d2"] = region_to_json(c.d2);
  j["middle"] = region_to_json(c.middle);
  j["up"] = region_to_json(c.up);
  j["down"] = region_to_json(c.down);
  j["ambient"] = region_to_json(c.ambient);
  return j;
}

inline LConfiguration l_configuration_from_json(const nlohmann::json& j) {
  if (j.value("kind", "") != "l-configuration")
    throw std::invalid_argument("configuration: expected kind l-configuration");
  LConfiguration c;
  c.name = j.value("name", "unnamed");
  c.d1 = region_from_json(j.at("d1"));
  c.d2 = region_from_json(j.at("d2"));
  c.middle = region_from_json(j.at("middle"));
  c.up = region_from_json(j.at("up"));
  c.down = region_from_json(j.at("down"));
  c.ambient = region_from_json(j.at("ambient"));
  return c;
}

inline nlohmann::json massey_rect_to_json(const MasseyRectConfig& c) {
  nlohmann::json j;
  j["schemaVersion"] = 1;
  j["kind"] = "massey-rect";
  j["d1"] = region_to_json(c.d1);
  j["d1p"] = region_to_json(c.d1p);
  j["d2"] = region_to_json(c.d2);
  j["root"] = region_to_json(c.root);
  return j;
}

inline MasseyRectConfig massey_rect_from_json(const nlohmann::json& j) {
  if (j.value("kind", "") != "massey-rect")
    throw std::invalid_argument("configuration: expected kind massey-rect");
  MasseyRectConfig c;
  c.d1 = region_from_json(j.at("d1"));
  c.d1p = region_from_json(j.at("d1p"));
  c.d2 = region_from_json(j.at("d2"));
  c.root = region_from_json(j.at("root"));
  return c;
}

inline nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  nlohmann::json j;
  in >> j;
  return j;
}

inline void save_json_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open " + path + " for writing");
  out << j.dump(2) << "\n";
}

}  // namespace pfa
