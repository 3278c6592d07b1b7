#include "diamcover/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace diamcover {

using ordered_json = nlohmann::ordered_json;

namespace {

Rat rat_field(const nlohmann::json& j, const char* what) {
  std::string s;
  if (j.is_string())
    s = j.get<std::string>();
  else if (j.is_number_integer())
    s = std::to_string(j.get<long long>());
  else
    throw ParseError(std::string(what) + ": expected rational string");
  auto q = rat_parse(s);
  if (!q) throw ParseError(std::string(what) + ": malformed rational '" + s + "'");
  return *q;
}

}  // namespace

std::string serialize_instance(const Instance& inst) {
  inst.check();
  ordered_json j;
  j["dim"] = inst.dim;
  j["diameter"] = rat_to_string(inst.diameter);
  ordered_json pts = ordered_json::array();
  for (const Point& p : inst.points) {
    ordered_json row = ordered_json::array();
    for (const Rat& c : p.coords) row.push_back(rat_to_string(c));
    pts.push_back(std::move(row));
  }
  j["points"] = std::move(pts);
  if (!inst.labels.empty()) j["labels"] = inst.labels;
  return j.dump(2) + "\n";
}

Instance parse_instance(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("instance: invalid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("dim") || !j.contains("diameter") || !j.contains("points"))
    throw ParseError("instance: missing dim/diameter/points");
  Instance inst;
  if (!j["dim"].is_number_integer()) throw ParseError("instance: dim must be an integer");
  inst.dim = j["dim"].get<int>();
  inst.diameter = rat_field(j["diameter"], "diameter");
  if (!j["points"].is_array()) throw ParseError("instance: points must be an array");
  for (const auto& row : j["points"]) {
    if (!row.is_array() || static_cast<int>(row.size()) != inst.dim)
      throw ParseError("instance: point of wrong dimension");
    Point p;
    for (const auto& c : row) p.coords.push_back(rat_field(c, "coordinate"));
    inst.points.push_back(std::move(p));
  }
  if (j.contains("labels")) inst.labels = j["labels"].get<std::vector<std::string>>();
  try {
    inst.check();
  } catch (const std::exception& e) {
    throw ParseError(std::string("instance: ") + e.what());
  }
  return inst;
}

std::string serialize_cover(const CliqueCover& cover) {
  ordered_json j;
  j["cliques"] = cover.cliques;
  return j.dump(2) + "\n";
}

CliqueCover parse_cover(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("cover: invalid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("cliques") || !j["cliques"].is_array())
    throw ParseError("cover: missing cliques array");
  CliqueCover cover;
  for (const auto& row : j["cliques"]) {
    if (!row.is_array()) throw ParseError("cover: clique must be an index array");
    std::vector<int> clique;
    for (const auto& v : row) {
      if (!v.is_number_integer()) throw ParseError("cover: vertex index must be an integer");
      clique.push_back(v.get<int>());
    }
    cover.cliques.push_back(std::move(clique));
  }
  return cover;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

}  // namespace diamcover
