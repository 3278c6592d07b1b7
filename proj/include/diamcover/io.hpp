#pragma once

#include <string>

#include "diamcover/model.hpp"

namespace diamcover {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Instance file: {"dim": d, "diameter": "<rational>", "points": [["<rational>", ...], ...]}
// Cover file:    {"cliques": [[indices...], ...]}
// Serialization is byte-stable; parse(serialize(x)) == x with exact coordinates.
std::string serialize_instance(const Instance& inst);
Instance parse_instance(const std::string& text);

std::string serialize_cover(const CliqueCover& cover);
CliqueCover parse_cover(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace diamcover
