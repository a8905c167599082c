#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "randstrat/arena_io.hpp"

namespace randstrat::testing {

inline std::string read_gallery_text(const std::string& name) {
  std::ifstream in(std::string(RANDSTRAT_GALLERY_DIR) + "/" + name + ".json");
  if (!in) throw std::runtime_error("missing gallery file " + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Arena gallery_arena(const std::string& name) { return parse_arena(read_gallery_text(name)); }

}  // namespace randstrat::testing
