#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "cftg/grammar.hpp"

namespace testutil {

inline std::string data_path(const std::string& name) {
  return std::string(CFTG_TEST_DATA_DIR) + "/" + name;
}

inline std::string read_file(const std::string& name) {
  std::ifstream in(data_path(name));
  if (!in) throw std::runtime_error("missing test fixture: " + name);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline cftg::Cftg load(const std::string& name) {
  return cftg::parse_grammar(read_file(name));
}

}  // namespace testutil
