#pragma once

#include <string>

#include "plancog/cli.hpp"
#include "plancog/frontend.hpp"

#ifndef PLANCOG_TEST_DATA_DIR
#define PLANCOG_TEST_DATA_DIR "tests/data"
#endif

namespace plancog::testing {

inline std::string fixture_path(const std::string& name) { return corpus_dir() + "/" + name + ".mp"; }
inline std::string fixture_source(const std::string& name) { return read_file(fixture_path(name)); }
inline Program fixture(const std::string& name) { return parse(fixture_source(name)); }
inline std::string data_path(const std::string& file) {
  return std::string(PLANCOG_TEST_DATA_DIR) + "/" + file;
}

inline const char* const kFixtures[] = {"grey", "orange", "search", "flag"};

}  // namespace plancog::testing
