#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "plancog/interpreter.hpp"

namespace plancog {

inline constexpr int kExitOk = 0;
inline constexpr int kExitAnalysisError = 1;
inline constexpr int kExitUsage = 2;

struct Config {
  // Empty: the built-in KB.
  std::string kb_path;
  bool json = false;
  int step_budget = kDefaultStepBudget;
  unsigned seed = 0;
};

struct Fixture {
  std::string name;
  std::string path;
  std::string description;
};

// Directory holding the shipped programs (configured at build time).
std::string corpus_dir();
std::vector<Fixture> corpus();
std::string read_file(const std::string& path);

// Runs one command line. JSON mode writes exactly one document to `out`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace plancog
