#pragma once

#include <string>
#include <vector>

#include "config.hpp"

namespace ldspec::cli {

enum ExitCode : int {
  exit_ok = 0,
  exit_mismatch = 1,   // --compare found differences
  exit_parse = 2,
  exit_engine = 3,
  exit_positivity = 4,
};

// Result document without the metadata block: identical configs give
// identical documents. Engine failures propagate as ldspec::Error.
json run(const RunConfig& cfg);

struct Outcome {
  int exit_code = exit_ok;
  json document;           // empty on failure
  std::string diagnostic;  // one line on failure
};

// run() plus a "metadata" block (timestamp, wall time, threads) and the
// mapping of failures to exit codes.
Outcome execute(const RunConfig& cfg);

std::string render_json(const json& doc);
// Flat table of the main numeric results, one header line.
std::string render_csv(const json& doc);

// Paths (JSON pointers) where the documents differ, ignoring "metadata".
std::vector<std::string> compare_documents(json a, json b);

}  // namespace ldspec::cli
