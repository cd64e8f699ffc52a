#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace perex::cli {

struct Options {
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> bound;
  std::optional<std::size_t> n_max;
};

struct Outcome {
  int exit_code = 0;
  nlohmann::json report;
};

/// Runs one task document. The report embeds the normalized task under
/// "task"; flags override the corresponding payload fields.
Outcome run_task(const nlohmann::json& task, const Options& opt = {});

/// Full command line: parses flags, reads the task file ("-" for stdin) and
/// writes the report. Returns the exit code.
int run(int argc, char** argv);

}  // namespace perex::cli
