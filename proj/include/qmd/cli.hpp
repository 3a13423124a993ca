#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qmd {

/// One CLI invocation. Unset epsilon/theta0 fall back to the problem file.
struct RunConfig {
  enum class Command { Solve, Certify, InterpCheck, Bench };
  enum class Format { Json, Csv };

  Command command = Command::Solve;
  std::string problem_file;
  std::optional<double> epsilon;
  std::optional<double> theta0;
  std::uint64_t seed = 0;
  Format format = Format::Json;
  std::string output_path;  // empty writes to stdout
  double max_iter_factor = 10.0;
  int segments = 1000;
  std::vector<double> bench_epsilons{0.2, 0.1, 0.05, 0.02};
  std::optional<double> declared_lipschitz;
  std::optional<double> declared_jump_total;
};

/// Execute one command. Exit status: 0 when every evaluated check holds,
/// 1 when a check fails, 2 on input errors.
int run(const RunConfig& config);

}  // namespace qmd
