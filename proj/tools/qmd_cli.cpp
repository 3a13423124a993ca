#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qmd/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Adaptive mirror descent for constrained nonsmooth problems, "
               "with numerical certificates"};
  app.require_subcommand(1);

  qmd::RunConfig config;
  std::string format = "json";
  std::vector<double> bench_epsilons;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--problem", config.problem_file, "problem definition file")->required();
    cmd->add_option("--epsilon", [&](const CLI::results_t& r) {
      config.epsilon = std::stod(r[0]);
      return true;
    }, "override the file's accuracy epsilon");
    cmd->add_option("--theta0", [&](const CLI::results_t& r) {
      config.theta0 = std::stod(r[0]);
      return true;
    }, "override the file's distance bound theta0");
    cmd->add_option("--seed", config.seed, "seed for random segment sampling");
    cmd->add_option("--format", format, "output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--out", config.output_path, "output path (default: stdout)");
    cmd->add_option("--max-iter-factor", config.max_iter_factor,
                    "safety cap as a multiple of the iteration bound");
    return cmd;
  };

  CLI::App* solve = add_common(app.add_subcommand("solve", "run the solver"));
  CLI::App* certify =
      add_common(app.add_subcommand("certify", "run the solver and certify the result"));
  CLI::App* interp = add_common(
      app.add_subcommand("interp-check", "interpolation-inequality check on random segments"));
  interp->add_option("--segments", config.segments, "number of random segments");
  interp->add_option("--declared-l", [&](const CLI::results_t& r) {
    config.declared_lipschitz = std::stod(r[0]);
    return true;
  }, "override the declared gradient Lipschitz constant");
  interp->add_option("--declared-delta", [&](const CLI::results_t& r) {
    config.declared_jump_total = std::stod(r[0]);
    return true;
  }, "override the declared jump budget");
  CLI::App* bench =
      add_common(app.add_subcommand("bench", "iteration counts across an epsilon sweep"));
  bench->add_option("--epsilons", bench_epsilons, "epsilon sweep values");

  CLI11_PARSE(app, argc, argv);

  if (solve->parsed()) config.command = qmd::RunConfig::Command::Solve;
  if (certify->parsed()) config.command = qmd::RunConfig::Command::Certify;
  if (interp->parsed()) config.command = qmd::RunConfig::Command::InterpCheck;
  if (bench->parsed()) config.command = qmd::RunConfig::Command::Bench;
  config.format =
      format == "csv" ? qmd::RunConfig::Format::Csv : qmd::RunConfig::Format::Json;
  if (!bench_epsilons.empty()) config.bench_epsilons = bench_epsilons;

  return qmd::run(config);
}
