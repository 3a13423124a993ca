#include "qmd/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <variant>

#include "qmd/analysis.hpp"
#include "qmd/interp.hpp"
#include "qmd/problem_io.hpp"
#include "qmd/solver.hpp"

namespace qmd {

namespace {

std::string utc_timestamp() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

int emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "cannot write output file: " << path << "\n";
    return 2;
  }
  out << text;
  return 0;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double max_constraint_lipschitz(const Problem& problem) {
  double m = 0.0;
  for (const auto& c : problem.constraints) m = std::max(m, c.lipschitz);
  return m;
}

ordered_json config_header(const RunConfig& config, const char* command, const Problem& problem) {
  ordered_json j;
  j["command"] = command;
  j["problem_file"] = config.problem_file;
  j["epsilon"] = problem.epsilon;
  j["theta0"] = problem.theta0;
  j["seed"] = config.seed;
  j["timestamp"] = utc_timestamp();
  return j;
}

Vector sample_point(std::mt19937_64& rng, const FeasibleSet& set) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (std::holds_alternative<Simplex>(set.shape())) {
    std::size_t n = set.dim();
    std::vector<double> w(n);
    double sum = 0.0;
    for (double& c : w) {
      c = -std::log(std::max(unit(rng), 1e-16));
      sum += c;
    }
    for (double& c : w) c /= sum;
    return Vector(std::move(w));
  }
  Box bb = set.bounding_box();
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Vector x = Vector::zeros(set.dim());
    for (std::size_t i = 0; i < x.dim(); ++i) {
      x[i] = bb.lower[i] + unit(rng) * (bb.upper[i] - bb.lower[i]);
    }
    if (set.contains(x)) return x;
  }
  throw std::runtime_error("could not sample a feasible point");
}

double coordinate_sum(const Vector& v) {
  double s = 0.0;
  for (double c : v.coords()) s += c;
  return s;
}

int run_solve(const RunConfig& config, LoadedProblem& loaded) {
  Problem& problem = loaded.problem;
  std::int64_t bound = theoretical_iteration_bound(problem.epsilon, problem.theta0,
                                                   max_constraint_lipschitz(problem));
  problem.max_iterations = static_cast<std::int64_t>(config.max_iter_factor * bound);
  SolverReport report = solve(problem);
  bool within_bound = report.iterations_used <= bound;
  bool ok = report.stop_reason == StopReason::ZeroObjectiveSubgradient ||
            (report.stop_reason == StopReason::CriterionMet && within_bound);

  if (config.format == RunConfig::Format::Csv) {
    int rc = emit(step_log_csv(report.state.step_log), config.output_path);
    return rc != 0 ? rc : (ok ? 0 : 1);
  }
  ordered_json j = config_header(config, "solve", problem);
  j["iteration_bound"] = bound;
  j["within_bound"] = within_bound;
  j["report"] = solver_report_json(report);
  j["all_checks_hold"] = ok;
  int rc = emit(j.dump(2) + "\n", config.output_path);
  return rc != 0 ? rc : (ok ? 0 : 1);
}

int run_certify(const RunConfig& config, LoadedProblem& loaded) {
  Problem& problem = loaded.problem;
  std::int64_t bound = theoretical_iteration_bound(problem.epsilon, problem.theta0,
                                                   max_constraint_lipschitz(problem));
  problem.max_iterations = static_cast<std::int64_t>(config.max_iter_factor * bound);
  SolverReport report = solve(problem);

  std::optional<Vector> x_star = loaded.x_star;
  if (!x_star && problem.prox.dim() <= 3) {
    x_star = grid_solution(problem);
  }
  CertificateResult cert =
      certify(report, problem, x_star, loaded.declared_lipschitz, loaded.declared_jump_total);
  bool ok = cert.passed();

  if (config.format == RunConfig::Format::Csv) {
    std::ostringstream out;
    out << "min_normalized_gap,normalized_gap_bound_holds,objective_gap,gap_bound,gap_bound_holds,"
           "constraint_residuals_ok,passed\n";
    auto cell = [&](const auto& opt) {
      if (opt) out << format_double(static_cast<double>(*opt));
      out << ',';
    };
    cell(cert.min_normalized_gap);
    cell(cert.normalized_gap_bound_holds);
    cell(cert.objective_gap);
    cell(cert.gap_bound);
    cell(cert.gap_bound_holds);
    out << (cert.constraint_residuals_ok ? 1 : 0) << ',' << (ok ? 1 : 0) << '\n';
    int rc = emit(out.str(), config.output_path);
    return rc != 0 ? rc : (ok ? 0 : 1);
  }

  ordered_json j = config_header(config, "certify", problem);
  j["iteration_bound"] = bound;
  j["stop_reason"] = stop_reason_name(report.stop_reason);
  j["iterations_used"] = report.iterations_used;
  if (x_star) {
    j["x_star"] = vector_json(*x_star);
    j["x_star_source"] = loaded.x_star ? "problem_file" : "grid_search";
    j["theta0_honest"] = theta_bound_holds(problem.prox, *x_star, problem.theta0);
  } else {
    j["x_star"] = nullptr;
  }
  j["certificate"] = certificate_json(cert);
  j["all_checks_hold"] = ok;
  int rc = emit(j.dump(2) + "\n", config.output_path);
  return rc != 0 ? rc : (ok ? 0 : 1);
}

int run_interp_check(const RunConfig& config, LoadedProblem& loaded) {
  const Problem& problem = loaded.problem;
  const FeasibleSet& Q = problem.prox.set();
  std::mt19937_64 rng(config.seed);

  std::size_t failures = 0;
  double worst_residual = -HUGE_VAL;
  ordered_json rows = ordered_json::array();
  std::ostringstream csv;
  csv << "index,residual,holds\n";
  for (int i = 0; i < config.segments; ++i) {
    Vector a = sample_point(rng, Q);
    Vector b = sample_point(rng, Q);
    if (a == b) {
      --i;
      continue;
    }
    // orient segments toward the coordinatewise-larger end, where kink
    // ladders accumulate
    if (coordinate_sum(b) < coordinate_sum(a)) std::swap(a, b);
    InterpolationReport rep =
        check_interpolation(problem.objective, a, b, loaded.declared_lipschitz,
                            loaded.declared_jump_total, problem.prox.norm());
    if (!rep.holds) ++failures;
    worst_residual = std::max(worst_residual, rep.residual);
    ordered_json row = interpolation_report_json(rep);
    row["x"] = vector_json(a);
    row["y"] = vector_json(b);
    rows.push_back(std::move(row));
    csv << i << ',' << format_double(rep.residual) << ',' << (rep.holds ? 1 : 0) << '\n';
  }
  bool ok = failures == 0;

  if (config.format == RunConfig::Format::Csv) {
    int rc = emit(csv.str(), config.output_path);
    return rc != 0 ? rc : (ok ? 0 : 1);
  }
  ordered_json j = config_header(config, "interp-check", problem);
  j["segments"] = config.segments;
  j["declared_lipschitz"] = loaded.declared_lipschitz;
  j["declared_jump_total"] = loaded.declared_jump_total;
  j["failures"] = failures;
  j["worst_residual"] = worst_residual;
  j["reports"] = std::move(rows);
  j["all_checks_hold"] = ok;
  int rc = emit(j.dump(2) + "\n", config.output_path);
  return rc != 0 ? rc : (ok ? 0 : 1);
}

int run_bench(const RunConfig& config, LoadedProblem& loaded) {
  Problem& problem = loaded.problem;
  ordered_json rows = ordered_json::array();
  std::ostringstream csv;
  csv << "epsilon,iterations_used,iteration_bound,criterion_met,within_bound\n";
  bool ok = true;
  for (double eps : config.bench_epsilons) {
    problem.epsilon = eps;
    std::int64_t bound =
        theoretical_iteration_bound(eps, problem.theta0, max_constraint_lipschitz(problem));
    problem.max_iterations = static_cast<std::int64_t>(config.max_iter_factor * bound);
    SolverReport report = solve(problem);
    bool criterion_met = report.stop_reason == StopReason::CriterionMet;
    bool within = report.iterations_used <= bound;
    ok = ok && criterion_met && within;
    ordered_json row;
    row["epsilon"] = eps;
    row["iterations_used"] = report.iterations_used;
    row["iteration_bound"] = bound;
    row["criterion_met"] = criterion_met;
    row["within_bound"] = within;
    row["stop_reason"] = stop_reason_name(report.stop_reason);
    rows.push_back(std::move(row));
    csv << format_double(eps) << ',' << report.iterations_used << ',' << bound << ','
        << (criterion_met ? 1 : 0) << ',' << (within ? 1 : 0) << '\n';
  }

  if (config.format == RunConfig::Format::Csv) {
    int rc = emit(csv.str(), config.output_path);
    return rc != 0 ? rc : (ok ? 0 : 1);
  }
  ordered_json j = config_header(config, "bench", problem);
  j["rows"] = std::move(rows);
  j["all_checks_hold"] = ok;
  int rc = emit(j.dump(2) + "\n", config.output_path);
  return rc != 0 ? rc : (ok ? 0 : 1);
}

}  // namespace

int run(const RunConfig& config) {
  try {
    LoadedProblem loaded = load_problem(config.problem_file);
    if (config.epsilon) {
      if (!(*config.epsilon > 0.0)) throw ProblemFormatError("epsilon: must be > 0");
      loaded.problem.epsilon = *config.epsilon;
    }
    if (config.theta0) {
      if (!(*config.theta0 > 0.0)) throw ProblemFormatError("theta0: must be > 0");
      loaded.problem.theta0 = *config.theta0;
    }
    if (config.declared_lipschitz) loaded.declared_lipschitz = *config.declared_lipschitz;
    if (config.declared_jump_total) loaded.declared_jump_total = *config.declared_jump_total;

    switch (config.command) {
      case RunConfig::Command::Solve:
        return run_solve(config, loaded);
      case RunConfig::Command::Certify:
        return run_certify(config, loaded);
      case RunConfig::Command::InterpCheck:
        return run_interp_check(config, loaded);
      case RunConfig::Command::Bench:
        return run_bench(config, loaded);
    }
    return 2;
  } catch (const std::exception& e) {
    ordered_json err;
    err["error"] = e.what();
    std::cerr << err.dump() << "\n";
    return 2;
  }
}

}  // namespace qmd
