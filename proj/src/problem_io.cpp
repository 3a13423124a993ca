#include "qmd/problem_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qmd/funclib.hpp"

namespace qmd {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ProblemFormatError(where + ": " + what);
}

const ordered_json& require(const ordered_json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing field '") + key + "'");
  return *it;
}

double require_number(const ordered_json& j, const char* key, const std::string& where) {
  const ordered_json& v = require(j, key, where);
  if (!v.is_number()) fail(where + "." + key, "expected a number");
  return v.get<double>();
}

std::vector<double> require_vector(const ordered_json& j, const char* key,
                                   const std::string& where) {
  const ordered_json& v = require(j, key, where);
  if (!v.is_array() || v.empty()) fail(where + "." + key, "expected a nonempty array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& e : v) {
    if (!e.is_number()) fail(where + "." + key, "expected a nonempty array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

QuadraticPieceSpec parse_piece(const ordered_json& j, const std::string& where) {
  QuadraticPieceSpec piece;
  const ordered_json& a = require(j, "A", where);
  if (!a.is_array() || a.empty()) fail(where + ".A", "expected a square matrix");
  for (const auto& row : a) {
    if (!row.is_array() || row.size() != a.size()) fail(where + ".A", "expected a square matrix");
    std::vector<double> r;
    for (const auto& e : row) {
      if (!e.is_number()) fail(where + ".A", "expected numeric entries");
      r.push_back(e.get<double>());
    }
    piece.matrix.push_back(std::move(r));
  }
  piece.linear = require_vector(j, "b", where);
  if (piece.linear.size() != piece.matrix.size()) {
    fail(where, "dimensions of A and b disagree");
  }
  piece.offset = j.value("alpha", 0.0);
  return piece;
}

ObjectiveSpec parse_objective(const ordered_json& j) {
  const std::string where = "objective";
  ObjectiveSpec spec;
  spec.type = require(j, "type", where).get<std::string>();
  if (spec.type == "example1") {
    spec.k = require_number(j, "k", where);
    spec.delta = require_number(j, "delta", where);
  } else if (spec.type == "quadratic") {
    spec.pieces.push_back(parse_piece(j, where));
  } else if (spec.type == "maxquad") {
    const ordered_json& pieces = require(j, "pieces", where);
    if (!pieces.is_array() || pieces.empty()) fail(where + ".pieces", "expected a nonempty array");
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      spec.pieces.push_back(parse_piece(pieces[i], where + ".pieces[" + std::to_string(i) + "]"));
    }
  } else {
    fail(where + ".type", "unknown objective type '" + spec.type + "'");
  }
  return spec;
}

ConstraintSpec parse_constraint(const ordered_json& j, const std::string& where) {
  ConstraintSpec spec;
  spec.type = require(j, "type", where).get<std::string>();
  if (spec.type == "linear") {
    spec.a = require_vector(j, "a", where);
    spec.b = j.value("b", 0.0);
  } else if (spec.type == "norm_ball_residual") {
    spec.norm = require(j, "norm", where).get<std::string>();
    if (spec.norm != "l1" && spec.norm != "l2" && spec.norm != "linf") {
      fail(where + ".norm", "expected one of l1, l2, linf");
    }
    spec.center = require_vector(j, "center", where);
    spec.radius = require_number(j, "radius", where);
    if (!(spec.radius > 0.0)) fail(where + ".radius", "must be > 0");
  } else {
    fail(where + ".type", "unknown constraint type '" + spec.type + "'");
  }
  return spec;
}

SetSpec parse_set(const ordered_json& j, const std::string& where) {
  SetSpec spec;
  spec.type = require(j, "type", where).get<std::string>();
  if (spec.type == "box") {
    spec.lower = require_vector(j, "lower", where);
    spec.upper = require_vector(j, "upper", where);
  } else if (spec.type == "ball") {
    spec.center = require_vector(j, "center", where);
    spec.radius = require_number(j, "radius", where);
  } else if (spec.type == "simplex") {
    double d = require_number(j, "dim", where);
    if (d < 1 || d != std::floor(d)) fail(where + ".dim", "expected a positive integer");
    spec.dim = static_cast<std::size_t>(d);
  } else {
    fail(where + ".type", "unknown set type '" + spec.type + "'");
  }
  return spec;
}

}  // namespace

ProblemSpec parse_problem_spec(const ordered_json& j) {
  if (!j.is_object()) fail("problem", "expected a JSON object");
  ProblemSpec spec;
  spec.objective = parse_objective(require(j, "objective", "problem"));
  if (auto it = j.find("constraints"); it != j.end()) {
    if (!it->is_array()) fail("constraints", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      spec.constraints.push_back(
          parse_constraint((*it)[i], "constraints[" + std::to_string(i) + "]"));
    }
  }
  if (auto it = j.find("prox"); it != j.end()) {
    ProxSpec prox;
    prox.kind = require(*it, "kind", "prox").get<std::string>();
    prox.set = parse_set(require(*it, "set", "prox"), "prox.set");
    if (auto c = it->find("center"); c != it->end()) {
      prox.center = c->get<std::vector<double>>();
    }
    spec.prox = std::move(prox);
  }
  spec.epsilon = require_number(j, "epsilon", "problem");
  spec.theta0 = require_number(j, "theta0", "problem");
  if (!(spec.epsilon > 0.0)) fail("epsilon", "must be > 0");
  if (!(spec.theta0 > 0.0)) fail("theta0", "must be > 0");
  if (auto it = j.find("x_star"); it != j.end()) {
    spec.x_star = it->get<std::vector<double>>();
  }
  if (auto it = j.find("declared_lipschitz"); it != j.end()) {
    spec.declared_lipschitz = it->get<double>();
  }
  if (auto it = j.find("declared_jump_total"); it != j.end()) {
    spec.declared_jump_total = it->get<double>();
  }
  return spec;
}

namespace {

ordered_json piece_json(const QuadraticPieceSpec& piece) {
  return ordered_json{{"A", piece.matrix}, {"b", piece.linear}, {"alpha", piece.offset}};
}

}  // namespace

ordered_json problem_spec_json(const ProblemSpec& spec) {
  ordered_json j;
  ordered_json obj;
  obj["type"] = spec.objective.type;
  if (spec.objective.type == "example1") {
    obj["k"] = spec.objective.k;
    obj["delta"] = spec.objective.delta;
  } else if (spec.objective.type == "quadratic") {
    const QuadraticPieceSpec& p = spec.objective.pieces.front();
    obj["A"] = p.matrix;
    obj["b"] = p.linear;
    obj["alpha"] = p.offset;
  } else {
    ordered_json pieces = ordered_json::array();
    for (const auto& p : spec.objective.pieces) pieces.push_back(piece_json(p));
    obj["pieces"] = std::move(pieces);
  }
  j["objective"] = std::move(obj);

  ordered_json constraints = ordered_json::array();
  for (const auto& c : spec.constraints) {
    ordered_json cj;
    cj["type"] = c.type;
    if (c.type == "linear") {
      cj["a"] = c.a;
      cj["b"] = c.b;
    } else {
      cj["norm"] = c.norm;
      cj["center"] = c.center;
      cj["radius"] = c.radius;
    }
    constraints.push_back(std::move(cj));
  }
  j["constraints"] = std::move(constraints);

  if (spec.prox) {
    ordered_json pj;
    pj["kind"] = spec.prox->kind;
    ordered_json sj;
    sj["type"] = spec.prox->set.type;
    if (spec.prox->set.type == "box") {
      sj["lower"] = spec.prox->set.lower;
      sj["upper"] = spec.prox->set.upper;
    } else if (spec.prox->set.type == "ball") {
      sj["center"] = spec.prox->set.center;
      sj["radius"] = spec.prox->set.radius;
    } else {
      sj["dim"] = spec.prox->set.dim;
    }
    pj["set"] = std::move(sj);
    if (spec.prox->center) pj["center"] = *spec.prox->center;
    j["prox"] = std::move(pj);
  }
  j["epsilon"] = spec.epsilon;
  j["theta0"] = spec.theta0;
  if (spec.x_star) j["x_star"] = *spec.x_star;
  if (spec.declared_lipschitz) j["declared_lipschitz"] = *spec.declared_lipschitz;
  if (spec.declared_jump_total) j["declared_jump_total"] = *spec.declared_jump_total;
  return j;
}

ProblemSpec load_problem_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ProblemFormatError("cannot open problem file: " + path);
  ordered_json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ProblemFormatError(path + ": " + e.what());
  }
  return parse_problem_spec(j);
}

namespace {

FeasibleSet build_set(const SetSpec& spec) {
  if (spec.type == "box") {
    return FeasibleSet::box(Vector(spec.lower), Vector(spec.upper));
  }
  if (spec.type == "ball") {
    return FeasibleSet::ball(Vector(spec.center), spec.radius);
  }
  return FeasibleSet::simplex(spec.dim);
}

ProxSetup build_prox(const ProxSpec& spec) {
  FeasibleSet set = build_set(spec.set);
  if (spec.kind == "euclidean_on_box") {
    return spec.center ? ProxSetup::euclidean_on_box(std::move(set), Vector(*spec.center))
                       : ProxSetup::euclidean_on_box(std::move(set));
  }
  if (spec.kind == "euclidean_on_ball") {
    return spec.center ? ProxSetup::euclidean_on_ball(std::move(set), Vector(*spec.center))
                       : ProxSetup::euclidean_on_ball(std::move(set));
  }
  if (spec.kind == "entropy_on_simplex") {
    return ProxSetup::entropy_on_simplex(set.dim());
  }
  throw ProblemFormatError("prox.kind: unknown kind '" + spec.kind + "'");
}

// Bound on dual_norm(g, problem_norm) over subgradients of a unit ball
// residual in ball_norm; subgradients live in the dual unit ball of the
// ball's norm.
double ball_residual_lipschitz(const std::string& ball_norm, NormKind problem_norm,
                               std::size_t n) {
  double root_n = std::sqrt(static_cast<double>(n));
  switch (problem_norm) {
    case NormKind::Euclidean:
      if (ball_norm == "l1") return root_n;  // sign vectors
      return 1.0;
    case NormKind::L1:
      return 1.0;  // sup-norm of any dual-unit subgradient is <= 1
    case NormKind::LInf:
      if (ball_norm == "l1") return static_cast<double>(n);
      if (ball_norm == "l2") return root_n;
      return 1.0;
  }
  return 1.0;
}

NormKind parse_norm_name(const std::string& name) {
  if (name == "l1") return NormKind::L1;
  if (name == "linf") return NormKind::LInf;
  return NormKind::Euclidean;
}

ConstraintOracle build_constraint(const ConstraintSpec& spec, NormKind problem_norm,
                                  std::size_t dim, const std::string& where) {
  if (spec.type == "linear") {
    if (spec.a.size() != dim) fail(where, "coefficient dimension mismatch");
    Vector a(spec.a);
    double b = spec.b;
    return ConstraintOracle{
        .value = [a, b](const Vector& x) { return dot(a, x) + b; },
        .subgradient = [a](const Vector&) { return a; },
        .lipschitz = dual_norm(a, problem_norm),
    };
  }
  if (spec.center.size() != dim) fail(where, "center dimension mismatch");
  Vector c(spec.center);
  double r = spec.radius;
  NormKind ball_norm = parse_norm_name(spec.norm);
  auto value = [c, r, ball_norm](const Vector& x) { return norm(x - c, ball_norm) - r; };
  auto subgradient = [c, ball_norm](const Vector& x) {
    Vector d = x - c;
    Vector g = Vector::zeros(d.dim());
    switch (ball_norm) {
      case NormKind::Euclidean: {
        double n2 = norm(d, NormKind::Euclidean);
        if (n2 > 0.0) g = (1.0 / n2) * d;
        break;
      }
      case NormKind::L1:
        for (std::size_t i = 0; i < d.dim(); ++i) {
          g[i] = d[i] > 0.0 ? 1.0 : (d[i] < 0.0 ? -1.0 : 0.0);
        }
        break;
      case NormKind::LInf: {
        double m = norm(d, NormKind::LInf);
        if (m > 0.0) {
          for (std::size_t i = 0; i < d.dim(); ++i) {
            if (std::abs(d[i]) == m) {
              g[i] = d[i] > 0.0 ? 1.0 : -1.0;
              break;
            }
          }
        }
        break;
      }
    }
    return g;
  };
  return ConstraintOracle{
      .value = value,
      .subgradient = subgradient,
      .lipschitz = ball_residual_lipschitz(spec.norm, problem_norm, dim),
  };
}

}  // namespace

LoadedProblem build_problem(const ProblemSpec& spec) {
  ProxSpec prox_spec;
  if (spec.prox) {
    prox_spec = *spec.prox;
  } else if (spec.objective.type == "example1") {
    prox_spec.kind = "euclidean_on_box";
    prox_spec.set.type = "box";
    prox_spec.set.lower = {0.0};
    prox_spec.set.upper = {1.0};
  } else {
    throw ProblemFormatError("prox: required for quadratic objectives");
  }

  ProxSetup prox = [&] {
    try {
      return build_prox(prox_spec);
    } catch (const std::invalid_argument& e) {
      throw ProblemFormatError(std::string("prox: ") + e.what());
    }
  }();

  ObjectiveOracle objective;
  std::size_t dim = prox.dim();
  try {
    if (spec.objective.type == "example1") {
      if (dim != 1) throw ProblemFormatError("prox.set: example1 needs a 1-D set");
      objective = make_objective(KinkLadderFunction(spec.objective.k, spec.objective.delta));
    } else {
      std::vector<QuadraticPiece> pieces;
      for (const auto& p : spec.objective.pieces) {
        pieces.push_back(QuadraticPiece{SymmetricMatrix(p.matrix), Vector(p.linear), p.offset});
      }
      MaxQuadObjective mq(std::move(pieces));
      if (mq.dim() != dim) {
        throw ProblemFormatError("objective: dimension disagrees with the prox set");
      }
      objective = make_objective(mq, prox.set(), prox.norm());
    }
  } catch (const std::invalid_argument& e) {
    throw ProblemFormatError(std::string("objective: ") + e.what());
  }

  std::vector<ConstraintOracle> constraints;
  for (std::size_t i = 0; i < spec.constraints.size(); ++i) {
    constraints.push_back(build_constraint(spec.constraints[i], prox.norm(), dim,
                                           "constraints[" + std::to_string(i) + "]"));
  }

  LoadedProblem loaded{
      .problem = Problem{std::move(objective), std::move(constraints), std::move(prox),
                         spec.epsilon, spec.theta0, 0},
      .spec = spec,
      .x_star = std::nullopt,
      .declared_lipschitz = 0.0,
      .declared_jump_total = 0.0,
  };
  if (spec.x_star) {
    if (spec.x_star->size() != dim) throw ProblemFormatError("x_star: dimension mismatch");
    loaded.x_star = Vector(*spec.x_star);
  }
  loaded.declared_lipschitz =
      spec.declared_lipschitz.value_or(loaded.problem.objective.smoothness.lipschitz_grad);
  loaded.declared_jump_total =
      spec.declared_jump_total.value_or(loaded.problem.objective.smoothness.jump_total);
  return loaded;
}

LoadedProblem load_problem(const std::string& path) {
  return build_problem(load_problem_spec(path));
}

const char* stop_reason_name(StopReason reason) {
  switch (reason) {
    case StopReason::CriterionMet:
      return "criterion_met";
    case StopReason::ZeroObjectiveSubgradient:
      return "zero_objective_subgradient";
    case StopReason::SafetyCap:
      return "safety_cap";
  }
  return "unknown";
}

ordered_json vector_json(const Vector& v) { return ordered_json(v.coords()); }

ordered_json step_record_json(const StepRecord& rec) {
  ordered_json j;
  j["iteration"] = rec.index;
  j["kind"] = rec.kind == StepKind::Productive ? "productive" : "nonproductive";
  if (rec.constraint_index) {
    j["constraint_index"] = *rec.constraint_index;
  } else {
    j["constraint_index"] = nullptr;
  }
  j["step_size"] = rec.step_size;
  j["subgradient_dual_norm"] = rec.subgradient_dual_norm;
  j["point"] = vector_json(rec.point);
  j["subgradient"] = vector_json(rec.subgradient);
  j["objective_value"] = rec.objective_value;
  j["max_constraint_value"] = rec.max_constraint_value;
  return j;
}

ordered_json solver_report_json(const SolverReport& report) {
  ordered_json j;
  j["stop_reason"] = stop_reason_name(report.stop_reason);
  j["iterations_used"] = report.iterations_used;
  if (report.best_productive_point) {
    j["best_productive_point"] = vector_json(*report.best_productive_point);
    j["best_productive_value"] = report.best_productive_value;
  } else {
    j["best_productive_point"] = nullptr;
    j["best_productive_value"] = nullptr;
  }
  j["productive_count"] = report.state.productive_set.size();
  j["nonproductive_weight"] = report.state.nonproductive_weight;
  j["productive_set"] = report.state.productive_set;
  ordered_json log = ordered_json::array();
  for (const StepRecord& rec : report.state.step_log) log.push_back(step_record_json(rec));
  j["step_log"] = std::move(log);
  return j;
}

ordered_json certificate_json(const CertificateResult& cert) {
  ordered_json j;
  auto opt = [](const auto& o) -> ordered_json {
    if (o) return ordered_json(*o);
    return ordered_json(nullptr);
  };
  j["min_normalized_gap"] = opt(cert.min_normalized_gap);
  j["normalized_gap_bound_holds"] = opt(cert.normalized_gap_bound_holds);
  j["objective_gap"] = opt(cert.objective_gap);
  j["gap_bound"] = opt(cert.gap_bound);
  j["gap_bound_holds"] = opt(cert.gap_bound_holds);
  j["constraint_residuals_ok"] = cert.constraint_residuals_ok;
  j["worst_productive_constraint"] = cert.worst_productive_constraint;
  j["worst_nonproductive_constraint"] = opt(cert.worst_nonproductive_constraint);
  j["productive_set_empty"] = cert.productive_set_empty;
  j["note"] = cert.note;
  j["passed"] = cert.passed();
  return j;
}

ordered_json interpolation_report_json(const InterpolationReport& report) {
  ordered_json j;
  j["residual"] = report.residual;
  j["chosen_subgradient"] = vector_json(report.chosen_subgradient);
  j["holds"] = report.holds;
  return j;
}

ordered_json segment_scan_json(const SegmentScan& scan) {
  ordered_json j;
  j["x"] = vector_json(scan.x);
  j["y"] = vector_json(scan.y);
  j["kink_params"] = scan.kink_params;
  j["jump_sizes"] = scan.jump_sizes;
  j["declared_lipschitz"] = scan.declared_lipschitz_grad;
  j["declared_jump_total"] = scan.declared_jump_total;
  return j;
}

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string step_log_csv(const std::vector<StepRecord>& log) {
  std::ostringstream out;
  out << "iteration,kind,constraint_index,step_size,subgradient_dual_norm,"
         "objective_value,max_constraint_value\n";
  for (const StepRecord& rec : log) {
    out << rec.index << ','
        << (rec.kind == StepKind::Productive ? "productive" : "nonproductive") << ',';
    if (rec.constraint_index) out << *rec.constraint_index;
    out << ',' << format_double(rec.step_size) << ',' << format_double(rec.subgradient_dual_norm)
        << ',' << format_double(rec.objective_value) << ','
        << format_double(rec.max_constraint_value) << '\n';
  }
  return out.str();
}

}  // namespace qmd
