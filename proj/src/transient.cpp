#include "hfv/transient.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace hfv {

DofVector discretize_initial(const Mesh& mesh, const ScalarField& initial, int refinement) {
  DofVector u = DofVector::zero(mesh);
  for (Index c = 0; c < mesh.num_cells(); ++c) u.cells[c] = cell_average(mesh, c, initial, refinement);
  for (Index i = 0; i < mesh.num_faces(); ++i) {
    const Face& f = mesh.face(i);
    u.faces[i] = f.is_boundary() ? u.cells[f.cells[0]] : 0.5 * (u.cells[f.cells[0]] + u.cells[f.cells[1]]);
  }
  return u;
}

DofVector discrete_steady_state(const Mesh& mesh, const ProblemData& data, const SchemeConfig& config,
                                const DofVector& initial) {
  ProblemData d = data;
  if (!has_dirichlet(mesh)) d.mass = norms(mesh, initial).mass;
  return solve_stationary(mesh, d, config);
}

namespace {

TimeSeriesRecord make_record(const Mesh& mesh, int step, double time, const DofVector& u, const DofVector& steady,
                             const EntropyEvaluator& entropy, const TransientOptions& options, long solves,
                             bool faces_valid) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  TimeSeriesRecord r;
  r.step = step;
  r.time = time;
  if (faces_valid) {
    const auto ed = entropy(u, steady);
    r.entropy = ed.entropy;
    r.dissipation = ed.dissipation;
  } else {
    DofVector cells_only = steady;
    cells_only.cells = u.cells;
    r.entropy = entropy(cells_only, steady).entropy;
    r.dissipation = nan;
  }
  r.dist_l1_discrete = norms(mesh, Eigen::VectorXd(u.cells - steady.cells)).l1;
  r.dist_l2 = norms(mesh, Eigen::VectorXd(u.cells - steady.cells)).l2;
  if (options.exact_steady) {
    double s = 0.0;
    for (Index c = 0; c < mesh.num_cells(); ++c)
      s += mesh.cell(c).measure * std::abs(u.cells[c] - options.exact_steady(mesh.cell(c).center));
    r.dist_l1_exact = s;
  } else {
    r.dist_l1_exact = nan;
  }
  r.min_cell = u.cells.minCoeff();
  r.min_face = faces_valid ? u.faces.minCoeff() : nan;
  r.negatives_count = (u.cells.array() < 0.0).count() + (faces_valid ? (u.faces.array() < 0.0).count() : 0);
  r.solves_cumulative = solves;
  return r;
}

}  // namespace

TransientResult transient_drive(const Mesh& mesh, const ProblemData& data, const SchemeConfig& config,
                                const TransientOptions& options) {
  if (!(config.dt > 0.0)) throw std::invalid_argument("time step must be positive");
  if (!(config.final_time >= 0.0)) throw std::invalid_argument("final time must be nonnegative");

  TransientResult result;
  result.initial = discretize_initial(mesh, data.initial, options.initial_refinement);
  result.steady_state = discrete_steady_state(mesh, data, config, result.initial);
  const EntropyEvaluator entropy(mesh, data, config);

  auto emit = [&](const TimeSeriesRecord& r, const DofVector& u) {
    result.records.push_back(r);
    if (options.observer) options.observer(r, u);
  };
  emit(make_record(mesh, 0, 0.0, result.initial, result.steady_state, entropy, options, 0, false), result.initial);

  const double tf = config.final_time;
  const double eps_t = 1e-12 * std::max(1.0, tf);
  DofVector u = result.initial;
  double t = 0.0;
  long solves = 0;
  int step = 0;

  if (config.scheme != SchemeKind::nonlinear) {
    std::optional<LinearStepper> stepper;
    while (t < tf - eps_t) {
      const double dt = std::min(config.dt, tf - t);
      if (!stepper || std::abs(stepper->dt() - dt) > 1e-14 * dt) stepper.emplace(mesh, data, config, dt);
      u = stepper->step(u.cells);
      ++solves;
      t = (tf - t - dt <= eps_t) ? tf : t + dt;
      emit(make_record(mesh, ++step, t, u, result.steady_state, entropy, options, solves, true), u);
    }
    result.final_state = u;
    return result;
  }

  const NonlinearScheme scheme(mesh, data, config);
  const Index n = mesh.num_cells() + mesh.num_faces();
  SparseLu lu;
  double dt = config.dt;
  const double dt_min = config.dt * std::ldexp(1.0, -20);
  int halvings_this_step = 0;
  while (t < tf - eps_t) {
    dt = std::min(dt, tf - t);
    NonlinearMode mode;
    mode.step = TimeStep{u.cells, dt};
    Eigen::VectorXd x = u.stacked().cwiseMax(config.newton.epsilon);
    NewtonReport report;
    try {
      report = newton_solve(scheme, mode, x, config.newton, &lu);
    } catch (const SolverError&) {
      report.converged = false;
    } catch (const DomainError&) {
      report.converged = false;
    }
    solves += report.iterations;
    if (!report.converged) {
      dt *= 0.5;
      ++halvings_this_step;
      ++result.halvings;
      if (dt < dt_min) {
        std::ostringstream msg;
        msg << "time step underflow at t = " << t << " (dt = " << dt << ")";
        throw SolverError(msg.str());
      }
      continue;
    }
    report.dt = dt;
    report.halvings = halvings_this_step;
    halvings_this_step = 0;
    result.newton.push_back(report);
    u = DofVector::unstack(mesh, x.head(n));
    t = (tf - t - dt <= eps_t) ? tf : t + dt;
    emit(make_record(mesh, ++step, t, u, result.steady_state, entropy, options, solves, true), u);
    dt = std::min(config.dt, 2.0 * dt);
  }
  result.final_state = u;
  return result;
}

}  // namespace hfv
