#include "hfv/solver.hpp"

namespace hfv {

NewtonReport newton_solve(const ResidualFunction& residual, const NewtonStepFunction& step,
                          Eigen::VectorXd& x, const NewtonOptions& options, Index positive_count) {
  NewtonReport report;
  Eigen::VectorXd G = residual(x);
  report.initial_residual = G.lpNorm<Eigen::Infinity>();
  report.history.push_back(report.initial_residual);
  const double r0 = report.initial_residual;
  auto converged = [&](double r) { return r <= options.tolerance * r0 || r <= options.absolute_floor; };
  auto relative = [&](double r) { return r0 > 0.0 ? r / r0 : 0.0; };

  double r = r0;
  while (!converged(r)) {
    if (report.iterations >= options.max_iterations) {
      report.residual = relative(r);
      return report;
    }
    const Eigen::VectorXd delta = step(x, G);
    ++report.iterations;
    double damping = 1.0;
    Eigen::VectorXd trial = x + delta;
    int backtracks = 0;
    auto positive = [&](const Eigen::VectorXd& v) { return (v.head(positive_count).array() > 0.0).all(); };
    while (!positive(trial) && backtracks < options.max_backtracks) {
      damping *= 0.5;
      trial = x + damping * delta;
      ++backtracks;
    }
    report.backtracks += backtracks;
    if (!positive(trial) || !trial.allFinite()) {
      report.residual = relative(r);
      return report;
    }
    x = std::move(trial);
    G = residual(x);
    r = G.lpNorm<Eigen::Infinity>();
    report.history.push_back(r);
    if (!std::isfinite(r)) {
      report.residual = r;
      return report;
    }
  }
  report.converged = true;
  report.residual = relative(r);
  return report;
}

NewtonReport newton_solve(const NonlinearScheme& scheme, const NonlinearMode& mode, Eigen::VectorXd& x,
                          const NewtonOptions& options, SparseLu* lu) {
  SparseLu local_lu;
  SparseLu& solver = lu ? *lu : local_lu;
  const Index nc = scheme.mesh().num_cells();
  auto residual = [&](const Eigen::VectorXd& v) { return scheme.residual(v, mode); };
  auto step = [&](const Eigen::VectorXd& v, const Eigen::VectorXd&) {
    const AssembledSystem J = scheme.jacobian(v, mode);
    const CondensedSystem cs = condense(J);
    solver.compute(cs.schur);
    // Newton tolerates a looser linear residual than a final solve
    const Eigen::VectorXd skeleton = solver.solve(cs.rhs, 1e-8);
    Eigen::VectorXd delta(v.size());
    delta << cs.recover(J.sm, skeleton), skeleton;
    return delta;
  };
  return newton_solve(residual, step, x, options, nc + scheme.mesh().num_faces());
}

}  // namespace hfv
