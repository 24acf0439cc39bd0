#include "hfv/solver.hpp"

#include <cmath>
#include <sstream>

namespace hfv {

CondensedSystem condense(const AssembledSystem& system) {
  CondensedSystem out;
  const Index nc = system.mm.size();
  out.inv_mm.resize(nc);
  for (Index c = 0; c < nc; ++c) {
    if (system.mm[c] == 0.0 || !std::isfinite(system.mm[c]))
      throw SolverError("condensation: zero diagonal entry in cell block at row " + std::to_string(c));
    out.inv_mm[c] = 1.0 / system.mm[c];
  }
  out.me = system.me;
  out.em = system.em;
  out.schur = system.ee - system.em * out.inv_mm.asDiagonal() * system.me;
  out.schur.makeCompressed();
  out.rhs = out.condensed_rhs(system.sm, system.se);
  return out;
}

Eigen::VectorXd CondensedSystem::condensed_rhs(const Eigen::VectorXd& sm, const Eigen::VectorXd& se) const {
  return se - em * inv_mm.cwiseProduct(sm);
}

Eigen::VectorXd CondensedSystem::recover(const Eigen::VectorXd& sm, const Eigen::VectorXd& skeleton) const {
  return inv_mm.cwiseProduct(sm - me * skeleton);
}

namespace {

bool same_pattern(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.nonZeros() != b.nonZeros()) return false;
  for (Index j = 0; j <= a.outerSize(); ++j)
    if (a.outerIndexPtr()[j] != b.outerIndexPtr()[j]) return false;
  for (Index i = 0; i < a.nonZeros(); ++i)
    if (a.innerIndexPtr()[i] != b.innerIndexPtr()[i]) return false;
  return true;
}

}  // namespace

void SparseLu::compute(const SparseMatrix& matrix) {
  SparseMatrix m = matrix;
  m.makeCompressed();
  if (!analyzed_ || !same_pattern(m, matrix_)) {
    lu_.analyzePattern(m);
    analyzed_ = true;
  }
  matrix_ = std::move(m);
  lu_.factorize(matrix_);
  if (lu_.info() != Eigen::Success)
    throw SolverError("sparse LU factorization failed: " + lu_.lastErrorMessage());
}

Eigen::VectorXd SparseLu::solve(const Eigen::VectorXd& rhs, double tolerance) const {
  Eigen::VectorXd x = lu_.solve(rhs);
  if (lu_.info() != Eigen::Success) throw SolverError("sparse LU solve failed");
  const double scale = rhs.lpNorm<Eigen::Infinity>();
  Eigen::VectorXd r = rhs - matrix_ * x;
  if (r.lpNorm<Eigen::Infinity>() > tolerance * scale) {
    x += lu_.solve(r);
    r = rhs - matrix_ * x;
  }
  const double rel = scale > 0 ? r.lpNorm<Eigen::Infinity>() / scale : r.lpNorm<Eigen::Infinity>();
  if (!(rel <= tolerance) && !(scale == 0.0 && rel == 0.0)) {
    std::ostringstream msg;
    msg << "linear solve residual " << rel << " exceeds tolerance " << tolerance;
    throw SolverError(msg.str());
  }
  return x;
}

Eigen::VectorXd sparse_solve(const SparseMatrix& matrix, const Eigen::VectorXd& rhs, double tolerance) {
  if (matrix.rows() != matrix.cols() || matrix.rows() != rhs.size())
    throw SolverError("sparse_solve: dimension mismatch");
  SparseLu lu;
  lu.compute(matrix);
  return lu.solve(rhs, tolerance);
}

BlockSolution expand(const AssembledSystem& system, const Eigen::VectorXd& cells,
                     const Eigen::VectorXd& skeleton) {
  BlockSolution out;
  out.u.cells = cells;
  const Index nf = static_cast<Index>(system.face_unknown.size());
  out.u.faces.resize(nf);
  for (Index i = 0; i < nf; ++i) {
    const Index k = system.face_unknown[i];
    out.u.faces[i] = k >= 0 ? skeleton[k] : system.dirichlet_values[i];
  }
  if (system.has_multiplier) out.multiplier = skeleton[skeleton.size() - 1];
  return out;
}

BlockSolution solve_block_system(const AssembledSystem& system) {
  const CondensedSystem cs = condense(system);
  const Eigen::VectorXd skeleton = sparse_solve(cs.schur, cs.rhs);
  return expand(system, cs.recover(system.sm, skeleton), skeleton);
}

LinearStepper::LinearStepper(const Mesh& mesh, const ProblemData& data, const SchemeConfig& config, double dt)
    : mesh_(mesh), dt_(dt) {
  base_ = assemble_linear(mesh, data, config, TimeStep{Eigen::VectorXd::Zero(mesh.num_cells()), dt});
  condensed_ = condense(base_);
  lu_.compute(condensed_.schur);
}

DofVector LinearStepper::step(const Eigen::VectorXd& previous_cells) const {
  Eigen::VectorXd sm = base_.sm;
  for (Index c = 0; c < mesh_.num_cells(); ++c) sm[c] += mesh_.cell(c).measure * previous_cells[c] / dt_;
  const Eigen::VectorXd skeleton = lu_.solve(condensed_.condensed_rhs(sm, base_.se));
  return expand(base_, condensed_.recover(sm, skeleton), skeleton).u;
}

DofVector solve_stationary(const Mesh& mesh, const ProblemData& data, const SchemeConfig& config) {
  if (config.scheme != SchemeKind::nonlinear) return solve_block_system(assemble_linear(mesh, data, config)).u;

  const NonlinearScheme scheme(mesh, data, config);
  NonlinearMode mode;
  const DofVector omega = omega_interpolate(mesh, data);
  double rho = 1.0;
  if (!has_dirichlet(mesh)) {
    if (!data.mass) throw std::invalid_argument("stationary pure-Neumann problem needs a mass");
    mode.mass = data.mass;
    rho = *data.mass / norms(mesh, omega).mass;
  } else if (data.thermal) {
    for (Index i = 0; i < mesh.num_faces(); ++i)
      if (mesh.face(i).tag == BoundaryTag::dirichlet) {
        rho = face_mean(mesh, i, data.dirichlet) / omega.faces[i];
        break;
      }
  }
  Eigen::VectorXd x(scheme.size(mode));
  x.head(mesh.num_cells() + mesh.num_faces()) = (rho * omega).stacked();
  if (mode.mass) x[x.size() - 1] = 0.0;
  const NewtonReport report = newton_solve(scheme, mode, x, config.newton);
  if (!report.converged) throw SolverError("stationary Newton iteration did not converge");
  return DofVector::unstack(mesh, x);
}

}  // namespace hfv
