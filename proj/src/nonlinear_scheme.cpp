#include "hfv/nonlinear.hpp"

#include <cmath>

namespace hfv {

NonlinearScheme::NonlinearScheme(const Mesh& mesh, const ProblemData& data, const SchemeConfig& config)
    : mesh_(mesh), config_(config) {
  ops_ = local_diffusion_matrices(mesh, data.diffusion, config.eta);
  phi_ = interpolate(mesh, data.potential);
  source_.resize(mesh.num_cells());
  for (Index c = 0; c < mesh.num_cells(); ++c)
    source_[c] = data.source(mesh.cell(c).center) * mesh.cell(c).measure;
  neumann_integral_ = Eigen::VectorXd::Zero(mesh.num_faces());
  dirichlet_mean_ = Eigen::VectorXd::Zero(mesh.num_faces());
  for (Index i = 0; i < mesh.num_faces(); ++i) {
    const Face& f = mesh.face(i);
    if (f.tag == BoundaryTag::neumann) neumann_integral_[i] = f.measure * face_mean(mesh, i, data.neumann);
    if (f.tag == BoundaryTag::dirichlet) dirichlet_mean_[i] = face_mean(mesh, i, data.dirichlet);
  }
}

NonlinearScheme::LocalJacobian NonlinearScheme::local(Index cell, const Eigen::VectorXd& x,
                                                       bool derivatives) const {
  const Cell& c = mesh_.cell(cell);
  const Index nc = mesh_.num_cells();
  Eigen::VectorXd uf(c.num_faces());
  for (Index i = 0; i < c.num_faces(); ++i) uf[i] = x[nc + c.faces[i]];
  return local(cell, x[cell], uf, derivatives);
}

NonlinearScheme::LocalJacobian NonlinearScheme::local(Index cell, double uK, const Eigen::VectorXd& uf,
                                                       bool derivatives) const {
  const Cell& c = mesh_.cell(cell);
  const Index k = c.num_faces();
  if (!(uK > 0.0) || !(uf.minCoeff() > 0.0)) throw DomainError("nonlinear scheme needs strictly positive unknowns");
  Eigen::VectorXd dl(k);
  const double lK = std::log(uK) + phi_.cells[cell];
  for (Index i = 0; i < k; ++i) dl[i] = lK - std::log(uf[i]) - phi_.faces[c.faces[i]];
  const Reconstruction r = reconstruct(config_.mean, config_.aggregate, uK, uf);
  const Eigen::MatrixXd& A = ops_[cell].A;
  const Eigen::VectorXd g = A * dl;

  LocalJacobian out;
  out.flux = r.value * g;
  if (derivatives) {
    out.d.resize(k, k + 1);
    out.d.col(0) = r.d_cell * g + r.value / uK * A.rowwise().sum();
    for (Index j = 0; j < k; ++j) out.d.col(1 + j) = r.d_faces[j] * g - r.value / uf[j] * A.col(j);
  }
  return out;
}

Eigen::VectorXd NonlinearScheme::residual(const Eigen::VectorXd& x, const NonlinearMode& mode) const {
  const Index nc = mesh_.num_cells(), nf = mesh_.num_faces();
  if (x.size() != size(mode)) throw std::invalid_argument("nonlinear residual: wrong vector size");
  for (Index i = 0; i < nc + nf; ++i)
    if (!(x[i] > 0.0)) throw DomainError("nonlinear scheme needs strictly positive unknowns");

  Eigen::VectorXd G = Eigen::VectorXd::Zero(x.size());
  for (Index c = 0; c < nc; ++c) {
    const Cell& cell = mesh_.cell(c);
    const Eigen::VectorXd F = local(c, x, false).flux;
    G[c] = F.sum() - source_[c];
    if (mode.step) G[c] += cell.measure * (x[c] - mode.step->previous[c]) / mode.step->dt;
    if (mode.mass) G[c] += cell.measure * x[nc + nf];
    for (Index i = 0; i < cell.num_faces(); ++i) G[nc + cell.faces[i]] -= F[i];
  }
  for (Index i = 0; i < nf; ++i) {
    const Face& f = mesh_.face(i);
    if (f.tag == BoundaryTag::neumann) G[nc + i] -= neumann_integral_[i];
    if (f.tag == BoundaryTag::dirichlet) G[nc + i] = dirichlet_mean_[i] - x[nc + i];
  }
  if (mode.mass) {
    double m = 0.0;
    for (Index c = 0; c < nc; ++c) m += mesh_.cell(c).measure * x[c];
    G[nc + nf] = m - *mode.mass;
  }
  return G;
}

AssembledSystem NonlinearScheme::jacobian(const Eigen::VectorXd& x, const NonlinearMode& mode) const {
  const Index nc = mesh_.num_cells(), nf = mesh_.num_faces();
  const Index ne = nf + (mode.mass ? 1 : 0);
  const Eigen::VectorXd G = residual(x, mode);

  AssembledSystem sys;
  sys.face_unknown.resize(static_cast<std::size_t>(nf));
  for (Index i = 0; i < nf; ++i) sys.face_unknown[i] = i;
  sys.dirichlet_values = Eigen::VectorXd::Zero(nf);
  sys.has_multiplier = mode.mass.has_value();
  sys.mm = Eigen::VectorXd::Zero(nc);
  sys.sm = -G.head(nc);
  sys.se = -G.tail(ne);

  std::vector<Triplet> me, em, ee;
  for (Index c = 0; c < nc; ++c) {
    const Cell& cell = mesh_.cell(c);
    const Index k = cell.num_faces();
    const LocalJacobian J = local(c, x, true);
    const Eigen::RowVectorXd row = J.d.colwise().sum();
    sys.mm[c] = row[0];
    if (mode.step) sys.mm[c] += cell.measure / mode.step->dt;
    for (Index j = 0; j < k; ++j) me.emplace_back(c, cell.faces[j], row[1 + j]);
    for (Index i = 0; i < k; ++i) {
      const Index fi = cell.faces[i];
      if (mesh_.face(fi).tag == BoundaryTag::dirichlet) continue;
      em.emplace_back(fi, c, -J.d(i, 0));
      for (Index j = 0; j < k; ++j) ee.emplace_back(fi, cell.faces[j], -J.d(i, 1 + j));
    }
    if (mode.mass) {
      me.emplace_back(c, nf, cell.measure);
      em.emplace_back(nf, c, cell.measure);
    }
  }
  for (Index i = 0; i < nf; ++i)
    if (mesh_.face(i).tag == BoundaryTag::dirichlet) ee.emplace_back(i, i, -1.0);
  if (mode.mass) ee.emplace_back(nf, nf, 0.0);

  sys.me.resize(nc, ne);
  sys.em.resize(ne, nc);
  sys.ee.resize(ne, ne);
  sys.me.setFromTriplets(me.begin(), me.end());
  sys.em.setFromTriplets(em.begin(), em.end());
  sys.ee.setFromTriplets(ee.begin(), ee.end());
  return sys;
}

SparseMatrix NonlinearScheme::jacobian_matrix(const Eigen::VectorXd& x, const NonlinearMode& mode) const {
  const AssembledSystem sys = jacobian(x, mode);
  const Index nc = sys.num_cells(), ne = sys.num_skeleton();
  std::vector<Triplet> t;
  for (Index c = 0; c < nc; ++c) t.emplace_back(c, c, sys.mm[c]);
  auto add = [&t](const SparseMatrix& m, Index r0, Index c0) {
    for (Index o = 0; o < m.outerSize(); ++o)
      for (SparseMatrix::InnerIterator it(m, o); it; ++it) t.emplace_back(r0 + it.row(), c0 + it.col(), it.value());
  };
  add(sys.me, 0, nc);
  add(sys.em, nc, 0);
  add(sys.ee, nc, nc);
  SparseMatrix J(nc + ne, nc + ne);
  J.setFromTriplets(t.begin(), t.end());
  return J;
}

Eigen::VectorXd NonlinearScheme::cell_fluxes(Index cell, const DofVector& u) const {
  const LocalDofs l = restrict_to_cell(mesh_, cell, u);
  return local(cell, l.cell, l.faces, false).flux;
}

double NonlinearScheme::reconstruction(Index cell, const DofVector& u) const {
  const LocalDofs l = restrict_to_cell(mesh_, cell, u);
  return reconstruct(config_.mean, config_.aggregate, l.cell, l.faces).value;
}

}  // namespace hfv
