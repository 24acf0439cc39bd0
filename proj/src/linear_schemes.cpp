#include "hfv/schemes.hpp"

#include <cmath>
#include <stdexcept>

namespace hfv {

Vec2 ProblemData::advection(const Vec2& x, double h) const {
  Vec2 grad;
  if (potential_gradient) {
    grad = potential_gradient(x);
  } else {
    const double step = 1e-6 * h;
    for (int d = 0; d < dimension; ++d) {
      Vec2 e = Vec2::Zero();
      e[d] = step;
      grad[d] = (potential(x + e) - potential(x - e)) / (2.0 * step);
    }
  }
  return -(diffusion(x) * grad);
}

SchemeKind parse_scheme_kind(const std::string& name) {
  if (name == "hmm") return SchemeKind::hmm;
  if (name == "expfit") return SchemeKind::expfit;
  if (name == "expfit-harmonic" || name == "expfit_harmonic") return SchemeKind::expfit_harmonic;
  if (name == "nonlinear") return SchemeKind::nonlinear;
  throw std::invalid_argument("unknown scheme '" + name + "'");
}

std::string to_string(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::hmm: return "hmm";
    case SchemeKind::expfit: return "expfit";
    case SchemeKind::expfit_harmonic: return "expfit-harmonic";
    case SchemeKind::nonlinear: return "nonlinear";
  }
  return "?";
}

bool has_dirichlet(const Mesh& mesh) { return mesh.count_tag(BoundaryTag::dirichlet) > 0; }

double face_normal_velocity(const Mesh& mesh, Index cell, Index local, const ProblemData& data) {
  const Cell& c = mesh.cell(cell);
  const Face& f = mesh.face(c.faces[local]);
  const Vec2 half = 0.5 * (mesh.vertex(f.vertices[1]) - mesh.vertex(f.vertices[0]));
  const double g = 1.0 / std::sqrt(3.0);
  const Vec2 v = 0.5 * (data.advection(f.barycenter - g * half, c.diameter) +
                        data.advection(f.barycenter + g * half, c.diameter));
  return v.dot(c.normals[local]);
}

namespace {

// L = [1^T C; −C] from the flux matrix C (fluxes F = C u_loc).
Eigen::MatrixXd form_from_fluxes(const Eigen::MatrixXd& C) {
  const Index k = C.rows();
  Eigen::MatrixXd L(k + 1, k + 1);
  L.row(0) = C.colwise().sum();
  L.bottomRows(k) = -C;
  return L;
}

// C = [A·1, −A]: diffusive fluxes on (u_K, u_σ...).
Eigen::MatrixXd diffusive_flux_matrix(const Eigen::MatrixXd& A) {
  const Index k = A.rows();
  Eigen::MatrixXd C(k, k + 1);
  C.col(0) = A.rowwise().sum();
  C.rightCols(k) = -A;
  return C;
}

}  // namespace

LocalForms hmm_local_forms(const Mesh& mesh, const ProblemData& data, const SchemeConfig& config) {
  std::vector<Mat2> at_center(static_cast<std::size_t>(mesh.num_cells()));
  for (Index c = 0; c < mesh.num_cells(); ++c) at_center[c] = data.diffusion(mesh.cell(c).center);

  LocalForms forms;
  forms.reserve(at_center.size());
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    const Cell& cell = mesh.cell(c);
    const LocalOperator op = local_diffusion_matrix(mesh, c, data.diffusion, config.eta);
    Eigen::MatrixXd C = diffusive_flux_matrix(op.A);
    for (Index i = 0; i < cell.num_faces(); ++i) {
      const Face& f = mesh.face(cell.faces[i]);
      const Index other = f.cells[0] == c ? f.cells[1] : f.cells[0];
      const double mu = peclet_weight(at_center[c], other >= 0 ? &at_center[other] : nullptr);
      const double V = face_normal_velocity(mesh, c, i, data);
      const double d = cell.distances[i];
      const double s = d / mu * V;
      const double w = f.measure * mu / d;
      C(i, 0) += w * flux_A(config.flux, -s);
      C(i, 1 + i) -= w * flux_A(config.flux, s);
    }
    forms.push_back(form_from_fluxes(C));
  }
  return forms;
}

DofVector omega_interpolate(const Mesh& mesh, const ProblemData& data) {
  const auto& phi = data.potential;
  return interpolate(mesh, [&phi](const Vec2& x) { return std::exp(-phi(x)); });
}

Mat2 omega_average(const Mesh& mesh, Index cell, Index local, const ProblemData& data, OmegaAverage mode) {
  const auto omega = [&data](const Vec2& x) { return std::exp(-data.potential(x)); };
  if (mode == OmegaAverage::standard) {
    const Vec2 xb = mesh.pyramid_barycenter(cell, local);
    return omega(xb) * data.diffusion(xb);
  }
  const Cell& c = mesh.cell(cell);
  const Face& f = mesh.face(c.faces[local]);
  const double inv_sum = 1.0 / omega(f.barycenter) +
                         1.0 / omega(0.5 * (c.center + mesh.vertex(f.vertices[0]))) +
                         1.0 / omega(0.5 * (c.center + mesh.vertex(f.vertices[1])));
  return 3.0 / inv_sum * data.diffusion(c.center);
}

LocalForms expfit_local_forms(const Mesh& mesh, const ProblemData& data, const SchemeConfig& config) {
  const OmegaAverage mode =
      config.scheme == SchemeKind::expfit_harmonic ? OmegaAverage::harmonic : OmegaAverage::standard;
  LocalForms forms;
  forms.reserve(static_cast<std::size_t>(mesh.num_cells()));
  std::vector<Mat2> tensors;
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    const Index k = mesh.cell(c).num_faces();
    tensors.resize(static_cast<std::size_t>(k));
    for (Index i = 0; i < k; ++i) tensors[i] = omega_average(mesh, c, i, data, mode);
    const LocalOperator op = local_diffusion_matrix(mesh, c, tensors, config.eta);
    forms.push_back(form_from_fluxes(diffusive_flux_matrix(op.A)));
  }
  return forms;
}

AssembledSystem assemble_from_forms(const Mesh& mesh, const LocalForms& forms, const ProblemData& data,
                                    const std::optional<TimeStep>& step, const DofVector* column_scale) {
  const Index nc = mesh.num_cells(), nf = mesh.num_faces();
  AssembledSystem sys;
  sys.face_unknown.assign(static_cast<std::size_t>(nf), -1);
  sys.dirichlet_values = Eigen::VectorXd::Zero(nf);
  Index ne = 0;
  for (Index i = 0; i < nf; ++i) {
    if (mesh.face(i).tag == BoundaryTag::dirichlet)
      sys.dirichlet_values[i] = face_mean(mesh, i, data.dirichlet);
    else
      sys.face_unknown[i] = ne++;
  }
  sys.has_multiplier = !step && !has_dirichlet(mesh);
  const Index multiplier = ne;
  if (sys.has_multiplier) {
    if (!data.mass) throw std::invalid_argument("stationary pure-Neumann problem needs a mass");
    ++ne;
  }

  sys.mm = Eigen::VectorXd::Zero(nc);
  sys.sm = Eigen::VectorXd::Zero(nc);
  sys.se = Eigen::VectorXd::Zero(ne);
  std::vector<Triplet> me, em, ee;

  auto scale_cell = [&](Index c) { return column_scale ? column_scale->cells[c] : 1.0; };
  auto scale_face = [&](Index f) { return column_scale ? column_scale->faces[f] : 1.0; };

  for (Index c = 0; c < nc; ++c) {
    const Cell& cell = mesh.cell(c);
    const Eigen::MatrixXd& L = forms[c];
    const Index k = cell.num_faces();
    // cell row
    sys.mm[c] += L(0, 0) * scale_cell(c);
    for (Index j = 0; j < k; ++j) {
      const Index fj = cell.faces[j];
      const double coef = L(0, 1 + j) * scale_face(fj);
      if (sys.face_unknown[fj] >= 0)
        me.emplace_back(c, sys.face_unknown[fj], coef);
      else
        sys.sm[c] -= coef * sys.dirichlet_values[fj];
    }
    // face rows
    for (Index i = 0; i < k; ++i) {
      const Index row = sys.face_unknown[cell.faces[i]];
      if (row < 0) continue;
      em.emplace_back(row, c, L(1 + i, 0) * scale_cell(c));
      for (Index j = 0; j < k; ++j) {
        const Index fj = cell.faces[j];
        const double coef = L(1 + i, 1 + j) * scale_face(fj);
        if (sys.face_unknown[fj] >= 0)
          ee.emplace_back(row, sys.face_unknown[fj], coef);
        else
          sys.se[row] -= coef * sys.dirichlet_values[fj];
      }
    }
    sys.sm[c] += data.source(cell.center) * cell.measure;
    if (step) {
      sys.mm[c] += cell.measure / step->dt;
      sys.sm[c] += cell.measure * step->previous[c] / step->dt;
    }
    if (sys.has_multiplier) {
      me.emplace_back(c, multiplier, cell.measure);
      em.emplace_back(multiplier, c, cell.measure);
    }
  }
  for (Index i = 0; i < nf; ++i)
    if (mesh.face(i).tag == BoundaryTag::neumann)
      sys.se[sys.face_unknown[i]] += mesh.face(i).measure * face_mean(mesh, i, data.neumann);
  if (sys.has_multiplier) sys.se[multiplier] = *data.mass;

  sys.me.resize(nc, ne);
  sys.em.resize(ne, nc);
  sys.ee.resize(ne, ne);
  sys.me.setFromTriplets(me.begin(), me.end());
  sys.em.setFromTriplets(em.begin(), em.end());
  sys.ee.setFromTriplets(ee.begin(), ee.end());
  if (sys.has_multiplier) {
    // keep an explicit structural zero so the diagonal is present
    sys.ee.coeffRef(multiplier, multiplier) += 0.0;
    sys.ee.makeCompressed();
  }
  return sys;
}

AssembledSystem assemble_hmm(const Mesh& mesh, const ProblemData& data, const SchemeConfig& config,
                             const std::optional<TimeStep>& step) {
  return assemble_from_forms(mesh, hmm_local_forms(mesh, data, config), data, step);
}

AssembledSystem assemble_expfit(const Mesh& mesh, const ProblemData& data, const SchemeConfig& config,
                                const std::optional<TimeStep>& step) {
  const DofVector inv_omega = omega_interpolate(mesh, data).map([](double w) { return 1.0 / w; });
  return assemble_from_forms(mesh, expfit_local_forms(mesh, data, config), data, step, &inv_omega);
}

AssembledSystem assemble_linear(const Mesh& mesh, const ProblemData& data, const SchemeConfig& config,
                                const std::optional<TimeStep>& step) {
  switch (config.scheme) {
    case SchemeKind::hmm: return assemble_hmm(mesh, data, config, step);
    case SchemeKind::expfit:
    case SchemeKind::expfit_harmonic: return assemble_expfit(mesh, data, config, step);
    case SchemeKind::nonlinear: break;
  }
  throw std::invalid_argument("assemble_linear: nonlinear scheme has no linear system");
}

double bilinear_form(const Mesh& mesh, const LocalForms& forms, const DofVector& u, const DofVector& v) {
  double sum = 0.0;
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    const Cell& cell = mesh.cell(c);
    const Index k = cell.num_faces();
    Eigen::VectorXd ul(k + 1), vl(k + 1);
    ul[0] = u.cells[c];
    vl[0] = v.cells[c];
    for (Index i = 0; i < k; ++i) {
      ul[1 + i] = u.faces[cell.faces[i]];
      vl[1 + i] = v.faces[cell.faces[i]];
    }
    sum += vl.dot(forms[c] * ul);
  }
  return sum;
}

}  // namespace hfv
