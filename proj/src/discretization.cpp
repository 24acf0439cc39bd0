#include "hfv/discretization.hpp"

#include <cmath>

namespace hfv {

Eigen::VectorXd DofVector::stacked() const {
  Eigen::VectorXd x(cells.size() + faces.size());
  x << cells, faces;
  return x;
}

DofVector DofVector::unstack(const Mesh& mesh, const Eigen::Ref<const Eigen::VectorXd>& x) {
  return {x.head(mesh.num_cells()), x.segment(mesh.num_cells(), mesh.num_faces())};
}

DofVector operator+(const DofVector& a, const DofVector& b) { return {a.cells + b.cells, a.faces + b.faces}; }
DofVector operator-(const DofVector& a, const DofVector& b) { return {a.cells - b.cells, a.faces - b.faces}; }
DofVector operator*(const DofVector& a, const DofVector& b) {
  return {a.cells.cwiseProduct(b.cells), a.faces.cwiseProduct(b.faces)};
}
DofVector operator*(double s, const DofVector& a) { return {s * a.cells, s * a.faces}; }

LocalDofs restrict_to_cell(const Mesh& mesh, Index cell, const DofVector& v) {
  const Cell& c = mesh.cell(cell);
  LocalDofs local;
  local.cell = v.cells[cell];
  local.faces.resize(c.num_faces());
  for (Index i = 0; i < c.num_faces(); ++i) local.faces[i] = v.faces[c.faces[i]];
  return local;
}

DofVector interpolate(const Mesh& mesh, const ScalarField& f) {
  DofVector v = DofVector::zero(mesh);
  for (Index c = 0; c < mesh.num_cells(); ++c) v.cells[c] = f(mesh.cell(c).center);
  for (Index i = 0; i < mesh.num_faces(); ++i) v.faces[i] = f(mesh.face(i).barycenter);
  return v;
}

DiffusionTensor DiffusionTensor::constant(const Mat2& value) {
  Eigen::SelfAdjointEigenSolver<Mat2> es(value);
  return {[value](const Vec2&) { return value; }, es.eigenvalues()[0], es.eigenvalues()[1]};
}

double min_eigenvalue(const Mat2& m) {
  const double mean = 0.5 * (m(0, 0) + m(1, 1));
  const double diff = 0.5 * (m(0, 0) - m(1, 1));
  const double off = 0.5 * (m(0, 1) + m(1, 0));
  return mean - std::hypot(diff, off);
}

Eigen::MatrixXd gradient_map(const Mesh& mesh, Index cell, double eta) {
  const Cell& c = mesh.cell(cell);
  const Index k = c.num_faces();
  // G δ = −(1/|K|) Σ |σ| n_σ δ_σ
  Eigen::MatrixXd G(2, k);
  for (Index i = 0; i < k; ++i) G.col(i) = -mesh.face(c.faces[i]).measure / c.measure * c.normals[i];

  Eigen::MatrixXd N(2 * k, k);
  for (Index i = 0; i < k; ++i) {
    const Vec2 offset = mesh.face(c.faces[i]).barycenter - c.center;
    // residual of the affine reconstruction at x̄_σ, as a row acting on δ
    Eigen::RowVectorXd r = -offset.transpose() * G;
    r[i] -= 1.0;
    N.middleRows(2 * i, 2) = G + (eta / c.distances[i]) * c.normals[i] * r;
  }
  return N;
}

std::vector<Vec2> local_gradient(const Mesh& mesh, Index cell, const LocalDofs& v, double eta) {
  const Eigen::VectorXd g = gradient_map(mesh, cell, eta) * v.delta();
  std::vector<Vec2> out(static_cast<std::size_t>(g.size() / 2));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = g.segment<2>(2 * static_cast<Index>(i));
  return out;
}

LocalOperator local_diffusion_matrix(const Mesh& mesh, Index cell, std::span<const Mat2> pyramid_tensors,
                                     double eta) {
  const Index k = mesh.cell(cell).num_faces();
  if (static_cast<Index>(pyramid_tensors.size()) != k)
    throw std::invalid_argument("one tensor per pyramid expected");
  LocalOperator op;
  op.N = gradient_map(mesh, cell, eta);
  Eigen::MatrixXd WN(2 * k, k);
  for (Index i = 0; i < k; ++i)
    WN.middleRows(2 * i, 2) = mesh.pyramid_measure(cell, i) * pyramid_tensors[i] * op.N.middleRows(2 * i, 2);
  op.A = op.N.transpose() * WN;
  op.A = 0.5 * (op.A + op.A.transpose()).eval();
  op.B = op.A.cwiseAbs().rowwise().sum();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.A, Eigen::EigenvaluesOnly);
  if (!(es.eigenvalues()[0] > 1e-12 * es.eigenvalues()[k - 1]))
    throw MeshError("cell " + std::to_string(cell) + ": local diffusion matrix is numerically singular");
  return op;
}

LocalOperator local_diffusion_matrix(const Mesh& mesh, Index cell, const DiffusionTensor& lambda,
                                     double eta) {
  const Index k = mesh.cell(cell).num_faces();
  std::vector<Mat2> tensors(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) tensors[i] = lambda(mesh.pyramid_barycenter(cell, i));
  return local_diffusion_matrix(mesh, cell, tensors, eta);
}

std::vector<LocalOperator> local_diffusion_matrices(const Mesh& mesh, const DiffusionTensor& lambda,
                                                    double eta) {
  std::vector<LocalOperator> ops;
  ops.reserve(static_cast<std::size_t>(mesh.num_cells()));
  for (Index c = 0; c < mesh.num_cells(); ++c) ops.push_back(local_diffusion_matrix(mesh, c, lambda, eta));
  return ops;
}

Eigen::VectorXd diffusive_fluxes(const LocalOperator& op, const LocalDofs& u) { return op.A * u.delta(); }

double seminorm_h1(const Mesh& mesh, const DofVector& v) {
  double sum = 0.0;
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    const Cell& cell = mesh.cell(c);
    for (Index i = 0; i < cell.num_faces(); ++i) {
      const double jump = v.cells[c] - v.faces[cell.faces[i]];
      sum += mesh.face(cell.faces[i]).measure / cell.distances[i] * jump * jump;
    }
  }
  return std::sqrt(sum);
}

CellNorms norms(const Mesh& mesh, const Eigen::VectorXd& cell_values) {
  CellNorms n;
  double l2 = 0.0;
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    const double m = mesh.cell(c).measure, v = cell_values[c];
    n.l1 += m * std::abs(v);
    l2 += m * v * v;
    n.mass += m * v;
  }
  n.l2 = std::sqrt(l2);
  return n;
}

double cell_average(const Mesh& mesh, Index cell, const ScalarField& f, int refinement) {
  const Cell& c = mesh.cell(cell);
  double integral = 0.0;
  const double inv = 1.0 / refinement;
  for (Index i = 0; i < c.num_faces(); ++i) {
    const Face& face = mesh.face(c.faces[i]);
    const Vec2& p0 = c.center;
    const Vec2 e1 = mesh.vertex(face.vertices[0]) - p0;
    const Vec2 e2 = mesh.vertex(face.vertices[1]) - p0;
    const double sub_area = mesh.pyramid_measure(cell, i) * inv * inv;
    // Barycentric sub-triangles: upward (a,b) and downward ones.
    for (int a = 0; a < refinement; ++a) {
      for (int b = 0; a + b < refinement; ++b) {
        integral += sub_area * f(p0 + ((a + 1.0 / 3.0) * e1 + (b + 1.0 / 3.0) * e2) * inv);
        if (a + b + 1 < refinement)
          integral += sub_area * f(p0 + ((a + 2.0 / 3.0) * e1 + (b + 2.0 / 3.0) * e2) * inv);
      }
    }
  }
  return integral / c.measure;
}

double face_mean(const Mesh& mesh, Index face, const ScalarField& f) {
  const Face& s = mesh.face(face);
  const Vec2 half = 0.5 * (mesh.vertex(s.vertices[1]) - mesh.vertex(s.vertices[0]));
  const double g = 1.0 / std::sqrt(3.0);
  return 0.5 * (f(s.barycenter - g * half) + f(s.barycenter + g * half));
}

}  // namespace hfv
