#ifndef HFV_DISCRETIZATION_HPP
#define HFV_DISCRETIZATION_HPP

#include "hfv/mesh.hpp"

#include <span>
#include <vector>

namespace hfv {

/// Hybrid unknowns: one value per cell and one per face.
struct DofVector {
  Eigen::VectorXd cells;
  Eigen::VectorXd faces;

  DofVector() = default;
  DofVector(Eigen::VectorXd c, Eigen::VectorXd f) : cells(std::move(c)), faces(std::move(f)) {}

  static DofVector zero(const Mesh& mesh) { return constant(mesh, 0.0); }
  static DofVector constant(const Mesh& mesh, double c) {
    return {Eigen::VectorXd::Constant(mesh.num_cells(), c),
            Eigen::VectorXd::Constant(mesh.num_faces(), c)};
  }

  /// Stacked [cells; faces].
  Eigen::VectorXd stacked() const;
  static DofVector unstack(const Mesh& mesh, const Eigen::Ref<const Eigen::VectorXd>& x);

  /// Applies `f` entrywise.
  template <typename F>
  DofVector map(F&& f) const {
    return {cells.unaryExpr(f), faces.unaryExpr(f)};
  }
  double min() const { return std::min(cells.minCoeff(), faces.minCoeff()); }
};

DofVector operator+(const DofVector& a, const DofVector& b);
DofVector operator-(const DofVector& a, const DofVector& b);
/// Entrywise product.
DofVector operator*(const DofVector& a, const DofVector& b);
DofVector operator*(double s, const DofVector& a);

/// Values attached to one cell: v_K and v_σ in the cell's face order.
struct LocalDofs {
  double cell = 0.0;
  Eigen::VectorXd faces;

  /// δ_K v = (v_K − v_σ)_σ.
  Eigen::VectorXd delta() const { return Eigen::VectorXd::Constant(faces.size(), cell) - faces; }
};

LocalDofs restrict_to_cell(const Mesh& mesh, Index cell, const DofVector& v);

/// Point-value interpolate: v_K = f(x_K), v_σ = f(x̄_σ).
DofVector interpolate(const Mesh& mesh, const ScalarField& f);

/// Symmetric, uniformly elliptic tensor field with spectral bounds.
struct DiffusionTensor {
  TensorField eval;
  double lambda_min = 1.0;
  double lambda_max = 1.0;

  Mat2 operator()(const Vec2& x) const { return eval(x); }
  static DiffusionTensor constant(const Mat2& value);
  static DiffusionTensor diagonal(double xx, double yy) {
    return constant((Mat2() << xx, 0.0, 0.0, yy).finished());
  }
};

/// Smallest eigenvalue of a symmetric 2×2 matrix.
double min_eigenvalue(const Mat2& m);

/// Per-cell operator on δ_K v.
struct LocalOperator {
  Eigen::MatrixXd A;  ///< symmetric positive definite, |E_K|×|E_K|
  Eigen::VectorXd B;  ///< diagonal of B_K: row sums of |A|
  Eigen::MatrixXd N;  ///< stacked pyramid gradients, 2|E_K|×|E_K|
};

/// Matrix sending δ_K v to the stacked ∇_{K,σ} v = G_K v + S_{K,σ} v.
Eigen::MatrixXd gradient_map(const Mesh& mesh, Index cell, double eta);

/// ∇_{K,σ} v for every pyramid of the cell.
std::vector<Vec2> local_gradient(const Mesh& mesh, Index cell, const LocalDofs& v, double eta);

/// A_K = N^T W N with W = blockdiag(|P_{K,σ}| Λ_σ). One tensor per local face.
LocalOperator local_diffusion_matrix(const Mesh& mesh, Index cell, std::span<const Mat2> pyramid_tensors,
                                     double eta);
/// Λ_{K,σ} taken at the pyramid barycenters.
LocalOperator local_diffusion_matrix(const Mesh& mesh, Index cell, const DiffusionTensor& lambda,
                                     double eta);

std::vector<LocalOperator> local_diffusion_matrices(const Mesh& mesh, const DiffusionTensor& lambda,
                                                    double eta);

/// F_{K,σ} = Σ_σ' A^{σσ'}(u_K − u_σ').
Eigen::VectorXd diffusive_fluxes(const LocalOperator& op, const LocalDofs& u);

/// |v|_{1,D}.
double seminorm_h1(const Mesh& mesh, const DofVector& v);

struct CellNorms {
  double l1 = 0.0;
  double l2 = 0.0;
  double mass = 0.0;
};

CellNorms norms(const Mesh& mesh, const Eigen::VectorXd& cell_values);
inline CellNorms norms(const Mesh& mesh, const DofVector& v) { return norms(mesh, v.cells); }

/// Average of f over a cell: each pyramid is split into `refinement`² similar
/// triangles and sampled at their centroids.
double cell_average(const Mesh& mesh, Index cell, const ScalarField& f, int refinement = 4);

/// 2-point Gauss mean of f over a face.
double face_mean(const Mesh& mesh, Index face, const ScalarField& f);

}  // namespace hfv

#endif
