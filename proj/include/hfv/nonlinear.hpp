#ifndef HFV_NONLINEAR_HPP
#define HFV_NONLINEAR_HPP

#include "hfv/schemes.hpp"

namespace hfv {

/// Time discretization and constraint selected for a residual evaluation.
/// Transient when `step` is set; a Lagrange multiplier enforcing
/// Σ|K| u_K = mass is appended when `mass` is set.
struct NonlinearMode {
  std::optional<TimeStep> step;
  std::optional<double> mass;
};

/// Positivity-preserving scheme with fluxes
/// F_{K,σ} = r_K Σ_σ' A^{σσ'}(log u_K + φ(x_K) − log u_σ' − φ(x̄_σ')).
/// Unknown vectors are stacked [cells; faces; multiplier?].
class NonlinearScheme {
 public:
  NonlinearScheme(const Mesh& mesh, const ProblemData& data, const SchemeConfig& config);

  const Mesh& mesh() const { return mesh_; }
  const std::vector<LocalOperator>& operators() const { return ops_; }
  const SchemeConfig& config() const { return config_; }
  Index size(const NonlinearMode& mode) const {
    return mesh_.num_cells() + mesh_.num_faces() + (mode.mass ? 1 : 0);
  }

  /// G(u); throws DomainError for nonpositive unknowns.
  Eigen::VectorXd residual(const Eigen::VectorXd& x, const NonlinearMode& mode) const;
  /// ∂G/∂u as blocks, with right-hand side −G(u).
  AssembledSystem jacobian(const Eigen::VectorXd& x, const NonlinearMode& mode) const;
  /// Same Jacobian as one sparse matrix in the stacked ordering.
  SparseMatrix jacobian_matrix(const Eigen::VectorXd& x, const NonlinearMode& mode) const;

  /// Fluxes F_{K,σ} of one cell.
  Eigen::VectorXd cell_fluxes(Index cell, const DofVector& u) const;
  /// r_K(u).
  double reconstruction(Index cell, const DofVector& u) const;

  /// φ at cell centers and face barycenters.
  const DofVector& potential() const { return phi_; }

 private:
  struct LocalJacobian {
    Eigen::VectorXd flux;  ///< F_σ
    Eigen::MatrixXd d;     ///< ∂F_σ/∂(u_K, u_σ')
  };
  LocalJacobian local(Index cell, const Eigen::VectorXd& x, bool derivatives) const;
  LocalJacobian local(Index cell, double u_cell, const Eigen::VectorXd& u_faces, bool derivatives) const;

  const Mesh& mesh_;
  SchemeConfig config_;
  std::vector<LocalOperator> ops_;
  DofVector phi_;
  Eigen::VectorXd source_;            ///< ∫_K f
  Eigen::VectorXd neumann_integral_;  ///< ∫_σ g^N
  Eigen::VectorXd dirichlet_mean_;    ///< (1/|σ|)∫_σ g^D
};

}  // namespace hfv

#endif
