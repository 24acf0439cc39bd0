#ifndef HFV_SOLVER_HPP
#define HFV_SOLVER_HPP

#include "hfv/nonlinear.hpp"
#include "hfv/schemes.hpp"

#include <Eigen/SparseLU>

#include <functional>
#include <memory>

namespace hfv {

/// Face system left after eliminating the diagonal cell block.
struct CondensedSystem {
  SparseMatrix schur;          ///< M_EE − M_EM M_MM⁻¹ M_ME
  Eigen::VectorXd rhs;         ///< S_E − M_EM M_MM⁻¹ S_M
  Eigen::VectorXd inv_mm;      ///< M_MM⁻¹
  SparseMatrix me, em;

  /// Condensed right-hand side for other block right-hand sides.
  Eigen::VectorXd condensed_rhs(const Eigen::VectorXd& sm, const Eigen::VectorXd& se) const;
  /// U_M = M_MM⁻¹(S_M − M_ME U_E).
  Eigen::VectorXd recover(const Eigen::VectorXd& sm, const Eigen::VectorXd& skeleton) const;
};

CondensedSystem condense(const AssembledSystem& system);

/// Sparse LU (COLAMD ordering). The symbolic analysis is reused while the
/// sparsity pattern is unchanged.
class SparseLu {
 public:
  void compute(const SparseMatrix& matrix);
  /// Solves and checks ‖Ax − b‖∞ ≤ tolerance·‖b‖∞, refining once if needed.
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs, double tolerance = 1e-11) const;

 private:
  SparseMatrix matrix_;
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu_;
  bool analyzed_ = false;
};

Eigen::VectorXd sparse_solve(const SparseMatrix& matrix, const Eigen::VectorXd& rhs, double tolerance = 1e-11);

/// Solution of an assembled block system, with faces expanded to the full
/// face set (Dirichlet values reinserted).
struct BlockSolution {
  DofVector u;
  double multiplier = 0.0;
};

BlockSolution solve_block_system(const AssembledSystem& system);
/// Face vector U_E → DofVector.
BlockSolution expand(const AssembledSystem& system, const Eigen::VectorXd& cells,
                     const Eigen::VectorXd& skeleton);

/// Factorized backward-Euler operator for a linear scheme at fixed δt.
class LinearStepper {
 public:
  LinearStepper(const Mesh& mesh, const ProblemData& data, const SchemeConfig& config, double dt);
  DofVector step(const Eigen::VectorXd& previous_cells) const;
  double dt() const { return dt_; }

 private:
  const Mesh& mesh_;
  double dt_;
  AssembledSystem base_;  // assembled with zero previous state
  CondensedSystem condensed_;
  SparseLu lu_;
};

/// Stationary discrete solution of any scheme. For pure Neumann data
/// `data.mass` must be set.
DofVector solve_stationary(const Mesh& mesh, const ProblemData& data, const SchemeConfig& config);

// ---------------------------------------------------------------------------
// Newton.

struct NewtonReport {
  bool converged = false;
  int iterations = 0;            ///< linear solves performed
  double initial_residual = 0.0; ///< ‖G(u⁰)‖∞
  double residual = 0.0;         ///< final ‖G‖∞ relative to ‖G(u⁰)‖∞
  std::vector<double> history;   ///< ‖G‖∞ after each iterate, starting with u⁰
  int backtracks = 0;
  double dt = 0.0;               ///< sub-step used (time-dependent runs)
  int halvings = 0;
};

using ResidualFunction = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
/// Returns δ with J(x) δ = −G.
using NewtonStepFunction = std::function<Eigen::VectorXd(const Eigen::VectorXd& x, const Eigen::VectorXd& G)>;

/// Newton iteration on x (updated in place). The first `positive_count`
/// entries are kept strictly positive by halving the update.
NewtonReport newton_solve(const ResidualFunction& residual, const NewtonStepFunction& step,
                          Eigen::VectorXd& x, const NewtonOptions& options, Index positive_count);

/// Newton for the nonlinear scheme, with Jacobians condensed and factorized
/// by a reused SparseLu.
NewtonReport newton_solve(const NonlinearScheme& scheme, const NonlinearMode& mode, Eigen::VectorXd& x,
                          const NewtonOptions& options, SparseLu* lu = nullptr);

}  // namespace hfv

#endif
