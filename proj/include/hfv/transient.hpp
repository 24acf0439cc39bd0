#ifndef HFV_TRANSIENT_HPP
#define HFV_TRANSIENT_HPP

#include "hfv/experiments.hpp"
#include "hfv/solver.hpp"

#include <functional>

namespace hfv {

struct TransientOptions {
  /// Exact steady state for dist_L1_exact (NaN column when empty).
  ScalarField exact_steady;
  /// Cell averages of u^in use this per-pyramid subdivision.
  int initial_refinement = 4;
  /// Called after every accepted step with the current state.
  std::function<void(const TimeSeriesRecord&, const DofVector&)> observer;
};

struct TransientResult {
  std::vector<TimeSeriesRecord> records;
  DofVector initial;
  DofVector final_state;
  DofVector steady_state;
  std::vector<NewtonReport> newton;  ///< one per accepted step (nonlinear only)
  int halvings = 0;
};

/// Initial cell values (1/|K|)∫_K u^in; faces take the mean of their owners.
DofVector discretize_initial(const Mesh& mesh, const ScalarField& initial, int refinement);

/// Discrete steady state associated with the run (same mass for pure
/// Neumann problems).
DofVector discrete_steady_state(const Mesh& mesh, const ProblemData& data, const SchemeConfig& config,
                                const DofVector& initial);

/// Backward Euler on [0, T_f]. Linear schemes factorize once; the nonlinear
/// scheme runs Newton per step with halving on failure and
/// δt ← min(Δt, 2δt) after success.
TransientResult transient_drive(const Mesh& mesh, const ProblemData& data, const SchemeConfig& config,
                                const TransientOptions& options = {});

}  // namespace hfv

#endif
