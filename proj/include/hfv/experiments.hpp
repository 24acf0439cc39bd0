#ifndef HFV_EXPERIMENTS_HPP
#define HFV_EXPERIMENTS_HPP

#include "hfv/nonlinear.hpp"
#include "hfv/schemes.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hfv {

/// A problem with its boundary partition and known solutions.
struct TestCase {
  std::string name;
  ProblemData data;
  std::vector<BoundaryPredicate> dirichlet;
  std::function<double(double, const Vec2&)> exact_transient;
  ScalarField exact_steady;
  std::map<std::string, double> constants;
  /// Refinement of the per-pyramid subdivision used for cell averages of u^in.
  int initial_refinement = 4;
};

/// Pure Neumann relaxation towards a thermal equilibrium, φ = −x.
TestCase case_longtime();
/// Sharp initial datum on a confining potential, pure Neumann.
TestCase case_positivity();
/// Smooth solution with boundary layers, all-Dirichlet, φ = −(2x+3y).
TestCase case_accuracy1();
/// Advection-dominated layer at x = 0, Dirichlet left/right, Neumann top/bottom.
TestCase case_accuracy2();
/// Nonlinear mixed-boundary variant of case_longtime: Dirichlet on {x=0, x=1}
/// with g^D = ρ^D e^{−φ}.
TestCase case_longtime_mixed(double rho_dirichlet);

/// Adds c to the Dirichlet data and the steady solution. Only consistent when
/// div(Λ∇φ) = 0 and there is no Neumann boundary (case_accuracy1).
TestCase shift_solution(const TestCase& tc, double c);

TestCase test_case_by_name(const std::string& name);

/// Φ₁(s) = s log s − s + 1, with Φ₁(0) = 1.
double phi1(double s);

struct EntropyDissipation {
  double entropy = 0.0;
  double dissipation = 0.0;
};

/// Precomputed operators needed for E and D of one scheme.
class EntropyEvaluator {
 public:
  EntropyEvaluator(const Mesh& mesh, const ProblemData& data, const SchemeConfig& config);
  EntropyDissipation operator()(const DofVector& u, const DofVector& steady) const;

 private:
  const Mesh& mesh_;
  SchemeConfig config_;
  LocalForms forms_;
  DofVector omega_;
  std::vector<LocalOperator> ops_;
};

EntropyDissipation entropy_dissipation(const Mesh& mesh, const ProblemData& data, const SchemeConfig& config,
                                       const DofVector& u, const DofVector& steady);

struct TimeSeriesRecord {
  int step = 0;
  double time = 0.0;
  double entropy = 0.0;
  double dissipation = 0.0;
  double dist_l1_exact = 0.0;
  double dist_l1_discrete = 0.0;
  double dist_l2 = 0.0;
  double min_cell = 0.0;
  double min_face = 0.0;
  long negatives_count = 0;
  long solves_cumulative = 0;
};

struct DecayFit {
  double rate = 0.0;       ///< ν, with dist ≈ C e^{−νt}
  double plateau = 0.0;    ///< median after the knee (0 if no knee)
  bool saturated = false;  ///< a knee was found
  std::size_t knee = 0;    ///< first index after the pre-saturation window
};

enum class DistanceKind { l1_exact, l1_discrete, l2 };

/// Least-squares decay rate of a distance series.
DecayFit decay_rate(const std::vector<double>& times, const std::vector<double>& distances);
DecayFit decay_rate(const std::vector<TimeSeriesRecord>& records, DistanceKind kind);

struct ConvergenceRow {
  double h = 0.0;
  double l2_error = 0.0;
  double h1_error = 0.0;
  double l2_order = 0.0;  ///< NaN on the first row
  double h1_order = 0.0;
};

/// orderᵢ = log(eᵢ₋₁/eᵢ)/log(hᵢ₋₁/hᵢ); NaN where a row has zero error.
std::vector<double> eoc(const std::vector<double>& h, const std::vector<double>& errors);
void fill_orders(std::vector<ConvergenceRow>& rows);

/// Relative errors ‖u_M − Π_M u‖/‖Π_M u‖ and |u_D − Π_D u|_{1,D}/|Π_D u|_{1,D}.
ConvergenceRow discretization_errors(const Mesh& mesh, const DofVector& u, const ScalarField& exact);

struct PositivityReport {
  double min_cells = 0.0;
  double min_faces = 0.0;
  long negatives_count = 0;
  long cost = 0;
};

/// Minima and negative counts over steps n ≥ 1.
PositivityReport positivity_report(const std::vector<TimeSeriesRecord>& records);

}  // namespace hfv

#endif
