#ifndef HFV_SCHEMES_HPP
#define HFV_SCHEMES_HPP

#include "hfv/discretization.hpp"
#include "hfv/flux.hpp"
#include "hfv/reconstruction.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hfv {

/// Coefficients and data of −div(Λ(∇u + u∇φ)) = f with mixed boundary data.
struct ProblemData {
  DiffusionTensor diffusion = DiffusionTensor::diagonal(1.0, 1.0);
  ScalarField potential = [](const Vec2&) { return 0.0; };
  /// ∇φ in closed form; central differences of φ when empty.
  VectorField potential_gradient;
  ScalarField source = [](const Vec2&) { return 0.0; };
  ScalarField dirichlet = [](const Vec2&) { return 0.0; };
  ScalarField neumann = [](const Vec2&) { return 0.0; };
  ScalarField initial = [](const Vec2&) { return 0.0; };
  /// Prescribed mass for stationary pure-Neumann problems.
  std::optional<double> mass;
  /// Marks f ≡ 0 and g^N ≡ 0, and g^D = ρ^D e^{−φ} when Dirichlet faces exist.
  bool thermal = false;

  /// V^φ = −Λ∇φ at x; `h` is the local length used for differencing.
  Vec2 advection(const Vec2& x, double h) const;
};

enum class SchemeKind { hmm, expfit, expfit_harmonic, nonlinear };

SchemeKind parse_scheme_kind(const std::string& name);
std::string to_string(SchemeKind kind);

struct NewtonOptions {
  double epsilon = 1e-11;   ///< floor of the initial guess
  double tolerance = 1e-11; ///< relative residual
  int max_iterations = 50;
  int max_backtracks = 30;
  /// Used instead of the relative test when the first residual is below it.
  double absolute_floor = 1e-14;
};

struct SchemeConfig {
  SchemeKind scheme = SchemeKind::hmm;
  FluxKind flux = FluxKind::scharfetter_gummel;
  double eta = 1.5;
  double dt = 0.1;
  double final_time = 1.0;
  MeanKind mean = MeanKind::arithmetic;
  AggregateKind aggregate = AggregateKind::mean;
  NewtonOptions newton;
};

/// Block system [M_MM M_ME; M_EM M_EE][U_M; U_E] = [S_M; S_E]. U_E holds the
/// non-Dirichlet faces followed by the optional Lagrange multiplier.
struct AssembledSystem {
  Eigen::VectorXd mm;  ///< diagonal of M_MM
  SparseMatrix me, em, ee;
  Eigen::VectorXd sm, se;
  /// face -> position in U_E, or -1 for an eliminated Dirichlet face
  std::vector<Index> face_unknown;
  /// face values, meaningful on Dirichlet faces
  Eigen::VectorXd dirichlet_values;
  bool has_multiplier = false;

  Index num_cells() const { return mm.size(); }
  Index num_skeleton() const { return se.size(); }
};

/// Backward Euler step data: previous cell values and time step.
struct TimeStep {
  Eigen::VectorXd previous;
  double dt = 0.0;
};

// ---------------------------------------------------------------------------
// Linear schemes.

/// Local matrix L_K of the bilinear form, a_K(u, v) = v_loc^T L_K u_loc with
/// local ordering (K, σ_1, …, σ_k).
using LocalForms = std::vector<Eigen::MatrixXd>;

/// Diffusive plus advective HMM forms.
LocalForms hmm_local_forms(const Mesh& mesh, const ProblemData& data, const SchemeConfig& config);
/// Forms of a^ω in the Slotboom variable ρ.
LocalForms expfit_local_forms(const Mesh& mesh, const ProblemData& data, const SchemeConfig& config);

/// ω_D = interpolate(e^{−φ}).
DofVector omega_interpolate(const Mesh& mesh, const ProblemData& data);

enum class OmegaAverage { standard, harmonic };

/// (ωΛ)_{K,σ} on pyramid `local` of `cell`.
Mat2 omega_average(const Mesh& mesh, Index cell, Index local, const ProblemData& data, OmegaAverage mode);

/// Normal advection V_{K,σ} = (1/|σ|)∫_σ V^φ·n_{K,σ}, 2-point Gauss.
double face_normal_velocity(const Mesh& mesh, Index cell, Index local, const ProblemData& data);

AssembledSystem assemble_hmm(const Mesh& mesh, const ProblemData& data, const SchemeConfig& config,
                             const std::optional<TimeStep>& step = std::nullopt);
/// Exponential fitting in the unknown u = ω_D ρ_D.
AssembledSystem assemble_expfit(const Mesh& mesh, const ProblemData& data, const SchemeConfig& config,
                                const std::optional<TimeStep>& step = std::nullopt);
/// Dispatch on config.scheme (linear kinds only).
AssembledSystem assemble_linear(const Mesh& mesh, const ProblemData& data, const SchemeConfig& config,
                                const std::optional<TimeStep>& step = std::nullopt);

/// Generic assembly from local forms. `column_scale` multiplies each column
/// (variable change ρ = u / ω is column_scale = 1/ω).
AssembledSystem assemble_from_forms(const Mesh& mesh, const LocalForms& forms, const ProblemData& data,
                                    const std::optional<TimeStep>& step,
                                    const DofVector* column_scale = nullptr);

/// Evaluates Σ_K v_K^T L_K u_K.
double bilinear_form(const Mesh& mesh, const LocalForms& forms, const DofVector& u, const DofVector& v);

/// Does the mesh carry a Dirichlet face?
bool has_dirichlet(const Mesh& mesh);

}  // namespace hfv

#endif
