#ifndef HFV_FLUX_HPP
#define HFV_FLUX_HPP

#include "hfv/types.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hfv {

enum class FluxKind { centred, upwind, scharfetter_gummel };

FluxKind parse_flux_kind(const std::string& name);
std::string to_string(FluxKind kind);

/// Flux function A(s) of the two-point advective flux. All kinds satisfy
/// A(0) = 0 and A(−s) − A(s) = s.
template <typename Scalar>
Scalar flux_A(FluxKind kind, Scalar s) {
  using std::abs;
  using std::expm1;
  switch (kind) {
    case FluxKind::centred:
      return -s / Scalar(2);
    case FluxKind::upwind:
      return s < Scalar(0) ? -s : Scalar(0);
    case FluxKind::scharfetter_gummel:
      if (abs(s) < Scalar(1e-5)) {
        const Scalar s2 = s * s;
        return -s / Scalar(2) + s2 / Scalar(12) - s2 * s2 / Scalar(720) + s2 * s2 * s2 / Scalar(30240);
      }
      if (s > Scalar(700)) return Scalar(-1) + s * std::exp(-s);
      return s / expm1(s) - Scalar(1);
  }
  return Scalar(0);
}

/// Péclet weight μ_σ = min(1, smallest eigenvalue of Λ over the owner cells),
/// from the owner-cell tensors.
double peclet_weight(const Mat2& lambda_first, const Mat2* lambda_second);

/// |σ|(μ/d)[A(−(d/μ)V) u_K − A((d/μ)V) u_σ].
double advective_flux(double face_measure, double distance, double normal_velocity, double mu,
                      FluxKind kind, double u_cell, double u_face);

}  // namespace hfv

#endif
