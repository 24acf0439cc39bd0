#include "hfv/flux.hpp"

#include "hfv/discretization.hpp"

#include <stdexcept>

namespace hfv {

FluxKind parse_flux_kind(const std::string& name) {
  if (name == "centred" || name == "centered") return FluxKind::centred;
  if (name == "upwind") return FluxKind::upwind;
  if (name == "sg" || name == "scharfetter_gummel") return FluxKind::scharfetter_gummel;
  throw std::invalid_argument("unknown flux '" + name + "'");
}

std::string to_string(FluxKind kind) {
  switch (kind) {
    case FluxKind::centred: return "centred";
    case FluxKind::upwind: return "upwind";
    case FluxKind::scharfetter_gummel: return "sg";
  }
  return "?";
}

double peclet_weight(const Mat2& lambda_first, const Mat2* lambda_second) {
  double mu = std::min(1.0, min_eigenvalue(lambda_first));
  if (lambda_second) mu = std::min(mu, min_eigenvalue(*lambda_second));
  return mu;
}

double advective_flux(double face_measure, double distance, double normal_velocity, double mu,
                      FluxKind kind, double u_cell, double u_face) {
  const double s = distance / mu * normal_velocity;
  return face_measure * mu / distance * (flux_A(kind, -s) * u_cell - flux_A(kind, s) * u_face);
}

}  // namespace hfv
