#ifndef HFV_RECONSTRUCTION_HPP
#define HFV_RECONSTRUCTION_HPP

#include "hfv/types.hpp"

#include <cmath>
#include <string>

namespace hfv {

/// Two-point mean m(x, y) used to weight nonlinear fluxes.
enum class MeanKind { arithmetic, max, sqrt_mean, log_mean };
/// Aggregation of the |E_K| two-point means.
enum class AggregateKind { mean, max };

MeanKind parse_mean_kind(const std::string& name);
AggregateKind parse_aggregate_kind(const std::string& name);
std::string to_string(MeanKind kind);
std::string to_string(AggregateKind kind);

/// m(x, y) together with ∂m/∂x and ∂m/∂y.
template <typename Scalar>
struct MeanValue {
  Scalar value, dx, dy;
};

template <typename Scalar>
MeanValue<Scalar> two_point_mean(MeanKind kind, Scalar x, Scalar y) {
  using std::log;
  using std::sqrt;
  switch (kind) {
    case MeanKind::arithmetic:
      return {(x + y) / Scalar(2), Scalar(0.5), Scalar(0.5)};
    case MeanKind::max:
      return x >= y ? MeanValue<Scalar>{x, Scalar(1), Scalar(0)} : MeanValue<Scalar>{y, Scalar(0), Scalar(1)};
    case MeanKind::sqrt_mean: {
      const Scalar s = (sqrt(x) + sqrt(y)) / Scalar(2);
      return {s * s, s / (Scalar(2) * sqrt(x)), s / (Scalar(2) * sqrt(y))};
    }
    case MeanKind::log_mean: {
      using std::abs;
      const Scalar sum = x + y, diff = y - x;
      if (abs(diff) < Scalar(1e-4) * sum) {
        // (x+y)/2 − (y−x)²/(6(x+y)) + O(|y−x|⁴)
        const Scalar q = diff / sum;
        return {sum / Scalar(2) - diff * q / Scalar(6), Scalar(0.5) + q / Scalar(3) + q * q / Scalar(6),
                Scalar(0.5) - q / Scalar(3) + q * q / Scalar(6)};
      }
      const Scalar dl = log(y) - log(x);
      const Scalar L = diff / dl;
      return {L, (L / x - Scalar(1)) / dl, (Scalar(1) - L / y) / dl};
    }
  }
  return {Scalar(0), Scalar(0), Scalar(0)};
}

/// r_K and its gradient with respect to (u_K, u_σ...).
struct Reconstruction {
  double value = 0.0;
  double d_cell = 0.0;
  Eigen::VectorXd d_faces;
};

Reconstruction reconstruct(MeanKind mean, AggregateKind aggregate, double u_cell,
                           const Eigen::Ref<const Eigen::VectorXd>& u_faces);

inline double reconstruction_rK(double u_cell, const Eigen::Ref<const Eigen::VectorXd>& u_faces,
                                MeanKind mean = MeanKind::arithmetic,
                                AggregateKind aggregate = AggregateKind::mean) {
  return reconstruct(mean, aggregate, u_cell, u_faces).value;
}

}  // namespace hfv

#endif
