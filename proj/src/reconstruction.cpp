#include "hfv/reconstruction.hpp"

#include <stdexcept>

namespace hfv {

MeanKind parse_mean_kind(const std::string& name) {
  if (name == "arithmetic") return MeanKind::arithmetic;
  if (name == "max") return MeanKind::max;
  if (name == "sqrt-mean" || name == "sqrt_mean") return MeanKind::sqrt_mean;
  if (name == "log-mean" || name == "log_mean") return MeanKind::log_mean;
  throw std::invalid_argument("unknown mean '" + name + "'");
}

AggregateKind parse_aggregate_kind(const std::string& name) {
  if (name == "mean") return AggregateKind::mean;
  if (name == "max") return AggregateKind::max;
  throw std::invalid_argument("unknown aggregate '" + name + "'");
}

std::string to_string(MeanKind kind) {
  switch (kind) {
    case MeanKind::arithmetic: return "arithmetic";
    case MeanKind::max: return "max";
    case MeanKind::sqrt_mean: return "sqrt-mean";
    case MeanKind::log_mean: return "log-mean";
  }
  return "?";
}

std::string to_string(AggregateKind kind) { return kind == AggregateKind::mean ? "mean" : "max"; }

Reconstruction reconstruct(MeanKind mean, AggregateKind aggregate, double u_cell,
                           const Eigen::Ref<const Eigen::VectorXd>& u_faces) {
  const Index k = u_faces.size();
  if (!(u_cell > 0.0) || (k > 0 && !(u_faces.minCoeff() > 0.0)))
    throw DomainError("reconstruction needs strictly positive values");
  Reconstruction r;
  r.d_faces = Eigen::VectorXd::Zero(k);
  if (aggregate == AggregateKind::mean) {
    for (Index i = 0; i < k; ++i) {
      const auto m = two_point_mean(mean, u_cell, u_faces[i]);
      r.value += m.value;
      r.d_cell += m.dx;
      r.d_faces[i] = m.dy / double(k);
    }
    r.value /= double(k);
    r.d_cell /= double(k);
  } else {
    Index best = 0;
    auto top = two_point_mean(mean, u_cell, u_faces[0]);
    for (Index i = 1; i < k; ++i) {
      const auto m = two_point_mean(mean, u_cell, u_faces[i]);
      if (m.value > top.value) {
        top = m;
        best = i;
      }
    }
    r.value = top.value;
    r.d_cell = top.dx;
    r.d_faces[best] = top.dy;
  }
  return r;
}

}  // namespace hfv
