#include "hfv/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hfv {

double phi1(double s) {
  if (s < 0.0) throw DomainError("Φ₁ needs a nonnegative argument");
  if (s == 0.0) return 1.0;
  return s * std::log(s) - s + 1.0;
}

EntropyEvaluator::EntropyEvaluator(const Mesh& mesh, const ProblemData& data, const SchemeConfig& config)
    : mesh_(mesh), config_(config) {
  switch (config.scheme) {
    case SchemeKind::hmm: forms_ = hmm_local_forms(mesh, data, config); break;
    case SchemeKind::expfit:
    case SchemeKind::expfit_harmonic:
      forms_ = expfit_local_forms(mesh, data, config);
      omega_ = omega_interpolate(mesh, data);
      break;
    case SchemeKind::nonlinear: ops_ = local_diffusion_matrices(mesh, data.diffusion, config.eta); break;
  }
}

EntropyDissipation EntropyEvaluator::operator()(const DofVector& u, const DofVector& steady) const {
  EntropyDissipation out;
  switch (config_.scheme) {
    case SchemeKind::hmm: {
      const DofVector e = u - steady;
      out.entropy = 0.5 * std::pow(norms(mesh_, e).l2, 2);
      out.dissipation = bilinear_form(mesh_, forms_, e, e);
      break;
    }
    case SchemeKind::expfit:
    case SchemeKind::expfit_harmonic: {
      const DofVector inv = omega_.map([](double w) { return 1.0 / w; });
      const DofVector e = inv * (u - steady);
      for (Index c = 0; c < mesh_.num_cells(); ++c)
        out.entropy += 0.5 * mesh_.cell(c).measure * omega_.cells[c] * e.cells[c] * e.cells[c];
      out.dissipation = bilinear_form(mesh_, forms_, e, e);
      break;
    }
    case SchemeKind::nonlinear: {
      for (Index c = 0; c < mesh_.num_cells(); ++c) {
        if (!(steady.cells[c] > 0.0) || u.cells[c] < 0.0) throw DomainError("entropy needs positive states");
        out.entropy += mesh_.cell(c).measure * steady.cells[c] * phi1(u.cells[c] / steady.cells[c]);
      }
      if (u.min() > 0.0) {
        for (Index c = 0; c < mesh_.num_cells(); ++c) {
          const LocalDofs lu = restrict_to_cell(mesh_, c, u);
          const LocalDofs ls = restrict_to_cell(mesh_, c, steady);
          const double w_cell = std::log(lu.cell / ls.cell);
          Eigen::VectorXd dw(lu.faces.size());
          for (Index i = 0; i < dw.size(); ++i) dw[i] = w_cell - std::log(lu.faces[i] / ls.faces[i]);
          const double r = reconstruct(config_.mean, config_.aggregate, lu.cell, lu.faces).value;
          out.dissipation += r * dw.dot(ops_[c].A * dw);
        }
      } else {
        out.dissipation = std::numeric_limits<double>::quiet_NaN();
      }
      break;
    }
  }
  return out;
}

EntropyDissipation entropy_dissipation(const Mesh& mesh, const ProblemData& data, const SchemeConfig& config,
                                       const DofVector& u, const DofVector& steady) {
  return EntropyEvaluator(mesh, data, config)(u, steady);
}

namespace {

double ls_slope(const std::vector<double>& t, const std::vector<double>& y, std::size_t begin, std::size_t end) {
  const double n = static_cast<double>(end - begin);
  double mt = 0, my = 0;
  for (std::size_t i = begin; i < end; ++i) {
    mt += t[i];
    my += y[i];
  }
  mt /= n;
  my /= n;
  double num = 0, den = 0;
  for (std::size_t i = begin; i < end; ++i) {
    num += (t[i] - mt) * (y[i] - my);
    den += (t[i] - mt) * (t[i] - mt);
  }
  return den > 0 ? num / den : 0.0;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

DecayFit decay_rate(const std::vector<double>& times, const std::vector<double>& distances) {
  if (times.size() != distances.size()) throw std::invalid_argument("decay_rate: size mismatch");
  std::vector<double> t, y, d;
  for (std::size_t i = 0; i < times.size(); ++i)
    if (distances[i] > 0.0 && std::isfinite(distances[i])) {
      t.push_back(times[i]);
      y.push_back(std::log(distances[i]));
      d.push_back(distances[i]);
    }
  if (t.empty()) throw DomainError("decay_rate: all distances vanish, rate undefined");
  if (t.size() < 3) throw DomainError("decay_rate: fewer than 3 positive distances");

  const std::size_t n = t.size();
  const std::size_t w = std::max<std::size_t>(3, n / 50);
  DecayFit fit;
  const double initial = ls_slope(t, y, 0, std::min(n, w));
  fit.knee = n;
  if (initial < 0.0) {
    for (std::size_t i = 0; i + w <= n; ++i) {
      if (std::abs(ls_slope(t, y, i, i + w)) < 0.1 * std::abs(initial)) {
        fit.knee = i;
        break;
      }
    }
  }
  std::size_t end = fit.knee;
  if (fit.knee < n) {
    fit.saturated = true;
    fit.plateau = median(std::vector<double>(d.begin() + static_cast<long>(fit.knee), d.end()));
    // drop the bend where the floor still weighs more than 1%
    std::size_t cut = 0;
    while (cut < fit.knee && d[cut] > 100.0 * fit.plateau) ++cut;
    if (cut >= 2) end = cut;
  }
  if (end < 2) end = std::min<std::size_t>(n, 2);
  fit.rate = -ls_slope(t, y, 0, end);
  return fit;
}

DecayFit decay_rate(const std::vector<TimeSeriesRecord>& records, DistanceKind kind) {
  std::vector<double> t, d;
  for (const auto& r : records) {
    t.push_back(r.time);
    d.push_back(kind == DistanceKind::l1_exact      ? r.dist_l1_exact
                : kind == DistanceKind::l1_discrete ? r.dist_l1_discrete
                                                    : r.dist_l2);
  }
  return decay_rate(t, d);
}

std::vector<double> eoc(const std::vector<double>& h, const std::vector<double>& errors) {
  if (h.size() != errors.size() || h.size() < 2) throw std::invalid_argument("eoc needs at least two rows");
  std::vector<double> orders(h.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 1; i < h.size(); ++i)
    if (errors[i] > 0 && errors[i - 1] > 0)
      orders[i] = std::log(errors[i - 1] / errors[i]) / std::log(h[i - 1] / h[i]);
  return orders;
}

void fill_orders(std::vector<ConvergenceRow>& rows) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (auto& r : rows) r.l2_order = r.h1_order = nan;
  if (rows.size() < 2) return;
  std::vector<double> h, l2, h1;
  for (const auto& r : rows) {
    h.push_back(r.h);
    l2.push_back(r.l2_error);
    h1.push_back(r.h1_error);
  }
  const auto o2 = eoc(h, l2), o1 = eoc(h, h1);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].l2_order = o2[i];
    rows[i].h1_order = o1[i];
  }
}

ConvergenceRow discretization_errors(const Mesh& mesh, const DofVector& u, const ScalarField& exact) {
  const DofVector pu = interpolate(mesh, exact);
  ConvergenceRow row;
  row.h = mesh.meshsize_tilde();
  row.l2_error = norms(mesh, u - pu).l2 / norms(mesh, pu).l2;
  row.h1_error = seminorm_h1(mesh, u - pu) / seminorm_h1(mesh, pu);
  return row;
}

PositivityReport positivity_report(const std::vector<TimeSeriesRecord>& records) {
  PositivityReport rep;
  rep.min_cells = rep.min_faces = std::numeric_limits<double>::infinity();
  for (const auto& r : records) {
    rep.cost = std::max(rep.cost, r.solves_cumulative);
    if (r.step == 0) continue;
    rep.min_cells = std::min(rep.min_cells, r.min_cell);
    if (!std::isnan(r.min_face)) rep.min_faces = std::min(rep.min_faces, r.min_face);
    rep.negatives_count += r.negatives_count;
  }
  return rep;
}

}  // namespace hfv
