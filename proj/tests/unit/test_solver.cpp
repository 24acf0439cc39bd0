#include "doctest.h"
#include "helpers.hpp"

#include "hfv/output.hpp"
#include "hfv/solver.hpp"
#include "hfv/transient.hpp"

#include <cmath>
#include <random>

using namespace hfv;

namespace {

SparseMatrix sparse_identity(Index n) {
  SparseMatrix m(n, n);
  m.setIdentity();
  return m;
}

Eigen::MatrixXd full_matrix(const AssembledSystem& s) {
  const Index nc = s.num_cells(), ne = s.num_skeleton();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(nc + ne, nc + ne);
  M.topLeftCorner(nc, nc) = s.mm.asDiagonal();
  M.topRightCorner(nc, ne) = Eigen::MatrixXd(s.me);
  M.bottomLeftCorner(ne, nc) = Eigen::MatrixXd(s.em);
  M.bottomRightCorner(ne, ne) = Eigen::MatrixXd(s.ee);
  return M;
}

SchemeConfig nonlinear_config(double dt, double tf) {
  SchemeConfig c;
  c.scheme = SchemeKind::nonlinear;
  c.dt = dt;
  c.final_time = tf;
  return c;
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("condensation with decoupled blocks") {
  AssembledSystem s;
  s.mm = Eigen::Vector3d(2, 4, 8);
  s.me = SparseMatrix(3, 2);
  s.em = SparseMatrix(2, 3);
  s.ee = 3.0 * sparse_identity(2);
  s.sm = Eigen::Vector3d(1, 1, 1);
  s.se = Eigen::Vector2d(6, 9);
  const CondensedSystem c = condense(s);
  CHECK((Eigen::MatrixXd(c.schur) - Eigen::MatrixXd(s.ee)).norm() == 0.0);
  CHECK((c.rhs - s.se).norm() == 0.0);
  CHECK((c.recover(s.sm, Eigen::Vector2d(2, 3)) - Eigen::Vector3d(0.5, 0.25, 0.125)).norm() <= 1e-16);
}

TEST_CASE("condensed solve agrees with a dense solve") {
  const TestCase tc = case_positivity();
  const Mesh m = tag_boundary(cartesian_mesh(3), tc.dirichlet);
  std::mt19937 rng(3);
  const DofVector prev = test::random_positive(m, rng);
  for (auto kind : {SchemeKind::hmm, SchemeKind::expfit}) {
    SchemeConfig cfg;
    cfg.scheme = kind;
    const AssembledSystem s = assemble_linear(m, tc.data, cfg, TimeStep{prev.cells, 0.01});
    const Eigen::MatrixXd M = full_matrix(s);
    Eigen::VectorXd rhs(M.rows());
    rhs << s.sm, s.se;
    const Eigen::VectorXd dense = M.fullPivLu().solve(rhs);
    const CondensedSystem c = condense(s);
    const Eigen::VectorXd skel = sparse_solve(c.schur, c.rhs);
    const Eigen::VectorXd cells = c.recover(s.sm, skel);
    Eigen::VectorXd both(M.rows());
    both << cells, skel;
    CHECK((both - dense).lpNorm<Eigen::Infinity>() <= 1e-10 * dense.lpNorm<Eigen::Infinity>());
    // recovery identity
    const Eigen::VectorXd back = s.mm.asDiagonal() * cells + s.me * skel - s.sm;
    CHECK(back.lpNorm<Eigen::Infinity>() <= 1e-12 * s.sm.lpNorm<Eigen::Infinity>());
  }
}

TEST_CASE("condensation with a stationary multiplier") {
  const TestCase tc = case_longtime();
  const Mesh m = tag_boundary(kershaw_mesh(3), tc.dirichlet);
  const AssembledSystem s = assemble_hmm(m, tc.data, SchemeConfig{});
  REQUIRE(s.has_multiplier);
  const Eigen::MatrixXd M = full_matrix(s);
  Eigen::VectorXd rhs(M.rows());
  rhs << s.sm, s.se;
  const Eigen::VectorXd dense = M.fullPivLu().solve(rhs);
  const BlockSolution b = solve_block_system(s);
  CHECK((b.u.cells - dense.head(m.num_cells())).lpNorm<Eigen::Infinity>() <= 1e-10);
  CHECK(norms(m, b.u).mass == doctest::Approx(*tc.data.mass).epsilon(1e-12));
}

TEST_CASE("zero diagonal is a condensation error") {
  AssembledSystem s;
  s.mm = Eigen::Vector2d(1, 0);
  s.me = SparseMatrix(2, 1);
  s.em = SparseMatrix(1, 2);
  s.ee = sparse_identity(1);
  s.sm = Eigen::Vector2d(1, 1);
  s.se = Eigen::VectorXd::Ones(1);
  CHECK_THROWS_AS(condense(s), SolverError);
}

TEST_CASE("sparse solve examples") {
  const Eigen::Vector3d b(1, 2, 3);
  CHECK((sparse_solve(sparse_identity(3), b) - b).norm() == 0.0);

  SparseMatrix a(2, 2);
  a.insert(0, 0) = 2;
  a.insert(0, 1) = 1;
  a.insert(1, 0) = 1;
  a.insert(1, 1) = 2;
  CHECK((sparse_solve(a, Eigen::Vector2d(3, 3)) - Eigen::Vector2d(1, 1)).norm() <= 1e-15);

  std::mt19937 rng(50);
  std::normal_distribution<double> n(0, 1);
  const Eigen::MatrixXd B = Eigen::MatrixXd::NullaryExpr(50, 50, [&] { return n(rng); });
  const Eigen::MatrixXd spd = B.transpose() * B + Eigen::MatrixXd::Identity(50, 50);
  const SparseMatrix s = spd.sparseView();
  const Eigen::VectorXd rhs = Eigen::VectorXd::NullaryExpr(50, [&] { return n(rng); });
  const Eigen::VectorXd x = sparse_solve(s, rhs);
  CHECK((s * x - rhs).lpNorm<Eigen::Infinity>() <= 1e-11 * rhs.lpNorm<Eigen::Infinity>());
}

TEST_CASE("singular matrix reports a solver error") {
  SparseMatrix a(2, 2);
  a.insert(0, 0) = 1;
  a.insert(0, 1) = 1;
  a.insert(1, 0) = 1;
  a.insert(1, 1) = 1;
  CHECK_THROWS_AS(sparse_solve(a, Eigen::Vector2d(1, 2)), SolverError);
}

TEST_CASE("factorization is reusable across values with the same pattern") {
  SparseLu lu;
  SparseMatrix a = 2.0 * sparse_identity(4);
  a.insert(0, 3) = 1.0;
  lu.compute(a);
  CHECK((a * lu.solve(Eigen::Vector4d(1, 2, 3, 4)) - Eigen::Vector4d(1, 2, 3, 4)).norm() <= 1e-14);
  a.coeffRef(0, 3) = -0.5;
  a.coeffRef(2, 2) = 7.0;
  lu.compute(a);
  CHECK((a * lu.solve(Eigen::Vector4d(1, 2, 3, 4)) - Eigen::Vector4d(1, 2, 3, 4)).norm() <= 1e-14);
  SparseMatrix b = 3.0 * sparse_identity(4);
  b.insert(1, 2) = 1.0;
  lu.compute(b);
  CHECK((b * lu.solve(Eigen::Vector4d(1, 2, 3, 4)) - Eigen::Vector4d(1, 2, 3, 4)).norm() <= 1e-14);
}

TEST_CASE("Newton on a scalar surrogate") {
  Eigen::VectorXd x(1);
  x << 3.0;
  NewtonOptions opts;
  const NewtonReport r = newton_solve(
      [](const Eigen::VectorXd& v) { return Eigen::VectorXd::Constant(1, v[0] * v[0] - 4); },
      [](const Eigen::VectorXd& v, const Eigen::VectorXd& g) { return Eigen::VectorXd::Constant(1, -g[0] / (2 * v[0])); },
      x, opts, 1);
  CHECK(r.converged);
  CHECK(r.iterations <= 8);
  CHECK(x[0] == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("Newton keeps iterates positive") {
  // the full step for log(v/0.01) = 0 from v = 5 lands at a negative value
  Eigen::VectorXd x(1);
  x << 5.0;
  const NewtonReport r = newton_solve(
      [](const Eigen::VectorXd& v) { return Eigen::VectorXd::Constant(1, std::log(v[0] / 0.01)); },
      [](const Eigen::VectorXd& v, const Eigen::VectorXd& g) { return Eigen::VectorXd::Constant(1, -g[0] * v[0]); },
      x, NewtonOptions{}, 1);
  CHECK(r.converged);
  CHECK(r.backtracks >= 1);
  CHECK(x[0] == doctest::Approx(0.01).epsilon(1e-12));
}

TEST_CASE("Newton from the thermal equilibrium") {
  const TestCase tc = case_longtime();
  const Mesh m = tag_boundary(kershaw_mesh(4), tc.dirichlet);
  SchemeConfig cfg = nonlinear_config(0.1, 0.1);
  const NonlinearScheme s(m, tc.data, cfg);
  const DofVector eq = 0.4 * omega_interpolate(m, tc.data);
  NonlinearMode mode;
  mode.step = TimeStep{eq.cells, 0.1};
  Eigen::VectorXd x = eq.stacked();
  const NewtonReport r = newton_solve(s, mode, x, cfg.newton);
  CHECK(r.converged);
  CHECK(r.iterations <= 1);
}

TEST_CASE("Newton converges quadratically on a stationary problem") {
  const TestCase tc = shift_solution(case_accuracy1(), 0.1);
  const Mesh m = tag_boundary(triangular_mesh(8), tc.dirichlet);
  SchemeConfig cfg = nonlinear_config(1, 1);
  const NonlinearScheme s(m, tc.data, cfg);
  Eigen::VectorXd x = Eigen::VectorXd::Constant(m.num_cells() + m.num_faces(), 0.5);
  const NewtonReport r = newton_solve(s, NonlinearMode{}, x, cfg.newton);
  REQUIRE(r.converged);
  const auto& h = r.history;
  REQUIRE(h.size() >= 3);
  int checked = 0;
  for (std::size_t k = 0; k + 1 < h.size(); ++k) {
    if (h[k] > 1e-4 || h[k + 1] < 1e-13) continue;
    CHECK(h[k + 1] <= 10.0 * h[k] * h[k]);
    ++checked;
  }
  CHECK(checked >= 1);
}

TEST_CASE("linear stepper reuses one factorization") {
  const TestCase tc = case_positivity();
  const Mesh m = tag_boundary(cartesian_mesh(4), tc.dirichlet);
  const LinearStepper st(m, tc.data, SchemeConfig{}, 1e-3);
  const DofVector u0 = interpolate(m, tc.data.initial);
  const DofVector a = st.step(u0.cells);
  const DofVector direct = solve_block_system(assemble_hmm(m, tc.data, SchemeConfig{}, TimeStep{u0.cells, 1e-3})).u;
  CHECK((a.cells - direct.cells).lpNorm<Eigen::Infinity>() <= 1e-12);
  CHECK((a.faces - direct.faces).lpNorm<Eigen::Infinity>() <= 1e-12);
}

}  // TEST_SUITE

TEST_SUITE("transient") {

TEST_CASE("steady initial datum gives constant records") {
  ProblemData data;
  data.initial = [](const Vec2&) { return 0.6; };
  const Mesh m = tag_boundary(kershaw_mesh(4), {});
  SchemeConfig cfg;
  cfg.dt = 0.1;
  cfg.final_time = 0.5;
  const TransientResult r = transient_drive(m, data, cfg);
  REQUIRE(r.records.size() == 6);
  for (const auto& rec : r.records) {
    CHECK(rec.dist_l1_discrete <= 1e-14);
    CHECK(rec.entropy <= 1e-28);
  }
}

TEST_CASE("zero final time records only the initial state") {
  const TestCase tc = case_longtime();
  const Mesh m = tag_boundary(cartesian_mesh(4), tc.dirichlet);
  SchemeConfig cfg;
  cfg.final_time = 0.0;
  const TransientResult r = transient_drive(m, tc.data, cfg);
  CHECK(r.records.size() == 1);
  CHECK(r.records[0].step == 0);
  CHECK(r.records[0].solves_cumulative == 0);
}

TEST_CASE("last step is shortened to land on the final time") {
  const TestCase tc = case_longtime();
  const Mesh m = tag_boundary(cartesian_mesh(4), tc.dirichlet);
  SchemeConfig cfg;
  cfg.dt = 0.3;
  cfg.final_time = 1.0;
  const TransientResult r = transient_drive(m, tc.data, cfg);
  REQUIRE(r.records.size() == 5);
  CHECK(r.records.back().time == 1.0);
}

TEST_CASE("nonlinear positivity run: no halving, decreasing Newton cost") {
  const TestCase tc = case_positivity();
  const Mesh m = tag_boundary(tilted_hexagonal_mesh(16), tc.dirichlet);
  const TransientResult r = transient_drive(m, tc.data, nonlinear_config(1e-5, 3e-5), {});
  REQUIRE(r.newton.size() == 3);
  CHECK(r.halvings == 0);
  CHECK(r.newton[0].iterations >= r.newton[1].iterations);
  CHECK(r.newton[1].iterations >= r.newton[2].iterations);
  CHECK(r.newton[0].iterations > r.newton[2].iterations);
  for (const auto& rep : r.newton) CHECK(rep.iterations <= 50);
}

TEST_CASE("nonlinear transient conserves mass and dissipates entropy") {
  const TestCase tc = case_positivity();
  const Mesh m = tag_boundary(kershaw_mesh(8), tc.dirichlet);
  const TransientResult r = transient_drive(m, tc.data, nonlinear_config(1e-3, 2e-2), {});
  const double m0 = norms(m, r.initial).mass;
  CHECK(norms(m, r.final_state).mass == doctest::Approx(m0).epsilon(1e-10));
  for (std::size_t n = 1; n < r.records.size(); ++n) {
    CHECK(r.records[n].entropy <= r.records[n - 1].entropy + 1e-12);
    CHECK(r.records[n].dissipation >= -1e-12);
    CHECK(r.records[n].negatives_count == 0);
  }
}

TEST_CASE("time step underflow aborts") {
  const TestCase tc = case_positivity();
  const Mesh m = tag_boundary(cartesian_mesh(4), tc.dirichlet);
  SchemeConfig cfg = nonlinear_config(1e-3, 1e-3);
  cfg.newton.max_iterations = 1;
  cfg.newton.tolerance = 1e-300;
  CHECK_THROWS_AS(transient_drive(m, tc.data, cfg, {}), SolverError);
}

TEST_CASE("identical runs give identical series") {
  const TestCase tc = case_positivity();
  const Mesh m = tag_boundary(tilted_hexagonal_mesh(6), tc.dirichlet);
  const SchemeConfig cfg = nonlinear_config(1e-4, 5e-4);
  const std::string a = series_table(transient_drive(m, tc.data, cfg, {}).records).str();
  const std::string b = series_table(transient_drive(m, tc.data, cfg, {}).records).str();
  CHECK(a == b);
}

}  // TEST_SUITE
