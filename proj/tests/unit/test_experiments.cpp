#include "doctest.h"
#include "helpers.hpp"

#include "hfv/experiments.hpp"
#include "hfv/output.hpp"
#include "hfv/solver.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace hfv;
using std::numbers::pi;

namespace {

// Flux Λ(∇u + u∇φ) with ∇u by central differences.
Vec2 fd_flux(const TestCase& tc, const std::function<double(const Vec2&)>& u, const Vec2& p, double h) {
  const Vec2 grad((u(p + Vec2(h, 0)) - u(p - Vec2(h, 0))) / (2 * h), (u(p + Vec2(0, h)) - u(p - Vec2(0, h))) / (2 * h));
  return tc.data.diffusion(p) * (grad + u(p) * tc.data.potential_gradient(p));
}

// |∂t u − div(Λ(∇u + u∇φ)) − f| relative to the size of its terms.
double pde_defect(const TestCase& tc, double t, const Vec2& p, bool transient, double h = 1e-4) {
  const auto u = [&](const Vec2& x) { return transient ? tc.exact_transient(t, x) : tc.exact_steady(x); };
  const double div = (fd_flux(tc, u, p + Vec2(h, 0), h).x() - fd_flux(tc, u, p - Vec2(h, 0), h).x()) / (2 * h) +
                     (fd_flux(tc, u, p + Vec2(0, h), h).y() - fd_flux(tc, u, p - Vec2(0, h), h).y()) / (2 * h);
  double dt = 0;
  if (transient) dt = (tc.exact_transient(t + 1e-4, p) - tc.exact_transient(t - 1e-4, p)) / 2e-4;
  const double f = tc.data.source(p);
  const double scale = std::max({1.0, std::abs(dt), std::abs(div), std::abs(f)});
  return std::abs(dt - div - f) / scale;
}

std::vector<Vec2> interior_points() {
  std::vector<Vec2> pts;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 4; ++j) pts.emplace_back(0.07 + 0.2 * i, 0.11 + 0.25 * j);
  return pts;
}

TimeSeriesRecord record_with(int step, double min_cell, long negatives) {
  TimeSeriesRecord r;
  r.step = step;
  r.min_cell = min_cell;
  r.min_face = min_cell;
  r.negatives_count = negatives;
  return r;
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("long-time case constants") {
  const TestCase tc = case_longtime();
  CHECK(tc.constants.at("alpha") == doctest::Approx(0.1011960).epsilon(1e-6));
  for (double y : {0.0, 0.3, 1.0}) CHECK(std::abs(tc.data.initial(Vec2(1.0, y))) <= 1e-15);
  CHECK(tc.exact_steady(Vec2(0.5, 0.2)) == doctest::Approx(2 * 0.1 * pi).epsilon(1e-15));
  CHECK(tc.exact_steady(Vec2(0.5, 0.2)) == doctest::Approx(0.6283185).epsilon(1e-7));
  CHECK(tc.dirichlet.empty());
}

TEST_CASE("positivity case constants") {
  const TestCase tc = case_positivity();
  CHECK(tc.data.initial(Vec2(0.5, 0.5)) == 1e-3);
  CHECK(tc.data.initial(Vec2(0.0, 0.0)) == 1.0);
  CHECK(*tc.data.mass == doctest::Approx(0.87446).epsilon(1e-5));
  CHECK(*tc.data.mass == doctest::Approx(1 - 0.999 * pi * 0.04).epsilon(1e-15));
}

TEST_CASE("first accuracy case") {
  const TestCase tc = case_accuracy1();
  CHECK(tc.exact_steady(Vec2(1, 1)) == 0.0);
  for (double y : {0.0, 0.25, 0.9}) CHECK(tc.exact_steady(Vec2(1, y)) == 0.0);
  CHECK(pde_defect(tc, 0, Vec2(0.5, 0.5), false) <= 1e-6);
  const TestCase shifted = shift_solution(tc, 0.1);
  CHECK(shifted.data.dirichlet(Vec2(1, 0.3)) == doctest::Approx(0.1));
  CHECK(shifted.exact_steady(Vec2(0.2, 0.7)) == doctest::Approx(tc.exact_steady(Vec2(0.2, 0.7)) + 0.1));
}

TEST_CASE("second accuracy case") {
  const TestCase tc = case_accuracy2();
  for (double y : {0.0, 0.5, 1.0}) {
    CHECK(tc.exact_steady(Vec2(0, y)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(tc.exact_steady(Vec2(1, y)) == doctest::Approx(1.0).epsilon(1e-14));
  }
  // div V = −d/dx (v/(1+vx)) at x = 0
  const double h = 1e-6;
  const auto vx = [&](double x) { return -(tc.data.diffusion(Vec2(x, 0)) * tc.data.potential_gradient(Vec2(x, 0))).x(); };
  CHECK((vx(h) - vx(-h)) / (2 * h) == doctest::Approx(40000.0).epsilon(1e-6));
}

TEST_CASE("exact solutions satisfy their equations") {
  for (const auto& pt : interior_points()) {
    CAPTURE(pt.transpose());
    const TestCase lt = case_longtime();
    for (double t : {0.0, 1.0, 10.0}) CHECK(pde_defect(lt, t, pt, true) <= 1e-5);
    CHECK(pde_defect(lt, 0, pt, false) <= 1e-5);
    CHECK(pde_defect(case_accuracy1(), 0, pt, false) <= 1e-5);
    // the layer at x = 0 needs a finer stencil
    CHECK(pde_defect(case_accuracy2(), 0, pt, false, 2e-5) <= 1e-5);
    CHECK(pde_defect(case_longtime_mixed(0.3), 0, pt, false) <= 1e-5);
  }
}

TEST_CASE("exact solutions satisfy their boundary data") {
  const TestCase lt = case_longtime();
  const auto u0 = [&](const Vec2& x) { return lt.exact_transient(2.0, x); };
  for (double s : {0.1, 0.5, 0.9}) {
    // zero normal flux on the four sides
    CHECK(std::abs(fd_flux(lt, u0, Vec2(0, s), 1e-5).x()) <= 1e-10);
    CHECK(std::abs(fd_flux(lt, u0, Vec2(1, s), 1e-5).x()) <= 1e-10);
    CHECK(std::abs(fd_flux(lt, u0, Vec2(s, 0), 1e-5).y()) <= 1e-10);
    const TestCase a1 = case_accuracy1();
    for (const Vec2& b : {Vec2(0, s), Vec2(1, s), Vec2(s, 0), Vec2(s, 1)})
      CHECK(std::abs(a1.exact_steady(b) - a1.data.dirichlet(b)) <= 1e-10);
    const TestCase a2 = case_accuracy2();
    const auto us = [&](const Vec2& x) { return a2.exact_steady(x); };
    CHECK(std::abs(fd_flux(a2, us, Vec2(s, 0), 1e-5).y()) <= 1e-10);
    CHECK(std::abs(fd_flux(a2, us, Vec2(s, 1), 1e-5).y()) <= 1e-10);
    const TestCase mx = case_longtime_mixed(0.3);
    CHECK(std::abs(mx.exact_steady(Vec2(0, s)) - mx.data.dirichlet(Vec2(0, s))) <= 1e-10);
  }
}

TEST_CASE("cases by name") {
  for (const char* n : {"longtime", "positivity", "accuracy1", "accuracy2", "longtime_mixed"})
    CHECK(test_case_by_name(n).name == n);
  CHECK_THROWS_AS(test_case_by_name("nope"), std::invalid_argument);
}

TEST_CASE("relative entropy") {
  CHECK(phi1(0.0) == 1.0);
  CHECK(phi1(1.0) == 0.0);
  CHECK(phi1(std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-15));

  const TestCase tc = case_longtime();
  const Mesh m = tag_boundary(kershaw_mesh(4), tc.dirichlet);
  SchemeConfig cfg;
  cfg.scheme = SchemeKind::nonlinear;
  const DofVector steady = solve_stationary(m, tc.data, cfg);
  for (auto kind : {SchemeKind::hmm, SchemeKind::expfit, SchemeKind::nonlinear}) {
    cfg.scheme = kind;
    const auto ed = entropy_dissipation(m, tc.data, cfg, steady, steady);
    CHECK(ed.entropy == 0.0);
    CHECK(std::abs(ed.dissipation) <= 1e-28);
  }
  cfg.scheme = SchemeKind::nonlinear;
  const auto ed = entropy_dissipation(m, tc.data, cfg, std::exp(1.0) * steady, steady);
  CHECK(ed.entropy == doctest::Approx(norms(m, steady).mass).epsilon(1e-13));
  CHECK(std::abs(ed.dissipation) <= 1e-13);
  CHECK_THROWS_AS(entropy_dissipation(m, tc.data, cfg, -1.0 * steady, steady), DomainError);
}

TEST_CASE("decay rate fitting") {
  const double alpha = 0.1011960;
  std::vector<double> t, pure, floor, flat;
  for (int i = 0; i <= 3500; ++i) {
    t.push_back(0.1 * i);
    pure.push_back(std::exp(-alpha * t.back()));
    floor.push_back(std::exp(-alpha * t.back()) + 1e-7);
    flat.push_back(0.25);
  }
  const DecayFit a = decay_rate(t, pure);
  CHECK(a.rate == doctest::Approx(alpha).epsilon(1e-10));
  CHECK_FALSE(a.saturated);
  CHECK(std::abs(decay_rate(t, flat).rate) <= 1e-14);
  const DecayFit b = decay_rate(t, floor);
  CHECK(b.saturated);
  CHECK(b.rate == doctest::Approx(alpha).epsilon(0.02));
  CHECK(b.plateau == doctest::Approx(1e-7).epsilon(0.05));
  CHECK_THROWS_AS(decay_rate(t, std::vector<double>(t.size(), 0.0)), DomainError);
}

TEST_CASE("experimental orders") {
  CHECK(eoc({0.2, 0.1}, {1e-2, 2.5e-3})[1] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(eoc({0.2, 0.1}, {1e-2, 5e-3})[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(eoc({0.2, 0.1}, {1e-2, 4.2e-3})[1] == doctest::Approx(1.2516).epsilon(1e-4));
  CHECK(std::isnan(eoc({0.2, 0.1}, {1e-2, 0.0})[1]));
  CHECK(std::isnan(eoc({0.2, 0.1}, {1e-2, 1e-3})[0]));
}

TEST_CASE("discretization errors of the interpolate vanish") {
  const TestCase tc = case_accuracy1();
  const Mesh m = tag_boundary(triangular_mesh(4), tc.dirichlet);
  const ConvergenceRow r = discretization_errors(m, interpolate(m, tc.exact_steady), tc.exact_steady);
  CHECK(r.l2_error == 0.0);
  CHECK(r.h1_error == 0.0);
  CHECK(r.h == m.meshsize_tilde());
}

TEST_CASE("positivity report") {
  std::vector<TimeSeriesRecord> ok = {record_with(0, 0.5, 0), record_with(1, 0.4, 0), record_with(2, 0.3, 0)};
  CHECK(positivity_report(ok).negatives_count == 0);
  CHECK(positivity_report(ok).min_cells == 0.3);
  std::vector<TimeSeriesRecord> bad = {record_with(0, 1.0, 0), record_with(1, -2.0, 2)};
  bad[1].solves_cumulative = 1;
  const PositivityReport r = positivity_report(bad);
  CHECK(r.negatives_count == 2);
  CHECK(r.min_cells == -2.0);
  CHECK(r.cost == 1);
}

}  // TEST_SUITE

TEST_SUITE("output") {

TEST_CASE("csv formatting") {
  CHECK(format_real(0.1) == "1.0000000000000001e-01");
  CHECK(format_real(std::nan("")) == "nan");
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CsvTable t({"x", "y"});
  t.add_row({"1", "2"});
  CHECK(t.str() == "x,y\r\n1,2\r\n");
  CHECK_THROWS_AS(t.add_row({"1"}), std::invalid_argument);
  // 17 significant digits round-trip
  const double v = 0.1 + 0.2;
  CHECK(std::stod(format_real(v)) == v);
}

TEST_CASE("series header is stable") {
  const std::string s = series_table({}).str();
  CHECK(s == "step,t,E,D,dist_L1_exact,dist_L1_discrete,dist_L2,min_cell,min_face,negatives_count,"
             "solves_cumulative\r\n");
}

TEST_CASE("vtk export") {
  const Mesh one = cartesian_mesh(1);
  const std::string a = vtk_polydata(one, Eigen::VectorXd::Constant(1, 0.3));
  CHECK(a.find("POLYGONS 1 5") != std::string::npos);
  CHECK(a.find("SCALARS u_cell") != std::string::npos);
  CHECK(a.find(format_real(0.3)) != std::string::npos);

  const Mesh four = cartesian_mesh(2);
  const DofVector x = interpolate(four, [](const Vec2& p) { return p.x(); });
  std::vector<double> expected(x.cells.data(), x.cells.data() + 4);
  std::sort(expected.begin(), expected.end());
  CHECK(expected == std::vector<double>{0.25, 0.25, 0.75, 0.75});
  const std::string b = vtk_polydata(four, x.cells);
  CHECK(b.find("POLYGONS 4 20") != std::string::npos);

  const auto dir = std::filesystem::temp_directory_path() / "hfv_vtk_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "u.vtk").string();
  export_vtk(four, x, path);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == b);
  CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
  CHECK_THROWS_AS(export_vtk(four, x, ""), IoError);
  CHECK_THROWS_AS(export_vtk(four, x, "/nonexistent_dir/u.vtk"), IoError);
  std::filesystem::remove_all(dir);
}

}  // TEST_SUITE
