#include "hfv/mesh.hpp"

#include <cmath>
#include <map>
#include <numbers>

namespace hfv {

namespace {

void check_resolution(int n) {
  if (n < 1) throw std::invalid_argument("mesh resolution must be >= 1");
}

std::vector<Vec2> grid_vertices(int n) {
  std::vector<Vec2> v;
  v.reserve(static_cast<std::size_t>((n + 1) * (n + 1)));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) v.emplace_back(double(i) / n, double(j) / n);
  return v;
}

Index grid_id(int n, int i, int j) { return static_cast<Index>(j) * (n + 1) + i; }

}  // namespace

MeshFamily parse_mesh_family(const std::string& name) {
  if (name == "cartesian") return MeshFamily::cartesian;
  if (name == "triangular") return MeshFamily::triangular;
  if (name == "kershaw") return MeshFamily::kershaw;
  if (name == "tilted_hexagonal") return MeshFamily::tilted_hexagonal;
  throw std::invalid_argument("unknown mesh family '" + name + "'");
}

std::string to_string(MeshFamily family) {
  switch (family) {
    case MeshFamily::cartesian: return "cartesian";
    case MeshFamily::triangular: return "triangular";
    case MeshFamily::kershaw: return "kershaw";
    case MeshFamily::tilted_hexagonal: return "tilted_hexagonal";
  }
  return "?";
}

Mesh cartesian_mesh(int n) {
  check_resolution(n);
  std::vector<std::vector<Index>> cells;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      cells.push_back({grid_id(n, i, j), grid_id(n, i + 1, j), grid_id(n, i + 1, j + 1),
                       grid_id(n, i, j + 1)});
  return Mesh::from_polygons(grid_vertices(n), cells);
}

Mesh triangular_mesh(int n) {
  check_resolution(n);
  std::vector<std::vector<Index>> cells;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const Index a = grid_id(n, i, j), b = grid_id(n, i + 1, j);
      const Index c = grid_id(n, i + 1, j + 1), d = grid_id(n, i, j + 1);
      if ((i + j) % 2 == 0) {
        cells.push_back({a, b, c});
        cells.push_back({a, c, d});
      } else {
        cells.push_back({a, b, d});
        cells.push_back({b, c, d});
      }
    }
  }
  return Mesh::from_polygons(grid_vertices(n), cells);
}

Mesh kershaw_mesh(int n, double distortion) {
  check_resolution(n);
  if (!(distortion >= 0.0 && distortion < 1.0))
    throw std::invalid_argument("kershaw distortion must lie in [0,1)");
  auto verts = grid_vertices(n);
  constexpr double two_pi = 2.0 * std::numbers::pi;
  for (auto& p : verts)
    p.x() += distortion / two_pi * std::sin(two_pi * p.x()) * std::sin(two_pi * p.y());
  std::vector<std::vector<Index>> cells;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      cells.push_back({grid_id(n, i, j), grid_id(n, i + 1, j), grid_id(n, i + 1, j + 1),
                       grid_id(n, i, j + 1)});
  return Mesh::from_polygons(std::move(verts), cells);
}

Mesh tilted_hexagonal_mesh(int n, double tilt) {
  check_resolution(n);
  if (!(std::abs(tilt) < std::numbers::pi / 3))
    throw std::invalid_argument("hexagon tilt must lie in (-pi/3, pi/3)");
  // Brick wall: row r spans [r/n, (r+1)/n]; bricks of width 1/n, odd rows
  // shifted by half a brick. Abscissae are integers in units of 1/(2n).
  const int m = n;
  const int last = 2 * n;
  auto is_separator = [&](int row, int k) {
    if (row < 0 || row >= m || k <= 0 || k >= last) return false;
    return (k % 2) == (row % 2);
  };
  const double h = 1.0 / (2 * n);
  const double shift = 0.25 / m;
  const Vec2 dir(std::sin(tilt), std::cos(tilt));

  std::vector<Vec2> verts;
  std::map<std::pair<int, int>, Index> ids;
  auto vertex = [&](int line, int k) {
    auto [it, inserted] = ids.try_emplace({line, k}, static_cast<Index>(verts.size()));
    if (inserted) {
      Vec2 p(k * h, double(line) / m);
      if (line > 0 && line < m) {
        if (is_separator(line - 1, k)) p -= shift * dir;
        if (is_separator(line, k)) p += shift * dir;
      }
      verts.push_back(p);
    }
    return it->second;
  };
  auto on_line = [&](int line, int k) {
    return k == 0 || k == last || is_separator(line - 1, k) || is_separator(line, k);
  };

  std::vector<std::vector<Index>> cells;
  for (int r = 0; r < m; ++r) {
    std::vector<int> seps{0};
    for (int k = 1; k < last; ++k)
      if (is_separator(r, k)) seps.push_back(k);
    seps.push_back(last);
    for (std::size_t s = 0; s + 1 < seps.size(); ++s) {
      const int kl = seps[s], kr = seps[s + 1];
      std::vector<Index> ring;
      for (int k = kl; k <= kr; ++k)
        if (on_line(r, k)) ring.push_back(vertex(r, k));
      for (int k = kr; k >= kl; --k)
        if (on_line(r + 1, k)) ring.push_back(vertex(r + 1, k));
      cells.push_back(std::move(ring));
    }
  }
  return Mesh::from_polygons(std::move(verts), cells);
}

Mesh generate_mesh(MeshFamily family, int resolution, std::optional<double> parameter) {
  switch (family) {
    case MeshFamily::cartesian: return cartesian_mesh(resolution);
    case MeshFamily::triangular: return triangular_mesh(resolution);
    case MeshFamily::kershaw: return kershaw_mesh(resolution, parameter.value_or(0.6));
    case MeshFamily::tilted_hexagonal:
      return tilted_hexagonal_mesh(resolution, parameter.value_or(std::numbers::pi / 6));
  }
  throw std::invalid_argument("unknown mesh family");
}

}  // namespace hfv
