#include "hfv/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace hfv {

namespace {

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

double signed_area(const std::vector<Vec2>& pts, const std::vector<Index>& ring) {
  double area = 0.0;
  const auto k = ring.size();
  for (std::size_t i = 0; i < k; ++i) area += cross(pts[ring[i]], pts[ring[(i + 1) % k]]);
  return 0.5 * area;
}

Vec2 polygon_barycenter(const std::vector<Vec2>& pts, const std::vector<Index>& ring, double area) {
  // Shift to the first vertex to limit cancellation.
  const Vec2 origin = pts[ring[0]];
  Vec2 c = Vec2::Zero();
  const auto k = ring.size();
  for (std::size_t i = 0; i < k; ++i) {
    const Vec2 p = pts[ring[i]] - origin;
    const Vec2 q = pts[ring[(i + 1) % k]] - origin;
    c += cross(p, q) * (p + q);
  }
  return origin + c / (6.0 * area);
}

// Proper or touching intersection of segments [p1,p2] and [q1,q2].
bool segments_intersect(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
  auto orient = [](const Vec2& a, const Vec2& b, const Vec2& c) {
    const double v = cross(b - a, c - a);
    const double scale = (b - a).norm() * (c - a).norm();
    if (std::abs(v) <= 1e-14 * scale) return 0;
    return v > 0 ? 1 : -1;
  };
  auto on_segment = [](const Vec2& a, const Vec2& b, const Vec2& p) {
    return std::min(a.x(), b.x()) <= p.x() && p.x() <= std::max(a.x(), b.x()) &&
           std::min(a.y(), b.y()) <= p.y() && p.y() <= std::max(a.y(), b.y());
  };
  const int o1 = orient(p1, p2, q1), o2 = orient(p1, p2, q2);
  const int o3 = orient(q1, q2, p1), o4 = orient(q1, q2, p2);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  if (o1 == 0 && on_segment(p1, p2, q1)) return true;
  if (o2 == 0 && on_segment(p1, p2, q2)) return true;
  if (o3 == 0 && on_segment(q1, q2, p1)) return true;
  if (o4 == 0 && on_segment(q1, q2, p2)) return true;
  return false;
}

bool self_intersecting(const std::vector<Vec2>& pts, const std::vector<Index>& ring) {
  const auto k = ring.size();
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      // Adjacent edges share a vertex by construction.
      if (j == i + 1 || (i == 0 && j == k - 1)) continue;
      if (segments_intersect(pts[ring[i]], pts[ring[(i + 1) % k]], pts[ring[j]],
                             pts[ring[(j + 1) % k]]))
        return true;
    }
  }
  return false;
}

}  // namespace

Mesh Mesh::from_polygons(std::vector<Vec2> vertices, const std::vector<std::vector<Index>>& cells,
                         const std::optional<std::vector<Vec2>>& centers) {
  Mesh mesh;
  mesh.vertices_ = std::move(vertices);
  const auto& pts = mesh.vertices_;
  const Index nv = static_cast<Index>(pts.size());
  const Index nc = static_cast<Index>(cells.size());
  if (nc == 0) throw MeshError("mesh has no cells");
  if (centers && static_cast<Index>(centers->size()) != nc)
    throw MeshError("number of centers does not match number of cells");

  for (Index v = 0; v < nv; ++v)
    if (!std::isfinite(pts[v].x()) || !std::isfinite(pts[v].y()))
      throw TopologyError("vertex", v, "non-finite coordinates");

  std::vector<char> used(nv, 0);
  std::map<std::pair<Index, Index>, Index> face_of_edge;
  mesh.cells_.resize(nc);

  for (Index c = 0; c < nc; ++c) {
    const auto& ring = cells[c];
    if (ring.size() < 3) throw TopologyError("cell", c, "cell needs ≥3 vertices");
    for (Index v : ring) {
      if (v < 0 || v >= nv) throw TopologyError("cell", c, "vertex index out of range");
      used[v] = 1;
    }
    for (std::size_t i = 0; i < ring.size(); ++i)
      for (std::size_t j = i + 1; j < ring.size(); ++j)
        if (ring[i] == ring[j]) throw TopologyError("cell", c, "repeated vertex");

    const double area = signed_area(pts, ring);
    if (!(area > 0.0)) throw TopologyError("cell", c, "vertex ring is not counter-clockwise");
    if (self_intersecting(pts, ring)) throw TopologyError("cell", c, "self-intersecting cell");

    Cell& cell = mesh.cells_[c];
    cell.vertices = ring;
    cell.measure = area;
    cell.center = centers ? (*centers)[c] : polygon_barycenter(pts, ring, area);

    const auto k = ring.size();
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j)
        cell.diameter = std::max(cell.diameter, (pts[ring[i]] - pts[ring[j]]).norm());

    for (std::size_t i = 0; i < k; ++i) {
      const Index a = ring[i], b = ring[(i + 1) % k];
      const auto key = std::minmax(a, b);
      auto [it, inserted] = face_of_edge.try_emplace({key.first, key.second}, mesh.num_faces());
      if (inserted) {
        Face f;
        f.vertices = {a, b};
        f.cells = {c, -1};
        f.barycenter = 0.5 * (pts[a] + pts[b]);
        f.measure = (pts[b] - pts[a]).norm();
        mesh.faces_.push_back(f);
      } else {
        Face& f = mesh.faces_[it->second];
        if (f.cells[1] >= 0) throw TopologyError("cell", c, "edge shared by more than two cells");
        if (f.vertices[0] != b) throw TopologyError("cell", c, "inconsistent orientation with a neighbour");
        f.cells[1] = c;
      }
      const Vec2 t = pts[b] - pts[a];
      const Vec2 n = Vec2(t.y(), -t.x()).normalized();
      const double d = (0.5 * (pts[a] + pts[b]) - cell.center).dot(n);
      if (!(d > 0.0)) throw TopologyError("cell", c, "cell is not star-shaped with respect to its center");
      cell.faces.push_back(it->second);
      cell.normals.push_back(n);
      cell.distances.push_back(d);
    }
  }

  for (Index v = 0; v < nv; ++v)
    if (!used[v]) throw TopologyError("vertex", v, "dangling vertex");

  for (auto& f : mesh.faces_) f.tag = f.is_boundary() ? BoundaryTag::neumann : BoundaryTag::interior;

  for (const Cell& cell : mesh.cells_) {
    double perimeter = 0.0;
    for (Index i = 0; i < cell.num_faces(); ++i) {
      const Face& f = mesh.faces_[cell.faces[i]];
      perimeter += f.measure;
      mesh.regularity_ = std::max({mesh.regularity_, cell.diameter / cell.distances[i],
                                   cell.diameter / f.measure});
    }
    mesh.meshsize_ = std::max(mesh.meshsize_, cell.diameter);
    mesh.meshsize_tilde_ = std::max(mesh.meshsize_tilde_, cell.measure / perimeter);
  }
  return mesh;
}

Index Mesh::local_face_index(Index cell, Index face) const {
  const auto& faces = cells_[cell].faces;
  const auto it = std::find(faces.begin(), faces.end(), face);
  if (it == faces.end()) throw MeshError("face does not belong to cell");
  return static_cast<Index>(it - faces.begin());
}

double Mesh::pyramid_measure(Index cell, Index local) const {
  const Cell& c = cells_[cell];
  return 0.5 * faces_[c.faces[local]].measure * c.distances[local];
}

Vec2 Mesh::pyramid_barycenter(Index cell, Index local) const {
  const Cell& c = cells_[cell];
  const Face& f = faces_[c.faces[local]];
  return (c.center + vertices_[f.vertices[0]] + vertices_[f.vertices[1]]) / 3.0;
}

Index Mesh::count_tag(BoundaryTag tag) const {
  return std::count_if(faces_.begin(), faces_.end(), [tag](const Face& f) { return f.tag == tag; });
}

// ---------------------------------------------------------------------------

BoundaryPredicate BoundaryPredicate::half_plane(const Vec2& normal, double offset) {
  BoundaryPredicate p;
  p.kind_ = Kind::half_plane;
  p.a_ = normal;
  p.offset_ = offset;
  return p;
}

BoundaryPredicate BoundaryPredicate::box(const Vec2& lo, const Vec2& hi) {
  BoundaryPredicate p;
  p.kind_ = Kind::box;
  p.a_ = lo;
  p.b_ = hi;
  return p;
}

bool BoundaryPredicate::contains(const Vec2& x, double tol) const {
  if (kind_ == Kind::half_plane) return a_.dot(x) <= offset_ + tol;
  return x.x() >= a_.x() - tol && x.x() <= b_.x() + tol && x.y() >= a_.y() - tol &&
         x.y() <= b_.y() + tol;
}

Mesh tag_boundary(Mesh mesh, const std::vector<BoundaryPredicate>& dirichlet) {
  auto inside = [&](const Vec2& x) {
    return std::any_of(dirichlet.begin(), dirichlet.end(),
                       [&](const BoundaryPredicate& p) { return p.contains(x); });
  };
  for (Index i = 0; i < mesh.num_faces(); ++i) {
    const Face& f = mesh.face(i);
    if (!f.is_boundary()) continue;
    const Vec2& a = mesh.vertex(f.vertices[0]);
    const Vec2& b = mesh.vertex(f.vertices[1]);
    const bool mid = inside(f.barycenter);
    bool straddles = false;
    if (mid) {
      straddles = !inside(a) || !inside(b);
    } else {
      // Endpoints may touch the Dirichlet part; points just inside the face may not.
      straddles = inside(a + 1e-3 * (b - a)) || inside(b + 1e-3 * (a - b));
    }
    if (straddles)
      throw MeshError("face " + std::to_string(i) + " straddles the Dirichlet/Neumann partition");
    mesh.set_tag(i, mid ? BoundaryTag::dirichlet : BoundaryTag::neumann);
  }
  return mesh;
}

}  // namespace hfv
