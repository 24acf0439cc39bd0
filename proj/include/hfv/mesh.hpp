#ifndef HFV_MESH_HPP
#define HFV_MESH_HPP

#include "hfv/types.hpp"

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hfv {

enum class BoundaryTag { interior, dirichlet, neumann };

/// An edge of the skeleton. Owners are stored in `cells`; `cells[1] == -1`
/// on the boundary.
struct Face {
  std::array<Index, 2> vertices{};
  std::array<Index, 2> cells{-1, -1};
  Vec2 barycenter = Vec2::Zero();
  double measure = 0.0;
  BoundaryTag tag = BoundaryTag::interior;

  bool is_boundary() const { return cells[1] < 0; }
};

/// A polygonal cell. Local face i joins vertices[i] and vertices[i+1];
/// normals and distances are stored per local face.
struct Cell {
  std::vector<Index> vertices;
  std::vector<Index> faces;
  std::vector<Vec2> normals;
  std::vector<double> distances;
  Vec2 center = Vec2::Zero();
  double measure = 0.0;
  double diameter = 0.0;

  Index num_faces() const { return static_cast<Index>(faces.size()); }
};

class Mesh {
 public:
  /// Builds faces and geometry from counter-clockwise polygons. Faces are the
  /// unique undirected vertex pairs; `centers` defaults to the barycenters.
  static Mesh from_polygons(std::vector<Vec2> vertices,
                            const std::vector<std::vector<Index>>& cells,
                            const std::optional<std::vector<Vec2>>& centers = std::nullopt);

  Index num_vertices() const { return static_cast<Index>(vertices_.size()); }
  Index num_cells() const { return static_cast<Index>(cells_.size()); }
  Index num_faces() const { return static_cast<Index>(faces_.size()); }

  const Vec2& vertex(Index i) const { return vertices_[i]; }
  const Cell& cell(Index i) const { return cells_[i]; }
  const Face& face(Index i) const { return faces_[i]; }
  const std::vector<Vec2>& vertices() const { return vertices_; }
  const std::vector<Cell>& cells() const { return cells_; }
  const std::vector<Face>& faces() const { return faces_; }

  /// Position of `face` in the face list of `cell`.
  Index local_face_index(Index cell, Index face) const;

  /// |P_{K,σ}| for local face i of cell K.
  double pyramid_measure(Index cell, Index local) const;
  /// Barycenter of the triangle spanned by x_K and face i.
  Vec2 pyramid_barycenter(Index cell, Index local) const;

  /// max_K h_K.
  double meshsize() const { return meshsize_; }
  /// max_K |K|/|∂K|, the size used in convergence tables.
  double meshsize_tilde() const { return meshsize_tilde_; }
  /// θ_D = max(h_K/d_{K,σ}, h_K/|σ|).
  double regularity() const { return regularity_; }

  Index count_tag(BoundaryTag tag) const;
  void set_tag(Index face, BoundaryTag tag) { faces_[face].tag = tag; }

 private:
  std::vector<Vec2> vertices_;
  std::vector<Cell> cells_;
  std::vector<Face> faces_;
  double meshsize_ = 0.0;
  double meshsize_tilde_ = 0.0;
  double regularity_ = 0.0;
};

// ---------------------------------------------------------------------------
// Generators on the unit square.

enum class MeshFamily { cartesian, triangular, kershaw, tilted_hexagonal };

MeshFamily parse_mesh_family(const std::string& name);
std::string to_string(MeshFamily family);

/// n×n squares.
Mesh cartesian_mesh(int n);
/// n×n squares, each cut along one diagonal; the diagonal alternates in a
/// checkerboard pattern. 2n² triangles.
Mesh triangular_mesh(int n);
/// n×n grid distorted by x ↦ x + distortion/(2π)·sin(2πx)·sin(2πy).
/// distortion in [0,1) keeps the map monotone in x.
Mesh kershaw_mesh(int n, double distortion = 0.6);
/// Hexagon-dominant honeycomb with n columns and n rows; the interior
/// zig-zag vertices are pushed along a direction tilted by `tilt` radians.
Mesh tilted_hexagonal_mesh(int n, double tilt = 0.5235987755982988);

/// Family dispatch; `parameter` is the Kershaw distortion or the hexagon tilt
/// (family default when absent).
Mesh generate_mesh(MeshFamily family, int resolution,
                   std::optional<double> parameter = std::nullopt);

// ---------------------------------------------------------------------------
// polymesh v1 text format.

Mesh read_polymesh(std::istream& in);
Mesh read_polymesh_file(const std::string& path);
void write_polymesh(std::ostream& out, const Mesh& mesh);

// ---------------------------------------------------------------------------
// Boundary partition.

/// Closed region of the plane used to select Dirichlet faces.
class BoundaryPredicate {
 public:
  /// {x : normal·x <= offset}
  static BoundaryPredicate half_plane(const Vec2& normal, double offset);
  /// Axis-aligned box [lo, hi].
  static BoundaryPredicate box(const Vec2& lo, const Vec2& hi);
  static BoundaryPredicate line_x(double x) { return box({x, -1e300}, {x, 1e300}); }
  static BoundaryPredicate line_y(double y) { return box({-1e300, y}, {1e300, y}); }
  static BoundaryPredicate everywhere() { return half_plane(Vec2::UnitX(), 1e300); }

  bool contains(const Vec2& x, double tol = 1e-12) const;

 private:
  enum class Kind { half_plane, box } kind_ = Kind::box;
  Vec2 a_ = Vec2::Zero();
  Vec2 b_ = Vec2::Zero();
  double offset_ = 0.0;
};

/// Tags every boundary face Dirichlet when it lies in the union of the
/// predicates and Neumann otherwise. Throws MeshError naming a face that
/// straddles the partition.
Mesh tag_boundary(Mesh mesh, const std::vector<BoundaryPredicate>& dirichlet);

}  // namespace hfv

#endif
