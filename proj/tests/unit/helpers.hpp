#ifndef HFV_TESTS_HELPERS_HPP
#define HFV_TESTS_HELPERS_HPP

#include "hfv/experiments.hpp"
#include "hfv/mesh.hpp"

#include <random>
#include <sstream>
#include <string>

namespace hfv::test {

inline double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

inline Mesh mesh_from_text(const std::string& text) {
  std::istringstream in(text);
  return read_polymesh(in);
}

/// One representative of every generator.
inline std::vector<std::pair<std::string, Mesh>> sample_meshes(int n) {
  return {{"cartesian", cartesian_mesh(n)},
          {"triangular", triangular_mesh(n)},
          {"kershaw", kershaw_mesh(n)},
          {"tilted_hexagonal", tilted_hexagonal_mesh(n)}};
}

inline DofVector random_positive(const Mesh& mesh, std::mt19937& rng, double lo = 0.5, double hi = 2.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  DofVector v = DofVector::zero(mesh);
  for (Index i = 0; i < v.cells.size(); ++i) v.cells[i] = dist(rng);
  for (Index i = 0; i < v.faces.size(); ++i) v.faces[i] = dist(rng);
  return v;
}

}  // namespace hfv::test

#endif
