#ifndef HFV_TYPES_HPP
#define HFV_TYPES_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <functional>
#include <stdexcept>
#include <string>
#include <utility>

namespace hfv {

/// Spatial dimension. All geometry lives in the plane.
inline constexpr int dimension = 2;

using Index = Eigen::Index;
using Vec2 = Eigen::Matrix<double, dimension, 1>;
using Mat2 = Eigen::Matrix<double, dimension, dimension>;
using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

using ScalarField = std::function<double(const Vec2&)>;
using VectorField = std::function<Vec2(const Vec2&)>;
using TensorField = std::function<Mat2(const Vec2&)>;

/// Invalid geometry or topology.
class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed mesh file; the message carries the 1-based line number.
class ParseError : public MeshError {
 public:
  ParseError(int line, const std::string& what)
      : MeshError("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Defect attached to one mesh entity ("cell" or "vertex") so readers can
/// map it back to a line of input.
class TopologyError : public MeshError {
 public:
  TopologyError(std::string entity, Index index, const std::string& what)
      : MeshError(entity + " " + std::to_string(index) + ": " + what),
        entity_(std::move(entity)), index_(index), detail_(what) {}
  const std::string& entity() const { return entity_; }
  Index index() const { return index_; }
  const std::string& detail() const { return detail_; }

 private:
  std::string entity_;
  Index index_;
  std::string detail_;
};

/// Singular or badly conditioned linear system, failed condensation.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a function (e.g. log of a nonpositive value).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace hfv

#endif
