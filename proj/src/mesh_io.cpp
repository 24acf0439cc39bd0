#include "hfv/mesh.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace hfv {

namespace {

/// Line reader that skips blank lines and keeps 1-based line numbers.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++number_;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  }
  std::string expect(const char* what) {
    std::string line;
    if (!next(line)) throw ParseError(number_ + 1, std::string("unexpected end of file, expected ") + what);
    return line;
  }
  int number() const { return number_; }

 private:
  std::istream& in_;
  int number_ = 0;
};

long parse_count(const std::string& line, const std::string& keyword, int lineno) {
  std::istringstream ss(line);
  std::string word;
  long count = -1;
  if (!(ss >> word) || word != keyword || !(ss >> count) || count < 0)
    throw ParseError(lineno, "expected '" + keyword + " <count>'");
  std::string extra;
  if (ss >> extra) throw ParseError(lineno, "trailing characters after count");
  return count;
}

Vec2 parse_point(const std::string& line, int lineno) {
  std::istringstream ss(line);
  double x, y;
  if (!(ss >> x >> y)) throw ParseError(lineno, "expected two coordinates");
  std::string extra;
  if (ss >> extra) throw ParseError(lineno, "trailing characters after coordinates");
  return {x, y};
}

}  // namespace

Mesh read_polymesh(std::istream& in) {
  LineReader reader(in);
  std::string line = reader.expect("header");
  {
    std::istringstream ss(line);
    std::string a, b, extra;
    if (!(ss >> a >> b) || a != "polymesh" || b != "v1" || (ss >> extra))
      throw ParseError(reader.number(), "malformed header, expected 'polymesh v1'");
  }

  line = reader.expect("vertex count");
  const long nv = parse_count(line, "vertices", reader.number());
  std::vector<Vec2> vertices;
  std::vector<int> vertex_lines;
  for (long i = 0; i < nv; ++i) {
    line = reader.expect("vertex");
    vertices.push_back(parse_point(line, reader.number()));
    vertex_lines.push_back(reader.number());
  }

  line = reader.expect("cell count");
  const long nc = parse_count(line, "cells", reader.number());
  std::vector<std::vector<Index>> cells;
  std::vector<int> cell_lines;
  for (long c = 0; c < nc; ++c) {
    line = reader.expect("cell");
    const int lineno = reader.number();
    std::istringstream ss(line);
    long k;
    if (!(ss >> k)) throw ParseError(lineno, "expected vertex count");
    if (k < 3) throw ParseError(lineno, "cell needs ≥3 vertices");
    std::vector<Index> ring(static_cast<std::size_t>(k));
    for (auto& v : ring) {
      long id;
      if (!(ss >> id)) throw ParseError(lineno, "expected " + std::to_string(k) + " vertex indices");
      if (id < 0 || id >= nv) throw ParseError(lineno, "vertex index out of range");
      v = id;
    }
    std::string extra;
    if (ss >> extra) throw ParseError(lineno, "trailing characters after vertex indices");
    cells.push_back(std::move(ring));
    cell_lines.push_back(lineno);
  }

  std::optional<std::vector<Vec2>> centers;
  if (reader.next(line)) {
    const long m = parse_count(line, "centers", reader.number());
    if (m != nc) throw ParseError(reader.number(), "centers count must equal cells count");
    centers.emplace();
    for (long c = 0; c < m; ++c) {
      line = reader.expect("center");
      centers->push_back(parse_point(line, reader.number()));
    }
    if (reader.next(line)) throw ParseError(reader.number(), "unexpected content after centers");
  }

  try {
    return Mesh::from_polygons(std::move(vertices), cells, centers);
  } catch (const TopologyError& e) {
    const auto& lines = e.entity() == "vertex" ? vertex_lines : cell_lines;
    throw ParseError(lines.at(static_cast<std::size_t>(e.index())), e.detail());
  }
}

Mesh read_polymesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open mesh file '" + path + "'");
  return read_polymesh(in);
}

void write_polymesh(std::ostream& out, const Mesh& mesh) {
  out << "polymesh v1\n" << "vertices " << mesh.num_vertices() << '\n';
  out << std::setprecision(17);
  for (const auto& v : mesh.vertices()) out << v.x() << ' ' << v.y() << '\n';
  out << "cells " << mesh.num_cells() << '\n';
  for (const auto& c : mesh.cells()) {
    out << c.vertices.size();
    for (Index v : c.vertices) out << ' ' << v;
    out << '\n';
  }
  out << "centers " << mesh.num_cells() << '\n';
  for (const auto& c : mesh.cells()) out << c.center.x() << ' ' << c.center.y() << '\n';
}

}  // namespace hfv
