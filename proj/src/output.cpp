#include "hfv/output.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace hfv {

void write_file_atomic(const std::string& path, const std::string& contents) {
  if (path.empty()) throw IoError("empty output path");
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out << contents;
    out.flush();
    if (!out) throw IoError("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot rename onto '" + path + "'");
  }
}

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", value);
  return buf;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header_.size()) throw std::invalid_argument("csv row width mismatch");
  rows_.push_back(std::move(row));
}

std::string CsvTable::str() const {
  std::string out;
  auto line = [&out](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out += ',';
      out += csv_escape(fields[i]);
    }
    out += "\r\n";
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out;
}

CsvTable series_table(const std::vector<TimeSeriesRecord>& records) {
  CsvTable t({"step", "t", "E", "D", "dist_L1_exact", "dist_L1_discrete", "dist_L2", "min_cell", "min_face",
              "negatives_count", "solves_cumulative"});
  for (const auto& r : records)
    t.add_row({std::to_string(r.step), format_real(r.time), format_real(r.entropy), format_real(r.dissipation),
               format_real(r.dist_l1_exact), format_real(r.dist_l1_discrete), format_real(r.dist_l2),
               format_real(r.min_cell), format_real(r.min_face), std::to_string(r.negatives_count),
               std::to_string(r.solves_cumulative)});
  return t;
}

std::string vtk_polydata(const Mesh& mesh, const Eigen::VectorXd& cell_values) {
  if (cell_values.size() != mesh.num_cells()) throw std::invalid_argument("vtk: one value per cell expected");
  std::ostringstream out;
  out << "# vtk DataFile Version 3.0\nhfv solution\nASCII\nDATASET POLYDATA\n";
  out << "POINTS " << mesh.num_vertices() << " double\n";
  for (const auto& v : mesh.vertices()) out << format_real(v.x()) << ' ' << format_real(v.y()) << " 0\n";
  Index size = 0;
  for (const auto& c : mesh.cells()) size += 1 + static_cast<Index>(c.vertices.size());
  out << "POLYGONS " << mesh.num_cells() << ' ' << size << '\n';
  for (const auto& c : mesh.cells()) {
    out << c.vertices.size();
    for (Index v : c.vertices) out << ' ' << v;
    out << '\n';
  }
  out << "CELL_DATA " << mesh.num_cells() << "\nSCALARS u_cell double 1\nLOOKUP_TABLE default\n";
  for (Index c = 0; c < mesh.num_cells(); ++c) out << format_real(cell_values[c]) << '\n';
  return out.str();
}

void export_vtk(const Mesh& mesh, const DofVector& u, const std::string& path) {
  write_file_atomic(path, vtk_polydata(mesh, u.cells));
}

}  // namespace hfv
