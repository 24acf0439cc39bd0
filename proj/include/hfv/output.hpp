#ifndef HFV_OUTPUT_HPP
#define HFV_OUTPUT_HPP

#include "hfv/experiments.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace hfv {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Writes `contents` to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::string& path, const std::string& contents);

/// Scientific notation with 17 significant digits; "nan"/"inf" for non-finite.
std::string format_real(double value);

/// RFC-4180 table.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
  void add_row(std::vector<std::string> row);
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

std::string csv_escape(const std::string& field);

CsvTable series_table(const std::vector<TimeSeriesRecord>& records);

/// Legacy VTK POLYDATA with cell scalars `u_cell`.
std::string vtk_polydata(const Mesh& mesh, const Eigen::VectorXd& cell_values);
void export_vtk(const Mesh& mesh, const DofVector& u, const std::string& path);

}  // namespace hfv

#endif
