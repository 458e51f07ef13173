#include "synccert/csv.hpp"

#include <cmath>
#include <cstdio>

namespace synccert {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv_row(std::ostream& os, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os << ',';
    os << cells[i];
  }
  os << '\n';
}

void write_matrix_csv(std::ostream& os, const Eigen::MatrixXd& m, const std::vector<std::string>& row_labels,
                      const std::vector<std::string>& col_labels, const std::string& corner) {
  std::vector<std::string> header{corner};
  header.insert(header.end(), col_labels.begin(), col_labels.end());
  write_csv_row(os, header);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    std::vector<std::string> row{row_labels.at(static_cast<std::size_t>(r))};
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(format_double(m(r, c)));
    write_csv_row(os, row);
  }
}

}  // namespace synccert
