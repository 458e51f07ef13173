#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace synccert {

/// 17 significant digits, round-trip exact; "nan" / "inf" / "-inf" for non-finite values.
std::string format_double(double v);

void write_csv_row(std::ostream& os, const std::vector<std::string>& cells);

/// Row-major matrix dump: header "<corner>,<col labels...>", one row per label.
void write_matrix_csv(std::ostream& os, const Eigen::MatrixXd& m, const std::vector<std::string>& row_labels,
                      const std::vector<std::string>& col_labels, const std::string& corner);

}  // namespace synccert
