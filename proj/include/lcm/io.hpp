#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lcm/types.hpp"

namespace lcm {

void write_labels(const std::string& path, const LabelVector& labels);

void write_matrix_csv(const std::string& path, const Matrix& m);

/// Plain numeric CSV (no header); used for theta matrices and simulated data.
Matrix read_matrix_csv(const std::string& path);

/// key=value lines, one per entry, in the given order.
void write_kv(const std::string& path, const std::vector<std::pair<std::string, std::string>>& kv);

std::string format_double(double v);

}  // namespace lcm
