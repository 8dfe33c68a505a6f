#include "lcm/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace lcm {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_labels(const std::string& path, const LabelVector& labels) {
    auto out = open_out(path);
    for (Index i = 0; i < labels.size(); ++i) out << labels[i] << '\n';
}

void write_matrix_csv(const std::string& path, const Matrix& m) {
    auto out = open_out(path);
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << format_double(m(i, j));
        }
        out << '\n';
    }
}

Matrix read_matrix_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        long col = 0;
        while (std::getline(ss, cell, ',')) {
            ++col;
            try {
                size_t pos = 0;
                row.push_back(std::stod(cell, &pos));
                while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos])))
                    ++pos;
                if (pos != cell.size()) throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw ParseError("bad numeric cell '" + cell + "'", line_no, col);
            }
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw ParseError("ragged row", line_no, col);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error("empty file: " + path);
    Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j) m(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
    return m;
}

void write_kv(const std::string& path, const std::vector<std::pair<std::string, std::string>>& kv) {
    auto out = open_out(path);
    for (const auto& [key, value] : kv) out << key << '=' << value << '\n';
}

}  // namespace lcm
