#include "lcm/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "lcm/rng.hpp"

namespace lcm {

namespace {

std::set<long> read_drop_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open row-filter file: " + path);
    std::set<long> drop;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        try {
            drop.insert(std::stol(line));
        } catch (const std::exception&) {
            throw std::runtime_error("row-filter file: bad row index '" + line + "'");
        }
    }
    return drop;
}

std::string trimmed(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

}  // namespace

ResponseMatrix ingest_csv(const std::string& path, std::uint64_t impute_seed,
                          const IngestOptions& opts) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);

    std::set<long> drop;
    if (opts.drop_rows_file) drop = read_drop_list(*opts.drop_rows_file);

    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::vector<double>> rows;
    std::string line;
    long data_row = 0;
    bool skip_header = opts.header;
    while (std::getline(in, line)) {
        if (skip_header) {
            skip_header = false;
            continue;
        }
        if (line.empty()) continue;
        ++data_row;
        if (drop.count(data_row)) continue;

        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        long col = 0;
        while (std::getline(ss, cell, ',')) {
            ++col;
            const std::string c = trimmed(cell);
            if (c == "0") {
                row.push_back(0.0);
            } else if (c == "1") {
                row.push_back(1.0);
            } else if (c == "NA") {
                row.push_back(nan);
            } else {
                throw ParseError("cell must be 0, 1 or NA, got '" + c + "'", data_row, col);
            }
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw ParseError("ragged row", data_row, static_cast<long>(row.size()));
        }
        if (row.empty()) throw ParseError("empty row", data_row, 0);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error("ingest_csv: no data rows in " + path);

    Rng rng = Rng::stream(impute_seed, 0x1395);
    Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (Index i = 0; i < m.rows(); ++i) {
        const auto& row = rows[static_cast<size_t>(i)];
        double sum = 0.0;
        Index observed = 0;
        for (double v : row) {
            if (!std::isnan(v)) {
                sum += v;
                ++observed;
            }
        }
        if (observed == 0) {
            throw std::runtime_error("ingest_csv: row " + std::to_string(i + 1) +
                                     " is entirely missing");
        }
        const double rate = sum / static_cast<double>(observed);
        for (Index j = 0; j < m.cols(); ++j) {
            const double v = row[static_cast<size_t>(j)];
            m(i, j) = std::isnan(v) ? (rng.bernoulli(rate) ? 1.0 : 0.0) : v;
        }
    }
    return ResponseMatrix(std::move(m));
}

}  // namespace lcm
