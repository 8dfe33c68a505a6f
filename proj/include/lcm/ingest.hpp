#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "lcm/types.hpp"

namespace lcm {

struct IngestOptions {
    bool header = false;
    /// Optional file of 1-based data-row indices to drop before imputation
    /// (e.g. the rows a study excludes from analysis).
    std::optional<std::string> drop_rows_file;
};

/// Reads a comma-separated file with cells in {0, 1, NA} and imputes each
/// missing cell i.i.d. Bernoulli(row positive rate), deterministically for a
/// given impute_seed. Rows that are entirely missing are an error.
ResponseMatrix ingest_csv(const std::string& path, std::uint64_t impute_seed,
                          const IngestOptions& opts = {});

}  // namespace lcm
