#pragma once

#include <string>
#include <vector>

#include "faircrowd/result.hpp"

namespace faircrowd::csv {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column_index(const std::string& name) const;
};

Res<Table> read_file(const std::string& path);

// Fixed-point ingestion: reading * scale rounded to integer. Negative values
// and values at or above `bound` are rejected.
Res<std::vector<uint64_t>> ingest_column(const Table& table, const std::string& column, uint32_t scale,
                                         uint64_t bound);

}  // namespace faircrowd::csv
