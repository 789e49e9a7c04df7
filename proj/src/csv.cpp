#include "faircrowd/csv.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace faircrowd::csv {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

}  // namespace

int Table::column_index(const std::string& name) const {
    for (size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return static_cast<int>(i);
    }
    return -1;
}

Res<Table> read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) return Err::MalformedEncoding;
    Table t;
    std::string line;
    if (!std::getline(in, line)) return Err::MalformedEncoding;
    for (auto& cell : split_line(line)) t.header.push_back(trim(cell));
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        auto cells = split_line(line);
        for (auto& c : cells) c = trim(c);
        if (cells.size() != t.header.size()) return Err::MalformedEncoding;
        t.rows.push_back(std::move(cells));
    }
    return t;
}

Res<std::vector<uint64_t>> ingest_column(const Table& table, const std::string& column, uint32_t scale,
                                         uint64_t bound) {
    int idx = table.column_index(column);
    if (idx < 0) return Err::UnknownColumn;
    std::vector<uint64_t> out;
    out.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        const std::string& cell = row[idx];
        char* end = nullptr;
        double v = std::strtod(cell.c_str(), &end);
        if (end == cell.c_str() || *end != '\0') return Err::NonNumericCell;
        if (v < 0) return Err::BoundsExceeded;
        double scaled = v * static_cast<double>(scale);
        auto value = static_cast<uint64_t>(std::llround(scaled));
        if (value >= bound) return Err::BoundsExceeded;
        out.push_back(value);
    }
    return out;
}

}  // namespace faircrowd::csv
