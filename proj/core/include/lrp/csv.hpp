// CSV writer/reader pair (RFC-4180 style: header row, comma separator,
// quoting only when needed). Doubles are formatted shortest-round-trip so a
// write/parse cycle reproduces values bit-identically.
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lrp::csv {

struct CsvError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string format_double(double value);
double parse_double(std::string_view text);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

std::string to_string(const Table& table);
Table parse(std::string_view text);

void write_file(const Table& table, const std::string& path);
Table read_file(const std::string& path);

}  // namespace lrp::csv
