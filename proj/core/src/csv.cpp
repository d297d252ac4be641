#include "lrp/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace lrp::csv {
namespace {

bool needs_quoting(std::string_view field) {
    return field.find_first_of(",\"\n\r") != std::string_view::npos;
}

void append_field(std::string& out, std::string_view field) {
    if (!needs_quoting(field)) {
        out.append(field);
        return;
    }
    out.push_back('"');
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
}

}  // namespace

std::string format_double(double value) {
    char buf[32];
    const auto result = std::to_chars(buf, buf + sizeof buf, value);
    if (result.ec != std::errc{}) throw CsvError("to_chars failed");
    return std::string(buf, result.ptr);
}

double parse_double(std::string_view text) {
    double value = 0.0;
    const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
    if (result.ec != std::errc{} || result.ptr != text.data() + text.size())
        throw CsvError("malformed numeric field '" + std::string(text) + "'");
    return value;
}

std::string to_string(const Table& table) {
    std::string out;
    auto emit_row = [&out](const std::vector<std::string>& row) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out.push_back(',');
            append_field(out, row[i]);
        }
        out.push_back('\n');
    };
    emit_row(table.header);
    for (const auto& row : table.rows) {
        if (row.size() != table.header.size())
            throw CsvError("row width does not match header");
        emit_row(row);
    }
    return out;
}

Table parse(std::string_view text) {
    Table table;
    std::vector<std::string> row;
    std::string field;
    bool in_quotes = false;
    bool row_started = false;
    std::size_t i = 0;
    auto end_field = [&]() {
        row.push_back(std::move(field));
        field.clear();
    };
    auto end_row = [&]() {
        end_field();
        if (table.header.empty()) table.header = std::move(row);
        else table.rows.push_back(std::move(row));
        row.clear();
        row_started = false;
    };
    while (i < text.size()) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"' && field.empty()) {
            in_quotes = true;
            row_started = true;
        } else if (c == ',') {
            end_field();
            row_started = true;
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            if (row_started || !field.empty() || !row.empty()) end_row();
        } else {
            field.push_back(c);
            row_started = true;
        }
        ++i;
    }
    if (in_quotes) throw CsvError("unterminated quoted field");
    if (row_started || !field.empty() || !row.empty()) end_row();
    for (const auto& r : table.rows)
        if (r.size() != table.header.size())
            throw CsvError("ragged row (got " + std::to_string(r.size()) + " fields, header has " +
                           std::to_string(table.header.size()) + ")");
    return table;
}

void write_file(const Table& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CsvError("cannot open '" + path + "' for writing");
    const std::string text = to_string(table);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw CsvError("write failed for '" + path + "'");
}

Table read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CsvError("cannot open '" + path + "' for reading");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
}

}  // namespace lrp::csv
