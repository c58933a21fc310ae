// results.hpp — flat result tables and their CSV / json-lines writers

#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace wormdec {

using Value = std::variant<double, std::int64_t, std::string>;

// Rows share one column schema; every row carries the parameters that produced it.
struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<Value>> rows;

    void add_row(std::vector<Value> row);
    void append(const ResultTable& other);
};

enum class Format { csv, jsonl };

Format format_from_string(const std::string& name);

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Shortest form guaranteed to round-trip: 17 significant digits.
std::string format_double(double v);

void write_csv(const ResultTable& table, std::ostream& os);
void write_jsonl(const ResultTable& table, std::ostream& os);

// Writes to `path`, or to stdout when path is "-".
void emit_results(const ResultTable& table, Format format, const std::string& path);

// Header + rows as raw cell strings (RFC 4180 quoting).
struct CsvDocument {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

CsvDocument parse_csv(std::istream& is);
CsvDocument read_csv(const std::string& path);

}  // namespace wormdec
