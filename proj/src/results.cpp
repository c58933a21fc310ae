#include "wormdec/results.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

namespace wormdec {

void ResultTable::add_row(std::vector<Value> row) {
    if (row.size() != columns.size()) {
        throw std::logic_error("result row has " + std::to_string(row.size()) + " fields for " +
                               std::to_string(columns.size()) + " columns");
    }
    rows.push_back(std::move(row));
}

void ResultTable::append(const ResultTable& other) {
    if (other.columns != columns) throw std::logic_error("appending a table with a different schema");
    rows.insert(rows.end(), other.rows.begin(), other.rows.end());
}

Format format_from_string(const std::string& name) {
    if (name == "csv") return Format::csv;
    if (name == "jsonl") return Format::jsonl;
    throw std::invalid_argument("unknown output format '" + name + "' (expected csv or jsonl)");
}

std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

namespace {

std::string csv_cell(const Value& v) {
    if (const auto* d = std::get_if<double>(&v)) return format_double(*d);
    if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
    const auto& s = std::get<std::string>(v);
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string quoted = "\"";
    for (const char ch : s) {
        if (ch == '"') quoted += '"';
        quoted += ch;
    }
    quoted += '"';
    return quoted;
}

void write_line(std::ostream& os, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) os << ',';
        os << cells[i];
    }
    os << '\n';
}

}  // namespace

void write_csv(const ResultTable& table, std::ostream& os) {
    std::vector<std::string> header;
    for (const auto& c : table.columns) header.push_back(csv_cell(c));
    write_line(os, header);
    std::vector<std::string> cells;
    for (const auto& row : table.rows) {
        cells.clear();
        for (const auto& v : row) cells.push_back(csv_cell(v));
        write_line(os, cells);
    }
}

void write_jsonl(const ResultTable& table, std::ostream& os) {
    for (const auto& row : table.rows) {
        nlohmann::ordered_json obj;
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::visit([&](const auto& v) { obj[table.columns[i]] = v; }, row[i]);
        }
        os << obj.dump() << '\n';
    }
}

void emit_results(const ResultTable& table, Format format, const std::string& path) {
    auto write = [&](std::ostream& os) {
        if (format == Format::csv) {
            write_csv(table, os);
        } else {
            write_jsonl(table, os);
        }
    };
    if (path == "-") {
        write(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write(out);
    out.flush();
    if (!out) throw IoError("write failure on '" + path + "'");
}

CsvDocument parse_csv(std::istream& is) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string cell;
    bool in_quotes = false;
    bool any = false;
    char ch;
    while (is.get(ch)) {
        any = true;
        if (in_quotes) {
            if (ch == '"') {
                if (is.peek() == '"') {
                    is.get(ch);
                    cell += '"';
                } else {
                    in_quotes = false;
                }
            } else {
                cell += ch;
            }
        } else if (ch == '"') {
            in_quotes = true;
        } else if (ch == ',') {
            record.push_back(std::move(cell));
            cell.clear();
        } else if (ch == '\n') {
            record.push_back(std::move(cell));
            cell.clear();
            records.push_back(std::move(record));
            record.clear();
            any = false;
        } else if (ch != '\r') {
            cell += ch;
        }
    }
    if (any) {
        record.push_back(std::move(cell));
        records.push_back(std::move(record));
    }
    CsvDocument doc;
    if (records.empty()) return doc;
    doc.header = std::move(records.front());
    doc.rows.assign(std::make_move_iterator(records.begin() + 1), std::make_move_iterator(records.end()));
    return doc;
}

CsvDocument read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    return parse_csv(in);
}

}  // namespace wormdec
