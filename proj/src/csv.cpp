#include "vizsim/csv.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include "vizsim/error.hpp"

namespace vizsim::csv {

namespace {

bool needs_quoting(const std::string& field) {
    return field.find_first_of(",\"\r\n") != std::string::npos;
}

void write_field(std::ostream& out, const std::string& field) {
    if (!needs_quoting(field)) {
        out << field;
        return;
    }
    out << '"';
    for (char c : field) {
        if (c == '"') out << '"';
        out << c;
    }
    out << '"';
}

void write_row(std::ostream& out, const Row& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i > 0) out << ',';
        write_field(out, row[i]);
    }
    out << "\r\n";
}

}  // namespace

std::size_t Table::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    throw IoError("csv: no column named '" + name + "'");
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& field) {
    double v = 0.0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
        throw IoError("csv: '" + field + "' is not a number");
    }
    return v;
}

long parse_long(const std::string& field) {
    long v = 0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
        throw IoError("csv: '" + field + "' is not an integer");
    }
    return v;
}

void write(std::ostream& out, const Table& table) {
    write_row(out, table.header);
    for (const Row& row : table.rows) write_row(out, row);
}

void write_file(const std::string& path, const Table& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write(out, table);
    out.flush();
    if (!out) throw IoError("write to '" + path + "' failed");
}

Table read(std::istream& in) {
    std::vector<Row> records;
    Row current;
    std::string field;
    bool in_quotes = false;
    bool field_open = false;  // true once the current record has any content
    char c;
    while (in.get(c)) {
        if (in_quotes) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    field += '"';
                } else {
                    in_quotes = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        switch (c) {
            case '"':
                in_quotes = true;
                field_open = true;
                break;
            case ',':
                current.push_back(field);
                field.clear();
                field_open = true;
                break;
            case '\r':
                if (in.peek() == '\n') in.get(c);
                [[fallthrough]];
            case '\n':
                if (field_open || !field.empty() || !current.empty()) {
                    current.push_back(field);
                    records.push_back(current);
                }
                current.clear();
                field.clear();
                field_open = false;
                break;
            default:
                field += c;
                field_open = true;
                break;
        }
    }
    if (in_quotes) throw IoError("csv: unterminated quoted field");
    if (field_open || !field.empty() || !current.empty()) {
        current.push_back(field);
        records.push_back(current);
    }
    if (records.empty()) throw IoError("csv: missing header row");

    Table table;
    table.header = records.front();
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != table.header.size()) {
            std::ostringstream msg;
            msg << "csv: row " << r << " has " << records[r].size() << " fields, header has "
                << table.header.size();
            throw IoError(msg.str());
        }
        table.rows.push_back(std::move(records[r]));
    }
    return table;
}

Table read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    return read(in);
}

}  // namespace vizsim::csv
