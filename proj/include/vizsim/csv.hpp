#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vizsim::csv {

using Row = std::vector<std::string>;

/// Header row plus data rows; every row should have header.size() fields.
struct Table {
    Row header;
    std::vector<Row> rows;

    std::size_t columns() const { return header.size(); }
    /// Index of a header column; throws IoError when absent.
    std::size_t column(const std::string& name) const;
};

/// Shortest round-trip decimal form of v (std::to_chars); deterministic,
/// so repeated runs serialize byte-identically.
std::string format_double(double v);

double parse_double(const std::string& field);
long parse_long(const std::string& field);

/// RFC-4180 writer: fields containing separators, quotes, or line breaks
/// are quoted with embedded quotes doubled; records end in CRLF.
void write(std::ostream& out, const Table& table);
void write_file(const std::string& path, const Table& table);

/// RFC-4180 reader; accepts CRLF or LF line endings, requires a header row,
/// and rejects rows whose field count differs from the header's.
Table read(std::istream& in);
Table read_file(const std::string& path);

}  // namespace vizsim::csv
