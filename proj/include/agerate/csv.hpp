#pragma once

#include <string>
#include <vector>

namespace agerate::csv {

/// In-memory delimited table, header row required. Handles RFC-4180 style
/// quoting on read; writes quote only when a field needs it.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string &name) const;           // -1 when absent
    int require_column(const std::string &name) const;   // throws ValidationError
};

Table read_file(const std::string &path, char delim = ',');
Table read_string(const std::string &text, char delim = ',');

void write_file(const std::string &path, const Table &table, char delim = ',');
std::string write_string(const Table &table, char delim = ',');

/// Compact float formatting used for every numeric CSV cell the tool emits
/// (shortest representation that round-trips; stable across runs).
std::string format_double(double v);

double parse_double(const std::string &s, const std::string &context);
long parse_long(const std::string &s, const std::string &context);

} // namespace agerate::csv
