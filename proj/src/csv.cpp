#include "agerate/csv.hpp"

#include "agerate/errors.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace agerate::csv {

int Table::column(const std::string &name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) {
            return static_cast<int>(i);
        }
    }
    return -1;
}

int Table::require_column(const std::string &name) const {
    int idx = column(name);
    if (idx < 0) {
        throw ValidationError("missing_column", "missing required column: " + name);
    }
    return idx;
}

namespace {

std::vector<std::string> split_line(const std::string &line, char delim) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"' && cur.empty()) {
            quoted = true;
        } else if (c == delim) {
            fields.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

std::string encode_field(const std::string &field, char delim) {
    bool needs_quote = field.find_first_of("\"\n") != std::string::npos ||
                       field.find(delim) != std::string::npos;
    if (!needs_quote) {
        return field;
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') {
            out += "\"\"";
        } else {
            out.push_back(c);
        }
    }
    out.push_back('"');
    return out;
}

} // namespace

Table read_string(const std::string &text, char delim) {
    Table table;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || (line.size() == 1 && line[0] == '\r')) {
            continue;
        }
        auto fields = split_line(line, delim);
        if (first) {
            table.header = std::move(fields);
            first = false;
        } else {
            if (fields.size() != table.header.size()) {
                throw ValidationError("bad_row", "row has " + std::to_string(fields.size()) +
                                                     " fields, header has " +
                                                     std::to_string(table.header.size()));
            }
            table.rows.push_back(std::move(fields));
        }
    }
    if (first) {
        throw ValidationError("empty_file", "delimited input has no header row");
    }
    return table;
}

Table read_file(const std::string &path, char delim) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open for reading: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return read_string(buf.str(), delim);
}

std::string write_string(const Table &table, char delim) {
    std::string out;
    auto append_row = [&](const std::vector<std::string> &row) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) {
                out.push_back(delim);
            }
            out += encode_field(row[i], delim);
        }
        out.push_back('\n');
    };
    append_row(table.header);
    for (const auto &row : table.rows) {
        append_row(row);
    }
    return out;
}

void write_file(const std::string &path, const Table &table, char delim) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open for writing: " + path);
    }
    out << write_string(table, delim);
    if (!out) {
        throw IoError("write failed: " + path);
    }
}

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

double parse_double(const std::string &s, const std::string &context) {
    const char *begin = s.c_str();
    char *end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0') {
        throw ValidationError("bad_number", context + ": not a number: '" + s + "'");
    }
    return v;
}

long parse_long(const std::string &s, const std::string &context) {
    long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw ValidationError("bad_integer", context + ": not an integer: '" + s + "'");
    }
    return v;
}

} // namespace agerate::csv
