#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace patronnet::csv {

// A required column is missing, or the file itself cannot be parsed.
struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Row {
    std::size_t line = 0;  // 1-based physical line of the first character
    std::vector<std::string> fields;
};

struct Table {
    std::vector<std::string> header;
    std::vector<Row> rows;
};

// RFC-4180-ish parser: quoted fields, doubled-quote escapes, CRLF tolerated.
Table parse(const std::string& text);

Table read_file(const std::filesystem::path& path);

// Maps header names to field positions; throws SchemaError when a
// required column is absent.
class Columns {
public:
    Columns(const Table& table, const std::vector<std::string>& required,
            const std::string& file_label);

    const std::string& get(const Row& row, const std::string& name) const;

private:
    std::map<std::string, std::size_t> index_;
    std::string file_label_;
    static const std::string empty_;
};

std::string escape(const std::string& field);
std::string join_row(const std::vector<std::string>& fields);

}  // namespace patronnet::csv
