#include "patronnet/csv.hpp"

#include <fstream>
#include <sstream>

namespace patronnet::csv {

const std::string Columns::empty_{};

Table parse(const std::string& text) {
    Table table;
    std::vector<std::string> fields;
    std::string field;
    bool in_quotes = false;
    bool any_field = false;
    std::size_t line = 1;
    std::size_t row_start_line = 1;

    auto flush_field = [&] {
        fields.push_back(field);
        field.clear();
        any_field = true;
    };
    auto flush_row = [&] {
        if (any_field || !fields.empty()) {
            flush_field();
            if (table.header.empty()) {
                table.header = fields;
            } else {
                table.rows.push_back(Row{row_start_line, fields});
            }
            fields.clear();
            any_field = false;
        }
        row_start_line = line;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            flush_field();
        } else if (c == '\r') {
            // swallowed; \r\n handled by the \n branch
        } else if (c == '\n') {
            ++line;
            if (any_field || !field.empty()) flush_row();
            row_start_line = line;
        } else {
            field.push_back(c);
        }
    }
    if (in_quotes) throw SchemaError("unterminated quoted field");
    if (any_field || !field.empty()) flush_row();
    return table;
}

Table read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError("cannot open file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

Columns::Columns(const Table& table, const std::vector<std::string>& required,
                 const std::string& file_label)
    : file_label_(file_label) {
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        index_.emplace(table.header[i], i);
    }
    for (const auto& name : required) {
        if (!index_.count(name)) {
            throw SchemaError(file_label + ": missing required column '" + name + "'");
        }
    }
}

const std::string& Columns::get(const Row& row, const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) {
        throw SchemaError(file_label_ + ": unknown column '" + name + "'");
    }
    if (it->second >= row.fields.size()) return empty_;
    return row.fields[it->second];
}

std::string escape(const std::string& field) {
    bool needs_quotes = field.find_first_of(",\"\n\r") != std::string::npos;
    if (!needs_quotes) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += "\"";
    return out;
}

std::string join_row(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.push_back(',');
        out += escape(fields[i]);
    }
    out.push_back('\n');
    return out;
}

}  // namespace patronnet::csv
