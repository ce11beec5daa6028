#ifndef STENCIL_RECORDS_HPP
#define STENCIL_RECORDS_HPP

// Record files hold the values that fill a template, one record per generated
// unit:
//
//     # comment
//     name = Point;
//     fields = "x", "y";      # two or more comma-separated values make a list
//     ---                     # optional separator; a repeated key also
//     name = Line;            # starts a new record
//
// Values are either bare (anything up to the next unquoted ',' or ';',
// trimmed) or quoted with \", \\ and \n escapes. An assignment must finish on
// the line it starts on, and '#' outside quotes comments out the rest of the
// line.

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "stencil/error.hpp"
#include "stencil/lexer.hpp"  // identifier checks, trivia helpers

namespace stencil {

/// A scalar string or a list of strings.
class Value {
public:
    static Value scalar(std::string text) { return Value(std::move(text)); }
    static Value list(std::vector<std::string> items) { return Value(std::move(items)); }

    bool is_scalar() const { return std::holds_alternative<std::string>(data_); }
    bool is_list() const { return !is_scalar(); }

    const std::string& scalar() const { return std::get<std::string>(data_); }
    const std::vector<std::string>& list() const { return std::get<std::vector<std::string>>(data_); }

    friend bool operator==(const Value&, const Value&) = default;

private:
    explicit Value(std::string text) : data_(std::move(text)) {}
    explicit Value(std::vector<std::string> items) : data_(std::move(items)) {}

    std::variant<std::string, std::vector<std::string>> data_;
};

/// Ordered key/value entries; keys are unique within one record.
struct Record {
    std::vector<std::pair<std::string, Value>> entries;

    const Value* find(std::string_view key) const {
        for (const auto& [entry_key, value] : entries) {
            if (entry_key == key) return &value;
        }
        return nullptr;
    }

    bool contains(std::string_view key) const { return find(key) != nullptr; }

    friend bool operator==(const Record&, const Record&) = default;
};

namespace detail {

inline bool is_blank_char(char c) {
    return c == ' ' || c == '\t';
}

// One source line plus its 1-based number.
struct DataLine {
    std::string_view text;
    std::size_t number = 0;
};

inline std::vector<DataLine> split_lines(std::string_view text) {
    std::vector<DataLine> lines;
    std::size_t start = 0;
    std::size_t number = 1;
    while (start <= text.size()) {
        std::size_t eol = text.find('\n', start);
        std::size_t end = eol == std::string_view::npos ? text.size() : eol;
        std::string_view line = text.substr(start, end - start);
        // Line endings are not part of values; tolerate CRLF input.
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back({line, number});
        if (eol == std::string_view::npos) break;
        start = eol + 1;
        ++number;
    }
    return lines;
}

struct AssignmentParser {
    std::string_view line;
    std::size_t line_number;
    std::size_t pos = 0;

    [[noreturn]] void fail(ErrorKind kind, const std::string& message) const {
        throw DataError(kind, SourceLoc{line_number, pos + 1}, message);
    }

    bool done() const { return pos >= line.size(); }

    char peek() const { return done() ? '\0' : line[pos]; }

    void skip_blank() {
        while (!done() && is_blank_char(line[pos])) ++pos;
    }

    // True once the rest of the line is insignificant.
    bool at_line_end() {
        skip_blank();
        return done() || peek() == '#';
    }

    std::string key() {
        skip_blank();
        if (peek() == '=') fail(ErrorKind::EmptyKey, "assignment has no key");
        std::size_t start = pos;
        while (!done() && is_ident_char(line[pos])) ++pos;
        std::string_view name = line.substr(start, pos - start);
        if (name.empty()) {
            fail(ErrorKind::DataSyntax, "expected a key");
        }
        if (!is_identifier(name)) {
            fail(ErrorKind::DataSyntax, "'" + std::string(name) + "' is not a valid key");
        }
        return std::string(name);
    }

    void equals() {
        skip_blank();
        if (peek() != '=') fail(ErrorKind::DataSyntax, "expected '=' after the key");
        ++pos;
    }

    std::string quoted_value() {
        ++pos;  // opening quote
        std::string value;
        for (;;) {
            if (done()) fail(ErrorKind::DataSyntax, "unterminated quote");
            char c = line[pos++];
            if (c == '"') return value;
            if (c != '\\') {
                value.push_back(c);
                continue;
            }
            if (done()) fail(ErrorKind::DataSyntax, "unterminated quote");
            char e = line[pos++];
            switch (e) {
                case '\\': value.push_back('\\'); break;
                case '"': value.push_back('"'); break;
                case 'n': value.push_back('\n'); break;
                default: fail(ErrorKind::DataSyntax, std::string("unknown escape '\\") + e + "'");
            }
        }
    }

    std::string bare_value() {
        std::size_t start = pos;
        while (!done() && peek() != ',' && peek() != ';' && peek() != '#') ++pos;
        if (done() || peek() == '#') {
            fail(ErrorKind::DataSyntax, "missing ';' at end of assignment");
        }
        std::string_view raw = line.substr(start, pos - start);
        while (!raw.empty() && is_blank_char(raw.front())) raw.remove_prefix(1);
        while (!raw.empty() && is_blank_char(raw.back())) raw.remove_suffix(1);
        return std::string(raw);
    }

    // Everything between '=' and ';'.
    std::vector<std::string> values() {
        std::vector<std::string> list;
        for (;;) {
            skip_blank();
            if (done() || peek() == '#') {
                fail(ErrorKind::DataSyntax, "missing ';' at end of assignment");
            }
            if (peek() == ';' || peek() == ',') {
                fail(ErrorKind::DataSyntax, "empty value");
            }
            if (peek() == '"') {
                list.push_back(quoted_value());
                skip_blank();
                if (done() || peek() == '#') {
                    fail(ErrorKind::DataSyntax, "missing ';' at end of assignment");
                }
                if (peek() != ',' && peek() != ';') {
                    fail(ErrorKind::DataSyntax, "expected ',' or ';' after a value");
                }
            } else {
                list.push_back(bare_value());
            }
            if (peek() == ';') {
                ++pos;
                return list;
            }
            ++pos;  // ','
        }
    }
};

}  // namespace detail

/// Parses a record file. Records appear in file order; entries keep their
/// assignment order. Throws DataError (DataSyntax or EmptyKey) with the line
/// number of the offending assignment.
inline std::vector<Record> parse_records(std::string_view text) {
    std::vector<Record> records;
    Record current;

    auto flush = [&] {
        if (!current.entries.empty()) {
            records.push_back(std::move(current));
            current = Record{};
        }
    };

    for (const detail::DataLine& line : detail::split_lines(text)) {
        detail::AssignmentParser parser{line.text, line.number};
        if (parser.at_line_end()) continue;

        // A separator line holds exactly "---" (plus blanks or a comment).
        if (line.text.substr(parser.pos, 3) == "---") {
            std::size_t after = parser.pos + 3;
            detail::AssignmentParser rest{line.text, line.number, after};
            if (rest.at_line_end()) {
                flush();
                continue;
            }
        }

        while (!parser.at_line_end()) {
            std::string key = parser.key();
            parser.equals();
            std::vector<std::string> values = parser.values();
            if (current.contains(key)) flush();
            Value value = values.size() == 1 ? Value::scalar(std::move(values.front()))
                                             : Value::list(std::move(values));
            current.entries.emplace_back(std::move(key), std::move(value));
        }
    }

    flush();
    return records;
}

/// Returns text that parses back to exactly the given scalar: bare when that
/// is unambiguous, quoted (with escapes) otherwise.
inline std::string quote_value(std::string_view text) {
    bool needs_quotes = text.empty() || text.front() == '"' ||
                        detail::is_blank_char(text.front()) || detail::is_blank_char(text.back());
    for (char c : text) {
        if (c == ',' || c == ';' || c == '#' || c == '\n' || c == '\r') {
            needs_quotes = true;
            break;
        }
    }
    if (!needs_quotes) return std::string(text);

    std::string quoted = "\"";
    for (char c : text) {
        switch (c) {
            case '\\': quoted += "\\\\"; break;
            case '"': quoted += "\\\""; break;
            case '\n': quoted += "\\n"; break;
            default: quoted.push_back(c);
        }
    }
    quoted += '"';
    return quoted;
}

/// Canonical text form: one assignment per line, records separated by "---".
/// Records produced by parse_records round-trip; lists of fewer than two
/// elements (only constructible through the API) have no file form.
inline std::string dump_records(const std::vector<Record>& records) {
    std::string out;
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (i != 0) out += "---\n";
        for (const auto& [key, value] : records[i].entries) {
            out += key;
            out += " = ";
            if (value.is_scalar()) {
                out += quote_value(value.scalar());
            } else {
                const std::vector<std::string>& items = value.list();
                for (std::size_t j = 0; j < items.size(); ++j) {
                    if (j != 0) out += ", ";
                    out += quote_value(items[j]);
                }
            }
            out += ";\n";
        }
    }
    return out;
}

}  // namespace stencil

#endif  // STENCIL_RECORDS_HPP
