#ifndef STENCIL_TESTS_REFERENCE_RECORDS_HPP
#define STENCIL_TESTS_REFERENCE_RECORDS_HPP

// An independently written, line-oriented record file reader used as an
// oracle for parser fuzzing. It is deliberately structured differently from
// the library parser (regex-free two-phase splitting instead of a cursor
// state machine) and only needs to be correct for grammar-conforming input.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "stencil/records.hpp"

namespace reference {

// Phase 1: cut one line into statements ("k = v, v" chunks) by scanning for
// unquoted ';', tracking quote state character by character.
inline std::vector<std::string> cut_statements(std::string_view line) {
    std::vector<std::string> statements;
    std::string current;
    bool in_quotes = false;
    std::size_t i = 0;
    while (i < line.size()) {
        char c = line[i];
        if (in_quotes) {
            current.push_back(c);
            if (c == '\\' && i + 1 < line.size()) {
                current.push_back(line[i + 1]);
                ++i;
            } else if (c == '"') {
                in_quotes = false;
            }
            ++i;
            continue;
        }
        if (c == '#') break;  // comment: rest of line gone
        if (c == '"') {
            in_quotes = true;
            current.push_back(c);
            ++i;
            continue;
        }
        if (c == ';') {
            statements.push_back(current);
            current.clear();
            ++i;
            continue;
        }
        current.push_back(c);
        ++i;
    }
    std::string_view leftover = current;
    while (!leftover.empty() && (leftover.front() == ' ' || leftover.front() == '\t')) {
        leftover.remove_prefix(1);
    }
    if (!leftover.empty()) {
        throw std::runtime_error("reference parser: statement not closed by ';'");
    }
    return statements;
}

// Phase 2: split one statement into comma-separated raw value texts, again
// fully quote-aware.
inline std::vector<std::string> cut_values(std::string_view text) {
    std::vector<std::string> cells;
    std::string current;
    bool in_quotes = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (in_quotes) {
            current.push_back(c);
            if (c == '\\' && i + 1 < text.size()) {
                current.push_back(text[++i]);
            } else if (c == '"') {
                in_quotes = false;
            }
            continue;
        }
        if (c == '"') {
            in_quotes = true;
            current.push_back(c);
            continue;
        }
        if (c == ',') {
            cells.push_back(current);
            current.clear();
            continue;
        }
        current.push_back(c);
    }
    cells.push_back(current);
    return cells;
}

inline std::string trim_copy(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
    return std::string(text);
}

// Interprets one raw cell: quoted text is unescaped, bare text is trimmed.
inline std::string interpret_cell(std::string_view raw) {
    std::string trimmed = trim_copy(raw);
    if (trimmed.size() < 2 || trimmed.front() != '"') return trimmed;
    std::string value;
    for (std::size_t i = 1; i + 1 < trimmed.size(); ++i) {
        char c = trimmed[i];
        if (c != '\\') {
            value.push_back(c);
            continue;
        }
        char e = trimmed[++i];
        if (e == 'n') {
            value.push_back('\n');
        } else {
            value.push_back(e);  // \\ and \" map to themselves
        }
    }
    return value;
}

inline std::vector<stencil::Record> parse(std::string_view text) {
    std::vector<stencil::Record> records;
    stencil::Record current;

    auto flush = [&] {
        if (!current.entries.empty()) {
            records.push_back(current);
            current = stencil::Record{};
        }
    };

    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t eol = text.find('\n', start);
        std::size_t end = eol == std::string_view::npos ? text.size() : eol;
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        std::string bare = trim_copy(line);
        std::size_t comment = std::string_view::npos;
        {
            bool in_quotes = false;
            for (std::size_t i = 0; i < bare.size(); ++i) {
                if (in_quotes) {
                    if (bare[i] == '\\') ++i;
                    else if (bare[i] == '"') in_quotes = false;
                } else if (bare[i] == '"') {
                    in_quotes = true;
                } else if (bare[i] == '#') {
                    comment = i;
                    break;
                }
            }
        }
        std::string significant =
            trim_copy(comment == std::string_view::npos ? bare : bare.substr(0, comment));

        if (significant == "---") {
            flush();
        } else if (!significant.empty()) {
            for (const std::string& statement : cut_statements(line)) {
                std::size_t equals = statement.find('=');
                // The key side never contains '='; the first one is the split.
                if (equals == std::string::npos) {
                    throw std::runtime_error("reference parser: no '=' in statement");
                }
                std::string key = trim_copy(std::string_view(statement).substr(0, equals));
                std::vector<std::string> cells =
                    cut_values(std::string_view(statement).substr(equals + 1));
                std::vector<std::string> values;
                values.reserve(cells.size());
                for (const std::string& cell : cells) values.push_back(interpret_cell(cell));

                if (current.contains(key)) flush();
                if (values.size() == 1) {
                    current.entries.emplace_back(key, stencil::Value::scalar(values.front()));
                } else {
                    current.entries.emplace_back(key, stencil::Value::list(values));
                }
            }
        }

        if (eol == std::string_view::npos) break;
        start = eol + 1;
    }
    flush();
    return records;
}

}  // namespace reference

#endif  // STENCIL_TESTS_REFERENCE_RECORDS_HPP
