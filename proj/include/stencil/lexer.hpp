#ifndef STENCIL_LEXER_HPP
#define STENCIL_LEXER_HPP

// Loss-free tokenizer. Every byte of the input ends up either in a token's
// text or in the whitespace (trivia) attached in front of the token that
// follows it, so render(tokenize(s, mode)) == s for any input without
// unterminated constructs.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "stencil/error.hpp"

namespace stencil {

enum class TokenKind {
    Word,
    Punct,
    StringLit,
    DirectiveComment,  // /*C ... */
    PlainComment,      // /* ... */ or // ...
};

inline const char* to_string(TokenKind kind) {
    switch (kind) {
        case TokenKind::Word: return "Word";
        case TokenKind::Punct: return "Punct";
        case TokenKind::StringLit: return "StringLit";
        case TokenKind::DirectiveComment: return "DirectiveComment";
        case TokenKind::PlainComment: return "PlainComment";
    }
    return "Token";
}

enum class TokenizerMode {
    Space,    // split on whitespace only; comments are still single tokens
    Lexical,  // identifiers, numbers, strings, comments, single punctuation
};

struct Token {
    std::string leading_trivia;  // whitespace between the previous token and this one
    std::string text;            // never empty
    TokenKind kind = TokenKind::Word;
    SourceLoc loc;               // position of the first byte of text

    friend bool operator==(const Token&, const Token&) = default;
};

struct TokenStream {
    std::vector<Token> tokens;
    std::string trailing_trivia;  // whitespace after the last token
};

namespace detail {

inline bool is_trivia_char(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
}

inline bool is_ident_start(char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}

inline bool is_digit(char c) {
    return c >= '0' && c <= '9';
}

inline bool is_ident_char(char c) {
    return is_ident_start(c) || is_digit(c);
}

inline bool is_identifier(std::string_view text) {
    if (text.empty() || !is_ident_start(text.front())) return false;
    for (char c : text) {
        if (!is_ident_char(c)) return false;
    }
    return true;
}

// Byte cursor that tracks 1-based line/column. Columns count bytes; a tab is
// one column.
struct Scanner {
    std::string_view src;
    std::size_t pos = 0;
    std::size_t line = 1;
    std::size_t column = 1;

    bool done() const { return pos >= src.size(); }

    char peek(std::size_t offset = 0) const {
        return pos + offset < src.size() ? src[pos + offset] : '\0';
    }

    void advance(std::size_t count = 1) {
        for (; count > 0 && pos < src.size(); --count) {
            if (src[pos] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
            ++pos;
        }
    }

    SourceLoc loc() const { return SourceLoc{line, column}; }
};

// True when a comment (plain or directive) starts at src[pos].
inline bool comment_starts_at(std::string_view src, std::size_t pos) {
    return src[pos] == '/' && pos + 1 < src.size() &&
           (src[pos + 1] == '*' || src[pos + 1] == '/');
}

}  // namespace detail

constexpr std::string_view directive_open = "/*C";
constexpr std::string_view comment_close = "*/";

/// Splits source into tokens plus interleaved whitespace.
///
/// Comments are recognized by the same textual scan in both modes, before any
/// other splitting, so the set of directive comments never depends on the
/// mode. The scan has no notion of string literals: a comment opener inside a
/// quoted string starts a comment all the same (and in Lexical mode the
/// stranded quote usually becomes an UnterminatedString error). Keep
/// directives out of string literals.
///
/// Throws LexError:
///  - UnterminatedDirective: a /*C comment with no closing */ (both modes)
///  - UnterminatedString: Lexical mode string left open at end of line/input
///
/// An unterminated plain /* comment is not an error; it extends to the end of
/// the input.
inline TokenStream tokenize(std::string_view source, TokenizerMode mode) {
    TokenStream stream;
    std::string trivia;
    detail::Scanner scan{source};

    auto push = [&](std::size_t start, TokenKind kind, SourceLoc at) {
        Token token;
        token.leading_trivia = std::move(trivia);
        trivia.clear();
        token.text.assign(source.substr(start, scan.pos - start));
        token.kind = kind;
        token.loc = at;
        stream.tokens.push_back(std::move(token));
    };

    while (!scan.done()) {
        char c = scan.peek();
        if (detail::is_trivia_char(c)) {
            trivia.push_back(c);
            scan.advance();
            continue;
        }

        SourceLoc at = scan.loc();
        std::size_t start = scan.pos;

        // Comments first; identical in both modes.
        if (c == '/' && scan.peek(1) == '*') {
            bool directive = scan.peek(2) == 'C';
            std::size_t search_from = scan.pos + (directive ? 3 : 2);
            std::size_t close = source.find(comment_close, search_from);
            if (close == std::string_view::npos) {
                if (directive) {
                    throw LexError(ErrorKind::UnterminatedDirective, at,
                                   "directive comment is never closed");
                }
                scan.advance(source.size() - scan.pos);
                push(start, TokenKind::PlainComment, at);
                continue;
            }
            scan.advance(close + comment_close.size() - scan.pos);
            push(start, directive ? TokenKind::DirectiveComment : TokenKind::PlainComment, at);
            continue;
        }
        if (c == '/' && scan.peek(1) == '/') {
            std::size_t eol = source.find('\n', scan.pos);
            std::size_t end = eol == std::string_view::npos ? source.size() : eol;
            scan.advance(end - scan.pos);
            push(start, TokenKind::PlainComment, at);
            continue;
        }

        if (mode == TokenizerMode::Space) {
            // Maximal run of non-whitespace bytes, cut short where a comment
            // begins.
            while (!scan.done() && !detail::is_trivia_char(scan.peek()) &&
                   !detail::comment_starts_at(source, scan.pos)) {
                scan.advance();
            }
            char first = source[start];
            push(start, detail::is_ident_char(first) ? TokenKind::Word : TokenKind::Punct, at);
            continue;
        }

        // Lexical mode.
        if (detail::is_ident_start(c)) {
            while (!scan.done() && detail::is_ident_char(scan.peek())) scan.advance();
            push(start, TokenKind::Word, at);
        } else if (detail::is_digit(c)) {
            while (!scan.done() && detail::is_digit(scan.peek())) scan.advance();
            if (scan.peek() == '.' && detail::is_digit(scan.peek(1))) {
                scan.advance();
                while (!scan.done() && detail::is_digit(scan.peek())) scan.advance();
            }
            if ((scan.peek() == 'e' || scan.peek() == 'E') &&
                (detail::is_digit(scan.peek(1)) ||
                 ((scan.peek(1) == '+' || scan.peek(1) == '-') && detail::is_digit(scan.peek(2))))) {
                scan.advance(2);
                while (!scan.done() && detail::is_digit(scan.peek())) scan.advance();
            }
            push(start, TokenKind::Word, at);
        } else if (c == '"') {
            scan.advance();
            for (;;) {
                if (scan.done() || scan.peek() == '\n') {
                    throw LexError(ErrorKind::UnterminatedString, at,
                                   "string literal is never closed");
                }
                char d = scan.peek();
                if (d == '\\') {
                    scan.advance();
                    if (scan.done() || scan.peek() == '\n') {
                        throw LexError(ErrorKind::UnterminatedString, at,
                                       "string literal is never closed");
                    }
                    scan.advance();
                    continue;
                }
                scan.advance();
                if (d == '"') break;
            }
            push(start, TokenKind::StringLit, at);
        } else {
            scan.advance();
            push(start, TokenKind::Punct, at);
        }
    }

    stream.trailing_trivia = std::move(trivia);
    return stream;
}

/// Reassembles the exact source the stream was produced from.
inline std::string render(const TokenStream& stream) {
    std::string out;
    for (const Token& token : stream.tokens) {
        out += token.leading_trivia;
        out += token.text;
    }
    out += stream.trailing_trivia;
    return out;
}

}  // namespace stencil

#endif  // STENCIL_LEXER_HPP
