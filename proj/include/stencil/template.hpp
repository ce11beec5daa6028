#ifndef STENCIL_TEMPLATE_HPP
#define STENCIL_TEMPLATE_HPP

// Template model. A template is an ordinary source file whose variation
// points are /*C ... */ comments placed in front of the tokens they replace;
// with the comments stripped the file is the unmodified prototype, so it can
// be compiled and tested as-is.
//
// Directive forms:
//   /*C <pattern> */               hole: replaces the next token; the pattern
//                                  mixes literal text with %key% references
//   /*C forall v in k [sep "s"] */ repeat the enclosed region per list element
//   /*C if k [== "s" | != "s"] */  keep the enclosed region conditionally
//   /*C end */                     closes the innermost open block

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "stencil/error.hpp"
#include "stencil/lexer.hpp"

namespace stencil {

/// One segment of a hole pattern. Segments are concatenated with no separator
/// when the hole is filled in.
struct PatternPiece {
    enum class Kind { Literal, Var };
    Kind kind = Kind::Literal;
    std::string text;  // literal text, or the referenced key name

    friend bool operator==(const PatternPiece&, const PatternPiece&) = default;
};

using Pattern = std::vector<PatternPiece>;

struct HoleDirective {
    Pattern pattern;
};

struct ForallDirective {
    std::string loop_var;
    std::string list_key;
    std::optional<std::string> separator;  // emitted verbatim between iterations
};

struct IfDirective {
    enum class Cmp { None, Eq, Ne };
    std::string key;
    Cmp cmp = Cmp::None;
    std::string literal;  // only meaningful when cmp != None
};

struct EndDirective {};

using Directive = std::variant<HoleDirective, ForallDirective, IfDirective, EndDirective>;

namespace detail {

// Cursor over a directive interior.
struct DirectiveCursor {
    std::string_view text;
    std::size_t pos = 0;
    SourceLoc loc;  // of the surrounding comment, for diagnostics

    [[noreturn]] void fail(const std::string& message) const {
        throw TemplateError(ErrorKind::MalformedDirective, loc, message);
    }

    bool done() const { return pos >= text.size(); }

    char peek() const { return done() ? '\0' : text[pos]; }

    void skip_space() {
        while (!done() && is_trivia_char(text[pos])) ++pos;
    }

    std::string_view word() {
        std::size_t start = pos;
        while (!done() && !is_trivia_char(text[pos])) ++pos;
        return text.substr(start, pos - start);
    }

    std::string identifier(const char* role) {
        skip_space();
        std::string_view w = word();
        if (!is_identifier(w)) {
            fail(std::string("expected ") + role + " name, got '" + std::string(w) + "'");
        }
        return std::string(w);
    }

    void keyword(std::string_view expected) {
        skip_space();
        std::string_view w = word();
        if (w != expected) {
            fail("expected '" + std::string(expected) + "', got '" + std::string(w) + "'");
        }
    }

    // "..." with \\, \", \n and \t escapes.
    std::string quoted(const char* role) {
        skip_space();
        if (peek() != '"') fail(std::string("expected quoted ") + role);
        ++pos;
        std::string value;
        for (;;) {
            if (done()) fail(std::string("unterminated quoted ") + role);
            char c = text[pos++];
            if (c == '"') break;
            if (c != '\\') {
                value.push_back(c);
                continue;
            }
            if (done()) fail(std::string("unterminated quoted ") + role);
            char e = text[pos++];
            switch (e) {
                case '\\': value.push_back('\\'); break;
                case '"': value.push_back('"'); break;
                case 'n': value.push_back('\n'); break;
                case 't': value.push_back('\t'); break;
                default: fail(std::string("unknown escape '\\") + e + "' in quoted " + role);
            }
        }
        return value;
    }

    void expect_end() {
        skip_space();
        if (!done()) {
            fail("unexpected trailing text '" + std::string(text.substr(pos)) + "'");
        }
    }
};

// Appends the pattern segments of one whitespace-free piece. %key% spans
// become Var segments, everything else literal text; a lone '%' is an error.
inline void parse_pattern_piece(std::string_view piece, SourceLoc loc, Pattern& pattern) {
    std::string literal;
    auto flush = [&] {
        if (!literal.empty()) {
            pattern.push_back({PatternPiece::Kind::Literal, std::move(literal)});
            literal.clear();
        }
    };
    std::size_t i = 0;
    while (i < piece.size()) {
        if (piece[i] != '%') {
            literal.push_back(piece[i++]);
            continue;
        }
        std::size_t close = piece.find('%', i + 1);
        if (close == std::string_view::npos) {
            throw TemplateError(ErrorKind::MalformedDirective, loc,
                                "unbalanced '%' in hole pattern");
        }
        std::string_view name = piece.substr(i + 1, close - i - 1);
        if (!is_identifier(name)) {
            throw TemplateError(ErrorKind::MalformedDirective, loc,
                                "'%" + std::string(name) + "%' is not a valid key reference");
        }
        flush();
        pattern.push_back({PatternPiece::Kind::Var, std::string(name)});
        i = close + 1;
    }
    flush();
}

}  // namespace detail

/// Parses the interior of a /*C ... */ comment (delimiters already stripped).
/// The optional location is attached to any MalformedDirective thrown.
inline Directive parse_directive(std::string_view interior, SourceLoc loc = {}) {
    // Trim surrounding whitespace.
    std::size_t begin = 0;
    std::size_t end = interior.size();
    while (begin < end && detail::is_trivia_char(interior[begin])) ++begin;
    while (end > begin && detail::is_trivia_char(interior[end - 1])) --end;
    interior = interior.substr(begin, end - begin);

    if (interior.empty()) {
        throw TemplateError(ErrorKind::MalformedDirective, loc, "empty directive");
    }

    detail::DirectiveCursor cursor{interior, 0, loc};
    std::string_view head = cursor.word();

    if (head == "forall") {
        ForallDirective forall;
        forall.loop_var = cursor.identifier("loop variable");
        cursor.keyword("in");
        forall.list_key = cursor.identifier("list key");
        cursor.skip_space();
        if (!cursor.done()) {
            cursor.keyword("sep");
            forall.separator = cursor.quoted("separator");
            cursor.expect_end();
        }
        if (forall.loop_var == forall.list_key) {
            cursor.fail("loop variable must differ from the list key");
        }
        return forall;
    }
    if (head == "if") {
        IfDirective cond;
        cond.key = cursor.identifier("key");
        cursor.skip_space();
        if (!cursor.done()) {
            std::string_view op = cursor.word();
            if (op == "==") {
                cond.cmp = IfDirective::Cmp::Eq;
            } else if (op == "!=") {
                cond.cmp = IfDirective::Cmp::Ne;
            } else {
                cursor.fail("expected '==' or '!=', got '" + std::string(op) + "'");
            }
            cond.literal = cursor.quoted("comparison value");
            cursor.expect_end();
        }
        return cond;
    }
    if (head == "end") {
        cursor.expect_end();
        return EndDirective{};
    }

    // Hole: whitespace splits the interior into pieces; the pieces join into
    // one pattern with nothing between them.
    Pattern pattern;
    detail::DirectiveCursor pieces{interior, 0, loc};
    for (;;) {
        pieces.skip_space();
        if (pieces.done()) break;
        detail::parse_pattern_piece(pieces.word(), loc, pattern);
    }
    return HoleDirective{std::move(pattern)};
}

struct LiteralNode {
    Token token;
};

/// A hole and the token it replaces. The directive's own leading trivia is
/// what survives in output; the run between directive and target is dropped.
struct HoleNode {
    Pattern pattern;
    Token directive;
    std::vector<Token> skipped_comments;  // plain comments between directive and target
    Token target;
};

struct Node;

struct BlockNode {
    std::variant<ForallDirective, IfDirective> header;
    Token directive;  // the opening forall/if comment
    bool at_stream_start = false;
    std::vector<Node> body;
    Token end_directive;
    bool end_at_stream_end = false;
};

struct Node {
    std::variant<LiteralNode, HoleNode, BlockNode> value;
};

struct Template {
    std::vector<Node> body;
    std::string trailing_trivia;
};

namespace detail {

inline std::string_view directive_interior(const Token& token) {
    // text is "/*C" ... "*/"
    std::string_view text = token.text;
    return text.substr(directive_open.size(),
                       text.size() - directive_open.size() - comment_close.size());
}

}  // namespace detail

/// Tokenizes the source and builds the template tree.
///
/// Throws TemplateError:
///  - MalformedDirective: bad directive interior, or a hole directive whose
///    next non-trivia token is another directive (the binding would be
///    ambiguous)
///  - DanglingHole: hole directive with no later token to bind to
///  - UnbalancedBlock: forall/if without end, or a stray end
/// plus any LexError from tokenizing.
inline Template parse_template(std::string_view source, TokenizerMode mode) {
    TokenStream stream = tokenize(source, mode);
    const std::vector<Token>& tokens = stream.tokens;

    Template result;
    std::vector<BlockNode> open_blocks;

    auto current_body = [&]() -> std::vector<Node>& {
        return open_blocks.empty() ? result.body : open_blocks.back().body;
    };

    std::size_t i = 0;
    while (i < tokens.size()) {
        const Token& token = tokens[i];
        if (token.kind != TokenKind::DirectiveComment) {
            current_body().push_back(Node{LiteralNode{token}});
            ++i;
            continue;
        }

        Directive directive = parse_directive(detail::directive_interior(token), token.loc);

        if (auto* hole = std::get_if<HoleDirective>(&directive)) {
            HoleNode node;
            node.pattern = std::move(hole->pattern);
            node.directive = token;
            std::size_t j = i + 1;
            while (j < tokens.size() && tokens[j].kind == TokenKind::PlainComment) {
                node.skipped_comments.push_back(tokens[j]);
                ++j;
            }
            if (j >= tokens.size()) {
                throw TemplateError(ErrorKind::DanglingHole, token.loc,
                                    "hole directive has no token to replace");
            }
            if (tokens[j].kind == TokenKind::DirectiveComment) {
                throw TemplateError(ErrorKind::MalformedDirective, tokens[j].loc,
                                    "directive follows a hole directive; the hole has no "
                                    "token to bind to");
            }
            node.target = tokens[j];
            current_body().push_back(Node{std::move(node)});
            i = j + 1;
            continue;
        }
        if (auto* forall = std::get_if<ForallDirective>(&directive)) {
            BlockNode block;
            block.header = std::move(*forall);
            block.directive = token;
            block.at_stream_start = (i == 0);
            open_blocks.push_back(std::move(block));
            ++i;
            continue;
        }
        if (auto* cond = std::get_if<IfDirective>(&directive)) {
            BlockNode block;
            block.header = std::move(*cond);
            block.directive = token;
            block.at_stream_start = (i == 0);
            open_blocks.push_back(std::move(block));
            ++i;
            continue;
        }
        // end
        if (open_blocks.empty()) {
            throw TemplateError(ErrorKind::UnbalancedBlock, token.loc,
                                "'end' with no open block");
        }
        BlockNode block = std::move(open_blocks.back());
        open_blocks.pop_back();
        block.end_directive = token;
        block.end_at_stream_end = (i + 1 == tokens.size());
        current_body().push_back(Node{std::move(block)});
        ++i;
    }

    if (!open_blocks.empty()) {
        const BlockNode& open = open_blocks.back();
        const char* what = std::holds_alternative<ForallDirective>(open.header)
                               ? "'forall' block is never closed"
                               : "'if' block is never closed";
        throw TemplateError(ErrorKind::UnbalancedBlock, open.directive.loc, what);
    }

    result.trailing_trivia = std::move(stream.trailing_trivia);
    return result;
}

namespace detail {

// Removing a directive also removes the single trivia run that follows it;
// the walk carries that pending removal as a flag.
struct EraseWalker {
    std::string out;
    bool suppress_next_trivia = false;

    void emit(const Token& token) {
        if (!suppress_next_trivia) out += token.leading_trivia;
        suppress_next_trivia = false;
        out += token.text;
    }

    void drop_directive(const Token& directive) {
        if (!suppress_next_trivia) out += directive.leading_trivia;
        suppress_next_trivia = true;
    }

    void walk(const std::vector<Node>& nodes) {
        for (const Node& node : nodes) {
            if (const auto* literal = std::get_if<LiteralNode>(&node.value)) {
                emit(literal->token);
            } else if (const auto* hole = std::get_if<HoleNode>(&node.value)) {
                drop_directive(hole->directive);
                for (const Token& comment : hole->skipped_comments) emit(comment);
                emit(hole->target);
            } else {
                const auto& block = std::get<BlockNode>(node.value);
                drop_directive(block.directive);
                walk(block.body);
                drop_directive(block.end_directive);
            }
        }
    }
};

}  // namespace detail

/// Renders the template with every directive comment deleted, along with the
/// one trivia run that followed each of them. The result is the prototype the
/// template was written from: it contains no /*C and re-parses to the same
/// non-directive tokens.
inline std::string erase(const Template& tpl) {
    detail::EraseWalker walker;
    walker.walk(tpl.body);
    if (!walker.suppress_next_trivia) walker.out += tpl.trailing_trivia;
    return walker.out;
}

}  // namespace stencil

#endif  // STENCIL_TEMPLATE_HPP
