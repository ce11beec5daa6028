#ifndef STENCIL_EXPAND_HPP
#define STENCIL_EXPAND_HPP

// Expansion: walking a template with a record bound, replacing holes and
// unrolling blocks. Literal tokens pass through byte-for-byte; all layout
// questions reduce to what happens to the trivia around each directive:
//
//  - A hole emits its directive's leading trivia, then the substituted
//    pattern; the run between directive and target disappears with the
//    target.
//  - A block directive (forall/if/end) emits nothing itself. If it sits alone
//    on a line, that whole line including its newline disappears; otherwise
//    the directive plus the single trivia run after it disappears.
//
// "Alone on a line" is decided from the template's original layout; what the
// surviving runs contain can still be altered by a preceding directive's
// removal (the walker tracks that as a pending override).

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "stencil/error.hpp"
#include "stencil/records.hpp"
#include "stencil/template.hpp"

namespace stencil {

/// A record plus the loop variables currently in scope. Inner loop variables
/// shadow outer ones and record keys alike.
class Environment {
public:
    explicit Environment(const Record& base) : base_(&base) {}

    struct Lookup {
        enum class Kind { NotFound, Text, List };
        Kind kind = Kind::NotFound;
        std::string_view text;                         // when Text
        const std::vector<std::string>* list = nullptr;  // when List
    };

    Lookup resolve(std::string_view key) const {
        for (auto it = loops_.rbegin(); it != loops_.rend(); ++it) {
            if (it->first == key) return {Lookup::Kind::Text, it->second, nullptr};
        }
        if (const Value* value = base_->find(key)) {
            if (value->is_scalar()) return {Lookup::Kind::Text, value->scalar(), nullptr};
            return {Lookup::Kind::List, {}, &value->list()};
        }
        return {};
    }

    void push_loop(std::string var, std::string element) {
        loops_.emplace_back(std::move(var), std::move(element));
    }

    void pop_loop() { loops_.pop_back(); }

private:
    const Record* base_;
    std::vector<std::pair<std::string, std::string>> loops_;
};

namespace detail {

[[noreturn]] inline void unknown_key(std::string_view key, SourceLoc loc) {
    throw ExpandError(ErrorKind::UnknownKey, loc,
                      "key '" + std::string(key) + "' is not defined");
}

inline std::string substitute_pattern_at(const Pattern& pattern, const Environment& env,
                                         SourceLoc loc) {
    std::string out;
    for (const PatternPiece& piece : pattern) {
        if (piece.kind == PatternPiece::Kind::Literal) {
            out += piece.text;
            continue;
        }
        Environment::Lookup found = env.resolve(piece.text);
        switch (found.kind) {
            case Environment::Lookup::Kind::Text:
                out += found.text;
                break;
            case Environment::Lookup::Kind::List:
                throw ExpandError(ErrorKind::ListInScalarPosition, loc,
                                  "key '" + piece.text + "' is a list but is used where "
                                  "a single value is required");
            case Environment::Lookup::Kind::NotFound:
                unknown_key(piece.text, loc);
        }
    }
    return out;
}

}  // namespace detail

/// Fills a hole pattern from the environment. Every referenced key must
/// resolve to a scalar (or loop variable); lists and missing keys are errors.
inline std::string substitute_pattern(const Pattern& pattern, const Environment& env) {
    return detail::substitute_pattern_at(pattern, env, SourceLoc{});
}

namespace detail {

inline bool contains_newline(std::string_view text) {
    return text.find('\n') != std::string_view::npos;
}

// "foo\n  " -> "foo\n": everything through the last newline.
inline std::string_view through_last_newline(std::string_view text) {
    std::size_t last = text.rfind('\n');
    if (last == std::string_view::npos) return {};
    return text.substr(0, last + 1);
}

// "  \nfoo" -> "foo": everything after the first newline.
inline std::string_view after_first_newline(std::string_view text) {
    std::size_t first = text.find('\n');
    if (first == std::string_view::npos) return {};
    return text.substr(first + 1);
}

struct ExpansionWalker {
    Environment env;
    std::string out;
    // Set when a directive's removal replaces the leading trivia of whatever
    // is emitted next.
    std::optional<std::string> pending;

    explicit ExpansionWalker(const Record& record) : env(record) {}

    std::string take_lead(const std::string& own) {
        if (pending) {
            std::string lead = std::move(*pending);
            pending.reset();
            return lead;
        }
        return own;
    }

    static const std::string& first_leading(const Node& node) {
        if (const auto* literal = std::get_if<LiteralNode>(&node.value)) {
            return literal->token.leading_trivia;
        }
        if (const auto* hole = std::get_if<HoleNode>(&node.value)) {
            return hole->directive.leading_trivia;
        }
        return std::get<BlockNode>(node.value).directive.leading_trivia;
    }

    // follow_after: the trivia run after this list's last node (the enclosing
    // end directive's leading trivia, or the template's trailing trivia).
    void walk(const std::vector<Node>& nodes, const std::string& follow_after) {
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const std::string& follow =
                i + 1 < nodes.size() ? first_leading(nodes[i + 1]) : follow_after;
            if (const auto* literal = std::get_if<LiteralNode>(&nodes[i].value)) {
                out += take_lead(literal->token.leading_trivia);
                out += literal->token.text;
            } else if (const auto* hole = std::get_if<HoleNode>(&nodes[i].value)) {
                expand_hole(*hole);
            } else {
                expand_block(std::get<BlockNode>(nodes[i].value), follow);
            }
        }
    }

    void expand_hole(const HoleNode& hole) {
        out += take_lead(hole.directive.leading_trivia);
        // The run after the directive vanishes; any skipped comments and the
        // substituted text keep their remaining spacing.
        bool first = true;
        for (const Token& comment : hole.skipped_comments) {
            if (!first) out += comment.leading_trivia;
            out += comment.text;
            first = false;
        }
        if (!first) out += hole.target.leading_trivia;
        out += substitute_pattern_at(hole.pattern, env, hole.directive.loc);
    }

    void expand_block(const BlockNode& block, const std::string& follow_after_block) {
        const SourceLoc loc = block.directive.loc;

        // Layout decisions come from the original template text.
        bool head_alone_before =
            block.at_stream_start || contains_newline(block.directive.leading_trivia);
        const std::string& head_follow = block.body.empty()
                                             ? block.end_directive.leading_trivia
                                             : first_leading(block.body.front());
        bool head_whole_line = head_alone_before && contains_newline(head_follow);

        bool end_alone_before = contains_newline(block.end_directive.leading_trivia);
        bool end_alone_after =
            block.end_at_stream_end || contains_newline(follow_after_block);
        bool end_whole_line = end_alone_before && end_alone_after;

        std::string head_lead = take_lead(block.directive.leading_trivia);
        std::string body_head;
        if (head_whole_line) {
            out += through_last_newline(head_lead);
            body_head = std::string(after_first_newline(head_follow));
        } else {
            out += head_lead;
        }

        auto emit_body_once = [&] {
            pending = body_head;
            walk(block.body, block.end_directive.leading_trivia);
            std::string end_lead = take_lead(block.end_directive.leading_trivia);
            out += end_whole_line ? std::string(through_last_newline(end_lead)) : end_lead;
        };

        if (const auto* forall = std::get_if<ForallDirective>(&block.header)) {
            Environment::Lookup items = env.resolve(forall->list_key);
            if (items.kind == Environment::Lookup::Kind::NotFound) {
                unknown_key(forall->list_key, loc);
            }
            if (items.kind != Environment::Lookup::Kind::List) {
                throw ExpandError(ErrorKind::NotAList, loc,
                                  "key '" + forall->list_key +
                                      "' must be a list to be iterated");
            }
            for (std::size_t i = 0; i < items.list->size(); ++i) {
                if (i != 0 && forall->separator) out += *forall->separator;
                env.push_loop(forall->loop_var, (*items.list)[i]);
                emit_body_once();
                env.pop_loop();
            }
        } else {
            if (evaluate(std::get<IfDirective>(block.header), loc)) emit_body_once();
        }

        pending = end_whole_line ? std::string(after_first_newline(follow_after_block))
                                 : std::string();
    }

    bool evaluate(const IfDirective& cond, SourceLoc loc) {
        Environment::Lookup found = env.resolve(cond.key);
        if (cond.cmp == IfDirective::Cmp::None) {
            // Present with a non-empty value; an absent key is simply false.
            switch (found.kind) {
                case Environment::Lookup::Kind::Text: return !found.text.empty();
                case Environment::Lookup::Kind::List: return !found.list->empty();
                case Environment::Lookup::Kind::NotFound: return false;
            }
            return false;
        }
        if (found.kind == Environment::Lookup::Kind::NotFound) {
            unknown_key(cond.key, loc);
        }
        if (found.kind == Environment::Lookup::Kind::List) {
            throw ExpandError(ErrorKind::ComparisonOnList, loc,
                              "key '" + cond.key + "' is a list and cannot be compared");
        }
        bool equal = found.text == cond.literal;
        return cond.cmp == IfDirective::Cmp::Eq ? equal : !equal;
    }
};

}  // namespace detail

/// Expands one template against one record. Deterministic; the record is not
/// modified. Unresolvable keys are hard errors (ExpandError), never empty
/// substitutions.
inline std::string expand(const Template& tpl, const Record& record) {
    detail::ExpansionWalker walker(record);
    walker.walk(tpl.body, tpl.trailing_trivia);
    walker.out += walker.take_lead(tpl.trailing_trivia);
    return walker.out;
}

/// One expansion result; name comes from the record's name key.
struct GeneratedUnit {
    std::string name;
    std::string content;
};

/// Expands the template once per record, in record order. Every record must
/// carry name_key as a non-empty scalar, and names must be unique across the
/// run (the diagnostics refer to records by their 1-based position).
inline std::vector<GeneratedUnit> expand_all(const Template& tpl,
                                             const std::vector<Record>& records,
                                             const std::string& name_key) {
    std::vector<GeneratedUnit> units;
    units.reserve(records.size());
    std::set<std::string> seen;

    for (std::size_t i = 0; i < records.size(); ++i) {
        const Value* name = records[i].find(name_key);
        if (name == nullptr) {
            throw ExpandError(ErrorKind::MissingNameKey, SourceLoc{},
                              "record " + std::to_string(i + 1) + " has no '" + name_key +
                                  "' key");
        }
        if (!name->is_scalar() || name->scalar().empty()) {
            throw ExpandError(ErrorKind::MissingNameKey, SourceLoc{},
                              "record " + std::to_string(i + 1) + " needs '" + name_key +
                                  "' to be a non-empty single value");
        }
        if (!seen.insert(name->scalar()).second) {
            throw ExpandError(ErrorKind::DuplicateUnitName, SourceLoc{},
                              "record " + std::to_string(i + 1) + " reuses the unit name '" +
                                  name->scalar() + "'");
        }
        units.push_back({name->scalar(), expand(tpl, records[i])});
    }
    return units;
}

}  // namespace stencil

#endif  // STENCIL_EXPAND_HPP
