#ifndef STENCIL_ERROR_HPP
#define STENCIL_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stencil {

/// 1-based position in an input text. line == 0 means "position unknown".
struct SourceLoc {
    std::size_t line = 0;
    std::size_t column = 0;

    bool known() const { return line != 0; }

    friend bool operator==(const SourceLoc&, const SourceLoc&) = default;
};

enum class ErrorKind {
    // tokenizing
    UnterminatedDirective,
    UnterminatedString,
    // template parsing
    MalformedDirective,
    DanglingHole,
    UnbalancedBlock,
    // record files
    DataSyntax,
    EmptyKey,
    // expansion
    UnknownKey,
    NotAList,
    ListInScalarPosition,
    ComparisonOnList,
    MissingNameKey,
    DuplicateUnitName,
};

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::UnterminatedDirective: return "UnterminatedDirective";
        case ErrorKind::UnterminatedString: return "UnterminatedString";
        case ErrorKind::MalformedDirective: return "MalformedDirective";
        case ErrorKind::DanglingHole: return "DanglingHole";
        case ErrorKind::UnbalancedBlock: return "UnbalancedBlock";
        case ErrorKind::DataSyntax: return "DataSyntax";
        case ErrorKind::EmptyKey: return "EmptyKey";
        case ErrorKind::UnknownKey: return "UnknownKey";
        case ErrorKind::NotAList: return "NotAList";
        case ErrorKind::ListInScalarPosition: return "ListInScalarPosition";
        case ErrorKind::ComparisonOnList: return "ComparisonOnList";
        case ErrorKind::MissingNameKey: return "MissingNameKey";
        case ErrorKind::DuplicateUnitName: return "DuplicateUnitName";
    }
    return "Error";
}

namespace detail {

inline std::string compose_error_text(const SourceLoc& loc, const std::string& message) {
    if (!loc.known()) return message;
    std::string text = std::to_string(loc.line);
    if (loc.column != 0) {
        text += ':';
        text += std::to_string(loc.column);
    }
    text += ": ";
    text += message;
    return text;
}

}  // namespace detail

/// Base for all library errors. what() carries a "line:col: " prefix when the
/// position is known; message() is the bare text.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, SourceLoc loc, std::string message)
        : std::runtime_error(detail::compose_error_text(loc, message)),
          kind_(kind),
          loc_(loc),
          message_(std::move(message)) {}

    ErrorKind kind() const { return kind_; }
    const SourceLoc& where() const { return loc_; }
    const std::string& message() const { return message_; }

private:
    ErrorKind kind_;
    SourceLoc loc_;
    std::string message_;
};

// One subclass per pipeline stage; the command line driver maps each stage to
// a distinct exit code.
struct LexError : Error {
    using Error::Error;
};
struct TemplateError : Error {
    using Error::Error;
};
struct DataError : Error {
    using Error::Error;
};
struct ExpandError : Error {
    using Error::Error;
};

}  // namespace stencil

#endif  // STENCIL_ERROR_HPP
