#ifndef STENCIL_TESTS_FIXTURES_HPP
#define STENCIL_TESTS_FIXTURES_HPP

// Shared sample inputs: a small Java-ish prototype class, the template
// derived from it, a record file naming three units, and the expected
// generation results. These byte strings are frozen; tests compare against
// them exactly.

#include <string_view>

namespace fixtures {

// The hand-written prototype the template preserves.
inline constexpr std::string_view prototype_source =
    "class A {\n"
    "    public String toString() {\n"
    "        Printer.write(\"A\");\n"
    "    }\n"
    "}\n";

// The prototype with two holes: the class name and the printed string.
inline constexpr std::string_view template_source =
    "class /*C %name% */ A {\n"
    "    public String toString() {\n"
    "        Printer.write( /*C \" %name% \" */ \"A\" );\n"
    "    }\n"
    "}\n";

// Three records, one generated class each.
inline constexpr std::string_view units_data =
    "name = Generated;\n"
    "name = Bar;\n"
    "name = Foo;\n";

// What the first unit should look like after pretty-printing; content
// comparisons against this text are token-level.
inline constexpr std::string_view generated_pretty =
    "class Generated {\n"
    "    public String toString() {\n"
    "        Printer.write(\"Generated\");\n"
    "    }\n"
    "}\n";

// Exact bytes of erase(template_source): each directive comment plus the one
// whitespace run after it is deleted.
inline constexpr std::string_view template_erased =
    "class A {\n"
    "    public String toString() {\n"
    "        Printer.write( \"A\" );\n"
    "    }\n"
    "}\n";

// Exact bytes of expanding template_source with name = Generated.
inline constexpr std::string_view template_expanded =
    "class Generated {\n"
    "    public String toString() {\n"
    "        Printer.write( \"Generated\" );\n"
    "    }\n"
    "}\n";

// Inline repetition: one block directive pair on a single line.
inline constexpr std::string_view inline_forall_template =
    "/*C forall f in fs */ int /*C %f% */ x ; /*C end */";

}  // namespace fixtures

#endif  // STENCIL_TESTS_FIXTURES_HPP
