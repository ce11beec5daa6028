#ifndef STENCIL_CLI_HPP
#define STENCIL_CLI_HPP

// Command line driver. Kept as a library function (run_cli) so the test suite
// can exercise subcommands in-process; tools/main.cpp is a two-line shim.
//
// Exit codes:
//   0  success
//   1  usage error (bad flags, unknown subcommand)
//   2  template error (tokenizing or directive structure)
//   3  data error (record file syntax)
//   4  expansion error (unresolvable keys, shape mismatches, bad unit names)
//   5  I/O error (unreadable input, refused overwrite, failed write)
//
// All diagnostics go to stderr as "file:line:column: error: message" (the
// position parts appear when known); stdout carries only payload.

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>

#include "stencil/error.hpp"
#include "stencil/expand.hpp"
#include "stencil/lexer.hpp"
#include "stencil/records.hpp"
#include "stencil/template.hpp"

namespace stencil {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitTemplate = 2,
    kExitData = 3,
    kExitExpand = 4,
    kExitIo = 5,
};

namespace detail {

struct IoFailure {
    std::string path;
    std::string message;
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure{path, "cannot open file for reading"};
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw IoFailure{path, "read failed"};
    return std::move(buffer).str();
}

inline void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoFailure{path, "cannot open file for writing"};
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoFailure{path, "write failed"};
}

inline void diagnose(std::ostream& err, std::string_view path, const Error& error) {
    err << path;
    if (error.where().known()) {
        err << ':' << error.where().line;
        if (error.where().column != 0) err << ':' << error.where().column;
    }
    err << ": error: " << error.message() << '\n';
}

inline void diagnose_io(std::ostream& err, const IoFailure& failure) {
    err << failure.path << ": error: " << failure.message << '\n';
}

inline std::string escape_field(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case '\t': out += "\\t"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

struct RunConfig {
    std::string template_path;
    std::string data_path;
    std::string tokenizer = "space";
    std::string name_key = "name";
    std::string out_dir = ".";
    std::string out_suffix;
    bool overwrite = false;

    TokenizerMode mode() const {
        return tokenizer == "lexical" ? TokenizerMode::Lexical : TokenizerMode::Space;
    }
};

// Loads and parses the template, mapping failures to the template exit code.
inline std::optional<Template> load_template(const RunConfig& cfg, std::ostream& err,
                                             int& exit_code) {
    try {
        return parse_template(read_file(cfg.template_path), cfg.mode());
    } catch (const LexError& e) {
        diagnose(err, cfg.template_path, e);
        exit_code = kExitTemplate;
    } catch (const TemplateError& e) {
        diagnose(err, cfg.template_path, e);
        exit_code = kExitTemplate;
    } catch (const IoFailure& failure) {
        diagnose_io(err, failure);
        exit_code = kExitIo;
    }
    return std::nullopt;
}

inline std::optional<std::vector<Record>> load_records(const RunConfig& cfg, std::ostream& err,
                                                       int& exit_code) {
    try {
        return parse_records(read_file(cfg.data_path));
    } catch (const DataError& e) {
        diagnose(err, cfg.data_path, e);
        exit_code = kExitData;
    } catch (const IoFailure& failure) {
        diagnose_io(err, failure);
        exit_code = kExitIo;
    }
    return std::nullopt;
}

inline bool safe_unit_filename(std::string_view name) {
    if (name.empty() || name == "." || name == "..") return false;
    return name.find('/') == std::string_view::npos &&
           name.find('\\') == std::string_view::npos;
}

inline int run_generate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    int exit_code = kExitOk;
    std::optional<Template> tpl = load_template(cfg, err, exit_code);
    if (!tpl) return exit_code;
    std::optional<std::vector<Record>> records = load_records(cfg, err, exit_code);
    if (!records) return exit_code;

    std::vector<GeneratedUnit> units;
    try {
        units = expand_all(*tpl, *records, cfg.name_key);
    } catch (const ExpandError& e) {
        diagnose(err, cfg.template_path, e);
        return kExitExpand;
    }

    try {
        std::filesystem::path dir(cfg.out_dir);
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec) throw IoFailure{cfg.out_dir, "cannot create directory: " + ec.message()};

        // Decide every target path up front so a refused overwrite writes
        // nothing at all.
        std::vector<std::filesystem::path> targets;
        targets.reserve(units.size());
        for (const GeneratedUnit& unit : units) {
            if (!safe_unit_filename(unit.name)) {
                throw IoFailure{unit.name, "unit name is not a safe file name"};
            }
            std::filesystem::path target = dir / (unit.name + cfg.out_suffix);
            if (!cfg.overwrite && std::filesystem::exists(target)) {
                throw IoFailure{target.string(),
                                "refusing to overwrite an existing file (pass --overwrite)"};
            }
            targets.push_back(std::move(target));
        }
        for (std::size_t i = 0; i < units.size(); ++i) {
            write_file(targets[i].string(), units[i].content);
            out << targets[i].string() << '\n';
        }
    } catch (const IoFailure& failure) {
        diagnose_io(err, failure);
        return kExitIo;
    }
    return kExitOk;
}

inline int run_erase(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    int exit_code = kExitOk;
    std::optional<Template> tpl = load_template(cfg, err, exit_code);
    if (!tpl) return exit_code;
    out << erase(*tpl);
    return kExitOk;
}

inline int run_check(const RunConfig& cfg, std::ostream& /*out*/, std::ostream& err) {
    int exit_code = kExitOk;
    std::optional<Template> tpl = load_template(cfg, err, exit_code);
    if (!tpl) return exit_code;
    if (cfg.data_path.empty()) return kExitOk;

    std::optional<std::vector<Record>> records = load_records(cfg, err, exit_code);
    if (!records) return exit_code;
    try {
        // Dry run: every record must expand cleanly; output is discarded.
        for (const Record& record : *records) {
            (void)expand(*tpl, record);
        }
    } catch (const ExpandError& e) {
        diagnose(err, cfg.template_path, e);
        return kExitExpand;
    }
    return kExitOk;
}

inline int run_tokens(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    TokenStream stream;
    try {
        stream = tokenize(read_file(cfg.template_path), cfg.mode());
    } catch (const LexError& e) {
        diagnose(err, cfg.template_path, e);
        return kExitTemplate;
    } catch (const IoFailure& failure) {
        diagnose_io(err, failure);
        return kExitIo;
    }
    for (const Token& token : stream.tokens) {
        out << to_string(token.kind) << '\t' << escape_field(token.leading_trivia) << '\t'
            << escape_field(token.text) << '\n';
    }
    if (!stream.trailing_trivia.empty()) {
        out << "Trailing\t" << escape_field(stream.trailing_trivia) << "\t\n";
    }
    return kExitOk;
}

inline int run_records(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    int exit_code = kExitOk;
    std::optional<std::vector<Record>> records = load_records(cfg, err, exit_code);
    if (!records) return exit_code;
    out << dump_records(*records);
    return kExitOk;
}

}  // namespace detail

/// Runs the command line tool on the given arguments (program name excluded).
/// All output goes to the supplied streams; the return value is the process
/// exit code.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    detail::RunConfig cfg;

    CLI::App app{"Compilable-template code generator", "stencil"};
    app.require_subcommand(1);

    auto add_template_option = [&](CLI::App* cmd) {
        cmd->add_option("--template", cfg.template_path, "Template source file")->required();
    };
    auto add_tokenizer_option = [&](CLI::App* cmd) {
        cmd->add_option("--tokenizer", cfg.tokenizer, "Tokenizer mode")
            ->check(CLI::IsMember({"space", "lexical"}))
            ->capture_default_str();
    };

    CLI::App* generate = app.add_subcommand("generate", "Expand a template over a record file");
    add_template_option(generate);
    generate->add_option("--data", cfg.data_path, "Record file")->required();
    add_tokenizer_option(generate);
    generate->add_option("--name-key", cfg.name_key, "Record key naming each unit")
        ->capture_default_str();
    generate->add_option("--out-dir", cfg.out_dir, "Output directory")->capture_default_str();
    generate->add_option("--out-suffix", cfg.out_suffix, "Appended to every unit name");
    generate->add_flag("--overwrite", cfg.overwrite, "Replace existing output files");

    CLI::App* erase_cmd = app.add_subcommand("erase", "Strip directives, recovering the prototype");
    add_template_option(erase_cmd);
    add_tokenizer_option(erase_cmd);

    CLI::App* check = app.add_subcommand("check", "Validate a template (and optionally data)");
    add_template_option(check);
    check->add_option("--data", cfg.data_path, "Record file");
    add_tokenizer_option(check);

    CLI::App* tokens = app.add_subcommand("tokens", "Dump the template's token stream");
    add_template_option(tokens);
    add_tokenizer_option(tokens);

    CLI::App* records = app.add_subcommand("records", "Parse a record file and dump it");
    records->add_option("--data", cfg.data_path, "Record file")->required();

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("stencil");
    for (const std::string& arg : args) argv.push_back(arg.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (*generate) return detail::run_generate(cfg, out, err);
    if (*erase_cmd) return detail::run_erase(cfg, out, err);
    if (*check) return detail::run_check(cfg, out, err);
    if (*tokens) return detail::run_tokens(cfg, out, err);
    return detail::run_records(cfg, out, err);
}

}  // namespace stencil

#endif  // STENCIL_CLI_HPP
