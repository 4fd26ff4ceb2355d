#include "xml2jsp/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <string>

#include "xml2jsp/emitter.hpp"
#include "xml2jsp/pipeline.hpp"
#include "xml2jsp/schema.hpp"

namespace fs = std::filesystem;

namespace xml2jsp {

namespace {

int io_failure(std::ostream& err, const std::string& file, const std::string& message)
{
    err << format_diagnostic(file, {Severity::Error, "IoError", {}, message}) << '\n';
    return ExitUsage;
}

bool same_file(const fs::path& a, const fs::path& b)
{
    std::error_code ec;
    if (fs::exists(b, ec))
        return fs::equivalent(a, b, ec);
    return fs::weakly_canonical(a, ec) == fs::weakly_canonical(b, ec);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Translate an XML pseudo-code document into a JSP page.", "xml2jsp"};
    std::string input;
    std::string output;
    std::string xsd_path;
    TranslationOptions options;
    app.add_option("input", input, "Input XML document")->required();
    app.add_option("-o,--output", output, "Output JSP file (default: input with a .jsp extension)");
    app.add_flag("--strict", options.strict, "Undeclared loop indices are errors");
    app.add_flag("--check", options.check_only, "Validate and analyze only; write no files");
    app.add_flag("--emit-excep-msg", options.emit_excep_msg, "Print the dB exception message in the catch block");
    app.add_flag("--response-out", options.response_out, "Print with out.println instead of System.out.println");
    app.add_flag("--emit-imports", options.emit_imports, "Add a page directive importing java.sql.*");
    app.add_option("--emit-xsd", xsd_path, "Also write the schema as XSD to this path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return ExitSuccess;
    } catch (const CLI::ParseError& e) {
        err << "xml2jsp: " << e.what() << '\n' << app.help();
        return ExitUsage;
    }
    if (options.check_only && !xsd_path.empty()) {
        err << "xml2jsp: --check writes no files and cannot be combined with --emit-xsd\n";
        return ExitUsage;
    }

    const fs::path in_path(input);
    std::error_code ec;
    if (!fs::is_regular_file(in_path, ec))
        return io_failure(err, input, "cannot read input file");
    const fs::path out_path = output.empty() ? fs::path(in_path).replace_extension(".jsp") : fs::path(output);
    if (!options.check_only && same_file(in_path, out_path)) {
        err << "xml2jsp: output path " << out_path.string() << " would overwrite the input\n";
        return ExitUsage;
    }

    if (!xsd_path.empty()) {
        std::ofstream xsd(xsd_path, std::ios::binary);
        try {
            if (xsd)
                export_xsd(builtin_schema(), xsd);
        } catch (const std::exception&) {
            xsd.setstate(std::ios::failbit);
        }
        if (!xsd)
            return io_failure(err, xsd_path, "cannot write XSD file");
    }

    // Body lines are spooled to disk so that memory stays bounded by the
    // declarations; the result is assembled only after a clean run.
    const fs::path spool_path = out_path.string() + ".partial";
    std::ofstream spool;
    std::ostream discard(nullptr);
    if (!options.check_only) {
        spool.open(spool_path, std::ios::binary | std::ios::trunc);
        if (!spool)
            return io_failure(err, spool_path.string(), "cannot create temporary output file");
    }
    StreamingEmitter emitter(options.check_only ? discard : static_cast<std::ostream&>(spool));

    PipelineResult result;
    try {
        result = run_pipeline(DocumentSource::from_file(in_path), builtin_schema(), options, emitter);
    } catch (const std::exception& e) {
        spool.close();
        fs::remove(spool_path, ec);
        return io_failure(err, input, e.what());
    }
    emitter.finish_body();

    for (const auto& d : result.diagnostics)
        err << format_diagnostic(input, d) << '\n';
    if (!result.ok()) {
        spool.close();
        fs::remove(spool_path, ec);
        return ExitErrors;
    }
    out << "Input validated successfully\n";
    if (options.check_only)
        return ExitSuccess;

    spool.close();
    bool written = !spool.fail();
    if (written) {
        std::ofstream jsp(out_path, std::ios::binary | std::ios::trunc);
        emitter.write_header(jsp, options);
        std::ifstream body(spool_path, std::ios::binary);
        if (body.peek() != std::ifstream::traits_type::eof())
            jsp << body.rdbuf();
        written = static_cast<bool>(jsp);
    }
    fs::remove(spool_path, ec);
    if (!written)
        return io_failure(err, out_path.string(), "cannot write output file");
    return ExitSuccess;
}

}  // namespace xml2jsp
