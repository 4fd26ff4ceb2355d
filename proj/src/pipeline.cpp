#include "xml2jsp/pipeline.hpp"

#include <algorithm>
#include <tuple>

#include "xml2jsp/event_reader.hpp"
#include "xml2jsp/symbols.hpp"

namespace xml2jsp {

namespace {

Diagnostic reader_diagnostic(const ReaderError& e)
{
    return {Severity::Error, std::string(to_string(e.code())), e.position(), e.detail()};
}

void normalize(Diagnostics& diags)
{
    auto key = [](const Diagnostic& d) { return std::tuple(d.position.byte_offset, d.code, d.message); };
    std::stable_sort(diags.begin(), diags.end(), [&](const Diagnostic& a, const Diagnostic& b) { return key(a) < key(b); });
    diags.erase(std::unique(diags.begin(), diags.end(),
                    [](const Diagnostic& a, const Diagnostic& b) {
                        return a.code == b.code && a.position.byte_offset == b.position.byte_offset;
                    }),
        diags.end());
}

}  // namespace

PipelineResult run_pipeline(const DocumentSource& source, const Schema& schema, const TranslationOptions& options,
    ProgramSink& sink)
{
    PipelineResult result;
    auto& diags = result.diagnostics;
    {
        // Keep the validator's findings up to the point where the reader fails.
        Validator validator(schema);
        try {
            auto in = source.open();
            EventReader reader(*in);
            while (auto ev = reader.next())
                validator.feed(*ev);
        } catch (const ReaderError& e) {
            diags.push_back(reader_diagnostic(e));
        }
        for (const auto& v : validator.diagnostics())
            diags.push_back(v.to_diagnostic());
    }
    result.schema_valid = !has_errors(diags);
    try {
        if (result.schema_valid) {
            auto analysis = analyze(source, schema, options.strict);
            diags.insert(diags.end(), analysis.diagnostics.begin(), analysis.diagnostics.end());

            auto in = source.open();
            EventReader reader(*in);
            auto translated = translate(reader, analysis.table, options, sink);
            diags.insert(diags.end(), translated.begin(), translated.end());
        }
    } catch (const ReaderError& e) {
        diags.push_back(reader_diagnostic(e));
    }
    normalize(diags);
    return result;
}

DocumentTranslation translate_document(const DocumentSource& source, const TranslationOptions& options)
{
    DocumentTranslation out;
    ProgramCollector collector;
    out.result = run_pipeline(source, builtin_schema(), options, collector);
    out.program = std::move(collector.program);
    return out;
}

}  // namespace xml2jsp
