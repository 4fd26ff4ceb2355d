#pragma once

#include "xml2jsp/codegen.hpp"
#include "xml2jsp/diagnostic.hpp"
#include "xml2jsp/document_source.hpp"
#include "xml2jsp/schema.hpp"

namespace xml2jsp {

struct PipelineResult {
    Diagnostics diagnostics;  // sorted by position, then code; duplicates removed
    bool schema_valid = false;

    bool ok() const { return !has_errors(diagnostics); }
};

/// Runs the three passes over `source`: well-formedness and schema
/// validation, symbol analysis, then translation into `sink`. Analysis and
/// translation only run on a schema-valid document. Whatever reached `sink`
/// is meaningless unless the result is ok().
PipelineResult run_pipeline(const DocumentSource& source, const Schema& schema, const TranslationOptions& options,
    ProgramSink& sink);

/// In-memory convenience over run_pipeline with the builtin schema.
struct DocumentTranslation {
    PipelineResult result;
    JspProgram program;
};

DocumentTranslation translate_document(const DocumentSource& source, const TranslationOptions& options = {});

}  // namespace xml2jsp
