#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "xml2jsp/codegen.hpp"

namespace xml2jsp {

/// Writes `program` as a JSP file: the import directive (if requested), one
/// `<%! %>` block for the declarations (omitted when empty), then the body
/// with consecutive scriptlet lines coalesced into `<% %>` blocks.
void emit_program(const JspProgram& program, std::ostream& out, const TranslationOptions& options = {});
std::string render_program(const JspProgram& program, const TranslationOptions& options = {});

/// A sink that writes body items to `body` as they arrive and keeps only the
/// declarations in memory. The final file is write_header() followed by the
/// contents of `body`.
class StreamingEmitter final : public ProgramSink {
public:
    explicit StreamingEmitter(std::ostream& body) : body_(body) {}

    void declaration(Fragment f) override { declarations_.push_back(std::move(f)); }
    void body(BodyItem item) override;

    /// Closes an open scriptlet block. Call once after the last body item.
    void finish_body();

    void write_header(std::ostream& out, const TranslationOptions& options) const;

private:
    std::ostream& body_;
    std::vector<Fragment> declarations_;
    bool in_scriptlet_ = false;
};

}  // namespace xml2jsp
