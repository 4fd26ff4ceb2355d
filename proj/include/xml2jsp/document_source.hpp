#pragma once

#include <filesystem>
#include <istream>
#include <memory>
#include <string>

namespace xml2jsp {

/// A replayable input: every call to open() yields a fresh stream positioned
/// at the start of the document. Each translation pass reads the document
/// from the beginning.
class DocumentSource {
public:
    static DocumentSource from_file(std::filesystem::path path);
    static DocumentSource from_string(std::string content);

    /// Throws std::runtime_error if the file cannot be opened.
    std::unique_ptr<std::istream> open() const;

    const std::string& name() const noexcept { return name_; }

private:
    DocumentSource() = default;

    std::string name_;
    std::filesystem::path path_;
    std::shared_ptr<const std::string> content_;
};

}  // namespace xml2jsp
