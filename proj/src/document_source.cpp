#include "xml2jsp/document_source.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace xml2jsp {

DocumentSource DocumentSource::from_file(std::filesystem::path path)
{
    DocumentSource src;
    src.name_ = path.string();
    src.path_ = std::move(path);
    return src;
}

DocumentSource DocumentSource::from_string(std::string content)
{
    DocumentSource src;
    src.name_ = "<memory>";
    src.content_ = std::make_shared<const std::string>(std::move(content));
    return src;
}

std::unique_ptr<std::istream> DocumentSource::open() const
{
    if (content_)
        return std::make_unique<std::istringstream>(*content_);
    auto in = std::make_unique<std::ifstream>(path_, std::ios::binary);
    if (!*in)
        throw std::runtime_error("cannot open '" + path_.string() + "'");
    return in;
}

}  // namespace xml2jsp
