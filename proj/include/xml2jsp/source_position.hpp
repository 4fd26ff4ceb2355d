#pragma once

#include <cstdint>
#include <ostream>

namespace xml2jsp {

/// 1-based line/column plus 0-based byte offset into the input.
/// Columns count UTF-8 code points, not bytes.
struct SourcePosition {
    std::uint32_t line = 1;
    std::uint32_t column = 1;
    std::uint64_t byte_offset = 0;

    friend bool operator==(const SourcePosition&, const SourcePosition&) = default;
    friend auto operator<=>(const SourcePosition& a, const SourcePosition& b) { return a.byte_offset <=> b.byte_offset; }
};

inline std::ostream& operator<<(std::ostream& os, const SourcePosition& p)
{
    return os << p.line << ':' << p.column;
}

}  // namespace xml2jsp
