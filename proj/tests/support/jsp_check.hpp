#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace xml2jsp::testing {

/// Whitespace-insensitive token stream of JSP/Java text. Words are runs of
/// [A-Za-z0-9_], every other character is its own token, and a string
/// literal is one token with its inner whitespace trimmed and collapsed.
std::vector<std::string> jsp_tokens(std::string_view text);

std::string join_tokens(const std::vector<std::string>& tokens);

/// Index of the first differing token, or nullopt if equal.
std::optional<std::size_t> first_mismatch(const std::vector<std::string>& a, const std::vector<std::string>& b);

/// `<%`/`%>` alternate properly, as a JSP parser sees them: inside a
/// scripting element only `%>` is significant.
bool delimiters_balanced(std::string_view jsp);

/// Braces outside Java string and char literals pair up, scanning only the
/// scripting elements.
bool braces_balanced(std::string_view jsp);

std::string read_file(const std::string& path);

}  // namespace xml2jsp::testing
