// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace tcqa {

// UTF-8 helpers. Invalid byte sequences decode to U+FFFD, one per bad byte.
std::u32string decode_utf8(std::string_view s);
std::string encode_utf8(std::u32string_view s);
void append_utf8(std::string& out, char32_t cp);

// HTML whitespace: space, tab, LF, FF, CR.
constexpr bool is_html_space(char c) noexcept {
  return c == ' ' || c == '\t' || c == '\n' || c == '\f' || c == '\r';
}

/// Collapses runs of HTML whitespace to one space and trims both ends.
std::string collapse_whitespace(std::string_view s);

}  // namespace tcqa
