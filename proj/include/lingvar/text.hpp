#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lingvar::text {

std::string to_lower(std::string_view s);
std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
std::vector<std::string> split_whitespace(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::string replace_all(std::string s, std::string_view from, std::string_view to);
std::string title_case(std::string_view word);

bool is_digits(std::string_view s);
bool is_alpha_ascii(char c);
bool is_upper_ascii(char c);
bool is_lower_ascii(char c);

// Number of Unicode code points; malformed bytes count as one each.
std::size_t utf8_length(std::string_view s);

std::uint64_t fnv1a64(std::string_view s);
std::string hex64(std::uint64_t v);

}  // namespace lingvar::text
