#include <catch2/catch_amalgamated.hpp>

#include "lingvar/text.hpp"

using namespace lingvar;

TEST_CASE("case and trimming", "[text]") {
  CHECK(text::to_lower("Nine DOUBLE") == "nine double");
  CHECK(text::trim("  a b \t\n") == "a b");
  CHECK(text::trim("   ").empty());
  CHECK(text::title_case("smith") == "Smith");
}

TEST_CASE("split and join", "[text]") {
  CHECK(text::split("a,b,,c", ',') == std::vector<std::string>{"a", "b", "", "c"});
  CHECK(text::split_whitespace("  one\ttwo  three ") == std::vector<std::string>{"one", "two", "three"});
  CHECK(text::join({"x", "y", "z"}, "-") == "x-y-z");
  CHECK(text::join({}, "-").empty());
  CHECK(text::replace_all("{} and {}", "{}", "x") == "x and x");
}

TEST_CASE("utf8 length counts code points", "[text]") {
  CHECK(text::utf8_length("abc") == 3);
  CHECK(text::utf8_length("caf\xc3\xa9") == 4);
  CHECK(text::utf8_length("\xf0\x9f\x98\x80") == 1);
  CHECK(text::utf8_length("\xff\xfe") == 2);
  CHECK(text::utf8_length("\xc3") == 1);
}

TEST_CASE("fnv1a64 reference values", "[text]") {
  CHECK(text::fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(text::fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(text::hex64(0xabcULL) == "0000000000000abc");
}

TEST_CASE("digit and ascii predicates", "[text]") {
  CHECK(text::is_digits("01234"));
  CHECK_FALSE(text::is_digits(""));
  CHECK_FALSE(text::is_digits("12a"));
  CHECK(text::is_upper_ascii('Q'));
  CHECK_FALSE(text::is_alpha_ascii('1'));
}
