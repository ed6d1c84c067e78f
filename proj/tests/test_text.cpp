#include <gtest/gtest.h>

#include "atdlab/text.hpp"

using namespace atdlab;

TEST(Tokenize, WordsKeepInnerApostrophes) {
  const auto toks = text::tokenize("Let's go, don't stop!");
  std::vector<std::string> got;
  for (const auto& t : toks) got.emplace_back(t.text);
  EXPECT_EQ(got, (std::vector<std::string>{"Let's", "go", ",", "don't", "stop", "!"}));
  EXPECT_EQ(toks[2].kind, TokenKind::punct);
  EXPECT_EQ(toks[3].span, (Span{10, 15}));
}

TEST(Tokenize, TrailingApostropheIsPunctuation) {
  const auto toks = text::tokenize("boss' desk");
  ASSERT_EQ(toks.size(), 3u);
  EXPECT_EQ(toks[1].text, "'");
}

TEST(Tokenize, EmptyAndBlank) {
  EXPECT_TRUE(text::tokenize("").empty());
  EXPECT_TRUE(text::tokenize(" \n\t ").empty());
  EXPECT_TRUE(text::is_blank(" \r\n"));
  EXPECT_FALSE(text::is_blank(" a "));
}

TEST(Words, LowercasedWithoutPunctuation) {
  EXPECT_EQ(text::words("We need a budget, NOW!"),
            (std::vector<std::string>{"we", "need", "a", "budget", "now"}));
}

TEST(Lines, SplitJoinRoundTrip) {
  for (std::string s : {"", "a", "a\n", "a\nb", "\n\n", "x\n\ny\n"}) EXPECT_EQ(text::join_lines(text::split_lines(s)), s);
}

TEST(Lines, PrefixAndStrip) {
  EXPECT_EQ(text::prefix_lines("We need a budget.", "> "), "> We need a budget.");
  EXPECT_EQ(text::prefix_lines("a\nb", "> "), "> a\n> b");
  std::string out;
  ASSERT_TRUE(text::strip_quote_level("> a\n>b\n> > c", out));
  EXPECT_EQ(out, "a\nb\n> c");
  EXPECT_FALSE(text::strip_quote_level("> a\nb", out));
}

TEST(Normalize, QuotePrefixWhitespaceAndLineEndings) {
  EXPECT_EQ(text::normalize(">>  a\r\n> >b  \n\n"), "> > a\n> > b");
  EXPECT_EQ(text::normalize("plain"), "plain");
  EXPECT_EQ(text::normalize(text::normalize("> x \n")), text::normalize("> x \n"));
}

TEST(EditDistance, TokenLevel) {
  using V = std::vector<std::string>;
  EXPECT_EQ(text::edit_distance(V{}, V{}), 0u);
  EXPECT_EQ(text::edit_distance(V{"a", "b"}, V{}), 2u);
  EXPECT_EQ(text::edit_distance(V{"a", "b", "c"}, V{"a", "x", "c", "d"}), 2u);
  EXPECT_DOUBLE_EQ(text::normalized_edit_distance(V{}, V{}), 0.0);
  EXPECT_DOUBLE_EQ(text::normalized_edit_distance(V{"a"}, V{"b", "c"}), 1.0);
}
