#include "causalkit/kvfile.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

using causalkit::KeyValueFile;

TEST(KeyValueFile, ParsesBasicSyntax) {
  KeyValueFile kv = KeyValueFile::parse_string(
      "# comment\n"
      "space.dim = 64\n"
      "\n"
      "operator.kind = shift   \n"
      "operator.h = -0.5\n"
      "flag = true\n");
  EXPECT_TRUE(kv.has("space.dim"));
  EXPECT_EQ(kv.get_int("space.dim"), 64);
  EXPECT_EQ(kv.get_string("operator.kind"), "shift");
  EXPECT_DOUBLE_EQ(kv.get_double("operator.h"), -0.5);
  EXPECT_TRUE(kv.get_bool("flag"));
  EXPECT_FALSE(kv.has("missing"));
}

TEST(KeyValueFile, FallbacksAndTypeErrors) {
  KeyValueFile kv = KeyValueFile::parse_string("a = 1.5\nb = yes\n");
  EXPECT_EQ(kv.get_int("missing", 7), 7);
  EXPECT_DOUBLE_EQ(kv.get_double("missing", 2.5), 2.5);
  EXPECT_EQ(kv.get_string("missing", "x"), "x");
  EXPECT_FALSE(kv.get_bool("missing", false));
  EXPECT_THROW(kv.get_int("a"), std::invalid_argument);     // 1.5 not an int
  EXPECT_THROW(kv.get_bool("a"), std::invalid_argument);
  EXPECT_THROW(kv.get_double("b"), std::invalid_argument);
  EXPECT_THROW(kv.get_string("missing"), std::invalid_argument);
}

TEST(KeyValueFile, RejectsMalformedLines) {
  EXPECT_THROW(KeyValueFile::parse_string("novalue\n"), std::invalid_argument);
  EXPECT_THROW(KeyValueFile::parse_string("a = \n"), std::invalid_argument);
  EXPECT_THROW(KeyValueFile::parse_string("a = 1\na = 2\n"),
               std::invalid_argument);
  EXPECT_THROW(KeyValueFile::parse_string("bad key = 1\n"),
               std::invalid_argument);
  EXPECT_THROW(KeyValueFile::parse_string("= 1\n"), std::invalid_argument);
}

TEST(KeyValueFile, ListsAndRanges) {
  KeyValueFile kv = KeyValueFile::parse_string(
      "plain = 1, 2.5, -3\n"
      "lin = 0:1:5\n"
      "ints = 0..4\n"
      "one = 7\n");
  std::vector<double> plain = kv.get_double_list("plain");
  ASSERT_EQ(plain.size(), 3u);
  EXPECT_DOUBLE_EQ(plain[1], 2.5);

  std::vector<double> lin = kv.get_double_list("lin");
  ASSERT_EQ(lin.size(), 5u);
  EXPECT_DOUBLE_EQ(lin.front(), 0.0);
  EXPECT_DOUBLE_EQ(lin.back(), 1.0);
  EXPECT_DOUBLE_EQ(lin[2], 0.5);

  std::vector<int> ints = kv.get_int_list("ints");
  ASSERT_EQ(ints.size(), 5u);
  EXPECT_EQ(ints.front(), 0);
  EXPECT_EQ(ints.back(), 4);

  std::vector<double> range = kv.get_double_list("ints");
  ASSERT_EQ(range.size(), 5u);
  EXPECT_DOUBLE_EQ(range[3], 3.0);

  EXPECT_EQ(kv.get_int_list("one"), std::vector<int>{7});
  EXPECT_THROW(kv.get_int_list("plain"), std::invalid_argument);
}

TEST(KeyValueFile, UnconsumedTracksLookups) {
  KeyValueFile kv =
      KeyValueFile::parse_string("used = 1\nother = 2\nspare = 3\n");
  EXPECT_EQ(kv.unconsumed().size(), 3u);
  kv.get_int("used");
  kv.has("other");  // existence checks do not consume the value
  std::vector<std::string> left = kv.unconsumed();
  ASSERT_EQ(left.size(), 2u);
  EXPECT_EQ(left[0], "other");
  EXPECT_EQ(left[1], "spare");
  kv.get_int("other", 0);  // fallback lookups do consume present keys
  EXPECT_EQ(kv.unconsumed(), std::vector<std::string>{"spare"});
}

TEST(KeyValueFile, ParseFileRoundTrip) {
  const std::filesystem::path path =
      std::filesystem::temp_directory_path() / "kvfile_test_config.cfg";
  {
    std::ofstream out(path);
    out << "x = 42\n";
  }
  KeyValueFile kv = KeyValueFile::parse_file(path.string());
  EXPECT_EQ(kv.get_int("x"), 42);
  std::filesystem::remove(path);
  EXPECT_THROW(KeyValueFile::parse_file(path.string()), std::invalid_argument);
}
