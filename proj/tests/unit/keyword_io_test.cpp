#include "entrokey/keyword_io.hpp"

#include <gtest/gtest.h>

#include <sstream>

#include "entrokey/error.hpp"
#include "temp_dir.hpp"

namespace entrokey {
namespace {

const std::vector<KeywordStats> kStats = {
    {"好", 2.0, 0.5, 4, 2},
    {"差", 0.25, 1.75, 2, 5},
    {"服务", 1.0 / 3.0, 0.1, 3, 2},
};

TEST(KeywordIo, WritesHeaderAndSixDecimals) {
  std::ostringstream out;
  write_keyword_list({Polarity::Positive, {"好", "服务"}, {2.75, 2.75}}, kStats, out);
  EXPECT_EQ(out.str(),
            "# polarity=positive alpha=2.75 alpha_prime=2.75\n"
            "word\tpolarity\th_pos\th_neg\talpha\n"
            "好\tpositive\t2.000000\t0.500000\t2.75\n"
            "服务\tpositive\t0.333333\t0.100000\t2.75\n");
}

TEST(KeywordIo, CombinedAlphaCell) {
  std::ostringstream out;
  write_keyword_list({Polarity::Combined, {"差"}, {1.0, 1.25}}, kStats, out);
  EXPECT_NE(out.str().find("差\tcombined\t0.250000\t1.750000\t1/1.25\n"), std::string::npos);
}

TEST(KeywordIo, RoundTrip) {
  testing_support::TempDir dir;
  for (const KeywordList& list :
       {KeywordList{Polarity::Positive, {"好", "服务"}, {2.75, 2.75}},
        KeywordList{Polarity::Negative, {"差"}, {3.75, 3.75}},
        KeywordList{Polarity::Combined, {"好", "差"}, {1.0, 1.25}},
        KeywordList{Polarity::Negative, {}, {3.5, 3.5}}}) {
    const auto path = dir / keyword_list_filename(list);
    save_keyword_list(list, kStats, path);
    EXPECT_EQ(load_keyword_list(path), list);
  }
}

TEST(KeywordIo, FileNames) {
  EXPECT_EQ(keyword_list_filename({Polarity::Positive, {}, {2.75, 2.75}}), "positive_a2.75.tsv");
  EXPECT_EQ(keyword_list_filename({Polarity::Negative, {}, {1.0, 1.0}}), "negative_a1.00.tsv");
  EXPECT_EQ(keyword_list_filename({Polarity::Combined, {}, {1.0, 3.75}}), "combined_a1.00_n3.75.tsv");
}

TEST(KeywordIo, UnknownWordIsAnError) {
  std::ostringstream out;
  EXPECT_THROW(write_keyword_list({Polarity::Positive, {"missing"}, {}}, kStats, out), Error);
}

TEST(KeywordIo, MalformedInput) {
  std::istringstream bad_header("# polarity=positive alpha=1 alpha_prime=1\nword\th_pos\n");
  EXPECT_THROW(read_keyword_list(bad_header), Error);
  std::istringstream bad_row(
      "# polarity=positive alpha=1 alpha_prime=1\nword\tpolarity\th_pos\th_neg\talpha\n好\tpositive\n");
  EXPECT_THROW(read_keyword_list(bad_row), Error);
  EXPECT_THROW(load_keyword_list("/nonexistent/list.tsv"), Error);
}

TEST(KeywordStatsIo, RoundTripIsExact) {
  testing_support::TempDir dir;
  save_keyword_stats(kStats, dir / "stats.tsv");
  const auto back = load_keyword_stats(dir / "stats.tsv");
  ASSERT_EQ(back.size(), kStats.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].word, kStats[i].word);
    EXPECT_EQ(back[i].h_pos, kStats[i].h_pos);
    EXPECT_EQ(back[i].h_neg, kStats[i].h_neg);
    EXPECT_EQ(back[i].df_pos, kStats[i].df_pos);
    EXPECT_EQ(back[i].df_neg, kStats[i].df_neg);
  }
  EXPECT_EQ(testing_support::read_file(dir / "stats.tsv").substr(0, 31), "word\th_pos\th_neg\tdf_pos\tdf_neg\n");
}

}  // namespace
}  // namespace entrokey
