#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <limits>
#include <random>

#include "cascade/io.hpp"

using namespace cascade;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  const auto d = fs::temp_directory_path() / ("cascade_io_" + std::to_string(::getpid()));
  fs::create_directories(d);
  return d;
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST(Csv, EmptyTableIsHeaderOnly) {
  CsvTable t;
  t.columns = {"x", "U"};
  EXPECT_EQ(to_csv(t), "x,U\n");
}

TEST(Csv, OneRowGivesTwoLinesAfterComments) {
  CsvTable t;
  t.columns = {"a", "b"};
  t.comments = config_comments(Json{{"k", 2}, {"f", "quadratic"}});
  t.add_row({1.5, -2.0});
  const auto s = to_csv(t);
  EXPECT_EQ(count_lines(s), t.comments.size() + 2);
  EXPECT_NE(s.find("\na,b\n1.5,-2\n"), std::string::npos);
}

TEST(Csv, RoundTripIsBitExact) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  CsvTable t;
  t.columns = {"v", "w"};
  const double specials[] = {0.1, 1.0 / 3.0, 5e-324, 1.7976931348623157e308, -0.0, 2.0 / 3.0 * 1e-200};
  for (double s : specials) t.add_row({s, -s});
  for (int j = 0; j < 200; ++j) t.add_row({u(rng), std::exp(u(rng) * 1e-4)});
  const auto back = parse_csv(to_csv(t));
  ASSERT_EQ(back.rows.size(), t.rows.size());
  for (std::size_t r = 0; r < t.rows.size(); ++r)
    for (std::size_t c = 0; c < 2; ++c)
      EXPECT_EQ(std::memcmp(&back.rows[r][c], &t.rows[r][c], sizeof(double)), 0) << r << "," << c;
}

TEST(Csv, RejectsRaggedRowsAndBadNumbers) {
  CsvTable t;
  t.columns = {"a", "b"};
  EXPECT_THROW(t.add_row({1.0}), Error);
  EXPECT_THROW(parse_csv("a,b\n1,2,3\n"), Error);
  EXPECT_THROW(parse_csv("a\n1.0x\n"), Error);
  EXPECT_THROW(parse_csv("# only a comment\n"), Error);
}

TEST(Csv, ConfigSurvivesTheCommentBlock) {
  const Json cfg{{"k", 3}, {"alpha", 0.5}, {"frames", "cascade"}, {"list", {1, 2}}};
  CsvTable t;
  t.columns = {"x"};
  t.comments = config_comments(cfg);
  t.comments.push_back("note = free text");
  const auto back = parse_csv(to_csv(t));
  EXPECT_EQ(config_from_comments(back.comments), cfg);
}

TEST(Files, AtomicWriteAndRead) {
  const auto dir = temp_dir();
  const auto p = dir / "sub" / "table.csv";
  CsvTable t;
  t.columns = {"x"};
  t.add_row({4.25});
  emit_csv(p, t);
  EXPECT_EQ(read_csv(p).rows.at(0).at(0), 4.25);
  for (const auto& e : fs::directory_iterator(p.parent_path()))
    EXPECT_EQ(e.path().filename(), "table.csv") << "temporary file left behind";
  emit_json(dir / "doc.json", Json{{"a", 1}});
  EXPECT_EQ(read_json(dir / "doc.json").at("a"), 1);
  fs::remove_all(dir);
}

TEST(Files, IoErrorsCarryTheIoKind) {
  try {
    read_file("/nonexistent/dir/file.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::io);
  }
  try {
    write_atomic("/proc/not/writable.csv", "x");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::io);
  }
}

TEST(Format, SeventeenDigitsAndDotSeparator) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(2.0), "2");
  EXPECT_EQ(parse_double(format_double(M_PI)), M_PI);
  EXPECT_THROW(parse_double("1,5"), Error);
}
