#include <gtest/gtest.h>

#include <clocale>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "edgecount/data_io.hpp"
#include "edgecount/digest.hpp"
#include "edgecount/edge_tests.hpp"
#include "edgecount/errors.hpp"
#include "edgecount/graph_io.hpp"
#include "edgecount/json_io.hpp"
#include "test_graphs.hpp"

using namespace edgecount;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "edgecount_unit_io";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Csv, CommaWithHeader) {
  std::istringstream in("a,b\n1,2\n3.5,-4e-1\n");
  const auto pc = read_csv(in);
  EXPECT_EQ(pc.size(), 2u);
  EXPECT_EQ(pc.dim(), 2u);
  EXPECT_EQ(pc.row(1)[1], -0.4);
}

TEST(Csv, TabWithoutHeader) {
  std::istringstream in("1\t2\t3\n4\t5\t6\n7\t8\t9\n");
  const auto pc = read_csv(in);
  EXPECT_EQ(pc.size(), 3u);
  EXPECT_EQ(pc.dim(), 3u);
  EXPECT_EQ(pc.row(2)[0], 7.0);
}

TEST(Csv, IgnoresProcessLocale) {
  const char* old = std::setlocale(LC_NUMERIC, nullptr);
  const std::string saved = old ? old : "C";
  std::setlocale(LC_NUMERIC, "de_DE.UTF-8");  // may be unavailable; harmless if so
  std::istringstream in("0.5,1.25\n2.5,3\n");
  const auto pc = read_csv(in);
  std::setlocale(LC_NUMERIC, saved.c_str());
  EXPECT_EQ(pc.row(0)[0], 0.5);
  EXPECT_EQ(pc.row(0)[1], 1.25);
}

TEST(Csv, Errors) {
  for (const char* text : {"1,2\n3\n", "1,2\n3,x\n", "1,2\n", "", "1,2\nnan,3\n"}) {
    std::istringstream in(text);
    EXPECT_THROW(read_csv(in), DataError) << text;
  }
  EXPECT_THROW(read_csv(fs::path("/nonexistent/file.csv")), DataError);
}

TEST(Csv, RoundTrip) {
  const PointCloud pc(3, 2, {0.1, 1e-300, -2.5, 3.0, 1.0 / 3.0, 7.0});
  std::stringstream ss;
  write_csv(ss, pc);
  const auto back = read_csv(ss);
  for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(back.values()[i], pc.values()[i]);
}

TEST(Distances, BinaryAndTextRoundTrip) {
  const DistanceMatrix dm(4, {1, 2, 3, 4, 5, 6.25});
  const auto bin = temp_file("d.edm");
  const auto txt = temp_file("d.txt");
  write_distances_binary(bin, dm);
  write_distances_text(txt, dm);
  for (const auto& p : {bin, txt}) {
    const auto back = read_distances(p);
    ASSERT_EQ(back.size(), 4u);
    for (std::size_t k = 0; k < 6; ++k) EXPECT_EQ(back.condensed()[k], dm.condensed()[k]);
  }
  std::ifstream in(bin, std::ios::binary);
  char magic[4];
  in.read(magic, 4);
  EXPECT_EQ(std::string(magic, 4), "EDM1");
}

TEST(Distances, Truncated) {
  const auto p = temp_file("short.txt");
  std::ofstream(p) << "4\n1 2 3\n";
  EXPECT_THROW(read_distances(p), DataError);
}

TEST(Labels, ReadFile) {
  const auto p = temp_file("labels.txt");
  std::ofstream(p) << "1 1 2\n2\n";
  EXPECT_EQ(read_labels(p), (std::vector<int>{1, 1, 2, 2}));
  std::ofstream(p) << "1 0 2\n";
  EXPECT_THROW(read_labels(p), DataError);
}

TEST(Digest, KnownVectors) {
  EXPECT_EQ(sha256_hex(std::string_view("abc")), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(sha256_hex(std::string_view("")), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  const auto p = temp_file("abc.txt");
  std::ofstream(p) << "abc";
  EXPECT_EQ(sha256_file(p), sha256_hex(std::string_view("abc")));
  EXPECT_NE(seeds_digest(std::vector<std::uint64_t>{1, 2, 3}), seeds_digest(std::vector<std::uint64_t>{1, 3, 2}));
  EXPECT_THROW(sha256_file("/nonexistent"), DataError);
}

TEST(Json, TestResultFields) {
  const Graph g = edgecount::testing::random_graph(20, 0.3, 1);
  const auto r = asymptotic_test(g, Labels::blocks(10, 10), TestKind::get);
  const Json j = to_json(r);
  for (const char* key : {"test", "statistic", "p_value", "method", "moments", "z_w", "z_d", "counts", "seed"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j.at("test"), "GET");
  EXPECT_TRUE(j.at("seed").is_null());
  EXPECT_TRUE(number_or_null(std::nan("")).is_null());
}

TEST(Json, ConditionReportRegularGraph) {
  const Json j = to_json(condition_report(edgecount::testing::cycle_graph(6)));
  EXPECT_TRUE(j.at("regular").get<bool>());
  EXPECT_TRUE(j.at("c3_ratio").is_null());
  EXPECT_TRUE(j.at("squares_induced").is_null());
}
