#include "cliquesim/report.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "cliquesim/harness.hpp"

using namespace cliquesim;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const RunReport& honest_report() {
  static const RunReport r = run_scenario(preset("honest"));
  return r;
}

const RunReport& attack_report() {
  static const RunReport r = run_scenario(preset("attack"));
  return r;
}

std::size_t longest_same_sealer_diff2_run(const RunReport& r) {
  std::size_t best = 0, cur = 0;
  for (std::size_t i = 0; i < r.block_log.size(); ++i) {
    const auto& row = r.block_log[i];
    if (row.difficulty == 2 && i > 0 && r.block_log[i - 1].difficulty == 2 &&
        r.block_log[i - 1].sealer_addr == row.sealer_addr)
      ++cur;
    else
      cur = row.difficulty == 2 ? 1 : 0;
    best = std::max(best, cur);
  }
  return best;
}

}  // namespace

TEST(BlockLog, PlainRowsAreNumberAddrDifficulty) {
  RunReport r;
  r.block_log = {{1, 1, "0xabc", 2, 5000, 50}, {2, 2, "0xdef", 1, 10'000, 49}};
  EXPECT_EQ(format_block_log(r, LogFormat::plain), "1 0xabc 2\n2 0xdef 1\n");
  EXPECT_EQ(format_block_log(r, LogFormat::csv),
            "number,addr,difficulty,time_ms,tx_count\n1,0xabc,2,5000,50\n2,0xdef,1,10000,49\n");
}

TEST(BlockLog, EmptyRunWritesEmptyFile) {
  const auto path = std::filesystem::temp_directory_path() / "cliquesim_empty.log";
  RunReport r;
  export_block_log(r, path);
  EXPECT_EQ(slurp(path), "");
  std::filesystem::remove(path);
}

TEST(BlockLog, HonestRowsRotateThroughFiveSealers) {
  const auto& r = honest_report();
  ASSERT_GE(r.block_log.size(), 5u);
  for (std::size_t i = 0; i + 5 <= r.block_log.size(); ++i) {
    std::set<std::string> window;
    for (std::size_t k = i; k < i + 5; ++k) window.insert(r.block_log[k].sealer_addr);
    ASSERT_EQ(window.size(), 5u) << "at row " << i;
  }
  for (const auto& row : r.block_log) EXPECT_EQ(row.difficulty, 2u);
}

TEST(BlockLog, AttackRowsShowNineRepeats) { EXPECT_GE(longest_same_sealer_diff2_run(attack_report()), 9u); }

TEST(BlockLog, UnwritablePathThrowsIoError) {
  EXPECT_THROW(export_block_log(honest_report(), "/nonexistent-dir/x/blocks.log"), IoError);
  EXPECT_THROW(emit_chart(honest_report(), "/nonexistent-dir/x/chart.svg"), IoError);
}

TEST(Report, TotalsAreConsistent) {
  for (const auto* r : {&honest_report(), &attack_report()}) {
    std::size_t blocks = 0, txs = 0;
    for (const auto& s : r->per_sealer) {
      blocks += s.canonical_blocks;
      txs += s.canonical_txs;
    }
    EXPECT_EQ(blocks, r->height);
    EXPECT_EQ(txs, r->canonical_txs);
    for (std::size_t i = 0; i < r->block_log.size(); ++i) EXPECT_EQ(r->block_log[i].number, i + 1);
  }
}

TEST(Chart, OneBarPerSealerInEachPanel) {
  const std::string svg = render_chart_svg(honest_report());
  std::size_t rects = 0;
  for (auto pos = svg.find("<rect x="); pos != std::string::npos; pos = svg.find("<rect x=", pos + 1)) ++rects;
  EXPECT_EQ(rects, 10u);
  EXPECT_NE(svg.find("Canonical blocks per sealer"), std::string::npos);
  EXPECT_NE(svg.find("Canonical transactions per sealer"), std::string::npos);
  EXPECT_NE(svg.find(">72<"), std::string::npos);
  EXPECT_NE(svg.find(">3600<"), std::string::npos);
}

TEST(Chart, AttackHasDominantBar) {
  const auto& r = attack_report();
  const std::string svg = render_chart_svg(r);
  EXPECT_NE(svg.find(">" + std::to_string(r.per_sealer[2].canonical_blocks) + "<"), std::string::npos);
  EXPECT_GT(r.per_sealer[2].canonical_blocks, 300u);
  EXPECT_GT(r.per_sealer[2].canonical_txs, 15'000u);
  EXPECT_NE(svg.find("#c0392b"), std::string::npos);
}

TEST(Chart, SingleSealerSingleBar) {
  auto c = preset("honest");
  c.n_sealers = 1;
  c.duration_ms = 20'000;
  const std::string svg = render_chart_svg(run_scenario(c));
  std::size_t rects = 0;
  for (auto pos = svg.find("<rect x="); pos != std::string::npos; pos = svg.find("<rect x=", pos + 1)) ++rects;
  EXPECT_EQ(rects, 2u);
}

TEST(Chart, WritesFile) {
  const auto path = std::filesystem::temp_directory_path() / "cliquesim_chart.svg";
  emit_chart(honest_report(), path);
  EXPECT_EQ(slurp(path), render_chart_svg(honest_report()));
  std::filesystem::remove(path);
}
