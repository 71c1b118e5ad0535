// Command-line driver: run scenario files, write the reference presets, and
// sweep seeds.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "cliquesim/harness.hpp"
#include "cliquesim/simnet.hpp"

namespace fs = std::filesystem;
using namespace cliquesim;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNonConvergence = 3;
constexpr int kExitIo = 4;

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

std::pair<std::uint64_t, std::uint64_t> parse_seed_range(const std::string& text) {
  const auto dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      const auto v = std::stoull(text);
      return {v, v};
    }
    return {std::stoull(text.substr(0, dots)), std::stoull(text.substr(dots + 2))};
  } catch (const std::exception&) {
    throw ConfigError(ConfigError::Kind::parse, "--seeds", "expected A..B, got '" + text + "'");
  }
}

int cmd_run(const std::string& scenario, const std::string& out_dir, std::optional<std::uint64_t> seed,
            const std::string& log_format, bool chart) {
  ScenarioConfig config = load_scenario(scenario);
  if (seed) config.seed = *seed;
  const LogFormat format = log_format == "csv" ? LogFormat::csv : LogFormat::plain;

  const RunReport report = run_scenario(config);
  std::cout << format_summary(report);

  const fs::path dir(out_dir);
  ensure_dir(dir);
  export_block_log(report, dir / (format == LogFormat::csv ? "blocks.csv" : "blocks.log"), format);
  std::ofstream summary(dir / "summary.txt");
  if (!summary) throw IoError("cannot write " + (dir / "summary.txt").string());
  summary << format_summary(report);
  if (chart) emit_chart(report, dir / "chart.svg");
  return 0;
}

int cmd_preset(const std::string& name, const std::string& out_dir) {
  const ScenarioConfig config = preset(name);
  const fs::path dir(out_dir);
  ensure_dir(dir);
  const fs::path path = dir / (name + ".scenario");
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << to_text(config);
  std::cout << path.string() << "\n";
  return 0;
}

int cmd_sweep(const std::string& scenario, const std::string& seeds, unsigned threads) {
  const ScenarioConfig config = load_scenario(scenario);
  const auto [first, last] = parse_seed_range(seeds);
  const SweepSummary s = sweep(config, first, last, threads);
  for (const auto& row : s.rows) {
    if (!row.error.empty()) {
      std::cout << "seed " << row.seed << " error " << row.error << "\n";
      continue;
    }
    std::printf("seed %llu height %llu malicious_share %.4f malicious_txs %zu\n",
                static_cast<unsigned long long>(row.seed), static_cast<unsigned long long>(row.height),
                row.malicious_share, row.malicious_txs);
  }
  std::printf("runs %zu failures %zu mean_share %.4f min_share %.4f max_share %.4f\n", s.rows.size(), s.failures,
              s.mean_share, s.min_share, s.max_share);
  return s.failures == 0 ? 0 : kExitNonConvergence;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clique proof-of-authority sealing simulator"};
  app.require_subcommand(1);

  std::string scenario, out_dir = ".", log_format = "plain", preset_name, seeds;
  std::optional<std::uint64_t> seed;
  bool chart = false;
  unsigned threads = 0;

  auto* run = app.add_subcommand("run", "Run one scenario file");
  run->add_option("scenario", scenario, "Scenario file")->required();
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--seed", seed, "Override the scenario seed");
  run->add_option("--log-format", log_format, "Block log format")->check(CLI::IsMember({"plain", "csv"}));
  run->add_flag("--chart", chart, "Also write chart.svg");

  auto* pre = app.add_subcommand("preset", "Write a reference scenario file");
  pre->add_option("name", preset_name, "honest | attack | fixed")
      ->required()
      ->check(CLI::IsMember({"honest", "attack", "fixed"}));
  pre->add_option("--out", out_dir, "Output directory");

  auto* sw = app.add_subcommand("sweep", "Run a scenario across a range of seeds");
  sw->add_option("--seeds", seeds, "Seed range A..B")->required();
  sw->add_option("scenario", scenario, "Scenario file")->required();
  sw->add_option("--threads", threads, "Worker threads (0 = hardware)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return cmd_run(scenario, out_dir, seed, log_format, chart);
    if (*pre) return cmd_preset(preset_name, out_dir);
    if (*sw) return cmd_sweep(scenario, seeds, threads);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  } catch (const NonConvergence& e) {
    std::cerr << "NonConvergence: " << e.what() << "\n";
    return kExitNonConvergence;
  } catch (const IoError& e) {
    std::cerr << "IoError: " << e.what() << "\n";
    return kExitIo;
  }
  return 1;
}
