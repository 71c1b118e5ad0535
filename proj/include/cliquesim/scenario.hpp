#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cliquesim/clique.hpp"
#include "cliquesim/strategy.hpp"

namespace cliquesim {

class ConfigError : public std::runtime_error {
 public:
  enum class Kind { parse, validation };

  ConfigError(Kind kind, std::string location, const std::string& message)
      : std::runtime_error((kind == Kind::parse ? "ParseError: " : "ValidationError: ") + location + ": " + message),
        kind_(kind),
        location_(std::move(location)),
        detail_(message) {}

  Kind kind() const { return kind_; }
  const std::string& location() const { return location_; }
  const std::string& detail() const { return detail_; }

 private:
  Kind kind_;
  std::string location_;
  std::string detail_;
};

struct SealerOverride {
  std::optional<SealerPolicy> policy;
  std::optional<VerifyFlags> flags;

  friend bool operator==(const SealerOverride&, const SealerOverride&) = default;
};

struct ScenarioConfig {
  std::string name = "custom";
  std::size_t n_sealers = 5;
  std::int64_t block_interval_ms = 5000;
  std::int64_t duration_ms = 1'800'000;
  std::uint32_t tx_rate_per_s = 10;
  std::uint64_t seed = 1;
  std::int64_t delay_min_ms = 5;
  std::int64_t delay_max_ms = 50;
  std::optional<std::size_t> tx_cap;
  VerifyFlags flags = VerifyFlags::fixed();
  std::map<std::size_t, SealerOverride> sealers;

  SealerPolicy policy_for(std::size_t index) const;
  VerifyFlags flags_for(std::size_t index) const;

  /// Throws ConfigError(validation) naming the offending field.
  void validate() const;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// The three reference experiments: "honest", "attack", "fixed".
ScenarioConfig preset(std::string_view name);
const std::vector<std::string>& preset_names();

ScenarioConfig parse_scenario(std::string_view text, const std::string& source = "<input>");
ScenarioConfig load_scenario(const std::filesystem::path& path);
std::string to_text(const ScenarioConfig& config);

/// 0x-prefixed 40-hex-digit pseudo-address for a sealer, derived from the run seed.
std::string sealer_address(std::uint64_t seed, std::size_t index);

}  // namespace cliquesim
