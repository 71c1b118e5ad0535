#include "cliquesim/scenario.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace cliquesim {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string loc(const std::string& source, std::size_t line, std::string_view key) {
  return source + ":" + std::to_string(line) + ": " + std::string(key);
}

template <typename Int>
Int parse_int(const std::string& value, const std::string& where) {
  Int out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size())
    throw ConfigError(ConfigError::Kind::parse, where, "expected an integer, got '" + value + "'");
  return out;
}

bool parse_bool(const std::string& value, const std::string& where) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError(ConfigError::Kind::parse, where, "expected true/false, got '" + value + "'");
}

VerifyFlags parse_flags(const std::string& value, const std::string& where) {
  if (value == "fixed") return VerifyFlags::fixed();
  if (value == "vulnerable") return VerifyFlags::vulnerable();
  throw ConfigError(ConfigError::Kind::parse, where, "flags must be 'fixed' or 'vulnerable', got '" + value + "'");
}

PolicyKind parse_policy(const std::string& value, const std::string& where) {
  if (value == "honest") return PolicyKind::honest;
  if (value == "malicious") return PolicyKind::malicious;
  throw ConfigError(ConfigError::Kind::parse, where, "policy must be 'honest' or 'malicious', got '" + value + "'");
}

// Keys that may appear both globally and inside a sealer section.
bool apply_flag_key(VerifyFlags& flags, const std::string& key, const std::string& value, const std::string& where) {
  if (key == "flags") flags = parse_flags(value, where);
  else if (key == "check_recently_signed") flags.check_recently_signed = parse_bool(value, where);
  else if (key == "check_difficulty_domain") flags.check_difficulty_domain = parse_bool(value, where);
  else if (key == "check_inturn_identity") flags.check_inturn_identity = parse_bool(value, where);
  else return false;
  return true;
}

struct SectionState {
  std::size_t index;
  std::size_t line;
  std::optional<PolicyKind> kind;
  std::optional<std::uint64_t> forced_difficulty;
  std::optional<bool> zero_delay;
  std::optional<bool> bypass_recents;
  std::optional<VerifyFlags> flags;
};

SealerOverride finish_section(const SectionState& s, const VerifyFlags& global, const std::string& source) {
  SealerOverride out;
  const bool has_overrides = s.forced_difficulty || s.zero_delay || s.bypass_recents;
  if (s.kind || has_overrides) {
    const PolicyKind kind = s.kind.value_or(PolicyKind::honest);
    SealerPolicy p = kind == PolicyKind::malicious ? SealerPolicy::malicious() : SealerPolicy::honest();
    if (s.forced_difficulty) p.forced_difficulty = *s.forced_difficulty;
    if (s.zero_delay) p.zero_delay = *s.zero_delay;
    if (s.bypass_recents) p.bypass_recents = *s.bypass_recents;
    if (!p.well_formed())
      throw ConfigError(ConfigError::Kind::validation, loc(source, s.line, "sealer " + std::to_string(s.index)),
                        "honest policy cannot carry malicious overrides");
    out.policy = p;
  }
  if (s.flags && *s.flags != global) out.flags = s.flags;
  return out;
}

std::uint64_t splitmix(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

SealerPolicy ScenarioConfig::policy_for(std::size_t index) const {
  auto it = sealers.find(index);
  return it != sealers.end() && it->second.policy ? *it->second.policy : SealerPolicy::honest();
}

VerifyFlags ScenarioConfig::flags_for(std::size_t index) const {
  auto it = sealers.find(index);
  return it != sealers.end() && it->second.flags ? *it->second.flags : flags;
}

void ScenarioConfig::validate() const {
  auto fail = [](std::string_view field, const std::string& msg) {
    throw ConfigError(ConfigError::Kind::validation, std::string(field), msg);
  };
  if (n_sealers < 1) fail("n_sealers", "must be at least 1");
  if (block_interval_ms <= 0) fail("block_interval_ms", "must be positive");
  if (duration_ms < 0) fail("duration_ms", "must be non-negative");
  if (tx_rate_per_s == 0) fail("tx_rate_per_s", "must be positive");
  if (delay_min_ms < 0) fail("delay_min_ms", "must be non-negative");
  if (delay_max_ms < delay_min_ms) fail("delay_max_ms", "must be >= delay_min_ms");
  for (const auto& [index, o] : sealers) {
    const std::string field = "sealer " + std::to_string(index);
    if (index >= n_sealers) fail(field, "index out of range for n_sealers = " + std::to_string(n_sealers));
    if (o.policy && !o.policy->well_formed()) fail(field, "honest policy cannot carry malicious overrides");
  }
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"honest", "attack", "fixed"};
  return names;
}

ScenarioConfig preset(std::string_view name) {
  ScenarioConfig c;
  c.name = std::string(name);
  if (name == "honest") {
    c.flags = VerifyFlags::fixed();
  } else if (name == "attack") {
    c.flags = VerifyFlags::vulnerable();
    c.sealers[2].policy = SealerPolicy::malicious();
  } else if (name == "fixed") {
    c.flags = VerifyFlags::fixed();
    c.sealers[2].policy = SealerPolicy::malicious();
  } else {
    throw ConfigError(ConfigError::Kind::validation, "preset", "unknown preset '" + std::string(name) + "'");
  }
  return c;
}

ScenarioConfig parse_scenario(std::string_view text, const std::string& source) {
  ScenarioConfig c;
  std::optional<SectionState> section;
  std::vector<SectionState> sections;
  std::set<std::size_t> seen_sections;

  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(ConfigError::Kind::parse, loc(source, line_no, "section"), "unterminated section header");
      const std::string inner = trim(std::string_view(line).substr(1, line.size() - 2));
      if (inner.rfind("sealer ", 0) != 0)
        throw ConfigError(ConfigError::Kind::parse, loc(source, line_no, "section"),
                          "expected [sealer <index>], got [" + inner + "]");
      const auto index = parse_int<std::size_t>(trim(inner.substr(7)), loc(source, line_no, "section"));
      if (!seen_sections.insert(index).second)
        throw ConfigError(ConfigError::Kind::parse, loc(source, line_no, "section"),
                          "duplicate section for sealer " + std::to_string(index));
      if (section) sections.push_back(*section);
      section = SectionState{index, line_no, {}, {}, {}, {}, {}};
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(ConfigError::Kind::parse, loc(source, line_no, "line"), "expected 'key = value'");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    const std::string where = loc(source, line_no, key);
    if (key.empty() || value.empty())
      throw ConfigError(ConfigError::Kind::parse, where, "empty key or value");

    if (section) {
      if (key == "policy") section->kind = parse_policy(value, where);
      else if (key == "forced_difficulty") section->forced_difficulty = parse_int<std::uint64_t>(value, where);
      else if (key == "zero_delay") section->zero_delay = parse_bool(value, where);
      else if (key == "bypass_recents") section->bypass_recents = parse_bool(value, where);
      else {
        VerifyFlags f = section->flags.value_or(c.flags);
        if (!apply_flag_key(f, key, value, where))
          throw ConfigError(ConfigError::Kind::parse, where, "unknown sealer key");
        section->flags = f;
      }
      continue;
    }

    if (key == "name") c.name = value;
    else if (key == "n_sealers") {
      const auto n = parse_int<std::int64_t>(value, where);
      if (n < 1) throw ConfigError(ConfigError::Kind::validation, where, "must be at least 1");
      c.n_sealers = static_cast<std::size_t>(n);
    } else if (key == "block_interval_ms") c.block_interval_ms = parse_int<std::int64_t>(value, where);
    else if (key == "duration_ms") c.duration_ms = parse_int<std::int64_t>(value, where);
    else if (key == "tx_rate_per_s") {
      const auto r = parse_int<std::int64_t>(value, where);
      if (r < 1 || r > UINT32_MAX) throw ConfigError(ConfigError::Kind::validation, where, "must be in [1, 2^32)");
      c.tx_rate_per_s = static_cast<std::uint32_t>(r);
    } else if (key == "seed") c.seed = parse_int<std::uint64_t>(value, where);
    else if (key == "delay_min_ms") c.delay_min_ms = parse_int<std::int64_t>(value, where);
    else if (key == "delay_max_ms") c.delay_max_ms = parse_int<std::int64_t>(value, where);
    else if (key == "tx_cap") {
      if (value == "none") c.tx_cap.reset();
      else c.tx_cap = parse_int<std::size_t>(value, where);
    } else if (!apply_flag_key(c.flags, key, value, where)) {
      throw ConfigError(ConfigError::Kind::parse, where, "unknown key");
    }
  }
  if (section) sections.push_back(*section);

  // Sections resolve after the global block so a later global `flags` line
  // still serves as the baseline for per-sealer overrides.
  for (const auto& s : sections) {
    SealerOverride o = finish_section(s, c.flags, source);
    if (o.policy || o.flags) c.sealers[s.index] = o;
  }

  try {
    c.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(ConfigError::Kind::validation, source + ": " + e.location(), e.detail());
  }
  return c;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(ConfigError::Kind::parse, path.string(), "cannot open scenario file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path.string());
}

std::string to_text(const ScenarioConfig& c) {
  std::ostringstream out;
  auto b = [](bool v) { return v ? "true" : "false"; };
  auto write_flags = [&](const VerifyFlags& f) {
    if (f == VerifyFlags::fixed() || f == VerifyFlags::vulnerable()) {
      out << "flags = " << to_string(f) << "\n";
    } else {
      out << "flags = fixed\n"
          << "check_recently_signed = " << b(f.check_recently_signed) << "\n"
          << "check_difficulty_domain = " << b(f.check_difficulty_domain) << "\n"
          << "check_inturn_identity = " << b(f.check_inturn_identity) << "\n";
    }
  };
  out << "name = " << c.name << "\n"
      << "n_sealers = " << c.n_sealers << "\n"
      << "block_interval_ms = " << c.block_interval_ms << "\n"
      << "duration_ms = " << c.duration_ms << "\n"
      << "tx_rate_per_s = " << c.tx_rate_per_s << "\n"
      << "seed = " << c.seed << "\n"
      << "delay_min_ms = " << c.delay_min_ms << "\n"
      << "delay_max_ms = " << c.delay_max_ms << "\n"
      << "tx_cap = " << (c.tx_cap ? std::to_string(*c.tx_cap) : "none") << "\n";
  write_flags(c.flags);
  for (const auto& [index, o] : c.sealers) {
    out << "\n[sealer " << index << "]\n";
    if (o.policy) {
      const auto& p = *o.policy;
      out << "policy = " << (p.is_honest() ? "honest" : "malicious") << "\n";
      if (!p.is_honest()) {
        if (p.forced_difficulty) out << "forced_difficulty = " << *p.forced_difficulty << "\n";
        out << "zero_delay = " << b(p.zero_delay) << "\n"
            << "bypass_recents = " << b(p.bypass_recents) << "\n";
      }
    }
    if (o.flags) write_flags(*o.flags);
  }
  return out.str();
}

std::string sealer_address(std::uint64_t seed, std::size_t index) {
  std::uint64_t state = seed ^ (0xa5a5a5a5ULL + static_cast<std::uint64_t>(index) * 0x100000001b3ULL);
  std::string out = "0x";
  static constexpr char digits[] = "0123456789abcdef";
  while (out.size() < 42) {
    std::uint64_t w = splitmix(state);
    for (int i = 0; i < 16 && out.size() < 42; ++i, w >>= 4) out += digits[w & 0xf];
  }
  return out;
}

}  // namespace cliquesim
