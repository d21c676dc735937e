#include "locsim/config.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <vector>

#include "locsim/csv.hpp"
#include "locsim/errors.hpp"

namespace locsim {

namespace {

struct Entry {
  std::string value;
  int line = 0;
  bool used = false;
};

using SectionMap = std::map<std::string, std::map<std::string, Entry>>;

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return std::string(s.substr(b, e - b));
}

SectionMap parse_sections(const std::string& text, const std::string& origin) {
  SectionMap sections;
  std::string current;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view raw(text.data() + pos,
                         (nl == std::string::npos ? text.size() : nl) - pos);
    pos = (nl == std::string::npos) ? text.size() + 1 : nl + 1;
    ++line_no;

    std::string line(raw);
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(origin + ":" + std::to_string(line_no) +
                          ": malformed section header");
      current = trim(line.substr(1, line.size() - 2));
      if (current.empty())
        throw ConfigError(origin + ":" + std::to_string(line_no) +
                          ": empty section name");
      sections.try_emplace(current);
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(line_no) +
                        ": expected key = value");
    if (current.empty())
      throw ConfigError(origin + ":" + std::to_string(line_no) +
                        ": key outside any [section]");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": empty key");
    auto [it, fresh] = sections[current].try_emplace(key, Entry{value, line_no});
    if (!fresh)
      throw ConfigError(origin + ":" + std::to_string(line_no) +
                        ": duplicate key '" + key + "'");
  }
  return sections;
}

class Reader {
 public:
  Reader(SectionMap& sections, std::string origin)
      : sections_(sections), origin_(std::move(origin)) {}

  bool has(const std::string& section, const std::string& key) {
    auto s = sections_.find(section);
    if (s == sections_.end()) return false;
    return s->second.find(key) != s->second.end();
  }

  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) {
    auto* e = lookup(section, key);
    return e ? e->value : fallback;
  }

  double get_double(const std::string& section, const std::string& key,
                    double fallback) {
    auto* e = lookup(section, key);
    if (!e) return fallback;
    double v = 0.0;
    const char* first = e->value.data();
    const char* last = first + e->value.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || !std::isfinite(v))
      fail(*e, section, key, "a number");
    return v;
  }

  std::int64_t get_int(const std::string& section, const std::string& key,
                       std::int64_t fallback) {
    auto* e = lookup(section, key);
    if (!e) return fallback;
    std::int64_t v = 0;
    const char* first = e->value.data();
    const char* last = first + e->value.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) fail(*e, section, key, "an integer");
    return v;
  }

  std::uint64_t get_u64(const std::string& section, const std::string& key,
                        std::uint64_t fallback) {
    auto* e = lookup(section, key);
    if (!e) return fallback;
    std::uint64_t v = 0;
    const char* first = e->value.data();
    const char* last = first + e->value.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last)
      fail(*e, section, key, "an unsigned integer");
    return v;
  }

  void check_all_used(const std::vector<std::string>& known_sections) {
    for (const auto& [sec, entries] : sections_) {
      bool known = false;
      for (const auto& k : known_sections) known = known || (k == sec);
      if (!known)
        throw ConfigError(origin_ + ": unknown section [" + sec + "]");
      for (const auto& [key, entry] : entries)
        if (!entry.used)
          throw ConfigError(origin_ + ":" + std::to_string(entry.line) +
                            ": unknown key '" + key + "' in [" + sec + "]");
    }
  }

  [[noreturn]] void error_at(const std::string& section, const std::string& key,
                             const std::string& msg) {
    auto* e = lookup(section, key);
    const std::string loc =
        e ? origin_ + ":" + std::to_string(e->line) : origin_;
    throw ConfigError(loc + ": " + msg);
  }

 private:
  Entry* lookup(const std::string& section, const std::string& key) {
    auto s = sections_.find(section);
    if (s == sections_.end()) return nullptr;
    auto e = s->second.find(key);
    if (e == s->second.end()) return nullptr;
    e->second.used = true;
    return &e->second;
  }

  [[noreturn]] void fail(const Entry& e, const std::string& section,
                         const std::string& key, const std::string& want) {
    throw ConfigError(origin_ + ":" + std::to_string(e.line) + ": [" + section +
                      "] " + key + " must be " + want + ", got '" + e.value + "'");
  }

  SectionMap& sections_;
  std::string origin_;
};

void read_per_detector(Reader& r, const std::string& key,
                       std::array<double, 4>& out) {
  const double broadcast = r.get_double("channel", key, out[0]);
  out = {broadcast, broadcast, broadcast, broadcast};
  for (int d = 0; d < 4; ++d) {
    const std::string suffixed = key + "_" + kDetectorLabels[static_cast<std::size_t>(d)];
    out[static_cast<std::size_t>(d)] =
        r.get_double("channel", suffixed, out[static_cast<std::size_t>(d)]);
  }
}

}  // namespace

std::filesystem::path ExperimentConfig::resolved_netlist() const {
  if (netlist_path.is_absolute() || base_dir.empty()) return netlist_path;
  return base_dir / netlist_path;
}

ExperimentConfig parse_config(const std::string& text,
                              const std::filesystem::path& base_dir,
                              const std::string& origin_name) {
  SectionMap sections = parse_sections(text, origin_name);
  Reader r(sections, origin_name);
  ExperimentConfig cfg;
  cfg.base_dir = base_dir;

  cfg.netlist_path = r.get_string("circuit", "netlist", "");
  if (cfg.netlist_path.empty())
    throw ConfigError(origin_name + ": [circuit] netlist is required");
  cfg.input_mode = r.get_string("circuit", "input_mode", cfg.input_mode);
  for (int i = 0; i < 4; ++i) {
    const std::string key = std::string("input_") +
                            static_cast<char>('a' + i);
    cfg.input_map[static_cast<std::size_t>(i)] = static_cast<int>(
        r.get_int("circuit", key, cfg.input_map[static_cast<std::size_t>(i)]));
  }

  cfg.emitter.lifetime_ns =
      r.get_double("emitter", "lifetime_ns", cfg.emitter.lifetime_ns);
  cfg.emitter.pump_rate_per_ns =
      r.get_double("emitter", "pump_rate_per_ns", cfg.emitter.pump_rate_per_ns);
  cfg.emitter.blink_on_rate_per_ns = r.get_double(
      "emitter", "blink_on_rate_per_ns", cfg.emitter.blink_on_rate_per_ns);
  cfg.emitter.blink_off_rate_per_ns = r.get_double(
      "emitter", "blink_off_rate_per_ns", cfg.emitter.blink_off_rate_per_ns);
  cfg.emitter.collection_efficiency = r.get_double(
      "emitter", "collection_efficiency", cfg.emitter.collection_efficiency);

  cfg.channel.source_to_chip_efficiency =
      r.get_double("channel", "source_to_chip_efficiency",
                   cfg.channel.source_to_chip_efficiency);
  cfg.channel.chip_transmission =
      r.get_double("channel", "chip_transmission", cfg.channel.chip_transmission);
  read_per_detector(r, "detector_efficiency", cfg.channel.detector_efficiency);
  read_per_detector(r, "jitter_sigma_ns", cfg.channel.jitter_sigma_ns);
  read_per_detector(r, "dark_rate_per_ns", cfg.channel.dark_rate_per_ns);
  read_per_detector(r, "dead_time_ns", cfg.channel.dead_time_ns);

  cfg.seed = r.get_u64("run", "seed", cfg.seed);
  cfg.duration_ns = r.get_double("run", "duration_ns", cfg.duration_ns);
  if (!(cfg.duration_ns > 0.0))
    r.error_at("run", "duration_ns", "duration_ns must be positive");

  cfg.phi_start = r.get_double("fringe", "phi_start", cfg.phi_start);
  cfg.phi_stop = r.get_double("fringe", "phi_stop", cfg.phi_stop);
  cfg.fringe_points =
      static_cast<int>(r.get_int("fringe", "points", cfg.fringe_points));
  if (cfg.fringe_points < 1)
    r.error_at("fringe", "points", "at least one phase point is required");

  cfg.hbt_pair = r.get_string("hbt", "pair", cfg.hbt_pair);
  if (cfg.hbt_pair.size() != 2 || cfg.hbt_pair[0] == cfg.hbt_pair[1])
    r.error_at("hbt", "pair", "pair must name two distinct detectors, e.g. 'ef'");
  for (char c : cfg.hbt_pair)
    if (c != 'e' && c != 'f' && c != 'g' && c != 'h')
      r.error_at("hbt", "pair", "detectors are labeled e, f, g, h");
  cfg.hbt_phi = r.get_double("hbt", "phi", cfg.hbt_phi);
  cfg.bin_width_ns = r.get_double("hbt", "bin_width_ns", cfg.bin_width_ns);
  cfg.max_tau_ns = r.get_double("hbt", "max_tau_ns", cfg.max_tau_ns);
  const std::string norm = r.get_string("hbt", "normalization", "long_delay");
  if (norm == "long_delay")
    cfg.normalization = Normalization::LongDelay;
  else if (norm == "plateau")
    cfg.normalization = Normalization::Plateau;
  else
    r.error_at("hbt", "normalization", "normalization is long_delay or plateau");

  r.check_all_used({"circuit", "emitter", "channel", "run", "fringe", "hbt"});
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return parse_config(text, path.parent_path(), path.filename().string());
}

}  // namespace locsim
