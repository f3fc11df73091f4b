#ifndef UNIFILT_BENCH_CONFIG_HPP
#define UNIFILT_BENCH_CONFIG_HPP

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "unifilt/core.hpp"
#include "unifilt/signals.hpp"

namespace unifilt::bench {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Fully resolved experiment: constants defaulted per the analysis when
/// omitted (k = 2d, H = d*sigma2, R = sqrt(d)*B_X^2/sigma2,
/// alpha = d*sigma2/G(2d,R)^2), sigma2 taken from the noise generator unless
/// overridden.
struct ExperimentConfig {
  ProblemConstants consts;
  std::int64_t horizon = 4096;
  std::string algorithm = "gd";  // gd | adaptive | zero | identity
  SignalSpec signal;
  NoiseSpec noise;
  std::vector<std::uint64_t> seeds;
  std::int64_t scan_stride = 0;  // resolved: defaults to block_len
  std::string out_dir = "out";
  std::vector<std::int64_t> horizons;
};

/// Flat key/value configuration: one `key = value` per line, `#` comments.
/// Later assignments win, so command-line flags overlay file entries by
/// re-setting the same key.
class ConfigMap {
 public:
  static const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys = {
        "T",         "d",        "k",           "H",          "R",       "alpha",
        "sigma2",    "B_X",      "B_N",         "algorithm",  "signal",  "noise",
        "amplitude", "period",   "phase",       "period2",    "phase2",  "switch",
        "ar_coeff",  "signal_seed", "replay_file", "noise_scale", "seed", "seeds",
        "stride",    "out",      "horizons"};
    return keys;
  }

  static ConfigMap from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    ConfigMap map;
    std::string line;
    std::int64_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const auto strip = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos) return std::string();
        const auto b = s.find_last_not_of(" \t\r");
        return s.substr(a, b - a + 1);
      };
      if (strip(line).empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
      }
      map.set(strip(line.substr(0, eq)), strip(line.substr(eq + 1)));
    }
    return map;
  }

  void set(const std::string& key, const std::string& value) {
    const auto& keys = known_keys();
    bool known = false;
    for (const auto& k : keys) known = known || (k == key);
    if (!known) throw ConfigError("unknown config key: " + key);
    values_[key] = value;
  }

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  ExperimentConfig resolve() const;

 private:
  std::string get(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  double get_real(const std::string& key, double fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
      std::size_t used = 0;
      const double v = std::stod(it->second, &used);
      if (used != it->second.size()) throw std::invalid_argument("");
      return v;
    } catch (const std::exception&) {
      throw ConfigError("config field '" + key + "': not a real number: " + it->second);
    }
  }

  std::int64_t get_int(const std::string& key, std::int64_t fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
      std::size_t used = 0;
      const std::int64_t v = std::stoll(it->second, &used);
      if (used != it->second.size()) throw std::invalid_argument("");
      return v;
    } catch (const std::exception&) {
      throw ConfigError("config field '" + key + "': not an integer: " + it->second);
    }
  }

  std::map<std::string, std::string> values_;
};

namespace detail {

inline std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  const auto dots = text.find("..");
  std::vector<std::uint64_t> seeds;
  try {
    if (dots != std::string::npos) {
      const std::uint64_t lo = std::stoull(text.substr(0, dots));
      const std::uint64_t hi = std::stoull(text.substr(dots + 2));
      if (hi < lo) throw std::invalid_argument("");
      for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
    } else {
      std::stringstream ss(text);
      std::string item;
      while (std::getline(ss, item, ',')) seeds.push_back(std::stoull(item));
    }
  } catch (const std::exception&) {
    throw ConfigError("config field 'seeds': expected N..M or a comma list: " + text);
  }
  if (seeds.empty()) throw ConfigError("config field 'seeds': empty list");
  return seeds;
}

inline std::vector<std::int64_t> parse_horizon_list(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  try {
    while (std::getline(ss, item, ',')) out.push_back(std::stoll(item));
  } catch (const std::exception&) {
    throw ConfigError("config field 'horizons': expected a comma list: " + text);
  }
  if (out.empty()) throw ConfigError("config field 'horizons': empty list");
  return out;
}

}  // namespace detail

inline ExperimentConfig ConfigMap::resolve() const {
  ExperimentConfig cfg;
  cfg.horizon = get_int("T", 4096);
  if (cfg.horizon < 1) throw ConfigError("config field 'T': must be >= 1");
  const std::int64_t d = get_int("d", 4);
  if (d < 1) throw ConfigError("config field 'd': must be >= 1");

  cfg.algorithm = get("algorithm", "gd");
  if (cfg.algorithm != "gd" && cfg.algorithm != "adaptive" && cfg.algorithm != "zero" &&
      cfg.algorithm != "identity") {
    throw ConfigError("config field 'algorithm': unknown algorithm " + cfg.algorithm);
  }

  // Signal.
  const std::string sig = get("signal", "sinusoid");
  if (sig == "constant") cfg.signal.kind = SignalKind::kConstant;
  else if (sig == "sinusoid") cfg.signal.kind = SignalKind::kSinusoid;
  else if (sig == "piecewise-sinusoid") cfg.signal.kind = SignalKind::kPiecewiseSinusoid;
  else if (sig == "ar1") cfg.signal.kind = SignalKind::kAr1;
  else if (sig == "square-wave") cfg.signal.kind = SignalKind::kSquareWave;
  else if (sig == "adversarial-replay") cfg.signal.kind = SignalKind::kReplay;
  else throw ConfigError("config field 'signal': unknown kind " + sig);

  cfg.signal.amplitude = get_real("amplitude", 1.0);
  cfg.signal.period = get_real("period", 16.0);
  cfg.signal.phase = get_real("phase", 0.0);
  cfg.signal.period2 = get_real("period2", 0.0);
  cfg.signal.phase2 = get_real("phase2", cfg.signal.phase + kPi);
  cfg.signal.switch_index = get_int("switch", 0);
  cfg.signal.ar_coeff = get_real("ar_coeff", 0.9);
  cfg.signal.ar_seed = static_cast<std::uint64_t>(get_int("signal_seed", 1));
  if (cfg.signal.kind == SignalKind::kReplay) {
    const std::string path = get("replay_file", "");
    if (path.empty()) throw ConfigError("config field 'replay_file': required for adversarial-replay");
    cfg.signal = replay_adversarial(path, get_real("B_X", 1.0));
  }
  cfg.signal.bound = get_real("B_X", std::fabs(cfg.signal.amplitude));

  // Noise.
  const std::string noi = get("noise", "uniform");
  if (noi == "uniform") cfg.noise.kind = NoiseKind::kUniform;
  else if (noi == "rademacher") cfg.noise.kind = NoiseKind::kRademacher;
  else if (noi == "truncated-gaussian") cfg.noise.kind = NoiseKind::kTruncatedGaussian;
  else throw ConfigError("config field 'noise': unknown kind " + noi);
  cfg.noise.bound = get_real("B_N", 0.5);
  cfg.noise.scale = get_real("noise_scale", 0.0);

  // Constants, analysis-defaulted field by field.
  ProblemConstants& c = cfg.consts;
  c.order = static_cast<int>(d);
  c.sigma2 = get_real("sigma2", cfg.noise.variance());
  c.signal_bound = cfg.signal.bound;
  c.noise_bound = cfg.noise.bound;
  c.block_len = static_cast<int>(get_int("k", ProblemConstants::default_block_len(c.order)));
  try {
    c.step_scale = get_real("H", has("H") ? 0.0
                                          : ProblemConstants::default_step_scale(c.order, c.sigma2));
    c.radius = get_real("R", has("R") ? 0.0
                                      : ProblemConstants::default_radius(c.order, c.signal_bound,
                                                                         c.sigma2));
    c.expert_rate = get_real("alpha", has("alpha") ? 0.0 : c.default_expert_rate());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("constants defaulting: ") + e.what());
  }
  try {
    c.validate();
    cfg.signal.validate();
    cfg.noise.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  const std::uint64_t base_seed = static_cast<std::uint64_t>(get_int("seed", 1));
  if (has("seeds")) {
    cfg.seeds = detail::parse_seed_list(get("seeds", ""));
  } else {
    for (std::uint64_t s = base_seed; s < base_seed + 20; ++s) cfg.seeds.push_back(s);
  }

  cfg.scan_stride = get_int("stride", 0);
  if (cfg.scan_stride == 0) cfg.scan_stride = c.block_len;
  if (cfg.scan_stride < 1) throw ConfigError("config field 'stride': must be >= 1");
  cfg.out_dir = get("out", "out");
  if (has("horizons")) {
    cfg.horizons = detail::parse_horizon_list(get("horizons", ""));
  } else {
    for (std::int64_t t = 1024; t <= 65536; t *= 2) cfg.horizons.push_back(t);
  }
  return cfg;
}

}  // namespace unifilt::bench

#endif  // UNIFILT_BENCH_CONFIG_HPP
