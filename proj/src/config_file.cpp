#include "pnrthresh/config_file.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "pnrthresh/errors.hpp"

namespace pnrthresh {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    const auto pos = s.find(sep);
    out.push_back(trim(s.substr(0, pos)));
    if (pos == std::string_view::npos) break;
    s.remove_prefix(pos + 1);
  }
  return out;
}

class Parser {
public:
  explicit Parser(std::string_view source) : source_(source) {}

  [[noreturn]] void fail(int line, const std::string& key, const std::string& message) const {
    throw ConfigError(std::string(source_) + ":" + std::to_string(line) + ": " + message, key,
                      line);
  }

  template <class T>
  T parse_number(std::string_view text, int line, const std::string& key) const {
    T value{};
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (text.empty() || ec != std::errc() || ptr != end) {
      fail(line, key, "invalid value '" + std::string(text) + "' for " + key);
    }
    return value;
  }

private:
  std::string_view source_;
};

}  // namespace

SimConfig parse_sim_config(std::string_view text, std::string_view source_name) {
  const Parser parser(source_name);
  SimConfig config;
  std::map<std::string, int> key_lines;

  std::istringstream in{std::string(text)};
  std::string raw_line;
  int line = 0;
  while (std::getline(in, raw_line)) {
    ++line;
    std::string_view content(raw_line);
    content = trim(content.substr(0, content.find('#')));
    if (content.empty()) continue;

    const auto eq = content.find('=');
    if (eq == std::string_view::npos) parser.fail(line, "", "expected 'key = value'");
    const std::string key(trim(content.substr(0, eq)));
    const std::string_view value = trim(content.substr(eq + 1));
    if (!key_lines.emplace(key, line).second) {
      parser.fail(line, key,
                  "duplicate key '" + key + "' (first set on line " +
                      std::to_string(key_lines[key]) + ")");
    }

    if (key == "num_bins") {
      config.num_bins = parser.parse_number<std::uint32_t>(value, line, key);
    } else if (key == "noise_mean") {
      config.noise_mean = parser.parse_number<double>(value, line, key);
    } else if (key == "repetitions") {
      config.repetitions = parser.parse_number<std::uint64_t>(value, line, key);
    } else if (key == "seed") {
      config.seed = parser.parse_number<std::uint64_t>(value, line, key);
    } else if (key == "thresholds") {
      config.thresholds.clear();
      for (auto item : split(value, ',')) {
        config.thresholds.push_back(parser.parse_number<std::uint32_t>(item, line, key));
      }
    } else if (key == "targets") {
      config.targets.clear();
      if (value.empty() || value == "none") continue;
      for (auto item : split(value, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string_view::npos) {
          parser.fail(line, key, "target '" + std::string(item) + "' is not of the form bin:mean");
        }
        Target t;
        t.bin = parser.parse_number<std::uint32_t>(trim(item.substr(0, colon)), line, key);
        t.signal_mean = parser.parse_number<double>(trim(item.substr(colon + 1)), line, key);
        config.targets.push_back(t);
      }
    } else {
      parser.fail(line, key, "unknown key '" + key + "'");
    }
  }

  if (!key_lines.contains("repetitions")) {
    parser.fail(line, "repetitions", "missing required key 'repetitions'");
  }
  try {
    config.validate();
  } catch (const ConfigError& e) {
    const auto it = key_lines.find(e.field());
    const int at = it != key_lines.end() ? it->second : 0;
    parser.fail(at, e.field(), e.what());
  }
  return config;
}

SimConfig load_sim_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_sim_config(buf.str(), path);
}

std::string format_sim_config(const SimConfig& config) {
  auto real = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  std::ostringstream out;
  out << "num_bins = " << config.num_bins << "\n";
  out << "noise_mean = " << real(config.noise_mean) << "\n";
  out << "targets = ";
  for (std::size_t i = 0; i < config.targets.size(); ++i) {
    out << (i ? ", " : "") << config.targets[i].bin << ":" << real(config.targets[i].signal_mean);
  }
  if (config.targets.empty()) out << "none";
  out << "\nthresholds = ";
  for (std::size_t i = 0; i < config.thresholds.size(); ++i) {
    out << (i ? ", " : "") << config.thresholds[i];
  }
  out << "\nrepetitions = " << config.repetitions << "\n";
  out << "seed = " << config.seed << "\n";
  return out.str();
}

}  // namespace pnrthresh
