#include "siac/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>

#include "siac/errors.hpp"

namespace siac {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

ConfigMap parse_config(const std::string& text) {
  ConfigMap out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError("line " + std::to_string(lineno) + ": empty key");
    if (!out.emplace(key, value).second) throw ParseError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
  }
  return out;
}

ConfigMap read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int parse_int(const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  try {
    const int v = std::stoi(value, &pos);
    if (pos == value.size()) return v;
  } catch (const std::logic_error&) {
  }
  throw ParseError(key + ": '" + value + "' is not an integer");
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    return Rational::parse(value).to_double();
  } catch (const Error&) {
    throw ParseError(key + ": '" + value + "' is not a number");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  std::string v = value;
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  throw ParseError(key + ": '" + value + "' is not a boolean");
}

void apply_config(const ConfigMap& map, RunConfig& config, ConfigMap* extra, const std::vector<std::string>& extra_keys) {
  std::optional<int> time_count;
  std::optional<double> time_end;
  for (const auto& [key, value] : map) {
    if (key == "problem") {
      config.problem = parse_int(key, value);
    } else if (key == "d") {
      config.d = parse_int(key, value);
    } else if (key == "filters") {
      config.filters = split_list(value);
    } else if (key == "meshes") {
      config.meshes.clear();
      for (const auto& item : split_list(value)) config.meshes.push_back(parse_int(key, item));
    } else if (key == "times") {
      config.times.clear();
      if (value != "default")
        for (const auto& item : split_list(value)) config.times.push_back(parse_double(key, item));
    } else if (key == "time_count") {
      time_count = parse_int(key, value);
    } else if (key == "time_end") {
      time_end = parse_double(key, value);
    } else if (key == "samples") {
      config.samples = parse_int(key, value);
    } else if (key == "blend") {
      config.blend = parse_bool(key, value);
    } else if (key == "rho") {
      config.rho = parse_int(key, value);
    } else if (key == "profile") {
      if (value == "hermite") config.profile = BlendProfile::Hermite;
      else if (value == "literal") config.profile = BlendProfile::Literal;
      else throw ParseError("profile: expected 'hermite' or 'literal'");
    } else if (key == "cfl") {
      config.cfl = parse_double(key, value);
    } else if (key == "jobs") {
      config.jobs = parse_int(key, value);
    } else if (std::find(extra_keys.begin(), extra_keys.end(), key) != extra_keys.end()) {
      if (extra) (*extra)[key] = value;
    } else {
      throw ParseError("unknown config key '" + key + "'");
    }
  }
  if (time_count || time_end) {
    if (!time_count || !time_end) throw ParseError("time_count and time_end must be given together");
    if (*time_count < 1) throw ParseError("time_count must be positive");
    config.times.clear();
    for (int i = 1; i <= *time_count; ++i) config.times.push_back(*time_end * i / *time_count);
  }
}

}  // namespace siac
