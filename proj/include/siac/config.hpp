#pragma once

// Plain "key = value" configuration files. '#' starts a comment, blank lines
// are ignored, list values are comma-separated.

#include <map>
#include <string>
#include <vector>

#include "siac/harness.hpp"

namespace siac {

using ConfigMap = std::map<std::string, std::string>;

/// Throws ParseError (with line number) on malformed lines or duplicate keys.
ConfigMap parse_config(const std::string& text);
ConfigMap read_config_file(const std::string& path);

std::vector<std::string> split_list(const std::string& value);
int parse_int(const std::string& key, const std::string& value);
double parse_double(const std::string& key, const std::string& value);
bool parse_bool(const std::string& key, const std::string& value);

/// Applies recognised keys to `config`:
///   problem, d, filters, meshes, times, time_count, time_end, samples,
///   blend, rho, profile (hermite|literal), cfl, jobs.
/// Keys in `extra` are accepted and copied out; any other key is a ParseError.
void apply_config(const ConfigMap& map, RunConfig& config, ConfigMap* extra = nullptr,
                  const std::vector<std::string>& extra_keys = {"out"});

}  // namespace siac
