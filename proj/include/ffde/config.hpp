#ifndef FFDE_CONFIG_HPP
#define FFDE_CONFIG_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace ffde {

// Flat key=value configuration. Bracketed [section] headers prefix the keys
// that follow ("section.key"). Values are kept verbatim as text.
struct ConfigMap {
  std::map<std::string, std::string> values;

  bool has(const std::string& key) const { return values.count(key) != 0; }
  std::string get(const std::string& key, const std::string& fallback = "") const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  void set(const std::string& key, const std::string& value) { values[key] = value; }

  // Sorted key = value lines; the content hash is taken over this text.
  std::string canonical_text() const;
};

ConfigMap parse_config_text(const std::string& text);
ConfigMap parse_config_file(const std::string& path);

std::vector<double> parse_double_list(const std::string& text);
std::vector<std::string> parse_string_list(const std::string& text);

// Semicolon-separated key:value pairs ("p:1,2;kind:lp").
std::map<std::string, std::string> parse_param_string(const std::string& text);

std::uint64_t fnv1a(const std::string& text);
std::string content_hash(const ConfigMap& cfg);

}  // namespace ffde

#endif
