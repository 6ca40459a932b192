#ifndef BINVERSE_CONFIG_HPP
#define BINVERSE_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

// Flat key-value configuration: one `key = value` per line, `#` comments.
// CLI flags overwrite file values through set().

namespace binverse {

class Config {
 public:
  Config() = default;

  static Config from_file(const std::filesystem::path& path);
  static Config from_string(const std::string& text);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::uint64_t get_uint64(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  const std::map<std::string, std::string>& entries() const { return map_; }

  // Keys present in the config but not in `known`, for collective error
  // reporting.
  std::vector<std::string> unknown_keys(const std::set<std::string>& known) const;

 private:
  std::map<std::string, std::string> map_;
};

}  // namespace binverse

#endif
