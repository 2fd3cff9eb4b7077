#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace causalkit {

// Structured key-value config text: one "dotted.key = value" per line,
// blank lines and #-comments ignored.  Lookups record which keys were
// consumed so callers can reject unknown keys afterwards.
class KeyValueFile {
 public:
  static KeyValueFile parse_string(const std::string& text);
  static KeyValueFile parse_file(const std::string& path);

  bool has(const std::string& key) const;
  std::vector<std::string> keys() const;

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key,
                         const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key) const;
  bool get_bool(const std::string& key, bool fallback) const;

  // "1,2,3", the linspace form "start:stop:count", or the integer range
  // form "lo..hi".
  std::vector<double> get_double_list(const std::string& key) const;
  std::vector<int> get_int_list(const std::string& key) const;

  // Keys present in the file that no lookup has touched.
  std::vector<std::string> unconsumed() const;

 private:
  std::map<std::string, std::string> entries_;
  mutable std::set<std::string> accessed_;
};

}  // namespace causalkit
