#include "causalkit/kvfile.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace causalkit {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool valid_key(const std::string& key) {
  if (key.empty()) return false;
  for (char c : key) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '_' || c == '.' || c == '-';
    if (!ok) return false;
  }
  return true;
}

double parse_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing text");
    if (!std::isfinite(value)) throw std::invalid_argument("non-finite");
    return value;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key +
                                "': expected a number, got '" + text + "'");
  }
}

int parse_int(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const int value = std::stoi(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing text");
    return value;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key +
                                "': expected an integer, got '" + text + "'");
  }
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : text) {
    if (c == sep) {
      parts.push_back(trim(current));
      current.clear();
    } else {
      current += c;
    }
  }
  parts.push_back(trim(current));
  return parts;
}

}  // namespace

KeyValueFile KeyValueFile::parse_string(const std::string& text) {
  KeyValueFile kv;
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
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!valid_key(key)) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": bad key '" + key + "'");
    }
    if (value.empty()) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": empty value for '" + key + "'");
    }
    if (kv.entries_.count(key) > 0) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": duplicate key '" + key + "'");
    }
    kv.entries_[key] = value;
  }
  return kv;
}

KeyValueFile KeyValueFile::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open config file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_string(buffer.str());
}

bool KeyValueFile::has(const std::string& key) const {
  return entries_.count(key) > 0;
}

std::vector<std::string> KeyValueFile::keys() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& [key, value] : entries_) out.push_back(key);
  return out;
}

std::string KeyValueFile::get_string(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) {
    throw std::invalid_argument("missing config key '" + key + "'");
  }
  accessed_.insert(key);
  return it->second;
}

std::string KeyValueFile::get_string(const std::string& key,
                                     const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}

double KeyValueFile::get_double(const std::string& key) const {
  return parse_double(key, get_string(key));
}

double KeyValueFile::get_double(const std::string& key,
                                double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

int KeyValueFile::get_int(const std::string& key) const {
  return parse_int(key, get_string(key));
}

int KeyValueFile::get_int(const std::string& key, int fallback) const {
  return has(key) ? get_int(key) : fallback;
}

bool KeyValueFile::get_bool(const std::string& key) const {
  const std::string value = get_string(key);
  if (value == "true" || value == "1" || value == "yes" || value == "on") {
    return true;
  }
  if (value == "false" || value == "0" || value == "no" || value == "off") {
    return false;
  }
  throw std::invalid_argument("config key '" + key +
                              "': expected a boolean, got '" + value + "'");
}

bool KeyValueFile::get_bool(const std::string& key, bool fallback) const {
  return has(key) ? get_bool(key) : fallback;
}

std::vector<double> KeyValueFile::get_double_list(
    const std::string& key) const {
  const std::string value = get_string(key);
  const auto range = value.find("..");
  if (range != std::string::npos) {
    const int lo = parse_int(key, trim(value.substr(0, range)));
    const int hi = parse_int(key, trim(value.substr(range + 2)));
    if (hi < lo) {
      throw std::invalid_argument("config key '" + key +
                                  "': empty range '" + value + "'");
    }
    std::vector<double> out;
    for (int i = lo; i <= hi; ++i) out.push_back(static_cast<double>(i));
    return out;
  }
  const auto colon = value.find(':');
  if (colon != std::string::npos) {
    const std::vector<std::string> parts = split(value, ':');
    if (parts.size() != 3) {
      throw std::invalid_argument("config key '" + key +
                                  "': expected 'start:stop:count'");
    }
    const double start = parse_double(key, parts[0]);
    const double stop = parse_double(key, parts[1]);
    const int count = parse_int(key, parts[2]);
    if (count < 1) {
      throw std::invalid_argument("config key '" + key +
                                  "': count must be >= 1");
    }
    std::vector<double> out;
    out.reserve(count);
    if (count == 1) {
      out.push_back(start);
    } else {
      for (int i = 0; i < count; ++i) {
        out.push_back(start + (stop - start) * i / (count - 1));
      }
    }
    return out;
  }
  std::vector<double> out;
  for (const std::string& part : split(value, ',')) {
    out.push_back(parse_double(key, part));
  }
  return out;
}

std::vector<int> KeyValueFile::get_int_list(const std::string& key) const {
  const std::string value = get_string(key);
  const auto range = value.find("..");
  if (range != std::string::npos) {
    const int lo = parse_int(key, trim(value.substr(0, range)));
    const int hi = parse_int(key, trim(value.substr(range + 2)));
    if (hi < lo) {
      throw std::invalid_argument("config key '" + key +
                                  "': empty range '" + value + "'");
    }
    std::vector<int> out;
    for (int i = lo; i <= hi; ++i) out.push_back(i);
    return out;
  }
  std::vector<int> out;
  for (const std::string& part : split(value, ',')) {
    out.push_back(parse_int(key, part));
  }
  return out;
}

std::vector<std::string> KeyValueFile::unconsumed() const {
  std::vector<std::string> out;
  for (const auto& [key, value] : entries_) {
    if (accessed_.count(key) == 0) out.push_back(key);
  }
  return out;
}

}  // namespace causalkit
