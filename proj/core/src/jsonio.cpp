#include "jsonio.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace jacketopt::jsonio {

json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError("invalid JSON in " + path + ": " + e.what());
  }
  return j;
}

void write_file_atomic(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw ConfigError("cannot write file: " + tmp);
    out << text;
    out.flush();
    if (!out) throw ConfigError("short write on: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw ConfigError("cannot rename " + tmp + " to " + path);
}

void check_keys(const json& obj, const std::string& where,
                const std::set<std::string>& required,
                const std::set<std::string>& optional) {
  if (!obj.is_object()) throw ConfigError(where + ": expected a JSON object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!required.count(it.key()) && !optional.count(it.key()))
      throw ConfigError(where + ": unknown key \"" + it.key() + "\"");
  }
  for (const auto& k : required) {
    if (!obj.contains(k)) throw ConfigError(where + ": missing key \"" + k + "\"");
  }
}

double get_num(const json& obj, const std::string& where, const std::string& key) {
  if (!obj.contains(key)) throw ConfigError(where + ": missing key \"" + key + "\"");
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + ": key \"" + key + "\" must be a number");
  return v.get<double>();
}

double get_num_or(const json& obj, const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  return obj.at(key).get<double>();
}

std::string get_str(const json& obj, const std::string& where, const std::string& key) {
  if (!obj.contains(key)) throw ConfigError(where + ": missing key \"" + key + "\"");
  const auto& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(where + ": key \"" + key + "\" must be a string");
  return v.get<std::string>();
}

}  // namespace jacketopt::jsonio
