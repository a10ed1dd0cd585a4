#pragma once

// Internal helpers for strict JSON parsing. Input files reject unknown keys so
// that typos fail loudly instead of silently falling back to defaults.

#include "jacketopt/errors.hpp"

#include <json.hpp>

#include <set>
#include <string>

namespace jacketopt {
namespace jsonio {

using json = nlohmann::json;

json load_file(const std::string& path);
void write_file_atomic(const std::string& path, const std::string& text);

// Verifies obj is an object whose keys are all in required+optional and that
// every required key is present. `where` names the file/section for messages.
void check_keys(const json& obj, const std::string& where,
                const std::set<std::string>& required,
                const std::set<std::string>& optional = {});

double get_num(const json& obj, const std::string& where, const std::string& key);
double get_num_or(const json& obj, const std::string& key, double fallback);
std::string get_str(const json& obj, const std::string& where, const std::string& key);

}  // namespace jsonio
}  // namespace jacketopt
