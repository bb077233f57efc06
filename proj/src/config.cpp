#include "tofcorr/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "tofcorr/errors.hpp"

namespace tofcorr {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& token) {
  try {
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    if (used != token.size()) throw input_error("");
    return v;
  } catch (const std::exception&) {
    throw input_error("config: key '" + key + "' has non-numeric value '" + token + "'");
  }
}

}  // namespace

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("config: cannot open '" + path + "'");
  return parse(in, path);
}

Config Config::parse(std::istream& in, const std::string& origin) {
  Config cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw input_error("config: " + origin + ":" + std::to_string(line_no) +
                        ": expected 'key = value'");
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty()) throw input_error("config: " + origin + ":" + std::to_string(line_no) +
                                       ": empty key");
    if (!cfg.entries_.emplace(key, value).second)
      throw input_error("config: duplicate key '" + key + "'");
  }
  return cfg;
}

bool Config::has(const std::string& key) const { return entries_.count(key) > 0; }

double Config::number(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw input_error("config: missing required key '" + key + "'");
  return parse_double(key, it->second);
}

double Config::number(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

long long Config::integer(const std::string& key) const {
  const double v = number(key);
  const auto n = static_cast<long long>(v);
  if (static_cast<double>(n) != v)
    throw input_error("config: key '" + key + "' must be an integer");
  return n;
}

long long Config::integer(const std::string& key, long long fallback) const {
  return has(key) ? integer(key) : fallback;
}

std::uint64_t Config::unsigned64(const std::string& key, std::uint64_t fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  try {
    return std::stoull(it->second);
  } catch (const std::exception&) {
    throw input_error("config: key '" + key + "' must be an unsigned integer");
  }
}

std::string Config::str(const std::string& key, const std::string& fallback) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second;
}

std::vector<double> Config::numbers(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw input_error("config: missing required key '" + key + "'");
  std::string list = it->second;
  std::replace(list.begin(), list.end(), ',', ' ');
  std::istringstream is(list);
  std::vector<double> out;
  std::string token;
  while (is >> token) out.push_back(parse_double(key, token));
  if (out.empty()) throw input_error("config: key '" + key + "' has an empty list");
  return out;
}

void Config::require_known(std::span<const std::string> known) const {
  for (const auto& [key, value] : entries_) {
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw input_error("config: unknown key '" + key + "'");
  }
}

}  // namespace tofcorr
