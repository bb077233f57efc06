#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace tofcorr {

// Flat `key = value` configuration. Lines starting with '#' and blank lines
// are ignored; values are numbers, number lists (whitespace or comma
// separated) or bare strings. Duplicate keys are an error, and consumers
// reject unknown keys so a misspelled parameter can never be silently
// dropped.
class Config {
 public:
  Config() = default;

  static Config parse_file(const std::string& path);
  static Config parse(std::istream& in, const std::string& origin = "<stream>");

  bool has(const std::string& key) const;

  double number(const std::string& key) const;
  double number(const std::string& key, double fallback) const;
  long long integer(const std::string& key) const;
  long long integer(const std::string& key, long long fallback) const;
  std::uint64_t unsigned64(const std::string& key, std::uint64_t fallback) const;
  std::string str(const std::string& key, const std::string& fallback) const;
  std::vector<double> numbers(const std::string& key) const;

  // Throws input_error naming the first key outside `known`.
  void require_known(std::span<const std::string> known) const;

  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

}  // namespace tofcorr
