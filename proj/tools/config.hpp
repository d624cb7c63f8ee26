#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bonusruin/model.hpp"

namespace bonusruin::cli {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Flat key=value configuration. Later assignments override earlier ones.
class RunConfig {
 public:
  /// Lines of the form key=value; blank lines and lines starting with '#' are skipped.
  void load_text(std::string_view text, std::string_view origin);
  void load_file(const std::string& path);
  /// A single "key=value" token (command-line override).
  void assign(std::string_view token);
  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::string& text(const std::string& key) const;
  std::string text_or(const std::string& key, const std::string& fallback) const;
  double number(const std::string& key) const;
  double number_or(const std::string& key, double fallback) const;
  std::uint64_t count(const std::string& key) const;
  std::uint64_t count_or(const std::string& key, std::uint64_t fallback) const;
  /// Comma-separated list, or start:stop:step with both ends included.
  std::vector<double> numbers(const std::string& key) const;

  /// Throws ConfigError naming the first key not in `allowed`.
  void check_known(const std::vector<std::string>& allowed) const;

  const std::map<std::string, std::string>& entries() const noexcept { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

/// Keys: claims (exponential | pareto), beta | alpha + sigma, lambda1, lambda2, xi.
ModelParams model_from_config(const RunConfig& config);
std::vector<std::string> model_keys();

}  // namespace bonusruin::cli
