#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "schedsim/delay.hpp"

namespace schedsim::cli {

/// Bad or unreadable configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads a TOML or JSON document (by extension; otherwise JSON is tried
/// first) into a JSON value.
nlohmann::json load_document(const std::string& path);

/// Typed accessors over a config document. Keys are dotted paths such as
/// "analytic.abs_tol". Missing keys yield nullopt; wrong types throw.
class ConfigView {
 public:
  ConfigView() = default;
  explicit ConfigView(nlohmann::json doc) : doc_(std::move(doc)) {}

  bool has(const std::string& key) const { return find(key) != nullptr; }
  std::optional<int> integer(const std::string& key) const;
  std::optional<std::uint64_t> unsigned_integer(const std::string& key) const;
  std::optional<double> number(const std::string& key) const;
  std::optional<std::string> string(const std::string& key) const;
  /// An integer or a list of integers.
  std::optional<std::vector<int>> integer_list(const std::string& key) const;
  /// A list of strings or one comma-separated string.
  std::optional<std::vector<std::string>> string_list(const std::string& key) const;
  const nlohmann::json* find(const std::string& key) const;

 private:
  nlohmann::json doc_ = nlohmann::json::object();
};

/// One delay law from a table with `kind` and its parameters.
DelayDistribution parse_distribution(const nlohmann::json& table, const std::string& where);

/// Builds the delay model for n workers from the config's [delay] block.
/// Without a block the Scenario 1 preset is used.
DelayModel delay_model_from_config(const ConfigView& config, int n);

/// "1,2,3" or "2:16" (inclusive range) into a list of integers.
std::vector<int> parse_int_list(const std::string& text);
std::vector<std::string> split_list(const std::string& text);

}  // namespace schedsim::cli
