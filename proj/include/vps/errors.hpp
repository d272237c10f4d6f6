#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace vps {

/// Invalid domain, resolution or solver configuration.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Bad user-supplied data, e.g. non-finite samples of an initial condition.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// Mismatched array shapes passed between modules.
class ContractViolation : public std::logic_error {
 public:
  explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

/// The verification-only tensor assembly was asked for a problem that is too
/// large to materialize.
class OracleMisuse : public std::logic_error {
 public:
  explicit OracleMisuse(const std::string& what) : std::logic_error(what) {}
};

/// Config file failed validation; carries every violation found.
class ConfigParseError : public std::runtime_error {
 public:
  explicit ConfigParseError(std::vector<std::string> violations)
      : std::runtime_error(join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (const auto& s : v) {
      if (!out.empty()) out += "; ";
      out += s;
    }
    return out;
  }
  std::vector<std::string> violations_;
};

}  // namespace vps
