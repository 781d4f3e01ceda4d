#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace multival {

/// One machine-checkable claim, printed as `WITNESS: kind key=value ...`. Values containing
/// spaces are double-quoted; values may not contain double quotes.
struct Witness {
  std::string kind;
  std::vector<std::pair<std::string, std::string>> fields;

  Witness() = default;
  explicit Witness(std::string k) : kind(std::move(k)) {}

  Witness& add(std::string key, std::string value);
  bool has(std::string_view key) const;
  /// Throws ParseError when the key is missing.
  const std::string& get(std::string_view key) const;

  std::string to_line() const;
};

Witness parse_witness(std::string_view line);

struct AuditResult {
  bool ok = false;
  std::string detail;
};

/// Re-verifies a witness through library calls. Unknown kinds and malformed fields fail.
AuditResult audit(const Witness& w);

}  // namespace multival
