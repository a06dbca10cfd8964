#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dsbn {

enum class Severity { warning, violation };

struct Finding {
  Severity severity;
  std::string message;
};

/// Result of a check that reports instead of throwing.
class ValidationReport {
 public:
  void warn(std::string message) { findings_.push_back({Severity::warning, std::move(message)}); }
  void violate(std::string message) {
    findings_.push_back({Severity::violation, std::move(message)});
  }
  void merge(const ValidationReport& other);

  /// True when there are no violations. Warnings do not count.
  bool ok() const;
  std::size_t violation_count() const;
  std::size_t warning_count() const;
  const std::vector<Finding>& findings() const noexcept { return findings_; }

 private:
  std::vector<Finding> findings_;
};

std::ostream& operator<<(std::ostream& os, const ValidationReport& report);

}  // namespace dsbn
