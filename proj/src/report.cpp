#include "dsbn/report.hpp"

#include <algorithm>
#include <ostream>

namespace dsbn {

void ValidationReport::merge(const ValidationReport& other) {
  findings_.insert(findings_.end(), other.findings_.begin(), other.findings_.end());
}

bool ValidationReport::ok() const { return violation_count() == 0; }

std::size_t ValidationReport::violation_count() const {
  return static_cast<std::size_t>(std::count_if(findings_.begin(), findings_.end(), [](const Finding& f) {
    return f.severity == Severity::violation;
  }));
}

std::size_t ValidationReport::warning_count() const {
  return findings_.size() - violation_count();
}

std::ostream& operator<<(std::ostream& os, const ValidationReport& report) {
  for (const auto& f : report.findings()) {
    os << (f.severity == Severity::violation ? "violation: " : "warning: ") << f.message << '\n';
  }
  return os;
}

}  // namespace dsbn
