#include "dsbn/subset.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "dsbn/error.hpp"

namespace dsbn {

Frame::Frame(std::string variable, std::vector<std::string> values)
    : variable_(std::move(variable)), values_(std::move(values)) {
  if (values_.empty()) throw ParseError("variable '" + variable_ + "' has no values");
  if (values_.size() > kMaxFrameSize) {
    throw SizeError("variable '" + variable_ + "' has " + std::to_string(values_.size()) +
                    " values; at most " + std::to_string(kMaxFrameSize) + " are supported");
  }
  std::set<std::string_view> seen;
  for (const auto& v : values_) {
    if (!seen.insert(v).second) {
      throw ParseError("variable '" + variable_ + "' lists value '" + v + "' twice");
    }
  }
}

int Frame::index_of(std::string_view label) const {
  auto it = std::find(values_.begin(), values_.end(), label);
  return it == values_.end() ? -1 : static_cast<int>(it - values_.begin());
}

bool canonical_less(Subset lhs, Subset rhs) {
  if (lhs.size() != rhs.size()) return lhs.size() < rhs.size();
  // Lexicographic on ascending member positions: the set whose lowest
  // differing member comes first in the frame sorts first.
  std::uint32_t diff = lhs.bits ^ rhs.bits;
  if (diff == 0) return false;
  std::uint32_t lowest = diff & (~diff + 1u);
  return (lhs.bits & lowest) != 0;
}

std::vector<Subset> nonempty_subsets(const Frame& frame) {
  std::vector<Subset> out;
  out.reserve(frame.slot_count() - 1);
  for (std::uint32_t m = 1; m <= frame.full_mask(); ++m) out.push_back(Subset{m});
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

Subset parse_subset_label(std::string_view text, const Frame& frame) {
  text = trim(text);
  if (text.size() < 2 || text.front() != '{' || text.back() != '}') {
    throw ParseError("expected a subset literal like {a,b}, got '" + std::string(text) + "'");
  }
  std::string_view body = trim(text.substr(1, text.size() - 2));
  if (body.empty()) throw ParseError("empty subset '{}' is not allowed");

  Subset out;
  while (true) {
    auto comma = body.find(',');
    std::string_view label = trim(body.substr(0, comma));
    int pos = frame.index_of(label);
    if (pos < 0) {
      throw ParseError("unknown label '" + std::string(label) + "' for variable '" +
                       frame.variable() + "'");
    }
    std::uint32_t bit = 1u << pos;
    if (out.bits & bit) throw ParseError("duplicate label '" + std::string(label) + "'");
    out.bits |= bit;
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
  }
  return out;
}

std::string format_subset(Subset subset, const Frame& frame) {
  std::string out = "{";
  bool first = true;
  for (std::size_t i = 0; i < frame.size(); ++i) {
    if (!(subset.bits & (1u << i))) continue;
    if (!first) out += ',';
    out += frame.values()[i];
    first = false;
  }
  out += '}';
  return out;
}

std::string csv_cell(std::string_view text) {
  if (text.find_first_of(",\"\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string format_value(double value) {
  char buf[64];
  // Avoid printing "-0.000000000" for tiny negative noise.
  if (value == 0.0) value = 0.0;
  std::snprintf(buf, sizeof buf, "%.9f", value);
  std::string s(buf);
  if (s == "-0.000000000") s = "0.000000000";
  return s;
}

}  // namespace dsbn
