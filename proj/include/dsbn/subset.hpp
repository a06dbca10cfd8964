#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace dsbn {

/// Largest frame the dense table layout accepts; masks index 2^size slots.
inline constexpr std::size_t kMaxFrameSize = 8;

/// The value set of one variable. Label order is fixed at construction and
/// drives all canonical printing.
class Frame {
 public:
  Frame() = default;
  Frame(std::string variable, std::vector<std::string> values);

  const std::string& variable() const noexcept { return variable_; }
  const std::vector<std::string>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::uint32_t full_mask() const noexcept { return (1u << values_.size()) - 1u; }
  /// Number of dense slots, including the unused empty-set slot 0.
  std::size_t slot_count() const noexcept { return std::size_t{1} << values_.size(); }

  /// Position of `label`, or -1.
  int index_of(std::string_view label) const;

  friend bool operator==(const Frame&, const Frame&) = default;

 private:
  std::string variable_;
  std::vector<std::string> values_;
};

/// Nonempty subset of one frame's values, stored as a bit mask over the
/// frame's label positions.
struct Subset {
  std::uint32_t bits = 0;

  constexpr int size() const noexcept { return std::popcount(bits); }
  constexpr bool empty() const noexcept { return bits == 0; }
  constexpr bool contains(Subset other) const noexcept { return (bits & other.bits) == other.bits; }
  constexpr bool proper_superset_of(Subset other) const noexcept {
    return bits != other.bits && contains(other);
  }

  friend constexpr bool operator==(Subset, Subset) = default;
  friend constexpr auto operator<=>(Subset, Subset) = default;
};

/// Canonical order: smaller subsets first, then by member positions.
/// Yields {a} < {b} < {a,b} on a binary frame.
bool canonical_less(Subset lhs, Subset rhs);

/// All nonempty subsets of `frame` in canonical order.
std::vector<Subset> nonempty_subsets(const Frame& frame);

/// Parses `{v1,v2,...}`. Rejects unknown or duplicate labels and `{}`.
Subset parse_subset_label(std::string_view text, const Frame& frame);

/// Prints members in frame order, e.g. `{a,b}`.
std::string format_subset(Subset subset, const Frame& frame);

/// Quotes a CSV cell when it contains a comma, quote or newline.
std::string csv_cell(std::string_view text);

/// Fixed 9-decimal rendering used by every numeric output.
std::string format_value(double value);

}  // namespace dsbn
