#pragma once

// Conditional mass tables and their K-function reparameterization.
//
// A table over child X and parents (P1..Pk) is stored densely: the slot of
// (s1..sk, c) is the concatenation of the subset masks s1..sk, c as bit
// fields, first parent most significant. Slots whose field is the empty mask
// exist only to keep the layout a power-of-two lattice; they are always 0.

#include <span>
#include <string>
#include <vector>

#include "dsbn/report.hpp"
#include "dsbn/subset.hpp"

namespace dsbn {

/// One subset per parent, in the table's parent order.
using Config = std::vector<Subset>;

class TableShape {
 public:
  TableShape() = default;
  TableShape(Frame child, std::vector<Frame> parents);

  const Frame& child() const noexcept { return child_; }
  const std::vector<Frame>& parents() const noexcept { return parents_; }
  std::size_t parent_count() const noexcept { return parents_.size(); }

  std::size_t slot_count() const noexcept { return slot_count_; }
  std::size_t slot(std::span<const Subset> config, Subset child) const;
  /// Index distance between neighbouring masks of parent `p`.
  std::size_t parent_stride(std::size_t p) const noexcept { return strides_[p]; }
  /// False for slots with an empty field.
  bool is_valid_slot(std::size_t slot) const;

  /// All parent configurations, first parent varying slowest, each
  /// coordinate in canonical subset order. A root table has one empty config.
  std::vector<Config> configurations() const;
  std::vector<Subset> child_subsets() const { return nonempty_subsets(child_); }

  /// Renders a configuration as `{a} × {a,b}`; `-` for a root.
  std::string format_config(std::span<const Subset> config) const;

  friend bool operator==(const TableShape&, const TableShape&) = default;

 private:
  Frame child_;
  std::vector<Frame> parents_;
  std::vector<std::size_t> strides_;
  std::size_t slot_count_ = 0;
};

enum class TableKind { mass, k };

template <TableKind Kind>
class CondTable {
 public:
  CondTable() = default;
  explicit CondTable(TableShape shape)
      : shape_(std::move(shape)), values_(shape_.slot_count(), 0.0) {}
  /// Adopts a dense slot vector laid out as described above.
  CondTable(TableShape shape, std::vector<double> dense);

  static constexpr TableKind kind = Kind;

  const TableShape& shape() const noexcept { return shape_; }
  double at(std::span<const Subset> config, Subset child) const {
    return values_[shape_.slot(config, child)];
  }
  void set(std::span<const Subset> config, Subset child, double value) {
    values_[shape_.slot(config, child)] = value;
  }
  std::span<const double> dense() const noexcept { return values_; }

  friend bool operator==(const CondTable&, const CondTable&) = default;

 private:
  TableShape shape_;
  std::vector<double> values_;
};

using CondMassTable = CondTable<TableKind::mass>;
using CondKTable = CondTable<TableKind::k>;

/// K(cfg, child) = sum of m(cfg', child) over every cfg' that is a
/// coordinatewise superset of cfg. Values in [-1e-12, 0) are clamped to 0.
/// Throws InfeasibleError if any K is below -1e-12.
CondKTable m_to_k(const CondMassTable& m);

/// Möbius inversion of m_to_k over the superset lattice of the parent
/// coordinates.
CondMassTable k_to_m(const CondKTable& k);

/// Mass tables: nonfinite values are violations; the row-sum convention
/// (1 when every parent coordinate is full, else 0) is checked as warnings.
ValidationReport validate_tables(const CondMassTable& m);
/// K tables: negative entries and rows not summing to 1 are violations.
ValidationReport validate_tables(const CondKTable& k);

inline constexpr double kIdentityTolerance = 1e-12;
inline constexpr double kRowSumTolerance = 1e-9;
inline constexpr double kPrintedTolerance = 1e-6;

}  // namespace dsbn
