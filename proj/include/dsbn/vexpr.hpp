#pragma once

// Extended variable values. A V-expression is a base subset S, or a compound
// s⊙V / s⊗V with s a proper nonempty subset of MY(V). MY() is the outermost
// subset and SU() the expression it refines. A V(n)-expression is an n-vector
// of V-expressions: either n copies of a base subset, or a family member
// choosing ⊙ or ⊗ per coordinate over one (s, V) pair, never all ⊙.
//
// Text forms: `{a}`, `{a}o{a,b}` for ⊙, `{a}@{a,b}` for ⊗, nested to the
// right (`{a}@{a,b}o{a,b,c}`); vectors as `[c1;c2;...;cn]` when n >= 2 and
// as the bare component when n <= 1.

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dsbn/subset.hpp"

namespace dsbn {

enum class Op : std::uint8_t { dot, at };

inline constexpr std::size_t kMaxExtendedFrame = 4;
inline constexpr std::size_t kMaxSuccessors = 6;

class VExpr {
 public:
  /// Default: an invalid empty expression; only useful as a placeholder.
  VExpr() = default;

  static VExpr base(Subset s);
  /// Throws std::invalid_argument unless `s` is a proper nonempty subset of MY(v).
  static VExpr compound(Subset s, Op op, const VExpr& v);

  Subset my() const { return masks_.front(); }
  bool is_base() const noexcept { return ops_.empty(); }
  /// Operator joining MY to SU; only meaningful for compounds.
  Op op() const { return ops_.front(); }
  /// Empty for a base expression.
  std::optional<VExpr> su() const;
  /// Number of compound layers; 0 for a base.
  std::size_t depth() const noexcept { return ops_.size(); }
  /// The innermost base subset.
  Subset root() const { return masks_.back(); }

  /// Canonical order: depth, then operators outermost first (⊙ before ⊗),
  /// then subsets innermost first in canonical subset order.
  friend std::strong_ordering operator<=>(const VExpr& a, const VExpr& b);
  friend bool operator==(const VExpr& a, const VExpr& b) = default;

 private:
  std::vector<Subset> masks_;  // outermost (MY) first
  std::vector<Op> ops_;        // ops_[i] joins masks_[i] to the rest
};

class VnExpr {
 public:
  VnExpr() = default;

  /// n copies of `s`; n == 0 denotes a leaf value.
  static VnExpr plain(Subset s, std::size_t n);
  /// Family member over (s, v). Bit h-1 of `pattern` selects ⊗ for
  /// coordinate h. Throws std::invalid_argument on an all-⊙ pattern, a
  /// pattern wider than n, or s not a proper nonempty subset of MY(v).
  static VnExpr family(Subset s, const VExpr& v, std::uint32_t pattern, std::size_t n);

  Subset my() const noexcept { return my_; }
  bool is_plain() const noexcept { return !su_.has_value(); }
  const std::optional<VExpr>& su() const noexcept { return su_; }
  std::uint32_t pattern() const noexcept { return pattern_; }
  std::size_t n() const noexcept { return n_; }

  /// The V-expression passed along the h-th outgoing edge, 1 <= h <= n.
  VExpr component(std::size_t h) const;

  friend std::strong_ordering operator<=>(const VnExpr& a, const VnExpr& b);
  friend bool operator==(const VnExpr& a, const VnExpr& b) = default;

 private:
  Subset my_;
  std::optional<VExpr> su_;
  std::uint32_t pattern_ = 0;
  std::size_t n_ = 0;
};

/// Every V-expression over `frame` in canonical order. Results are cached.
/// Throws SizeError for frames above kMaxExtendedFrame values.
const std::vector<VExpr>& enumerate_vexprs(const Frame& frame);

/// Plain vectors for every nonempty subset, then every family member, for
/// 1 <= n <= kMaxSuccessors. Results are cached.
const std::vector<VnExpr>& enumerate_vn(const Frame& frame, std::size_t n);

/// Domain of a node with n successors: enumerate_vn for n >= 1, the plain
/// subsets for a leaf (n == 0).
const std::vector<VnExpr>& child_domain(const Frame& frame, std::size_t n);

/// Throws std::out_of_range unless 1 <= h <= x.n().
VExpr component(const VnExpr& x, std::size_t h);

std::string format_vexpr(const VExpr& v, const Frame& frame);
std::string format_vn(const VnExpr& x, const Frame& frame);
VExpr parse_vexpr(std::string_view text, const Frame& frame);
VnExpr parse_vn(std::string_view text, const Frame& frame, std::size_t n);

}  // namespace dsbn
