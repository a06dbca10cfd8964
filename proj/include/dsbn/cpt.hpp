#pragma once

// Conditional probability tables over extended domains, built from a K
// table. The child ranges over V(n)-expressions (n = successor count) and
// every parent over all V-expressions of its own frame.
//
// Rows with only base-subset parents come straight from K:
//   - a family member with SU = V gets reserve(V) / (2^n - 1), where
//     reserve(S) = P(S^n) for a base S, reserve(t⊗W) = reserve(W) / (2^n - 1)
//     (the all-⊗ member of the (t, W) family) and reserve(t⊙W) = 0 (the
//     all-⊙ vector is not a domain value);
//   - a family member whose MY has K = 0 gets 0 instead, since its whole
//     MY-class must vanish;
//   - a plain S^n gets K(S) minus its MY-class family members, so the
//     MY-class of every subset sums to K exactly.
// Rows with compound parents follow from those: a ⊙ coordinate is replaced
// by its SU; a ⊗ coordinate x gives 2 * row(MY(x)) - row(SU(x)).

#include <iosfwd>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "dsbn/report.hpp"
#include "dsbn/tables.hpp"
#include "dsbn/vexpr.hpp"

namespace dsbn {

enum class NegativePolicy {
  reject,  ///< throw InfeasibleError on the first entry below -1e-12
  keep,    ///< keep negative entries for check_feasibility to report
};

class ExtCPT {
 public:
  /// Allocates every row as unfilled (NaN) for the given K table.
  ExtCPT(CondKTable source, std::size_t successors);

  const CondKTable& source() const noexcept { return *source_; }
  const Frame& child_frame() const noexcept { return source_->shape().child(); }
  const std::vector<Frame>& parent_frames() const noexcept { return source_->shape().parents(); }
  std::size_t successors() const noexcept { return successors_; }

  const std::vector<VnExpr>& child_domain() const noexcept { return *child_domain_; }
  const std::vector<VExpr>& parent_domain(std::size_t p) const { return *parent_domains_.at(p); }

  std::size_t row_count() const noexcept { return row_count_; }
  std::size_t column_count() const noexcept { return child_domain_->size(); }

  /// Row of a configuration given as indices into the parent domains.
  std::size_t row_index(std::span<const std::size_t> parent_values) const;
  std::vector<std::size_t> row_values(std::size_t row) const;

  /// Index of `v` in parent `p`'s domain; throws std::out_of_range.
  std::size_t parent_value_index(std::size_t p, const VExpr& v) const;
  std::size_t child_index(const VnExpr& x) const;

  std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * column_count(), column_count()};
  }
  std::span<double> mutable_row(std::size_t r) {
    return {values_.data() + r * column_count(), column_count()};
  }
  double at(std::size_t r, std::size_t column) const { return values_[r * column_count() + column]; }
  bool row_filled(std::size_t r) const { return filled_[r]; }
  void mark_filled(std::size_t r) { filled_[r] = true; }
  bool complete() const;

  /// `{a}@{a,b} × {b}`, or `-` for a root.
  std::string format_row(std::size_t r) const;
  std::string format_child(std::size_t column) const;

 private:
  std::shared_ptr<const CondKTable> source_;
  std::size_t successors_;
  const std::vector<VnExpr>* child_domain_;
  std::vector<const std::vector<VExpr>*> parent_domains_;
  std::vector<std::size_t> radices_;
  std::size_t row_count_ = 1;
  std::vector<double> values_;
  std::vector<bool> filled_;
};

/// Fills every row whose parents are all base subsets.
ExtCPT build_plain_rows(const CondKTable& k, std::size_t successors,
                        NegativePolicy policy = NegativePolicy::reject);

/// Fills the remaining rows from the base-parent rows.
ExtCPT extend_parent_rows(ExtCPT partial, NegativePolicy policy = NegativePolicy::reject);

/// build_plain_rows followed by extend_parent_rows.
ExtCPT build_ext_cpt(const CondKTable& k, std::size_t successors,
                     NegativePolicy policy = NegativePolicy::reject);

/// Negative entries, row sums, MY-class aggregation against K, ⊙-row
/// equality and the ⊗ average identity.
ValidationReport check_feasibility(const ExtCPT& cpt);

/// CSV: one column per parent (canonical V-expression text), the child
/// value, then `p` with 9 decimals.
void write_cpt_csv(const ExtCPT& cpt, std::ostream& os);

}  // namespace dsbn
