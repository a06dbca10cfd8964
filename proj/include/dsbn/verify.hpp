#pragma once

// Exact distributions realized by the extended tables, and comparison of
// generated samples against them.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <vector>

#include "dsbn/cpt.hpp"
#include "dsbn/graph.hpp"
#include "dsbn/sampler.hpp"

namespace dsbn {

/// States are indexed by node in declaration order. Extended states hold
/// child-domain indices; collapsed states hold subset masks.
struct ExactDistribution {
  bool collapsed = false;
  std::vector<Frame> frames;
  std::map<std::vector<std::uint32_t>, double> probabilities;

  double total() const;
};

/// Product over nodes of the table entry selected by each node's value
/// given its parents' contributed components. States of probability 0 are
/// omitted. Throws SizeError above 1e7 joint states.
ExactDistribution exact_extended_joint(const Network& net, const std::vector<ExtCPT>& cpts);

/// Push-forward of the extended joint under coordinatewise MY.
ExactDistribution exact_collapsed_joint(const Network& net, const std::vector<ExtCPT>& cpts);
ExactDistribution collapse(const ExactDistribution& extended, const std::vector<ExtCPT>& cpts);

struct CellComparison {
  std::vector<std::uint32_t> state;
  double empirical;
  double exact;
};

struct ComparisonReport {
  std::size_t records = 0;
  std::vector<CellComparison> cells;  ///< union of observed and possible states
  double linf = 0.0;
  double chi_square = 0.0;            ///< over cells with exact > 0
  std::size_t degrees_of_freedom = 0; ///< (#cells with exact > 0) - 1
  std::size_t impossible_records = 0; ///< records on states of exact probability 0
  double threshold = 0.0;
  bool pass = false;                  ///< linf <= threshold
};

/// Compares empirical frequencies of `sample` (collapsed or extended,
/// matching `exact`) with `exact`. Throws StructureError if the sample's
/// variables differ from the distribution's.
ComparisonReport compare_empirical(const Sample& sample, const ExactDistribution& exact,
                                   double linf_threshold);

/// Same comparison from per-state frequencies summing to 1 over `records`
/// draws.
ComparisonReport compare_frequencies(const std::map<std::vector<std::uint32_t>, double>& frequencies,
                                     std::size_t records, const ExactDistribution& exact,
                                     double linf_threshold);

/// Cell table followed by the summary lines.
void print_report(const ComparisonReport& report, const ExactDistribution& exact,
                  const std::vector<ExtCPT>& cpts, std::ostream& os);

}  // namespace dsbn
