#pragma once

// Forward sampling over extended domains and collapse back to subsets.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "dsbn/cpt.hpp"
#include "dsbn/graph.hpp"

namespace dsbn {

/// One record, indexed by node in declaration order.
struct SampleRecord {
  std::vector<std::uint32_t> extended;  ///< index into the node's child domain
  std::vector<Subset> collapsed;        ///< MY of the extended value
};

struct Sample {
  std::vector<Frame> frames;
  std::vector<const std::vector<VnExpr>*> domains;
  std::vector<SampleRecord> records;

  const VnExpr& extended_value(std::size_t record, std::size_t node) const {
    return (*domains[node])[records[record].extended[node]];
  }
};

/// Builds each node's extended table (n = its successor count). Throws
/// StructureError if validate_structure reports violations and
/// InfeasibleError on a negative entry under NegativePolicy::reject.
std::vector<ExtCPT> build_network_cpts(const Network& net,
                                       NegativePolicy policy = NegativePolicy::reject);

struct SamplerOptions {
  std::uint64_t seed = 0;
  /// 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

/// Draws `count` i.i.d. records. Record r uses its own generator seeded from
/// (seed, r), and one uniform per node in topological order, so output does
/// not depend on the thread count. Throws InfeasibleError if any table has a
/// negative or unfilled entry.
Sample generate(const Network& net, const std::vector<ExtCPT>& cpts, std::size_t count,
                const SamplerOptions& options = {});

/// Coordinatewise MY of a record.
std::vector<Subset> collapse(const Sample& sample, std::size_t record);

/// Header of variable names, then one line of collapsed subset literals per
/// record. Cells containing commas are quoted.
void write_csv(const Sample& sample, std::ostream& os);
/// Throws Error if the file cannot be written.
void write_csv(const Sample& sample, const std::filesystem::path& path);

}  // namespace dsbn
