#include "dsbn/verify.hpp"

#include <cmath>
#include <future>
#include <iomanip>
#include <ostream>

#include "dsbn/error.hpp"

namespace dsbn {

double ExactDistribution::total() const {
  double sum = 0.0;
  for (const auto& [state, p] : probabilities) sum += p;
  return sum;
}

namespace {

constexpr double kMaxStates = 1e7;

struct Enumerator {
  const Network& net;
  const std::vector<ExtCPT>& cpts;
  std::vector<std::size_t> order;
  std::vector<std::vector<std::size_t>> parents;  // table order, per node
  std::vector<std::vector<std::size_t>> edge_h;   // per node, per table parent

  void walk(std::size_t depth, std::vector<std::uint32_t>& state, double prob,
            std::map<std::vector<std::uint32_t>, double>& out) const {
    if (depth == order.size()) {
      out.emplace(state, prob);
      return;
    }
    const std::size_t node = order[depth];
    const ExtCPT& cpt = cpts[node];
    std::vector<std::size_t> values(parents[node].size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      const std::size_t parent = parents[node][i];
      const VnExpr& pv = cpt_domain(parent)[state[parent]];
      values[i] = cpt.parent_value_index(i, pv.component(edge_h[node][i]));
    }
    auto row = cpt.row(cpt.row_index(values));
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (row[c] == 0.0) continue;
      state[node] = static_cast<std::uint32_t>(c);
      walk(depth + 1, state, prob * row[c], out);
    }
  }

  const std::vector<VnExpr>& cpt_domain(std::size_t node) const { return cpts[node].child_domain(); }
};

}  // namespace

ExactDistribution exact_extended_joint(const Network& net, const std::vector<ExtCPT>& cpts) {
  if (cpts.size() != net.size()) throw StructureError("one extended table per node is required");
  double states = 1.0;
  for (const auto& cpt : cpts) states *= static_cast<double>(cpt.column_count());
  if (states > kMaxStates) {
    throw SizeError("extended joint has " + std::to_string(static_cast<long long>(states)) +
                    " states; the limit is 1e7");
  }

  Enumerator e{net, cpts, topological_order(net), {}, {}};
  for (std::size_t node = 0; node < net.size(); ++node) {
    e.parents.push_back(net.table_parents(node));
    std::vector<std::size_t> hs;
    for (std::size_t parent : e.parents.back()) hs.push_back(edge_index(net, parent, node));
    e.edge_h.push_back(std::move(hs));
  }

  ExactDistribution out;
  out.frames = net.frames();
  if (net.size() == 0) return out;

  // Partition by the first node's value; parts are disjoint, so merging in
  // order gives the same map as a sequential walk.
  const std::size_t first = e.order.front();
  const auto first_row = cpts[first].row(0);
  std::vector<std::future<std::map<std::vector<std::uint32_t>, double>>> parts;
  for (std::size_t c = 0; c < first_row.size(); ++c) {
    if (first_row[c] == 0.0) continue;
    parts.push_back(std::async(std::launch::async, [&e, &net, first, c, p = first_row[c]] {
      std::map<std::vector<std::uint32_t>, double> part;
      std::vector<std::uint32_t> state(net.size(), 0);
      state[first] = static_cast<std::uint32_t>(c);
      e.walk(1, state, p, part);
      return part;
    }));
  }
  for (auto& f : parts) out.probabilities.merge(f.get());
  return out;
}

ExactDistribution collapse(const ExactDistribution& extended, const std::vector<ExtCPT>& cpts) {
  ExactDistribution out;
  out.collapsed = true;
  out.frames = extended.frames;
  std::vector<std::uint32_t> key(extended.frames.size());
  for (const auto& [state, p] : extended.probabilities) {
    for (std::size_t i = 0; i < state.size(); ++i) key[i] = cpts[i].child_domain()[state[i]].my().bits;
    out.probabilities[key] += p;
  }
  return out;
}

ExactDistribution exact_collapsed_joint(const Network& net, const std::vector<ExtCPT>& cpts) {
  return collapse(exact_extended_joint(net, cpts), cpts);
}

ComparisonReport compare_frequencies(const std::map<std::vector<std::uint32_t>, double>& frequencies,
                                     std::size_t records, const ExactDistribution& exact,
                                     double linf_threshold) {
  ComparisonReport report;
  report.records = records;
  report.threshold = linf_threshold;

  std::map<std::vector<std::uint32_t>, CellComparison> cells;
  for (const auto& [state, p] : exact.probabilities) cells[state] = {state, 0.0, p};
  for (const auto& [state, f] : frequencies) {
    auto& cell = cells[state];
    cell.state = state;
    cell.empirical = f;
  }

  std::size_t positive = 0;
  const double n = static_cast<double>(records);
  for (auto& [state, cell] : cells) {
    report.linf = std::max(report.linf, std::abs(cell.empirical - cell.exact));
    if (cell.exact > 0.0) {
      ++positive;
      const double expected = n * cell.exact;
      const double diff = n * cell.empirical - expected;
      report.chi_square += diff * diff / expected;
    } else if (cell.empirical > 0.0) {
      report.impossible_records += static_cast<std::size_t>(std::llround(cell.empirical * n));
    }
    report.cells.push_back(cell);
  }
  report.degrees_of_freedom = positive > 0 ? positive - 1 : 0;
  report.pass = report.linf <= linf_threshold;
  return report;
}

ComparisonReport compare_empirical(const Sample& sample, const ExactDistribution& exact,
                                   double linf_threshold) {
  if (!(sample.frames == exact.frames)) {
    throw StructureError("sample variables do not match the exact distribution's scope");
  }
  if (sample.records.empty()) throw Error("cannot compare an empty sample");
  std::map<std::vector<std::uint32_t>, double> counts;
  std::vector<std::uint32_t> key(sample.frames.size());
  for (const auto& rec : sample.records) {
    for (std::size_t i = 0; i < key.size(); ++i) {
      key[i] = exact.collapsed ? rec.collapsed[i].bits : rec.extended[i];
    }
    counts[key] += 1.0;
  }
  const double n = static_cast<double>(sample.records.size());
  for (auto& [state, c] : counts) c /= n;
  return compare_frequencies(counts, sample.records.size(), exact, linf_threshold);
}

void print_report(const ComparisonReport& report, const ExactDistribution& exact,
                  const std::vector<ExtCPT>& cpts, std::ostream& os) {
  for (const auto& f : exact.frames) os << f.variable() << '\t';
  os << "empirical\texact\n";
  for (const auto& cell : report.cells) {
    for (std::size_t i = 0; i < cell.state.size(); ++i) {
      if (exact.collapsed) {
        os << format_subset(Subset{cell.state[i]}, exact.frames[i]) << '\t';
      } else {
        os << cpts[i].format_child(cell.state[i]) << '\t';
      }
    }
    os << format_value(cell.empirical) << '\t' << format_value(cell.exact) << '\n';
  }
  os << "records: " << report.records << '\n'
     << "cells: " << report.cells.size() << '\n'
     << "linf: " << format_value(report.linf) << " (threshold " << format_value(report.threshold) << ")\n"
     << "chi-square: " << format_value(report.chi_square) << " (df " << report.degrees_of_freedom << ")\n"
     << "impossible records: " << report.impossible_records << '\n'
     << "result: " << (report.pass ? "PASS" : "FAIL") << '\n';
}

}  // namespace dsbn
