#pragma once

// Network definition: frames, directed edges and one conditional table per
// node. Text format (line oriented, `#` starts a comment):
//
//   net NAME
//   var X1 : a b
//   edge X1 -> X2
//   table X1 | kind=m
//     {a} : 0.4
//   end
//   table X2 | X1 kind=m
//     {a} | {a} : 1/6
//   end
//
// Table rows are `child | parent-subsets... : value`; parent subsets follow
// the header's parent order. Values are decimal or `p/q` rationals. Rows
// that are not listed are 0.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "dsbn/report.hpp"
#include "dsbn/tables.hpp"

namespace dsbn {

using NodeTable = std::variant<CondMassTable, CondKTable>;

class Network {
 public:
  Network() = default;
  explicit Network(std::string name) : name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  std::size_t add_variable(Frame frame);
  /// Declaration order of edges fixes each parent's successor order.
  void add_edge(std::size_t parent, std::size_t child);
  /// The table's child must be `node` and its parent set must equal the
  /// node's parents (any order).
  void set_table(std::size_t node, NodeTable table);

  std::size_t size() const noexcept { return frames_.size(); }
  const Frame& frame(std::size_t node) const { return frames_.at(node); }
  const std::vector<Frame>& frames() const noexcept { return frames_; }
  std::optional<std::size_t> find(std::string_view variable) const;
  /// Throws StructureError for unknown names.
  std::size_t index_of(std::string_view variable) const;

  const std::vector<std::pair<std::size_t, std::size_t>>& edges() const noexcept { return edges_; }
  const std::vector<std::size_t>& parents(std::size_t node) const { return parents_.at(node); }
  const std::vector<std::size_t>& successors(std::size_t node) const {
    return successors_.at(node);
  }
  bool has_edge(std::size_t from, std::size_t to) const;
  /// True if `to` is reachable from `from` along edges.
  bool reaches(std::size_t from, std::size_t to) const;

  bool has_table(std::size_t node) const { return tables_.at(node).has_value(); }
  const NodeTable& table(std::size_t node) const;
  /// Parents in the order the node's table lists them.
  std::vector<std::size_t> table_parents(std::size_t node) const;
  /// The node's table as K values (converted if stored as masses).
  CondKTable k_table(std::size_t node) const;
  /// The node's table as masses (inverted if stored as K values).
  CondMassTable mass_table(std::size_t node) const;

 private:
  std::string name_;
  std::vector<Frame> frames_;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
  std::vector<std::vector<std::size_t>> parents_;
  std::vector<std::vector<std::size_t>> successors_;
  std::vector<std::optional<NodeTable>> tables_;
};

/// Throws ParseError (with line number) on syntax errors, undeclared
/// variables, duplicate tables or rows, cycles and missing tables.
Network parse_network(std::string_view text);
Network load_network(const std::filesystem::path& path);

/// Writes the network back in the text format. Tables are emitted in full,
/// with values at 17 significant digits.
std::string format_network(const Network& net);

/// Reports cycles and nodes with two parents joined by an edge.
ValidationReport validate_structure(const Network& net);

/// Parents before children; ties broken by declaration order. Throws
/// StructureError on a cycle.
std::vector<std::size_t> topological_order(const Network& net);

/// 1-based position of `child` in `parent`'s successor list. Throws
/// StructureError if there is no such edge.
std::size_t edge_index(const Network& net, std::size_t parent, std::size_t child);

}  // namespace dsbn
