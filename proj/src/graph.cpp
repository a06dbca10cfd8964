#include "dsbn/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <queue>
#include <set>
#include <sstream>

#include "dsbn/error.hpp"

namespace dsbn {

std::size_t Network::add_variable(Frame frame) {
  if (find(frame.variable())) {
    throw StructureError("variable '" + frame.variable() + "' declared twice");
  }
  frames_.push_back(std::move(frame));
  parents_.emplace_back();
  successors_.emplace_back();
  tables_.emplace_back();
  return frames_.size() - 1;
}

void Network::add_edge(std::size_t parent, std::size_t child) {
  if (parent >= size() || child >= size()) throw StructureError("edge endpoint out of range");
  if (parent == child) throw StructureError("self-loop on '" + frames_[parent].variable() + "'");
  if (has_edge(parent, child)) {
    throw StructureError("duplicate edge " + frames_[parent].variable() + " -> " +
                         frames_[child].variable());
  }
  edges_.emplace_back(parent, child);
  parents_[child].push_back(parent);
  successors_[parent].push_back(child);
}

std::optional<std::size_t> Network::find(std::string_view variable) const {
  for (std::size_t i = 0; i < frames_.size(); ++i) {
    if (frames_[i].variable() == variable) return i;
  }
  return std::nullopt;
}

std::size_t Network::index_of(std::string_view variable) const {
  if (auto i = find(variable)) return *i;
  throw StructureError("unknown variable '" + std::string(variable) + "'");
}

bool Network::has_edge(std::size_t from, std::size_t to) const {
  const auto& s = successors_.at(from);
  return std::find(s.begin(), s.end(), to) != s.end();
}

bool Network::reaches(std::size_t from, std::size_t to) const {
  std::vector<bool> seen(size());
  std::vector<std::size_t> stack{from};
  while (!stack.empty()) {
    std::size_t v = stack.back();
    stack.pop_back();
    if (v == to) return true;
    if (seen[v]) continue;
    seen[v] = true;
    for (std::size_t w : successors_[v]) stack.push_back(w);
  }
  return false;
}

namespace {

const TableShape& shape_of(const NodeTable& t) {
  return std::visit([](const auto& table) -> const TableShape& { return table.shape(); }, t);
}

}  // namespace

void Network::set_table(std::size_t node, NodeTable table) {
  const auto& shape = shape_of(table);
  const auto& var = frames_.at(node).variable();
  if (!(shape.child() == frames_[node])) {
    throw StructureError("table child does not match variable '" + var + "'");
  }
  std::set<std::size_t> listed;
  for (const auto& pf : shape.parents()) {
    auto idx = find(pf.variable());
    if (!idx || !(frames_[*idx] == pf)) {
      throw StructureError("table for '" + var + "' conditions on unknown or mismatched variable '" +
                           pf.variable() + "'");
    }
    listed.insert(*idx);
  }
  std::set<std::size_t> actual(parents_[node].begin(), parents_[node].end());
  if (listed != actual || listed.size() != shape.parent_count()) {
    throw StructureError("table for '" + var + "' must condition on exactly its parents");
  }
  tables_[node] = std::move(table);
}

const NodeTable& Network::table(std::size_t node) const {
  if (!tables_.at(node)) {
    throw StructureError("variable '" + frames_[node].variable() + "' has no table");
  }
  return *tables_[node];
}

std::vector<std::size_t> Network::table_parents(std::size_t node) const {
  std::vector<std::size_t> out;
  for (const auto& pf : shape_of(table(node)).parents()) out.push_back(index_of(pf.variable()));
  return out;
}

CondKTable Network::k_table(std::size_t node) const {
  const auto& t = table(node);
  if (const auto* m = std::get_if<CondMassTable>(&t)) return m_to_k(*m);
  return std::get<CondKTable>(t);
}

CondMassTable Network::mass_table(std::size_t node) const {
  const auto& t = table(node);
  if (const auto* k = std::get_if<CondKTable>(&t)) return k_to_m(*k);
  return std::get<CondMassTable>(t);
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

double parse_number(std::string_view text, std::size_t line) {
  text = trim(text);
  auto parse_double = [&](std::string_view t) {
    double v = 0.0;
    if (!t.empty() && t.front() == '+') t.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
      throw ParseError("invalid number '" + std::string(text) + "'", line);
    }
    return v;
  };
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    double num = parse_double(trim(text.substr(0, slash)));
    double den = parse_double(trim(text.substr(slash + 1)));
    if (den == 0.0) throw ParseError("zero denominator in '" + std::string(text) + "'", line);
    return num / den;
  }
  return parse_double(text);
}

// Splits "{a} {a,b}" into brace groups.
std::vector<std::string_view> brace_groups(std::string_view s, std::size_t line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (true) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i == s.size()) break;
    if (s[i] != '{') throw ParseError("expected '{' in '" + std::string(s) + "'", line);
    auto close = s.find('}', i);
    if (close == std::string_view::npos) throw ParseError("unterminated subset literal", line);
    out.push_back(s.substr(i, close - i + 1));
    i = close + 1;
  }
  return out;
}

struct PendingTable {
  std::size_t line;
  std::size_t node;
  TableKind kind;
  TableShape shape;
  std::vector<double> values;
  std::set<std::size_t> seen_slots;
};

Subset parse_subset_at(std::string_view text, const Frame& frame, std::size_t line) {
  try {
    return parse_subset_label(text, frame);
  } catch (const ParseError& e) {
    throw ParseError(e.what(), line);
  }
}

}  // namespace

Network parse_network(std::string_view text) {
  Network net;
  bool named = false;
  std::vector<PendingTable> tables;
  std::optional<PendingTable> open;

  auto node_of = [&](std::string_view name, std::size_t line) {
    auto idx = net.find(name);
    if (!idx) throw ParseError("undeclared variable '" + std::string(name) + "'", line);
    return *idx;
  };

  std::vector<std::string_view> lines;
  for (std::size_t pos = 0; pos <= text.size();) {
    auto eol = std::min(text.find('\n', pos), text.size());
    lines.push_back(text.substr(pos, eol - pos));
    pos = eol + 1;
  }

  for (std::size_t line_no = 1; line_no <= lines.size(); ++line_no) {
    std::string_view line = lines[line_no - 1];
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (open) {
      if (line == "end") {
        tables.push_back(std::move(*open));
        open.reset();
        continue;
      }
      auto colon = line.rfind(':');
      if (colon == std::string_view::npos) throw ParseError("table row needs ': value'", line_no);
      double value = parse_number(line.substr(colon + 1), line_no);
      std::string_view lhs = trim(line.substr(0, colon));
      auto bar = lhs.find('|');
      std::string_view child_text = trim(lhs.substr(0, bar));
      std::string_view parent_text = bar == std::string_view::npos ? std::string_view{} : lhs.substr(bar + 1);
      const auto& shape = open->shape;
      Subset child = parse_subset_at(child_text, shape.child(), line_no);
      auto groups = brace_groups(parent_text, line_no);
      if (groups.size() != shape.parent_count()) {
        throw ParseError("row lists " + std::to_string(groups.size()) + " parent subsets, table has " +
                             std::to_string(shape.parent_count()) + " parents",
                         line_no);
      }
      Config config;
      for (std::size_t p = 0; p < groups.size(); ++p) {
        config.push_back(parse_subset_at(groups[p], shape.parents()[p], line_no));
      }
      std::size_t slot = shape.slot(config, child);
      if (!open->seen_slots.insert(slot).second) throw ParseError("duplicate table row", line_no);
      open->values[slot] = value;
      continue;
    }

    auto words = split_ws(line);
    const auto keyword = words.front();
    if (keyword == "net") {
      if (words.size() != 2) throw ParseError("expected 'net NAME'", line_no);
      if (named) throw ParseError("duplicate 'net' line", line_no);
      net.set_name(std::string(words[1]));
      named = true;
    } else if (keyword == "var") {
      if (words.size() < 4 || words[2] != ":") throw ParseError("expected 'var NAME : v1 v2 ...'", line_no);
      if (words.size() < 5) throw ParseError("variable needs at least two values", line_no);
      std::vector<std::string> values(words.begin() + 3, words.end());
      try {
        net.add_variable(Frame(std::string(words[1]), std::move(values)));
      } catch (const Error& e) {
        throw ParseError(e.what(), line_no);
      }
    } else if (keyword == "edge") {
      if (words.size() != 4 || words[2] != "->") throw ParseError("expected 'edge A -> B'", line_no);
      std::size_t from = node_of(words[1], line_no);
      std::size_t to = node_of(words[3], line_no);
      if (from == to || net.reaches(to, from)) {
        throw ParseError("edge " + std::string(words[1]) + " -> " + std::string(words[3]) +
                             " creates a cycle",
                         line_no);
      }
      try {
        net.add_edge(from, to);
      } catch (const Error& e) {
        throw ParseError(e.what(), line_no);
      }
    } else if (keyword == "table") {
      // table X | P1 P2 kind=m
      if (words.size() < 3 || words[2] != "|") throw ParseError("expected 'table X | [parents] kind=m|k'", line_no);
      std::size_t node = node_of(words[1], line_no);
      std::optional<TableKind> kind;
      std::vector<Frame> parent_frames;
      for (std::size_t i = 3; i < words.size(); ++i) {
        if (words[i].starts_with("kind=")) {
          auto k = words[i].substr(5);
          if (k == "m") kind = TableKind::mass;
          else if (k == "k") kind = TableKind::k;
          else throw ParseError("kind must be m or k", line_no);
        } else {
          parent_frames.push_back(net.frame(node_of(words[i], line_no)));
        }
      }
      if (!kind) throw ParseError("table header needs kind=m or kind=k", line_no);
      for (const auto& t : tables) {
        if (t.node == node) throw ParseError("duplicate table for '" + std::string(words[1]) + "'", line_no);
      }
      TableShape shape(net.frame(node), std::move(parent_frames));
      std::vector<double> values(shape.slot_count(), 0.0);
      open = PendingTable{line_no, node, *kind, std::move(shape), std::move(values), {}};
    } else {
      throw ParseError("unknown directive '" + std::string(keyword) + "'", line_no);
    }
  }
  if (open) throw ParseError("table not closed with 'end'", open->line);

  for (auto& t : tables) {
    try {
      if (t.kind == TableKind::mass) {
        net.set_table(t.node, CondMassTable(std::move(t.shape), std::move(t.values)));
      } else {
        net.set_table(t.node, CondKTable(std::move(t.shape), std::move(t.values)));
      }
    } catch (const StructureError& e) {
      throw ParseError(e.what(), t.line);
    }
  }
  for (std::size_t i = 0; i < net.size(); ++i) {
    if (!net.has_table(i)) throw ParseError("variable '" + net.frame(i).variable() + "' has no table");
  }
  return net;
}

Network load_network(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_network(buf.str());
}

std::string format_network(const Network& net) {
  std::ostringstream os;
  os << "net " << (net.name().empty() ? "unnamed" : net.name()) << '\n';
  for (const auto& f : net.frames()) {
    os << "var " << f.variable() << " :";
    for (const auto& v : f.values()) os << ' ' << v;
    os << '\n';
  }
  for (auto [from, to] : net.edges()) {
    os << "edge " << net.frame(from).variable() << " -> " << net.frame(to).variable() << '\n';
  }
  for (std::size_t node = 0; node < net.size(); ++node) {
    std::visit(
        [&](const auto& table) {
          const auto& shape = table.shape();
          os << "table " << shape.child().variable() << " |";
          for (const auto& p : shape.parents()) os << ' ' << p.variable();
          os << " kind=" << (table.kind == TableKind::mass ? 'm' : 'k') << '\n';
          for (const auto& config : shape.configurations()) {
            for (Subset child : shape.child_subsets()) {
              os << "  " << format_subset(child, shape.child());
              if (!config.empty()) {
                os << " |";
                for (std::size_t p = 0; p < config.size(); ++p) {
                  os << ' ' << format_subset(config[p], shape.parents()[p]);
                }
              }
              char buf[40];
              std::snprintf(buf, sizeof buf, "%.17g", table.at(config, child));
              os << " : " << buf << '\n';
            }
          }
          os << "end\n";
        },
        net.table(node));
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Structure

namespace {

// Kahn's algorithm, smallest declaration index first. Returns fewer than
// size() nodes when there is a cycle.
std::vector<std::size_t> kahn(const Network& net) {
  std::vector<std::size_t> indegree(net.size());
  for (auto [from, to] : net.edges()) ++indegree[to];
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t i = 0; i < net.size(); ++i) {
    if (indegree[i] == 0) ready.push(i);
  }
  std::vector<std::size_t> order;
  while (!ready.empty()) {
    std::size_t v = ready.top();
    ready.pop();
    order.push_back(v);
    for (std::size_t w : net.successors(v)) {
      if (--indegree[w] == 0) ready.push(w);
    }
  }
  return order;
}

}  // namespace

ValidationReport validate_structure(const Network& net) {
  ValidationReport report;
  if (kahn(net).size() != net.size()) report.violate("network contains a directed cycle");
  for (std::size_t node = 0; node < net.size(); ++node) {
    const auto& ps = net.parents(node);
    for (std::size_t i = 0; i < ps.size(); ++i) {
      for (std::size_t j = i + 1; j < ps.size(); ++j) {
        if (net.has_edge(ps[i], ps[j]) || net.has_edge(ps[j], ps[i])) {
          report.violate("parents '" + net.frame(ps[i]).variable() + "' and '" +
                         net.frame(ps[j]).variable() + "' of '" + net.frame(node).variable() +
                         "' are directly connected");
        }
      }
    }
  }
  return report;
}

std::vector<std::size_t> topological_order(const Network& net) {
  auto order = kahn(net);
  if (order.size() != net.size()) throw StructureError("network contains a directed cycle");
  return order;
}

std::size_t edge_index(const Network& net, std::size_t parent, std::size_t child) {
  const auto& s = net.successors(parent);
  auto it = std::find(s.begin(), s.end(), child);
  if (it == s.end()) {
    throw StructureError("no edge " + net.frame(parent).variable() + " -> " + net.frame(child).variable());
  }
  return static_cast<std::size_t>(it - s.begin()) + 1;
}

}  // namespace dsbn
