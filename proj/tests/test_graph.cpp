#include <doctest.h>

#include <random>

#include "dsbn/error.hpp"
#include "dsbn/graph.hpp"
#include "fixtures.hpp"

using namespace dsbn;
using fixtures::A;
using fixtures::AB;
using fixtures::B;

namespace {

const char* kHeader =
    "net t\n"
    "var X1 : a b\n"
    "var X2 : a b\n";

std::string root_table(const std::string& name) {
  return "table " + name + " | kind=m\n  {a,b} : 1\nend\n";
}

}  // namespace

TEST_CASE("chain file") {
  const auto net = fixtures::load("fig1a.dsn");
  CHECK(net.size() == 4);
  CHECK(net.edges().size() == 3);
  CHECK(topological_order(net) == std::vector<std::size_t>{0, 1, 2, 3});
  CHECK(validate_structure(net).ok());
  CHECK(net.successors(1) == std::vector<std::size_t>{2});
  CHECK(std::get<CondMassTable>(net.table(1)).at(std::vector{A}, A) == doctest::Approx(22.0 / 75));
}

TEST_CASE("star file and edge indices") {
  const auto net = fixtures::load("fig1b.dsn");
  CHECK(validate_structure(net).ok());
  CHECK(net.successors(0).size() == 4);
  CHECK(edge_index(net, 0, net.index_of("X3")) == 2);
  CHECK(edge_index(net, 0, net.index_of("X5")) == 4);
  CHECK_THROWS_AS(edge_index(net, 1, 2), StructureError);
}

TEST_CASE("parse errors carry line numbers") {
  SUBCASE("self loop") {
    try {
      parse_network(std::string(kHeader) + "edge X1 -> X1\n");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 4);
    }
  }
  SUBCASE("cycle") {
    CHECK_THROWS_AS(parse_network(std::string(kHeader) + "edge X1 -> X2\nedge X2 -> X1\n"), ParseError);
  }
  SUBCASE("duplicate table") {
    const std::string text = std::string(kHeader) + root_table("X1") + root_table("X2") + root_table("X2");
    try {
      parse_network(text);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 10);
    }
  }
  SUBCASE("undeclared variable") {
    CHECK_THROWS_AS(parse_network(std::string(kHeader) + "edge X1 -> X9\n"), ParseError);
  }
  SUBCASE("missing table") {
    CHECK_THROWS_AS(parse_network(std::string(kHeader) + root_table("X1")), ParseError);
  }
  SUBCASE("bad value") {
    CHECK_THROWS_AS(parse_network(std::string(kHeader) + "table X1 | kind=m\n  {a} : x\nend\n"), ParseError);
  }
}

TEST_CASE("rows default to zero and rationals parse") {
  const auto net = parse_network(std::string(kHeader) + "edge X1 -> X2\n" + root_table("X1") +
                                 "table X2 | X1 kind=m\n  {a} | {a} : 1/3\n  {a,b} | {a,b} : 1\nend\n");
  const auto& t = std::get<CondMassTable>(net.table(1));
  CHECK(t.at(std::vector{A}, A) == 1.0 / 3);
  CHECK(t.at(std::vector{B}, A) == 0.0);
}

TEST_CASE("parents joined by an edge violate the restriction") {
  Network net("tri");
  for (int i = 1; i <= 3; ++i) net.add_variable(fixtures::binary("X" + std::to_string(i)));
  net.add_edge(0, 1);
  net.add_edge(0, 2);
  net.add_edge(1, 2);
  const auto report = validate_structure(net);
  CHECK(report.violation_count() == 1);
  CHECK(report.findings().front().message.find("X3") != std::string::npos);
}

TEST_CASE("reversed declaration still sorts parents first") {
  const auto net = parse_network(
      "var X4 : a b\nvar X3 : a b\nvar X2 : a b\nvar X1 : a b\n"
      "edge X3 -> X4\nedge X2 -> X3\nedge X1 -> X2\n"
      "table X1 | kind=m\n {a,b} : 1\nend\n"
      "table X2 | X1 kind=m\n {a,b} | {a,b} : 1\nend\n"
      "table X3 | X2 kind=m\n {a,b} | {a,b} : 1\nend\n"
      "table X4 | X3 kind=m\n {a,b} | {a,b} : 1\nend\n");
  CHECK(topological_order(net) == std::vector<std::size_t>{3, 2, 1, 0});
}

TEST_CASE("topological order and edge indices on random DAGs") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t nodes = 2 + trial % 7;
    std::vector<std::size_t> perm(nodes);
    for (std::size_t i = 0; i < nodes; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    Network net("dag");
    for (std::size_t i = 0; i < nodes; ++i) net.add_variable(fixtures::binary("V" + std::to_string(i)));
    std::bernoulli_distribution coin(0.4);
    // Edges follow a hidden permutation, so the graph is acyclic.
    for (std::size_t i = 0; i < nodes; ++i) {
      for (std::size_t j = i + 1; j < nodes; ++j) {
        if (coin(rng)) net.add_edge(perm[i], perm[j]);
      }
    }
    const auto order = topological_order(net);
    std::vector<std::size_t> pos(nodes);
    for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
    for (auto [from, to] : net.edges()) CHECK(pos[from] < pos[to]);
    for (std::size_t p = 0; p < nodes; ++p) {
      std::vector<std::size_t> hs;
      for (std::size_t c : net.successors(p)) hs.push_back(edge_index(net, p, c));
      for (std::size_t h = 0; h < hs.size(); ++h) CHECK(hs[h] == h + 1);
    }
  }
}

TEST_CASE("format_network roundtrips") {
  for (const char* file : {"fig1a.dsn", "fig1b.dsn", "pair.dsn"}) {
    const auto net = fixtures::load(file);
    const auto again = parse_network(format_network(net));
    CHECK(again.name() == net.name());
    CHECK(again.frames() == net.frames());
    CHECK(again.edges() == net.edges());
    for (std::size_t i = 0; i < net.size(); ++i) CHECK(again.table(i) == net.table(i));
  }
}

TEST_CASE("k tables convert on demand") {
  const auto net = fixtures::load("pair.dsn");
  const auto k = net.k_table(1);
  CHECK(std::abs(k.at(std::vector{A}, A) - 0.516667) <= 1e-6);
  CHECK(net.mass_table(1) == std::get<CondMassTable>(net.table(1)));
}
