#pragma once

// Shared test fixtures: binary frames, the worked conditional tables and
// small builders.

#include <array>
#include <random>
#include <string>
#include <vector>

#include "dsbn/graph.hpp"
#include "dsbn/subset.hpp"
#include "dsbn/tables.hpp"

namespace fixtures {

inline const std::string kDataDir = DSBN_DATA_DIR;

inline dsbn::Frame binary(const std::string& name) { return dsbn::Frame(name, {"a", "b"}); }

inline constexpr dsbn::Subset A{1}, B{2}, AB{3};

struct Row {
  dsbn::Subset parent;
  dsbn::Subset child;
  double value;
};

// Conditional of X2 given X1 used by the worked example and the star
// network, as exact rationals.
inline const std::array<Row, 9> kWorkedMass{{
    {A, A, 1.0 / 6}, {A, B, -1.0 / 12}, {A, AB, -1.0 / 12},
    {B, A, -1.0 / 12}, {B, B, 1.0 / 6}, {B, AB, -1.0 / 12},
    {AB, A, 0.35}, {AB, B, 0.35}, {AB, AB, 0.3},
}};

// The same table as printed (six significant digits).
inline const std::array<Row, 9> kWorkedMassPrinted{{
    {A, A, 0.166667}, {A, B, -0.0833333}, {A, AB, -0.0833333},
    {B, A, -0.0833333}, {B, B, 0.166667}, {B, AB, -0.0833333},
    {AB, A, 0.35}, {AB, B, 0.35}, {AB, AB, 0.3},
}};

// Printed K table obtained from it.
inline const std::array<Row, 9> kWorkedK{{
    {A, A, 0.516667}, {A, B, 0.266667}, {A, AB, 0.216667},
    {B, A, 0.266667}, {B, B, 0.516667}, {B, AB, 0.216667},
    {AB, A, 0.35}, {AB, B, 0.35}, {AB, AB, 0.3},
}};

// Chain conditional, exact rationals behind the printed 0.293333 etc.
inline const std::array<Row, 9> kChainMass{{
    {A, A, 22.0 / 75}, {A, B, -19.0 / 150}, {A, AB, -1.0 / 6},
    {B, A, -19.0 / 150}, {B, B, 22.0 / 75}, {B, AB, -1.0 / 6},
    {AB, A, 0.3}, {AB, B, 0.3}, {AB, AB, 0.4},
}};

inline dsbn::CondMassTable conditional(const std::array<Row, 9>& rows,
                                       const std::string& child = "X2",
                                       const std::string& parent = "X1") {
  dsbn::CondMassTable t(dsbn::TableShape(binary(child), {binary(parent)}));
  for (const auto& r : rows) t.set(std::vector{r.parent}, r.child, r.value);
  return t;
}

inline dsbn::CondKTable k_conditional(const std::array<Row, 9>& rows) {
  dsbn::CondKTable t(dsbn::TableShape(binary("X2"), {binary("X1")}));
  for (const auto& r : rows) t.set(std::vector{r.parent}, r.child, r.value);
  return t;
}

inline dsbn::CondMassTable root_mass(const std::string& name = "X1", double a = 0.4, double b = 0.4,
                                     double ab = 0.2) {
  dsbn::CondMassTable t(dsbn::TableShape(binary(name), {}));
  t.set(dsbn::Config{}, A, a);
  t.set(dsbn::Config{}, B, b);
  t.set(dsbn::Config{}, AB, ab);
  return t;
}

inline dsbn::Network load(const std::string& file) { return dsbn::load_network(kDataDir + "/" + file); }

/// Vacuous network: every table puts all mass on the full child set under
/// the full parent configuration.
inline dsbn::Network vacuous_chain(std::size_t nodes) {
  dsbn::Network net("vacuous");
  for (std::size_t i = 0; i < nodes; ++i) net.add_variable(binary("X" + std::to_string(i + 1)));
  for (std::size_t i = 1; i < nodes; ++i) net.add_edge(i - 1, i);
  for (std::size_t i = 0; i < nodes; ++i) {
    std::vector<dsbn::Frame> parents;
    if (i > 0) parents.push_back(net.frame(i - 1));
    dsbn::CondMassTable t(dsbn::TableShape(net.frame(i), parents));
    dsbn::Config full(parents.size(), AB);
    t.set(full, AB, 1.0);
    net.set_table(i, std::move(t));
  }
  return net;
}

/// Random complete mass table: every slot gets a value in [-1, 1].
inline dsbn::CondMassTable random_mass(std::mt19937_64& rng, const dsbn::Frame& child,
                                       const std::vector<dsbn::Frame>& parents) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  dsbn::TableShape shape(child, parents);
  dsbn::CondMassTable t(shape);
  for (const auto& cfg : shape.configurations()) {
    for (auto s : shape.child_subsets()) t.set(cfg, s, u(rng));
  }
  return t;
}

inline dsbn::Frame sized_frame(const std::string& name, std::size_t n) {
  std::vector<std::string> values;
  for (std::size_t i = 0; i < n; ++i) values.push_back(std::string(1, static_cast<char>('a' + i)));
  return dsbn::Frame(name, values);
}

}  // namespace fixtures
