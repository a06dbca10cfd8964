#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "dsbn/cpt.hpp"
#include "dsbn/error.hpp"
#include "fixtures.hpp"

using namespace dsbn;
using fixtures::A;
using fixtures::AB;
using fixtures::B;

namespace {

struct Printed {
  const char* parent;
  const char* child;
  double p;
};

// The printed P(X2'|X1'') table for a single-successor child.
const Printed kPrintedP[] = {
    {"{a}", "{a}", 0.3},
    {"{a}", "{a}@{a,b}", 0.216667},
    {"{a}", "{b}", 0.05},
    {"{a}", "{b}@{a,b}", 0.216667},
    {"{a}", "{a,b}", 0.216667},
    {"{b}", "{a}", 0.05},
    {"{b}", "{a}@{a,b}", 0.216667},
    {"{b}", "{b}", 0.3},
    {"{b}", "{b}@{a,b}", 0.216667},
    {"{b}", "{a,b}", 0.216667},
    {"{a,b}", "{a}", 0.05},
    {"{a,b}", "{a}@{a,b}", 0.3},
    {"{a,b}", "{b}", 0.05},
    {"{a,b}", "{b}@{a,b}", 0.3},
    {"{a,b}", "{a,b}", 0.3},
    {"{a}o{a,b}", "{a}", 0.05},
    {"{b}o{a,b}", "{a}", 0.05},
    {"{b}o{a,b}", "{a,b}", 0.3},
    {"{a}@{a,b}", "{a}", 0.55},
    {"{a}@{a,b}", "{a}@{a,b}", 0.133333},
    {"{a}@{a,b}", "{b}", 0.05},
    {"{a}@{a,b}", "{b}@{a,b}", 0.133333},
    {"{a}@{a,b}", "{a,b}", 0.133333},
    {"{b}@{a,b}", "{a}", 0.05},
    {"{b}@{a,b}", "{a}@{a,b}", 0.133333},
    {"{b}@{a,b}", "{b}", 0.55},
    {"{b}@{a,b}", "{b}@{a,b}", 0.133333},
    {"{b}@{a,b}", "{a,b}", 0.133333},
};

double lookup(const ExtCPT& cpt, const std::string& parent, const std::string& child) {
  const std::size_t pv = cpt.parent_value_index(0, parse_vexpr(parent, cpt.parent_frames()[0]));
  const std::size_t row = cpt.row_index(std::vector{pv});
  return cpt.at(row, cpt.child_index(parse_vn(child, cpt.child_frame(), cpt.successors())));
}

CondKTable root_k(double a, double b, double ab) { return m_to_k(fixtures::root_mass("X1", a, b, ab)); }

// Random proper conditional: each parent configuration gets a Dirichlet-like
// positive mass row; K rows are then nonnegative.
CondKTable random_k(std::mt19937_64& rng, const std::vector<Frame>& parents, const Frame& child) {
  TableShape shape(child, parents);
  CondKTable k(shape);
  std::gamma_distribution<double> g(1.0);
  for (const auto& cfg : shape.configurations()) {
    double sum = 0.0;
    std::vector<double> row;
    for (Subset s : shape.child_subsets()) row.push_back(g(rng)), sum += row.back();
    std::size_t i = 0;
    for (Subset s : shape.child_subsets()) k.set(cfg, s, row[i++] / sum);
  }
  return k;
}

}  // namespace

TEST_CASE("single-successor table reproduces every printed value") {
  for (const auto* rows : {&fixtures::kWorkedMass, &fixtures::kWorkedMassPrinted}) {
    const auto cpt = build_ext_cpt(m_to_k(fixtures::conditional(*rows)), 1);
    CHECK(cpt.row_count() == 7);
    CHECK(cpt.column_count() == 5);
    CHECK(cpt.complete());
    for (const auto& p : kPrintedP) {
      INFO(p.parent, " -> ", p.child);
      CHECK(std::abs(lookup(cpt, p.parent, p.child) - p.p) <= kPrintedTolerance);
    }
    if (rows == &fixtures::kWorkedMass) {
      CHECK(check_feasibility(cpt).ok());
    } else {
      // Six-digit inputs leave K rows off 1 by about 3e-7.
      for (std::size_t r = 0; r < cpt.row_count(); ++r) {
        for (double v : cpt.row(r)) CHECK(v >= 0.0);
      }
    }
  }
}

TEST_CASE("root with four successors uses the divided split") {
  const auto cpt = build_ext_cpt(root_k(0.4, 0.4, 0.2), 4);
  CHECK(cpt.row_count() == 1);
  CHECK(cpt.column_count() == 33);
  const Frame& f = cpt.child_frame();
  CHECK(cpt.at(0, cpt.child_index(VnExpr::plain(AB, 4))) == doctest::Approx(0.2));
  CHECK(cpt.at(0, cpt.child_index(VnExpr::plain(A, 4))) == doctest::Approx(0.2));
  double class_a = 0.0;
  for (std::size_t c = 0; c < cpt.column_count(); ++c) {
    const auto& x = cpt.child_domain()[c];
    if (!x.is_plain()) CHECK(cpt.at(0, c) == doctest::Approx(0.2 / 15));
    if (x.my() == A) class_a += cpt.at(0, c);
  }
  CHECK(class_a == doctest::Approx(0.4));
  CHECK(format_vn(cpt.child_domain()[3], f).front() == '[');
}

TEST_CASE("vacuous K puts everything on the full plain value") {
  CondKTable k(TableShape(fixtures::binary("X2"), {fixtures::binary("X1")}));
  for (Subset p : {A, B, AB}) k.set(std::vector{p}, AB, 1.0);
  for (std::size_t n : {0u, 1u, 3u}) {
    const auto cpt = build_ext_cpt(k, n);
    const std::size_t full = cpt.child_index(VnExpr::plain(AB, n));
    for (std::size_t r = 0; r < cpt.row_count(); ++r) {
      for (std::size_t c = 0; c < cpt.column_count(); ++c) CHECK(cpt.at(r, c) == (c == full ? 1.0 : 0.0));
    }
    CHECK(check_feasibility(cpt).ok());
  }
}

TEST_CASE("leaf rows equal K") {
  const auto k = fixtures::k_conditional(fixtures::kWorkedK);
  const auto cpt = build_ext_cpt(k, 0);
  CHECK(cpt.column_count() == 3);
  CHECK(lookup(cpt, "{a}", "{a}") == k.at(std::vector{A}, A));
  CHECK(lookup(cpt, "{a}@{a,b}", "{a}") == doctest::Approx(2 * 0.516667 - 0.35));
}

TEST_CASE("chain conditional is infeasible at a named row") {
  const auto k = m_to_k(fixtures::conditional(fixtures::kChainMass));
  try {
    build_ext_cpt(k, 1);
    FAIL("expected InfeasibleError");
  } catch (const InfeasibleError& e) {
    const std::string what = e.what();
    CHECK(what.find("P({b}|{a})") != std::string::npos);
    CHECK(what.find("-0.06") != std::string::npos);
  }
  const auto kept = build_ext_cpt(k, 1, NegativePolicy::keep);
  CHECK(std::abs(lookup(kept, "{a}", "{b}") - (-0.06)) <= 1e-9);
  CHECK_FALSE(check_feasibility(kept).ok());
}

TEST_CASE("plain rows alone leave compound rows unfilled") {
  const auto partial = build_plain_rows(fixtures::k_conditional(fixtures::kWorkedK), 1);
  CHECK_FALSE(partial.complete());
  std::size_t filled = 0;
  for (std::size_t r = 0; r < partial.row_count(); ++r) filled += partial.row_filled(r);
  CHECK(filled == 3);
  CHECK(extend_parent_rows(partial).complete());
}

TEST_CASE("rule identities hold on random multi-parent tables") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Frame> parents;
    const int count = 1 + trial % 3;
    const std::size_t size = count == 3 ? 2 : 2 + (trial / 3) % 2;
    for (int p = 0; p < count; ++p) parents.push_back(fixtures::sized_frame("P" + std::to_string(p), size));
    const auto k = random_k(rng, parents, fixtures::sized_frame("C", 2 + trial % 2));
    const auto cpt = build_ext_cpt(k, static_cast<std::size_t>(trial % 3), NegativePolicy::keep);
    const auto report = check_feasibility(cpt);
    for (const auto& f : report.findings()) {
      INFO(f.message);
      CHECK(f.message.find("negative") != std::string::npos);
    }
  }
}

TEST_CASE("feasibility report catches a tampered row") {
  auto cpt = build_ext_cpt(fixtures::k_conditional(fixtures::kWorkedK), 1);
  const auto row = cpt.row_index(std::vector<std::size_t>{cpt.parent_value_index(0, parse_vexpr("{a}o{a,b}", cpt.parent_frames()[0]))});
  cpt.mutable_row(row)[0] += 1e-3;
  cpt.mutable_row(row)[1] -= 1e-3;
  CHECK_FALSE(check_feasibility(cpt).ok());
}

TEST_CASE("cpt csv") {
  const auto cpt = build_ext_cpt(fixtures::k_conditional(fixtures::kWorkedK), 1);
  std::ostringstream os;
  write_cpt_csv(cpt, os);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "X1,X2,p");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 35);
  CHECK(os.str().find("\"{a}@{a,b}\",{a},0.550000000") != std::string::npos);
}
