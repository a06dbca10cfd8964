#include <doctest.h>

#include <algorithm>
#include <set>
#include <stdexcept>

#include "dsbn/error.hpp"
#include "dsbn/vexpr.hpp"
#include "fixtures.hpp"

using namespace dsbn;
using fixtures::A;
using fixtures::AB;
using fixtures::B;

namespace {

// Closure of the recursive definition, built by repeated expansion until no
// new expression appears. Order is irrelevant here.
std::set<std::string> brute_vexprs(const Frame& f) {
  std::set<std::string> seen;
  std::vector<VExpr> frontier;
  for (std::uint32_t bits = 1; bits <= f.full_mask(); ++bits) frontier.push_back(VExpr::base(Subset{bits}));
  while (!frontier.empty()) {
    std::vector<VExpr> next;
    for (const auto& v : frontier) {
      if (!seen.insert(format_vexpr(v, f)).second) continue;
      for (std::uint32_t s = 1; s < v.my().bits; ++s) {
        if ((s & v.my().bits) != s) continue;
        next.push_back(VExpr::compound(Subset{s}, Op::dot, v));
        next.push_back(VExpr::compound(Subset{s}, Op::at, v));
      }
    }
    frontier = std::move(next);
  }
  return seen;
}

// g(T) = 1 + 2 * sum of g over proper nonempty subsets of T.
std::size_t closed_form(std::uint32_t t) {
  std::size_t g = 1;
  for (std::uint32_t s = 1; s < t; ++s) {
    if ((s & t) == s) g += 2 * closed_form(s);
  }
  return g;
}

std::vector<std::string> printed(const std::vector<VExpr>& list, const Frame& f) {
  std::vector<std::string> out;
  for (const auto& v : list) out.push_back(format_vexpr(v, f));
  return out;
}

}  // namespace

TEST_CASE("binary frame has seven V-expressions in table order") {
  const Frame f = fixtures::binary("X");
  CHECK(printed(enumerate_vexprs(f), f) ==
        std::vector<std::string>{"{a}", "{b}", "{a,b}", "{a}o{a,b}", "{b}o{a,b}", "{a}@{a,b}", "{b}@{a,b}"});
}

TEST_CASE("frame of size one has only its base") {
  const Frame f("X", {"only"});
  CHECK(enumerate_vexprs(f).size() == 1);
}

TEST_CASE("enumeration matches the brute-force closure") {
  for (std::size_t size = 1; size <= 3; ++size) {
    const Frame f = fixtures::sized_frame("X", size);
    const auto& list = enumerate_vexprs(f);
    const auto oracle = brute_vexprs(f);
    auto names = printed(list, f);
    CHECK(std::set<std::string>(names.begin(), names.end()) == oracle);
    CHECK(names.size() == oracle.size());
    std::size_t expected = 0;
    for (std::uint32_t t = 1; t <= f.full_mask(); ++t) expected += closed_form(t);
    CHECK(list.size() == expected);
  }
  // 7 bases, 24 depth-one and 24 depth-two compounds.
  const auto& ternary = enumerate_vexprs(fixtures::sized_frame("X", 3));
  CHECK(ternary.size() == 55);
  CHECK(std::ranges::count_if(ternary, [](const VExpr& v) { return v.depth() == 1; }) == 24);
  CHECK(std::ranges::count_if(ternary, [](const VExpr& v) { return v.depth() == 2; }) == 24);
}

TEST_CASE("enumeration guard") {
  CHECK_THROWS_AS(enumerate_vexprs(fixtures::sized_frame("X", kMaxExtendedFrame + 1)), SizeError);
  CHECK_THROWS_AS(enumerate_vn(fixtures::binary("X"), kMaxSuccessors + 1), SizeError);
}

TEST_CASE("V(n) counts") {
  const Frame f = fixtures::binary("X");
  const auto& one = enumerate_vn(f, 1);
  std::vector<std::string> names;
  for (const auto& x : one) names.push_back(format_vn(x, f));
  CHECK(names == std::vector<std::string>{"{a}", "{b}", "{a,b}", "{a}@{a,b}", "{b}@{a,b}"});
  CHECK(enumerate_vn(f, 2).size() == 9);
  CHECK(enumerate_vn(f, 4).size() == 33);
  CHECK(child_domain(f, 0).size() == 3);

  // Ternary: 7 plain plus (2^n - 1) per compound-eligible (s, V) pair.
  const Frame t = fixtures::sized_frame("X", 3);
  std::size_t pairs = 0;
  for (const auto& v : enumerate_vexprs(t)) pairs += static_cast<std::size_t>((1 << v.my().size()) - 2);
  for (std::size_t n = 1; n <= 3; ++n) CHECK(enumerate_vn(t, n).size() == 7 + pairs * ((1u << n) - 1));
}

TEST_CASE("components") {
  const VExpr full = VExpr::base(AB);
  CHECK(component(VnExpr::plain(AB, 4), 3) == full);
  CHECK(component(VnExpr::family(A, full, 0b1, 1), 1) == VExpr::compound(A, Op::at, full));
  CHECK(component(VnExpr::family(A, full, 0b10, 2), 1) == VExpr::compound(A, Op::dot, full));
  CHECK(component(VnExpr::family(A, full, 0b10, 2), 2) == VExpr::compound(A, Op::at, full));
  CHECK_THROWS_AS(component(VnExpr::plain(A, 2), 3), std::out_of_range);
  CHECK_THROWS_AS(component(VnExpr::plain(A, 2), 0), std::out_of_range);
  CHECK_THROWS_AS(VnExpr::family(A, full, 0, 2), std::invalid_argument);
  CHECK_THROWS_AS(VExpr::compound(AB, Op::dot, full), std::invalid_argument);
  CHECK_THROWS_AS(VExpr::compound(B, Op::dot, VExpr::base(A)), std::invalid_argument);
}

TEST_CASE("MY and SU survive component extraction") {
  for (std::size_t size = 2; size <= 3; ++size) {
    const Frame f = fixtures::sized_frame("X", size);
    for (std::size_t n = 1; n <= 3; ++n) {
      for (const auto& x : enumerate_vn(f, n)) {
        for (std::size_t h = 1; h <= n; ++h) {
          const VExpr c = x.component(h);
          CHECK(c.my() == x.my());
          if (x.is_plain()) {
            CHECK_FALSE(c.su().has_value());
          } else {
            CHECK(c.su() == x.su());
          }
        }
      }
    }
  }
}

TEST_CASE("text forms roundtrip and domains are sorted") {
  for (std::size_t size = 1; size <= 3; ++size) {
    const Frame f = fixtures::sized_frame("X", size);
    const auto& list = enumerate_vexprs(f);
    CHECK(std::ranges::is_sorted(list));
    CHECK(std::ranges::adjacent_find(list) == list.end());
    for (const auto& v : list) CHECK(parse_vexpr(format_vexpr(v, f), f) == v);
    for (std::size_t n = 1; n <= 3; ++n) {
      const auto& vn = enumerate_vn(f, n);
      CHECK(std::ranges::is_sorted(vn));
      for (const auto& x : vn) CHECK(parse_vn(format_vn(x, f), f, n) == x);
    }
  }
  const Frame f = fixtures::binary("X");
  CHECK(format_vn(VnExpr::family(B, VExpr::base(AB), 0b01, 2), f) == "[{b}@{a,b};{b}o{a,b}]");
  CHECK_THROWS_AS(parse_vexpr("{a,b}o{a}", f), ParseError);
  CHECK_THROWS_AS(parse_vexpr("{a}x{a,b}", f), ParseError);
}
