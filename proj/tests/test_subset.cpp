#include <doctest.h>

#include "dsbn/error.hpp"
#include "dsbn/subset.hpp"
#include "fixtures.hpp"

using namespace dsbn;

TEST_CASE("parse_subset_label accepts listed members") {
  const Frame f = fixtures::binary("X");
  CHECK(parse_subset_label("{a,b}", f) == Subset{3});
  CHECK(parse_subset_label("{a}", f) == Subset{1});
  CHECK(parse_subset_label(" { b , a } ", f) == Subset{3});
}

TEST_CASE("parse_subset_label rejects bad literals") {
  const Frame f = fixtures::binary("X");
  CHECK_THROWS_AS(parse_subset_label("{c}", f), ParseError);
  CHECK_THROWS_AS(parse_subset_label("{}", f), ParseError);
  CHECK_THROWS_AS(parse_subset_label("{a,a}", f), ParseError);
  CHECK_THROWS_AS(parse_subset_label("a,b", f), ParseError);
}

TEST_CASE("canonical printing follows frame order") {
  const Frame f("Y", {"lo", "mid", "hi"});
  CHECK(format_subset(parse_subset_label("{hi,lo}", f), f) == "{lo,hi}");
  CHECK(format_subset(Subset{7}, f) == "{lo,mid,hi}");
  for (Subset s : nonempty_subsets(f)) CHECK(parse_subset_label(format_subset(s, f), f) == s);
}

TEST_CASE("nonempty_subsets order: singletons first, then by members") {
  const Frame f = fixtures::sized_frame("X", 3);
  std::vector<std::string> printed;
  for (Subset s : nonempty_subsets(f)) printed.push_back(format_subset(s, f));
  CHECK(printed == std::vector<std::string>{"{a}", "{b}", "{c}", "{a,b}", "{a,c}", "{b,c}", "{a,b,c}"});
}

TEST_CASE("frame invariants") {
  CHECK_THROWS_AS(Frame("X", {"a", "a"}), ParseError);
  CHECK_THROWS_AS(Frame("X", {}), ParseError);
  CHECK_THROWS_AS(fixtures::sized_frame("X", kMaxFrameSize + 1), SizeError);
}

TEST_CASE("csv cells quote commas only") {
  CHECK(csv_cell("{a}") == "{a}");
  CHECK(csv_cell("{a,b}") == "\"{a,b}\"");
  CHECK(csv_cell("say \"hi\",") == "\"say \"\"hi\"\",\"");
}

TEST_CASE("format_value uses nine decimals and no negative zero") {
  CHECK(format_value(0.3) == "0.300000000");
  CHECK(format_value(-1e-13) == "0.000000000");
  CHECK(format_value(-0.06) == "-0.060000000");
}
