#include <doctest.h>

#include "opforge/brace.hpp"

using namespace opforge;

namespace {
long long binom(int a, int b) {
  long long r = 1;
  for (int j = 1; j <= b; ++j) r = r * (a - b + j) / j;
  return r;
}
}  // namespace

TEST_CASE("angles and whiskering counts") {
  // legs only go to white vertices: one angle inside each
  auto cup = parse_tree("B(W1(),W2())");
  int A = int(angles(cup).size());
  CHECK(A == 2);
  CHECK(angles(parse_tree("W1(W2(),W3())")).size() == 5);
  auto w = whisker(cup, 2);
  // multisets of at most 2 legs over A angles
  CHECK((long long)w.size() == binom(A + 2, 2));
  for (auto& [t, c] : w.terms) CHECK(c == 1);
  CHECK(whisker(cup, 0) == TreeSum(cup));
  CHECK_THROWS_AS(whisker(parse_tree("W1(L1)"), 1), domain_error);
}

TEST_CASE("amputated differential") {
  auto d = amputated_differential(parse_tree("W1(W2())"));
  CHECK(d == TreeSum(parse_tree("B(W1(),W2())")) + TreeSum(parse_tree("B(W2(),W1())")));
  CHECK(amputated_differential(parse_tree("B(W1(),W2())")).empty());
}

TEST_CASE("whiskered insertion") {
  auto r = whiskered_insert(parse_tree("W1(W2())"), 1, parse_tree("B(W1(),W2())"));
  CHECK(r == TreeSum(parse_tree("B(W1(),W2(W3()))")) + TreeSum(parse_tree("B(W1(W3()),W2())")));
  CHECK(whiskered_insert(parse_tree("B(W1(),W2())"), 2, parse_tree("W1()")) == TreeSum(parse_tree("B(W1(),W2())")));
}

TEST_CASE("whiskering is a chain map on small trees") {
  for (const char* s : {"W1(W2())", "W1(W2(),W3())", "B(W1(W2()),W3())", "W1(S)", "W1(W2(S))"})
    CHECK(whisker_commutes_with_d(parse_tree(s), 3));
}

TEST_CASE("whiskering commutes with insertion on small trees") {
  CHECK(whisker_commutes_with_insert(parse_tree("W1(W2())"), 1, parse_tree("B(W1(),W2())"), 3));
  CHECK(whisker_commutes_with_insert(parse_tree("W1(W2())"), 2, parse_tree("W1(S)"), 3));
}

TEST_CASE("decomposition round trips") {
  for (const char* s : {"W1()", "*", "B(W1(),W2())", "W1(W2(),W3())", "W2(W1(),B(W3(),W4()))", "W1(S,W2(S))",
                        "B(W3(),W1(),W2())"}) {
    auto d = decompose(parse_tree(s));
    TreeSum v = eval_expr(*d.expr);
    CHECK(v == TreeSum(parse_tree(s)).scaled(d.sign));
  }
  CHECK_THROWS_AS(decompose(parse_tree("W1(L1)")), domain_error);
}

TEST_CASE("internal edges count stubs") {
  CHECK(internal_edges(parse_tree("W1(S,W2())")) == 2);
  CHECK(internal_edges(parse_tree("B(W1(),W2())")) == 2);
  CHECK(internal_edges(parse_tree("W1()")) == 0);
}
