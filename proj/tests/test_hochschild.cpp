#include <doctest.h>

#include "opforge/hochschild.hpp"

using namespace opforge;

namespace {
Word word(const Value& v, const std::string& s) {
  for (auto& [w, c] : v.terms)
    if (to_string(w) == s) return w;
  FAIL("missing word " << s);
  return {};
}
}  // namespace

TEST_CASE("labeled tree with stubs evaluates with a minus sign") {
  Value v = evaluate(parse_tree("B(L3,W1(W2(B(L5,L6),S,L8),L1,W3(L7)),W4(L4,S,L2))"));
  std::string want = "- a_3 f_1(f_2(a_5a_6,1,a_8),a_1,f_3(a_7))f_4(a_4,1,a_2)";
  std::string flat;
  for (char ch : want)
    if (ch != '_' && ch != ' ') flat += ch;
  REQUIRE(v.size() == 1);
  std::string got = to_string(v.terms.begin()->first);
  got.erase(std::remove(got.begin(), got.end(), ' '), got.end());
  CHECK(v.terms.begin()->second == -1);
  CHECK("-" + got == flat);
}

TEST_CASE("Hochschild coboundary of a 1-cochain") {
  Value d = dH_value(symbol(1, 1), 1);
  REQUIRE(d.size() == 3);
  auto c1 = d.coeff(word(d, "a1 f1(a2)")), c2 = d.coeff(word(d, "f1(a1a2)")), c3 = d.coeff(word(d, "f1(a1) a2"));
  CHECK(c1 == -c2);
  CHECK(c3 == c1);
}

TEST_CASE("Hochschild coboundary squares to zero") {
  for (int p = 0; p <= 3; ++p) {
    CHECK(dH_value(dH_value(symbol(1, p), p), p + 1).empty());
    CHECK(dH_value(dH_value(cupV(symbol(1, p), p, symbol(2, 1), 1), p + 1), p + 2).empty());
  }
}

TEST_CASE("cup tree acts as the cup product") {
  Value v = operation(parse_tree("B(W1(),W2())"), {1, 2});
  REQUIRE(v.size() == 1);
  CHECK(to_string(v.terms.begin()->first) == "f1(a1) f2(a2,a3)");
  CHECK(v == cupV(symbol(1, 1), 1, symbol(2, 2), 2));
}

TEST_CASE("Gerstenhaber identities hold symbolically") {
  for (auto& r : gerstenhaber_suite(2)) {
    INFO(r.name << " " << r.first_failure);
    CHECK(r.ok());
    CHECK(r.cases > 0);
  }
}

TEST_CASE("operad action on sample insertions") {
  std::string why;
  CHECK(operad_action_holds(parse_tree("W1(L1,W2(L2))"), 1, parse_tree("B(L1,W1(L2))"), &why));
  CHECK(operad_action_holds(parse_tree("B(W1(L1,L2),W2())"), 2, parse_tree("W1(S)"), &why));
  CHECK(operad_action_holds(parse_tree("B(W2(L1),W1())"), 1, parse_tree("*"), &why));
}

TEST_CASE("distinct trees give distinct operations") {
  std::vector<Tree> ts;
  for (auto& k : std::vector<std::vector<int>>{{0, 1}, {1, 1}, {2, 0}})
    for (int l = 0; l <= 2; ++l)
      for (auto& t : enumerate_trees(k, l, true)) ts.push_back(t);
  CHECK(evaluation_injective(ts));
}
