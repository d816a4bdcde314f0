#include <doctest.h>

#include "opforge/tree.hpp"
#include "opforge/lattice.hpp"

using namespace opforge;

TEST_CASE("tree text round trip") {
  for (const char* s : {"B(W1(),W2())", "W1(L1,W2(L2),S)", "*", "|", "B(L3,W1(W2(B(L5,L6),S,L8),L1,W3(L7)),W4(L4,S,L2))"}) {
    CHECK(to_string(parse_tree(s)) == s);
  }
  CHECK(to_string(parse_tree("W1(L,L)")) == "W1(L1,L2)");
  CHECK_THROWS_AS(parse_tree("W1(L1"), parse_error);
  CHECK_THROWS_AS(parse_tree("Q"), parse_error);
}

TEST_CASE("tree invariants") {
  CHECK_THROWS_AS(validate_tree(parse_tree("B(B(L1,L2),L3)")), domain_error);
  CHECK_THROWS_AS(validate_tree(parse_tree("B(S,L1)")), domain_error);
  CHECK_THROWS_AS(validate_tree(parse_tree("B(L1)")), domain_error);
  CHECK_THROWS_AS(validate_tree(parse_tree("B(W1(),W1())")), domain_error);
  CHECK_THROWS_AS(validate_tree(parse_tree("B(L1,L1)")), domain_error);
  CHECK_NOTHROW(validate_tree(parse_tree("W1(S,B(L1,W2()))")));
}

TEST_CASE("signature sign") {
  CHECK(signature_sign(parse_tree("B(W1(L1),W2(L2))")) == 1);
  CHECK(signature_sign(parse_tree("B(W2(L1),W1(L2))")) == 1);
  CHECK(signature_sign(parse_tree("B(W2(L1,L2),W1(L3,L4))")) == -1);
  CHECK(signature_sign(parse_tree("B(W2(L1,L2),W1(L3))")) == 1);
}

TEST_CASE("degree") {
  CHECK(tree_degree(parse_tree("B(W1(),W2())")) == 1);
  CHECK(tree_degree(parse_tree("W1(W2())")) == 0);
  CHECK(tree_degree(parse_tree("W1(L1,L2)")) == 0);
  CHECK(tree_degree(parse_tree("*")) == -1);
}

TEST_CASE("cup and circle trees as paths") {
  CHECK(to_string(tree_to_path(parse_tree("B(W1(),W2())"))) == "lat 0,0;0 | 0 1:0 2:0");
  CHECK(to_string(tree_to_path(parse_tree("W1(W2())"))) == "lat 1,0;0 | 0 1:0 2:0 1:0");
  CHECK(to_string(tree_to_path(parse_tree("|"))) == "lat ;1 | 1");
  CHECK(to_string(tree_to_path(parse_tree("*"))) == "lat ;0 | 0");
}

TEST_CASE("trees and complexity-2 paths have equal counts") {
  for (int n = 0; n <= 3; ++n)
    for (int K = 0; K <= 2; ++K)
      for (auto& k : weak_compositions(K, n))
        for (int l = 0; l <= 2; ++l) {
          auto ts = enumerate_trees(k, l);
          CHECK(ts.size() == enumerate_paths({k, l}, 2).size());
          for (auto& t : ts) CHECK(path_to_tree(tree_to_path(t)) == t);
        }
}

TEST_CASE("paths of complexity 3 have no tree") {
  CHECK_THROWS_AS(path_to_tree(parse_path("lat 1,1;0 | 0 1:0 2:0 1:0 2:0")), domain_error);
}

TEST_CASE("insertion matches lattice composition") {
  auto a = parse_tree("W1(L1,W2(L2))"), b = parse_tree("B(L1,W1(L2))");
  CHECK(to_string(tree_insert(a, 1, b)) == "B(L1,W1(W2(L2)))");
  CHECK(tree_to_path(tree_insert(a, 1, b)) == compose(tree_to_path(a), 1, tree_to_path(b)));
}

TEST_CASE("tree differential squares to zero on small trees") {
  for (int K = 0; K <= 2; ++K)
    for (auto& k : weak_compositions(K, 2))
      for (int l = 0; l <= 2; ++l)
        for (auto& t : enumerate_trees(k, l)) CHECK(linear(tree_differential(t), tree_differential).empty());
}

TEST_CASE("suboperad membership") {
  auto m = suboperad_membership(parse_tree("W1(S,L1)"));
  CHECK_FALSE(m.in_Bhat);
  CHECK(m.in_T);
  auto m2 = suboperad_membership(parse_tree("B(L2,W1(L1))"));
  CHECK(m2.in_Bhat);
  CHECK_FALSE(m2.in_T);
}
