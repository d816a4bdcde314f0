#include <doctest.h>

#include "opforge/simplicial.hpp"

using namespace opforge;

TEST_CASE("faces and degeneracies on a sample path") {
  auto p = parse_path("lat 1,1;2 | 0 1:1 2:0 1:1 2:0");
  CHECK(to_string(face(p, 1, 0)) == "lat 0,1;2 | 1 2:0 1:1 2:0");
  CHECK(to_string(face(p, 1, 1)) == "lat 0,1;2 | 0 1:1 2:1 2:0");
  CHECK(to_string(face(p, 2, 1)) == "lat 1,0;2 | 0 1:1 2:0 1:1");
  CHECK(to_string(degeneracy(p, 2, 0)) == "lat 1,2;2 | 0 1:1 2:0 2:0 1:1 2:0");
  CHECK_THROWS_AS(face(parse_path("lat 0;0 | 0 1:0"), 1, 0), domain_error);
}

TEST_CASE("coface and codegeneracy") {
  auto pt = enumerate_paths({{}, 0})[0];
  CHECK(coface(pt, 0).marks == std::vector<int>{1});
  auto p3 = enumerate_paths({{}, 3})[0];
  CHECK(codegeneracy(p3, 0).marks == std::vector<int>{2});
  auto p = parse_path("lat 1;1 | 0 1:1 1:0");
  for (int i = 0; i <= 2; ++i) CHECK(coface(p, i).moves == p.moves);
  CHECK(coface(p, 0).marks == std::vector<int>{1, 1, 0});
  CHECK(coface(p, 2).marks == std::vector<int>{0, 1, 1});
  CHECK_THROWS_AS(codegeneracy(parse_path("lat 1;0 | 0 1:0 1:0"), 0), domain_error);
  CHECK_THROWS_AS(coface(p, 3), domain_error);
}

TEST_CASE("differential of the cup path vanishes when all k are zero") {
  CHECK(simplicial_differential(parse_path("lat 0,0;0 | 0 1:0 2:0")).empty());
}

TEST_CASE("simplicial differential on the 1,2,1 path") {
  auto d = simplicial_differential(parse_path("lat 1,0;0 | 0 1:0 2:0 1:0"));
  CHECK(format_sum(d, [](const Path& p) { return to_string(p); }) ==
        "-1*lat 0,0;0 | 0 1:0 2:0 + 1*lat 0,0;0 | 0 2:0 1:0");
}

// A sign mistake in the differentials must be caught by d^2 = 0.
TEST_CASE("mutated differentials fail d^2") {
  auto bad_del = [](const Path& p) {
    PathSum out;
    for (int r = 1; r <= p.n(); ++r)
      for (int i = 0; i <= p.sig.k[r - 1] && p.sig.k[r - 1] > 0; ++i) out.add(face(p, r, i), sgn_pow(i));
    return out;
  };
  auto bad_total = [](const Path& p) { return cosimplicial_differential(p) + simplicial_differential(p); };
  bool del_caught = false, total_caught = false;
  for (auto& p : enumerate_paths({{1, 1}, 1})) {
    del_caught |= !linear(bad_del(p), bad_del).empty();
    total_caught |= !linear(bad_total(p), bad_total).empty();
    CHECK(linear(total_differential(p), total_differential).empty());
  }
  CHECK(del_caught);
  CHECK(total_caught);
}
