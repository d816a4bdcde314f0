#include <doctest.h>

#include "opforge/path.hpp"

using namespace opforge;

namespace {
// Brute force: every word over 1..n, filtered by letter counts.
long brute_move_count(const std::vector<int>& k) {
  int n = int(k.size()), N = 0;
  for (int x : k) N += x + 1;
  long hits = 0;
  std::vector<int> w(N, 1);
  if (N == 0) return 1;
  for (;;) {
    std::vector<int> c(n, 0);
    for (int d : w) ++c[d - 1];
    bool ok = true;
    for (int i = 0; i < n; ++i) ok &= c[i] == k[i] + 1;
    hits += ok;
    int j = N - 1;
    while (j >= 0 && w[j] == n) w[j--] = 1;
    if (j < 0) break;
    ++w[j];
  }
  return hits;
}
}  // namespace

TEST_CASE("display path has complexity 4") {
  auto p = parse_path("lat 3,2;8 | 0 1:3 1:1 2:0 1:2 2:0 2:0 1:2");
  CHECK(p.sig.k == std::vector<int>{3, 2});
  CHECK(p.sig.l == 8);
  CHECK(complexity(p) == 4);
  CHECK(to_string(p) == "lat 3,2;8 | 0 1:3 1:1 2:0 1:2 2:0 2:0 1:2");
}

TEST_CASE("Lat(;l) has exactly one element") {
  for (int l = 0; l <= 4; ++l) {
    auto ps = enumerate_paths({{}, l});
    REQUIRE(ps.size() == 1);
    CHECK(ps[0].marks == std::vector<int>{l});
  }
}

TEST_CASE("enumeration counts match brute force") {
  for (auto k : std::vector<std::vector<int>>{{0}, {2}, {1, 1}, {2, 1}, {0, 0, 0}, {1, 0, 2}, {2, 2}}) {
    long moves = brute_move_count(k);
    CHECK(long(enumerate_paths({k, 0}).size()) == moves);
    int pts = 1;
    for (int x : k) pts += x + 1;
    // markings of l=2 over pts points: C(pts+1, 2)
    CHECK(long(enumerate_paths({k, 2}).size()) == moves * pts * (pts + 1) / 2);
  }
}

TEST_CASE("enumeration is lexicographic and duplicate free") {
  auto ps = enumerate_paths({{1, 1}, 1});
  for (std::size_t j = 1; j < ps.size(); ++j) {
    bool lt = ps[j - 1].moves < ps[j].moves ||
              (ps[j - 1].moves == ps[j].moves && ps[j - 1].marks < ps[j].marks);
    CHECK(lt);
  }
}

TEST_CASE("complexity of small paths") {
  CHECK(complexity(parse_path("lat 2;0 | 0 1:0 1:0 1:0")) == 0);
  CHECK(complexity(parse_path("lat 0,0;0 | 0 1:0 2:0")) == 1);
  CHECK(complexity(parse_path("lat 1,0;0 | 0 1:0 2:0 1:0")) == 2);
  CHECK(complexity(parse_path("lat 1,1;0 | 0 1:0 2:0 1:0 2:0")) == 3);
  // the 3-path projects onto each pair separately
  CHECK(complexity(parse_path("lat 0,0,0;0 | 0 1:0 2:0 3:0")) == 1);
  CHECK(complexity(parse_path("lat 1,1,0;0 | 0 1:0 3:0 2:0 1:0 2:0")) == 3);
}

TEST_CASE("internal points") {
  CHECK(has_internal_point(parse_path("lat 1;0 | 0 1:0 1:0")));
  CHECK_FALSE(has_internal_point(parse_path("lat 1,0;0 | 0 1:0 2:0 1:0")));
  CHECK(has_internal_point(parse_path("lat 1,0;0 | 0 1:0 1:0 2:0")));
}

TEST_CASE("validation errors name the invariant") {
  CHECK_THROWS_WITH_AS(parse_path("lat 1;0 | 0 1:0"), doctest::Contains("occurs 1 times"), domain_error);
  CHECK_THROWS_WITH_AS(parse_path("lat 0;1 | 0 1:0"), doctest::Contains("marking sum"), domain_error);
  CHECK_THROWS_WITH_AS(parse_path("lat 0;0 | 0 3:0"), doctest::Contains("out of range"), domain_error);
  CHECK_THROWS_AS(parse_path("lot 0;0 | 0 1:0"), parse_error);
  CHECK_THROWS_AS(parse_path("lat 0;0 0 1:0"), parse_error);
  CHECK_THROWS_AS(parse_path("lat 0;0 | 0 1-0"), parse_error);
  CHECK_THROWS_AS(parse_path("lat 0;x | 0 1:0"), parse_error);
}
