#include <doctest.h>

#include <random>

#include "opforge/lattice.hpp"

using namespace opforge;

namespace {
std::vector<Path> colour_pool(int max_col, int max_n) {
  std::vector<Path> pool;
  for (int n = 0; n <= max_n; ++n)
    for (int K = 0; K <= max_col * n; ++K)
      for (auto& k : weak_compositions(K, n)) {
        bool ok = true;
        for (int x : k) ok &= x <= max_col;
        if (!ok) continue;
        for (int l = 0; l <= max_col; ++l)
          for (auto& p : enumerate_paths({k, l})) pool.push_back(p);
      }
  return pool;
}

const Path& pick(const std::vector<Path>& pool, std::mt19937& rng, int colour) {
  for (;;) {
    auto& p = pool[rng() % pool.size()];
    if (p.sig.l == colour) return p;
  }
}
}  // namespace

TEST_CASE("unit laws") {
  for (auto& p : colour_pool(2, 2)) {
    CHECK(compose(unit_path(p.sig.l), 1, p) == p);
    for (int i = 1; i <= p.n(); ++i) CHECK(compose(p, i, unit_path(p.sig.k[i - 1])) == p);
  }
}

TEST_CASE("associativity on random triples") {
  auto pool = colour_pool(2, 2);
  std::mt19937 rng(11);
  int vertical = 0, horizontal = 0;
  while (vertical < 300 || horizontal < 300) {
    auto& a = pool[rng() % pool.size()];
    if (a.n() == 0) continue;
    int i = 1 + int(rng() % a.n());
    auto& b = pick(pool, rng, a.sig.k[i - 1]);
    if (b.n() > 0 && vertical < 300) {
      int j = 1 + int(rng() % b.n());
      auto& c = pick(pool, rng, b.sig.k[j - 1]);
      CHECK(compose(compose(a, i, b), i + j - 1, c) == compose(a, i, compose(b, j, c)));
      ++vertical;
    }
    if (a.n() >= 2 && horizontal < 300) {
      int j = 1 + int(rng() % a.n());
      if (j == i) continue;
      int lo = std::min(i, j), hi = std::max(i, j);
      auto& x = pick(pool, rng, a.sig.k[lo - 1]);
      auto& y = pick(pool, rng, a.sig.k[hi - 1]);
      CHECK(compose(compose(a, lo, x), hi + x.n() - 1, y) == compose(compose(a, hi, y), lo, x));
      ++horizontal;
    }
  }
}

TEST_CASE("composition respects the complexity filtration") {
  auto pool = colour_pool(2, 2);
  std::mt19937 rng(3);
  for (int it = 0; it < 300;) {
    auto& a = pool[rng() % pool.size()];
    if (a.n() == 0) continue;
    int i = 1 + int(rng() % a.n());
    auto& b = pick(pool, rng, a.sig.k[i - 1]);
    CHECK(complexity(compose(a, i, b)) <= std::max(complexity(a), complexity(b)));
    ++it;
  }
}

TEST_CASE("colour mismatch is rejected") {
  CHECK_THROWS_AS(compose(parse_path("lat 1;0 | 0 1:0 1:0"), 1, parse_path("lat 0;0 | 0 1:0")), domain_error);
}

TEST_CASE("whisker term counts") {
  auto p = parse_path("lat 0,0;0 | 0 1:0 2:0");
  auto w0 = whisker_terms(p, 0);
  REQUIRE(w0.size() == 1);
  CHECK(w0[0] == p);
  // s points over M moves: C(M+s-1, s)
  CHECK(whisker_terms(p, 1).size() == 2);
  CHECK(whisker_terms(p, 3).size() == 4);
  auto q = parse_path("lat 1,0;0 | 0 1:0 2:0 1:0");
  CHECK(whisker_terms(q, 2).size() == 6);
  for (auto& w : whisker_terms(q, 2)) {
    CHECK(w.sig.l == 2);
    CHECK(w.sig.ksum() == 3);
  }
  CHECK_THROWS_AS(whisker_terms(parse_path("lat 0;1 | 1 1:0"), 1), domain_error);
}

TEST_CASE("brac composition of the two cup paths") {
  auto a = parse_path("lat 0,0;0 | 0 1:0 2:0");
  auto b = parse_path("lat 0,0;0 | 0 2:0 1:0");
  auto r = brac_compose(a, 1, b);
  CHECK(r.is_signed);
  CHECK(format_sum(r.sum, [](const Path& p) { return to_string(p); }) == "1*lat 0,0,0;0 | 0 2:0 1:0 3:0");
  auto u = brac_compose(parse_path("lat 1,0;0 | 0 1:0 2:0 1:0"), 1, b);
  CHECK(u.sum.size() == 2);
  auto c3 = brac_compose(parse_path("lat 1,1;0 | 0 1:0 2:0 1:0 2:0"), 1, a);
  CHECK_FALSE(c3.is_signed);
}

TEST_CASE("normalization kills the degenerate part and is a chain map") {
  for (int K = 0; K <= 4; ++K)
    for (auto& k : weak_compositions(K, 2))
      for (auto& p : enumerate_paths({k, 0})) {
        PathSum x(p);
        if (has_internal_point(p)) CHECK(normalize(x).empty());
        else CHECK(normalize(x) == x);
        // degenerate paths have degenerate boundaries
        if (has_internal_point(p)) CHECK(normalize(simplicial_differential(p)).empty());
      }
}

TEST_CASE("closure verdicts") {
  for (int c = 0; c <= 2; ++c) CHECK(hbrac_closure_check(c, 2, 4).closed);
  auto v = hbrac_closure_check(3, 2, 4);
  REQUIRE_FALSE(v.closed);
  CHECK(to_string(*v.counterexample) == "lat 1,1;0 | 0 1:0 2:0 1:0 2:0");
}

TEST_CASE("surjections") {
  auto p = surjection_to_path(parse_surjection("surj n=2 : 1,2,1"));
  CHECK(p.moves == std::vector<int>{1, 2, 1});
  CHECK(p.sig.k == std::vector<int>{1, 0});
  CHECK(surjection_to_path({3, {1, 2, 3}}).moves == std::vector<int>{1, 2, 3});
  for (int m = 2; m <= 8; ++m) CHECK(nondegenerate_surjections(m, 2).size() == 2);
  // bijections of {1,2,3}: 3! straight paths
  CHECK(nondegenerate_surjections(3, 3).size() == 6);
  CHECK_THROWS_AS(surjection_to_path({2, {1, 1, 2}}), domain_error);
  CHECK_THROWS_AS(parse_surjection("surj n=2 : 1,1"), domain_error);
  CHECK_THROWS_AS(parse_surjection("surj 2 : 1,2"), parse_error);
  CHECK(to_string(path_to_surjection(p)) == "surj n=2 : 1,2,1");
}
