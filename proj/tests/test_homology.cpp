#include <doctest.h>

#include <numeric>
#include <random>

#include "opforge/homology.hpp"

using namespace opforge;

namespace {
using Mat = std::vector<std::vector<long long>>;

long long det(Mat a) {
  // Bareiss fraction-free elimination
  int n = int(a.size());
  long long sign = 1, prev = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (a[k][k] == 0) {
      int r = k + 1;
      while (r < n && a[r][k] == 0) ++r;
      if (r == n) return 0;
      std::swap(a[k], a[r]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

void subsets(int n, int k, int start, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (int(cur.size()) == k) {
    out.push_back(cur);
    return;
  }
  for (int j = start; j < n; ++j) {
    cur.push_back(j);
    subsets(n, k, j + 1, cur, out);
    cur.pop_back();
  }
}

// Invariant factors from determinantal divisors: s_k = D_k / D_{k-1}.
std::vector<long long> invariant_factors(const Mat& a) {
  int R = int(a.size()), C = R ? int(a[0].size()) : 0;
  std::vector<long long> out;
  long long prev = 1;
  for (int k = 1; k <= std::min(R, C); ++k) {
    std::vector<std::vector<int>> rs, cs;
    std::vector<int> cur;
    subsets(R, k, 0, cur, rs);
    subsets(C, k, 0, cur, cs);
    long long g = 0;
    for (auto& r : rs)
      for (auto& c : cs) {
        Mat m(k, std::vector<long long>(k));
        for (int i = 0; i < k; ++i)
          for (int j = 0; j < k; ++j) m[i][j] = a[r[i]][c[j]];
        g = std::gcd(g, std::llabs(det(m)));
      }
    if (g == 0) break;
    out.push_back(g / prev);
    prev = g;
  }
  return out;
}

SparseIntMatrix sparse(const Mat& a) {
  SparseIntMatrix m;
  m.rows = int(a.size());
  m.cols = m.rows ? int(a[0].size()) : 0;
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) m.add(i, j, a[i][j]);
  return m;
}

std::vector<long long> factors(const SNFResult& r) {
  std::vector<long long> v;
  for (auto& f : r.factors) v.push_back(f.convert_to<long long>());
  return v;
}
}  // namespace

TEST_CASE("Smith normal form of a diagonal matrix") {
  CHECK(factors(smith_normal_form(sparse({{2, 0}, {0, 3}}))) == std::vector<long long>{1, 6});
  CHECK(factors(smith_normal_form(sparse({{2, 4}, {6, 8}}))) == std::vector<long long>{2, 4});
  CHECK(smith_normal_form(sparse({{0, 0}, {0, 0}})).rank() == 0);
}

TEST_CASE("Smith normal form agrees with determinantal divisors") {
  std::mt19937 rng(17);
  for (int it = 0; it < 200; ++it) {
    int R = 1 + int(rng() % 4), C = 1 + int(rng() % 4);
    Mat a(R, std::vector<long long>(C));
    for (auto& row : a)
      for (auto& x : row) x = rng() % 2 ? int(rng() % 9) - 4 : 0;
    auto want = invariant_factors(a);
    CHECK(factors(smith_normal_form(sparse(a))) == want);
    // permuting rows and columns changes nothing
    Mat b = a;
    std::shuffle(b.begin(), b.end(), rng);
    std::vector<int> perm(C);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (auto& row : b) {
      auto old = row;
      for (int j = 0; j < C; ++j) row[j] = old[perm[j]];
    }
    CHECK(factors(smith_normal_form(sparse(b))) == want);
  }
}

TEST_CASE("torsion is reported") {
  ChainWindow w;
  w.lo = 0;
  w.hi = 2;
  w.basis = {{0, {"x"}}, {1, {"y"}}, {2, {"z"}}};
  w.boundary[0] = sparse({{2}});
  w.boundary[1] = sparse({{0}});
  auto h = homology(w);
  REQUIRE(h.count(1));
  CHECK(h[1].betti == 0);
  REQUIRE(h[1].torsion.size() == 1);
  CHECK(h[1].torsion[0] == 2);
}

TEST_CASE("normalized brace basis sizes") {
  auto w = build_window({ModelSpec::NBrac, 2, 2}, -1, 0);
  CHECK(w.basis[0].size() == 2);
  CHECK(w.basis[-1].size() == 2);
}

TEST_CASE("degree zero of Brac_c(n) is n!") {
  for (int c = 1; c <= 3; ++c)
    for (int n = 1; n <= 3; ++n) {
      auto w = build_window({ModelSpec::Brac, c, n}, 0, 0);
      long f = 1;
      for (int j = 2; j <= n; ++j) f *= j;
      CHECK(long(w.basis[0].size()) == f);
    }
}

TEST_CASE("small Betti numbers") {
  auto h = homology({ModelSpec::NBrac, 2, 2}, -3, 0);
  CHECK(h[0].betti == 1);
  CHECK(h[-1].betti == 1);
  CHECK(h[-2].betti == 0);
  auto a = homology({ModelSpec::NBrac, 1, 3}, -3, 0);
  CHECK(a[0].betti == 6);
  auto c = homology({ModelSpec::NBrac, 3, 2}, -4, 0);
  CHECK(c[-2].betti == 1);
  CHECK(c[-1].betti == 0);
}

TEST_CASE("tree column and total windows are complexes") {
  CHECK_NOTHROW(homology({ModelSpec::TreeColumn, 2, 2, 1}, -2, 1));
  CHECK_NOTHROW(homology({ModelSpec::Total, 2, 2, 2}, -2, 1));
}

TEST_CASE("thread cap honours the environment") {
  CHECK(thread_cap() >= 1);
}
