#pragma once
#include <atomic>
#include <cstdlib>
#include <mutex>
#include <thread>

#include <boost/multiprecision/cpp_int.hpp>

#include "tree.hpp"

namespace opforge {

using BigInt = boost::multiprecision::cpp_int;

inline unsigned thread_cap() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* s = std::getenv("OPFORGE_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(s, &end, 10);
    if (end != s && *end == 0 && v >= 1) return unsigned(std::min<long>(v, hw));
  }
  return hw;
}

// Runs f(0..n-1) on up to thread_cap() threads; f must only write to its own slot.
template <class F>
void parallel_for(std::size_t n, F&& f) {
  unsigned t = std::min<std::size_t>(thread_cap(), n);
  if (t <= 1) {
    for (std::size_t j = 0; j < n; ++j) f(j);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < t; ++w)
    pool.emplace_back([&] {
      try {
        for (std::size_t j; (j = next++) < n;) f(j);
      } catch (...) {
        std::lock_guard<std::mutex> g(mu);
        if (!err) err = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

struct SparseIntMatrix {
  int rows = 0, cols = 0;
  struct Entry {
    int row, col;
    std::int64_t val;
  };
  std::vector<Entry> entries;

  void add(int r, int c, std::int64_t v) {
    if (v) entries.push_back({r, c, v});
  }
};

struct SNFResult {
  std::vector<BigInt> factors;  // nonzero invariant factors, d1 | d2 | ...
  int rank() const { return int(factors.size()); }
};

// Textbook Smith normal form over the integers on a dense matrix.
inline SNFResult smith_normal_form_dense(std::vector<std::vector<BigInt>> a) {
  SNFResult res;
  int m = int(a.size()), n = m ? int(a[0].size()) : 0;
  auto absv = [](const BigInt& x) { return x < 0 ? BigInt(-x) : x; };
  for (int t = 0; t < std::min(m, n); ++t) {
    while (true) {
      int pr = -1, pc = -1;
      for (int i = t; i < m; ++i)
        for (int j = t; j < n; ++j)
          if (a[i][j] != 0 && (pr < 0 || absv(a[i][j]) < absv(a[pr][pc]))) pr = i, pc = j;
      if (pr < 0) goto done;
      std::swap(a[t], a[pr]);
      for (auto& row : a) std::swap(row[t], row[pc]);
      bool clean = true;
      for (int i = t + 1; i < m; ++i) {
        if (a[i][t] == 0) continue;
        BigInt q = a[i][t] / a[t][t];
        for (int j = t; j < n; ++j) a[i][j] -= q * a[t][j];
        if (a[i][t] != 0) clean = false;
      }
      for (int j = t + 1; j < n; ++j) {
        if (a[t][j] == 0) continue;
        BigInt q = a[t][j] / a[t][t];
        for (int i = t; i < m; ++i) a[i][j] -= q * a[i][t];
        if (a[t][j] != 0) clean = false;
      }
      if (!clean) continue;
      int bad = -1;
      for (int i = t + 1; i < m && bad < 0; ++i)
        for (int j = t + 1; j < n; ++j)
          if (a[i][j] % a[t][t] != 0) {
            bad = i;
            break;
          }
      if (bad < 0) break;
      for (int j = t; j < n; ++j) a[t][j] += a[bad][j];
    }
    res.factors.push_back(absv(a[t][t]));
  }
done:
  return res;
}

namespace detail {
using SparseRow = std::vector<std::pair<int, std::int64_t>>;

// a - f*b on sorted rows; false on overflow.
inline bool row_axpy(const SparseRow& a, std::int64_t f, const SparseRow& b, SparseRow& out) {
  out.clear();
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
      continue;
    }
    std::int64_t p;
    if (__builtin_mul_overflow(f, b[j].second, &p)) return false;
    std::int64_t v = -p;
    int c = b[j].first;
    if (i < a.size() && a[i].first == c) {
      if (__builtin_add_overflow(a[i].second, -p, &v)) return false;
      ++i;
    }
    ++j;
    if (v) out.push_back({c, v});
  }
  return true;
}
}  // namespace detail

// Sparse elimination on unit pivots, then dense arbitrary-precision SNF on
// whatever is left.
inline SNFResult smith_normal_form(const SparseIntMatrix& m) {
  using detail::SparseRow;
  std::vector<SparseRow> rows(m.rows);
  {
    std::map<std::pair<int, int>, std::int64_t> acc;
    for (auto& e : m.entries) acc[{e.row, e.col}] += e.val;
    for (auto& [rc, v] : acc)
      if (v) rows[rc.first].push_back({rc.second, v});
  }
  std::vector<std::vector<int>> col_rows(m.cols);
  for (int r = 0; r < m.rows; ++r)
    for (auto& [c, v] : rows[r]) col_rows[c].push_back(r);
  std::vector<char> alive(m.rows, 1);
  std::set<std::pair<std::size_t, int>> queue;
  for (int r = 0; r < m.rows; ++r)
    if (!rows[r].empty()) queue.insert({rows[r].size(), r});
    else alive[r] = 0;
  std::vector<char> stuck(m.rows, 0);
  int pivots = 0;
  bool overflow = false;
  SparseRow tmp;
  while (!queue.empty() && !overflow) {
    auto [len, r] = *queue.begin();
    queue.erase(queue.begin());
    int pc = -1;
    std::size_t best = 0;
    for (auto& [c, v] : rows[r])
      if ((v == 1 || v == -1) && (pc < 0 || col_rows[c].size() < best)) pc = c, best = col_rows[c].size();
    if (pc < 0) {
      stuck[r] = 1;
      continue;
    }
    std::int64_t u = 0;
    for (auto& [c, v] : rows[r])
      if (c == pc) u = v;
    for (int r2 : col_rows[pc]) {
      if (r2 == r || !alive[r2]) continue;
      auto it = std::lower_bound(rows[r2].begin(), rows[r2].end(), std::make_pair(pc, std::int64_t(INT64_MIN)));
      if (it == rows[r2].end() || it->first != pc) continue;
      std::int64_t f = it->second * u;
      if (!stuck[r2]) queue.erase({rows[r2].size(), r2});
      if (!detail::row_axpy(rows[r2], f, rows[r], tmp)) {
        overflow = true;
        break;
      }
      for (auto& [c, v] : tmp)
        if (!std::binary_search(rows[r2].begin(), rows[r2].end(), std::make_pair(c, std::int64_t(INT64_MIN)),
                                [](auto& x, auto& y) { return x.first < y.first; }))
          col_rows[c].push_back(r2);
      rows[r2].swap(tmp);
      stuck[r2] = 0;
      if (rows[r2].empty()) alive[r2] = 0;
      else queue.insert({rows[r2].size(), r2});
    }
    if (overflow) break;
    alive[r] = 0;
    rows[r].clear();
    col_rows[pc].clear();
    ++pivots;
  }
  if (overflow) {
    std::vector<std::vector<BigInt>> dense(m.rows, std::vector<BigInt>(m.cols));
    for (auto& e : m.entries) dense[e.row][e.col] += e.val;
    return smith_normal_form_dense(std::move(dense));
  }
  std::vector<int> rest_rows;
  std::set<int> rest_cols;
  for (int r = 0; r < m.rows; ++r)
    if (alive[r] && !rows[r].empty()) {
      rest_rows.push_back(r);
      for (auto& [c, v] : rows[r]) rest_cols.insert(c);
    }
  std::map<int, int> cidx;
  for (int c : rest_cols) cidx.emplace(c, int(cidx.size()));
  std::vector<std::vector<BigInt>> dense(rest_rows.size(), std::vector<BigInt>(rest_cols.size()));
  for (std::size_t i = 0; i < rest_rows.size(); ++i)
    for (auto& [c, v] : rows[rest_rows[i]]) dense[i][cidx[c]] = v;
  SNFResult res = smith_normal_form_dense(std::move(dense));
  std::vector<BigInt> f(pivots, BigInt(1));
  f.insert(f.end(), res.factors.begin(), res.factors.end());
  res.factors = std::move(f);
  return res;
}

// ---- chain windows ----

struct ModelSpec {
  enum Kind { Brac, NBrac, TreeColumn, Total } kind = NBrac;
  int c = 2;      // complexity bound (Brac, NBrac, Total)
  int n = 2;      // number of inputs
  int l = 0;      // leg count (TreeColumn) or l-bound (Total)
};

inline ModelSpec::Kind parse_model(const std::string& s) {
  if (s == "brac") return ModelSpec::Brac;
  if (s == "nbrac") return ModelSpec::NBrac;
  if (s == "tree-column") return ModelSpec::TreeColumn;
  if (s == "total") return ModelSpec::Total;
  throw domain_error("unknown model '" + s + "' (brac, nbrac, tree-column, total)");
}

struct ChainWindow {
  int lo = 0, hi = 0;  // materialized degrees
  std::map<int, std::vector<std::string>> basis;
  std::map<int, SparseIntMatrix> boundary;  // d -> matrix of C_d -> C_{d+1}
};

namespace detail {
template <class Key>
struct Column {
  std::vector<Key> basis;
  std::map<Key, int> index;
};

template <class Key, class Basis, class Diff, class Show>
ChainWindow build_generic(int lo, int hi, Basis&& basis_at, Diff&& diff, Show&& show) {
  ChainWindow w;
  w.lo = lo;
  w.hi = hi;
  int nd = hi - lo + 1;
  std::vector<Column<Key>> col(nd);
  parallel_for(std::size_t(nd), [&](std::size_t j) {
    auto b = basis_at(lo + int(j));
    std::sort(b.begin(), b.end());
    col[j].basis = std::move(b);
    for (std::size_t t = 0; t < col[j].basis.size(); ++t) col[j].index.emplace(col[j].basis[t], int(t));
  });
  for (int j = 0; j < nd; ++j) {
    auto& names = w.basis[lo + j];
    for (auto& k : col[j].basis) names.push_back(show(k));
  }
  for (int j = 0; j + 1 < nd; ++j) {
    auto& src = col[j];
    auto& dst = col[j + 1];
    std::vector<std::vector<SparseIntMatrix::Entry>> parts(src.basis.size());
    parallel_for(src.basis.size(), [&](std::size_t t) {
      for (auto& [k, c] : diff(src.basis[t]).terms) {
        auto it = dst.index.find(k);
        if (it == dst.index.end())
          throw domain_error("boundary leaves the window basis: " + show(k));
        parts[t].push_back({it->second, int(t), c});
      }
    });
    SparseIntMatrix m;
    m.rows = int(dst.basis.size());
    m.cols = int(src.basis.size());
    for (auto& p : parts) m.entries.insert(m.entries.end(), p.begin(), p.end());
    w.boundary[lo + j] = std::move(m);
  }
  return w;
}
}  // namespace detail

inline bool composes_to_zero(const SparseIntMatrix& a, const SparseIntMatrix& b) {
  // b * a where a: C_d -> C_{d+1}, b: C_{d+1} -> C_{d+2}
  std::vector<std::vector<std::pair<int, std::int64_t>>> bcol(b.cols);
  for (auto& e : b.entries) bcol[e.col].push_back({e.row, e.val});
  std::map<std::pair<int, int>, BigInt> prod;
  for (auto& e : a.entries)
    for (auto& [r, v] : bcol[e.row]) prod[{r, e.col}] += BigInt(v) * e.val;
  for (auto& [k, v] : prod)
    if (v != 0) return false;
  return true;
}

// Materializes degrees lo-1..hi+1 so that every degree in [lo, hi] is interior.
inline ChainWindow build_window(const ModelSpec& spec, int lo, int hi) {
  if (lo > hi) throw domain_error("empty degree range");
  if (spec.n < 0) throw domain_error("n must be non-negative");
  int a = lo - 1, b = hi + 1;
  ChainWindow w;
  switch (spec.kind) {
    case ModelSpec::Brac:
    case ModelSpec::NBrac: {
      bool norm = spec.kind == ModelSpec::NBrac;
      w = detail::build_generic<Path>(
          a, b,
          [&](int d) {
            std::vector<Path> out;
            if (d > 0) return out;
            for (auto& k : weak_compositions(-d, spec.n))
              for (auto& p : enumerate_paths({k, 0}, spec.c))
                if (!norm || !has_internal_point(p)) out.push_back(p);
            return out;
          },
          [&](const Path& p) {
            auto s = simplicial_differential(p);
            return norm ? normalize(s) : s;
          },
          [](const Path& p) { return to_string(p); });
      break;
    }
    case ModelSpec::Total: {
      w = detail::build_generic<Path>(
          a, b,
          [&](int d) {
            std::vector<Path> out;
            for (int l = 0; l <= spec.l; ++l) {
              int K = l - d;
              if (K < 0) continue;
              for (auto& k : weak_compositions(K, spec.n))
                for (auto& p : enumerate_paths({k, l}, spec.c)) out.push_back(p);
            }
            return out;
          },
          [&](const Path& p) {
            PathSum s;
            for (auto& [q, c] : total_differential(p).terms)
              if (q.sig.l <= spec.l) s.add(q, c);
            return s;
          },
          [](const Path& p) { return to_string(p); });
      break;
    }
    case ModelSpec::TreeColumn: {
      w = detail::build_generic<Tree>(
          a, b,
          [&](int d) {
            std::vector<Tree> out;
            int K = spec.l + spec.n - 1 - d;
            if (K < 0) return out;
            for (auto& k : weak_compositions(K, spec.n))
              for (auto& t : enumerate_trees(k, spec.l)) out.push_back(t);
            return out;
          },
          [&](const Tree& t) { return tree_partial_total(t); },
          [](const Tree& t) { return to_string(t); });
      break;
    }
  }
  for (int d = w.lo; d + 1 < w.hi; ++d)
    if (!composes_to_zero(w.boundary.at(d), w.boundary.at(d + 1)))
      throw domain_error("boundary does not square to zero at degree " + std::to_string(d));
  return w;
}

struct HomologyGroup {
  long betti = 0;
  std::vector<BigInt> torsion;
};

// H_d = ker(C_d -> C_{d+1}) / im(C_{d-1} -> C_d) for interior degrees.
inline std::map<int, HomologyGroup> homology(const ChainWindow& w) {
  std::map<int, HomologyGroup> out;
  std::map<int, SNFResult> snf;
  std::vector<int> ds;
  for (auto& [d, m] : w.boundary) ds.push_back(d);
  std::vector<SNFResult> res(ds.size());
  parallel_for(ds.size(), [&](std::size_t j) { res[j] = smith_normal_form(w.boundary.at(ds[j])); });
  for (std::size_t j = 0; j < ds.size(); ++j) snf[ds[j]] = std::move(res[j]);
  for (int d = w.lo + 1; d < w.hi; ++d) {
    HomologyGroup h;
    long dim = long(w.basis.at(d).size());
    auto& out_snf = snf.at(d);
    auto& in_snf = snf.at(d - 1);
    h.betti = dim - out_snf.rank() - in_snf.rank();
    for (auto& f : in_snf.factors)
      if (f > 1) h.torsion.push_back(f);
    out[d] = std::move(h);
  }
  return out;
}

inline std::map<int, HomologyGroup> homology(const ModelSpec& spec, int lo, int hi) {
  return homology(build_window(spec, lo, hi));
}

}  // namespace opforge
