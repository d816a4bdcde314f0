#pragma once
#include <chrono>
#include <functional>
#include <random>

#include "brace.hpp"
#include "hochschild.hpp"
#include "homology.hpp"
#include "lattice.hpp"
#include "simplicial.hpp"

namespace opforge {

struct SuiteResult {
  std::string name;
  bool pass = true;
  long cases = 0;
  std::string detail;  // counts on success, first failure otherwise
};

namespace detail {

struct Tally {
  long cases = 0, failures = 0;
  std::string first;
  template <class W>
  void check(bool ok, W&& what) {
    ++cases;
    if (ok) return;
    if (!failures++) first = what();
  }
  void merge(const Tally& o) {
    cases += o.cases;
    if (o.failures && !failures) first = o.first;
    failures += o.failures;
  }
};

inline SuiteResult finish(const std::string& name, const Tally& t, const std::string& info) {
  SuiteResult r{name, t.failures == 0, t.cases, info};
  if (t.failures) r.detail = std::to_string(t.failures) + " failures; first: " + t.first;
  return r;
}

inline std::vector<Signature> signatures(int max_n, int max_ksum, int max_l, int min_n = 0) {
  std::vector<Signature> out;
  for (int n = min_n; n <= max_n; ++n)
    for (int K = 0; K <= max_ksum; ++K)
      for (auto& k : weak_compositions(K, n))
        for (int l = 0; l <= max_l; ++l) out.push_back({k, l});
  return out;
}

// Runs body over the items in parallel and merges the per-item tallies in order.
template <class T, class F>
Tally tally_over(const std::vector<T>& items, F&& body) {
  std::vector<Tally> parts(items.size());
  parallel_for(items.size(), [&](std::size_t j) { body(items[j], parts[j]); });
  Tally all;
  for (auto& p : parts) all.merge(p);
  return all;
}

inline std::string show(const PathSum& s) {
  return format_sum(s, [](const Path& p) { return to_string(p); });
}
inline std::string show(const TreeSum& s) {
  return format_sum(s, [](const Tree& t) { return to_string(t); });
}

inline long long binom(int a, int b) {
  if (b < 0 || b > a) return 0;
  long long r = 1;
  for (int j = 1; j <= b; ++j) r = r * (a - b + j) / j;
  return r;
}

// Number of marked paths: multinomial over moves times markings of the points.
inline long long path_count(const Signature& s) {
  long long r = 1;
  int placed = 0;
  for (int x : s.k) {
    placed += x + 1;
    r *= binom(placed, x + 1);
  }
  int pts = placed + 1;
  return r * binom(pts + s.l - 1, s.l);
}

}  // namespace detail

// Enumeration round trips and the (co)simplicial identities.
inline SuiteResult suite_structural(int max_k = 4, int max_n = 3, int max_l = 3) {
  using detail::Tally;
  auto sigs = detail::signatures(max_n, max_k, max_l);
  Tally t = detail::tally_over(sigs, [&](const Signature& sig, Tally& T) {
    auto ps = enumerate_paths(sig);
    T.check((long long)ps.size() == detail::path_count(sig), [&] {
      return "count " + std::to_string(ps.size()) + " for " + to_string(sig);
    });
    std::set<Path> uniq(ps.begin(), ps.end());
    T.check(uniq.size() == ps.size(), [&] { return "duplicates in " + to_string(sig); });
    int L = sig.l;
    for (auto& p : ps) {
      auto at = [&p](const char* what) { return [&p, what] { return what + (" on " + to_string(p)); }; };
      T.check(parse_path(to_string(p)) == p, at("text round trip"));
      for (int r = 1; r <= sig.n(); ++r) {
        int q = sig.k[r - 1];
        for (int j = 0; j <= q && q >= 2; ++j)
          for (int i = 0; i < j; ++i)
            T.check(face(face(p, r, j), r, i) == face(face(p, r, i), r, j - 1), at("d_i d_j"));
        for (int j = 0; j <= q; ++j)
          for (int i = 0; i <= j; ++i)
            T.check(degeneracy(degeneracy(p, r, j), r, i) == degeneracy(degeneracy(p, r, i), r, j + 1),
                    at("s_i s_j"));
        for (int j = 0; j <= q; ++j) {
          Path sj = degeneracy(p, r, j);
          T.check(face(sj, r, j) == p && face(sj, r, j + 1) == p, at("d_j s_j = id"));
          for (int i = 0; i < j; ++i)
            T.check(face(sj, r, i) == degeneracy(face(p, r, i), r, j - 1), at("d_i s_j, i<j"));
          for (int i = j + 2; i <= q + 1; ++i)
            T.check(face(sj, r, i) == degeneracy(face(p, r, i - 1), r, j), at("d_i s_j, i>j+1"));
        }
        for (int i = 0; i <= q; ++i)
          if (q >= 1)
            T.check(complexity(face(p, r, i)) <= complexity(p), at("face raises complexity"));
        for (int r2 = r + 1; r2 <= sig.n(); ++r2) {
          int q2 = sig.k[r2 - 1];
          for (int i = 0; i <= q; ++i)
            for (int j = 0; j <= q2; ++j) {
              if (q >= 1 && q2 >= 1)
                T.check(face(face(p, r, i), r2, j) == face(face(p, r2, j), r, i), at("faces commute"));
              T.check(degeneracy(degeneracy(p, r, i), r2, j) == degeneracy(degeneracy(p, r2, j), r, i),
                      at("degeneracies commute"));
              if (q >= 1)
                T.check(face(degeneracy(p, r2, j), r, i) == degeneracy(face(p, r, i), r2, j),
                        at("face/degeneracy commute"));
              if (q2 >= 1)
                T.check(face(degeneracy(p, r, i), r2, j) == degeneracy(face(p, r2, j), r, i),
                        at("degeneracy/face commute"));
            }
        }
      }
      for (int j = 0; j <= L + 2; ++j)
        for (int i = 0; i < j; ++i)
          T.check(coface(coface(p, i), j) == coface(coface(p, j - 1), i), at("cofaces"));
      for (int j = 0; j + 1 < L; ++j)
        for (int i = 0; i <= j; ++i)
          T.check(codegeneracy(codegeneracy(p, j + 1), i) == codegeneracy(codegeneracy(p, i), j),
                  at("codegeneracies"));
      for (int j = 0; j <= L; ++j) {
        T.check(codegeneracy(coface(p, j), j) == p && codegeneracy(coface(p, j + 1), j) == p,
                at("s^j d^j = id"));
        for (int i = 0; i < j; ++i)
          T.check(codegeneracy(coface(p, i), j) == coface(codegeneracy(p, j - 1), i), at("s^j d^i, i<j"));
        for (int i = j + 2; i <= L + 1; ++i)
          T.check(codegeneracy(coface(p, i), j) == coface(codegeneracy(p, j), i - 1),
                  at("s^j d^i, i>j+1"));
      }
    }
  });
  return detail::finish("simplicial-identities", t, std::to_string(sigs.size()) + " signatures");
}

// d^2 = 0 in every model.
inline SuiteResult suite_d_squared(int max_k = 4) {
  using detail::Tally;
  auto sigs = detail::signatures(3, max_k, 3);
  Tally t = detail::tally_over(sigs, [&](const Signature& sig, Tally& T) {
    for (auto& p : enumerate_paths(sig)) {
      auto dd = linear(simplicial_differential(p), simplicial_differential);
      T.check(dd.empty(), [&] { return "del^2 on " + to_string(p) + " = " + detail::show(dd); });
      auto de = linear(cosimplicial_differential(p), cosimplicial_differential);
      T.check(de.empty(), [&] { return "delta^2 on " + to_string(p); });
      // delta and del commute; the (-1)^l in d makes them anticommute there.
      auto ac = linear(simplicial_differential(p), cosimplicial_differential) -
                linear(cosimplicial_differential(p), simplicial_differential);
      T.check(ac.empty(), [&] { return "del delta - delta del on " + to_string(p); });
      auto tt = linear(total_differential(p), total_differential);
      T.check(tt.empty(), [&] { return "d^2 on " + to_string(p); });
    }
  });
  long lat = t.cases;
  auto tsigs = detail::signatures(2, std::min(max_k, 3), 2);
  Tally tt = detail::tally_over(tsigs, [&](const Signature& sig, Tally& T) {
    for (auto& x : enumerate_trees(sig.k, sig.l)) {
      auto dd = linear(tree_differential(x), tree_differential);
      T.check(dd.empty(), [&] { return "tree d^2 on " + to_string(x) + " = " + detail::show(dd); });
    }
  });
  long trees = tt.cases;
  t.merge(tt);
  auto asigs = detail::signatures(3, max_k, 0, 1);
  Tally ta = detail::tally_over(asigs, [&](const Signature& sig, Tally& T) {
    for (auto& s : enumerate_trees(sig.k, 0)) {
      auto dd = linear(amputated_differential(s), amputated_differential);
      T.check(dd.empty(), [&] { return "amputated d^2 on " + to_string(s) + " = " + detail::show(dd); });
    }
  });
  long amp = ta.cases;
  t.merge(ta);
  return detail::finish("d-squared", t,
                        std::to_string(lat) + " lattice checks, " + std::to_string(trees) + " trees, " +
                            std::to_string(amp) + " amputated trees");
}

// Trees with k <= max_k, l <= max_l, n <= 3 against complexity-2 paths.
inline SuiteResult suite_tree_path(int max_k = 3, int random_cases = 300) {
  using detail::Tally;
  auto sigs = detail::signatures(3, max_k, 3);
  Tally t = detail::tally_over(sigs, [&](const Signature& sig, Tally& T) {
    auto trees = enumerate_trees(sig.k, sig.l);
    auto paths = enumerate_paths(sig, 2);
    T.check(trees.size() == paths.size(), [&] {
      return to_string(sig) + ": " + std::to_string(trees.size()) + " trees vs " + std::to_string(paths.size()) +
             " paths";
    });
    std::set<Path> image;
    for (auto& x : trees) {
      Path p = tree_to_path(x);
      image.insert(p);
      T.check(complexity(p) <= 2 && path_to_tree(p) == x, [&] { return "round trip of " + to_string(x); });
      PathSum lhs, rhs;
      for (auto& [y, c] : tree_differential(x).terms) lhs.add(tree_to_path(y), c * dictionary_sign(y));
      for (auto& [q, c] : total_differential(p).terms) rhs.add(q, c * dictionary_sign(x));
      T.check(lhs == rhs, [&] { return "differential not intertwined at " + to_string(x); });
    }
    T.check(image == std::set<Path>(paths.begin(), paths.end()), [&] { return "image mismatch " + to_string(sig); });
  });
  std::vector<Tree> pool;
  for (auto& s : detail::signatures(2, max_k, 3))
    for (auto& x : enumerate_trees(s.k, s.l)) pool.push_back(x);
  std::mt19937 rng(20241);
  long done = 0;
  while (done < random_cases) {
    auto& a = pool[rng() % pool.size()];
    int n = white_count(a);
    if (!n) continue;
    int i = 1 + int(rng() % n);
    int ki = white_arities(a)[i - 1];
    std::vector<const Tree*> fit;
    for (auto& b : pool)
      if (leg_count(b) == ki) fit.push_back(&b);
    if (fit.empty()) continue;
    auto& b = *fit[rng() % fit.size()];
    ++done;
    t.check(tree_to_path(tree_insert(a, i, b)) == compose(tree_to_path(a), i, tree_to_path(b)),
            [&] { return "composition " + to_string(a) + " o" + std::to_string(i) + " " + to_string(b); });
  }
  return detail::finish("tree-path", t, std::to_string(sigs.size()) + " signatures, " +
                                            std::to_string(random_cases) + " random insertions");
}

inline SuiteResult suite_surjections(int max_m = 7, int max_n = 3) {
  detail::Tally t;
  for (int n = 1; n <= max_n; ++n)
    for (int m = n; m <= max_m; ++m) {
      auto nd = nondegenerate_surjections(m, n);
      if (n == 2) t.check(nd.size() == 2, [&] { return "n=2, m=" + std::to_string(m) + " count " + std::to_string(nd.size()); });
      std::set<Path> image;
      for (auto& u : nd) {
        Path p = surjection_to_path(u);
        image.insert(p);
        t.check(path_to_surjection(p) == u, [&] { return "inverse fails at " + to_string(u); });
        t.check(complexity(p) == surjection_complexity(u), [&] { return "filtration mismatch at " + to_string(u); });
      }
      // The other side: every unmarked path without internal points with m moves.
      long paths = 0;
      for (auto& k : weak_compositions(m - n, n))
        for (auto& p : enumerate_paths({k, 0})) {
          if (has_internal_point(p)) continue;
          ++paths;
          t.check(image.count(p) == 1 && surjection_to_path(path_to_surjection(p)) == p,
                  [&] { return "path not hit: " + to_string(p); });
        }
      t.check(paths == long(nd.size()), [&] { return "counts differ at m=" + std::to_string(m); });
      // All surjections, degenerate ones included: adjacent repeats <-> internal points.
      std::vector<int> u(m, 1);
      for (;;) {
        Surjection s{n, u};
        bool onto = true;
        for (int v = 1; v <= n; ++v) onto &= std::find(u.begin(), u.end(), v) != u.end();
        if (onto) {
          Signature sig;
          sig.k.assign(n, -1);
          for (int x : u) ++sig.k[x - 1];
          Path p = validate_path(sig, u, std::vector<int>(m + 1, 0));
          t.check(has_internal_point(p) == !s.nondegenerate(), [&] { return "degeneracy mismatch " + to_string(s); });
        }
        int j = m - 1;
        while (j >= 0 && u[j] == n) u[j--] = 1;
        if (j < 0) break;
        ++u[j];
      }
    }
  return detail::finish("surjections", t, "m <= " + std::to_string(max_m) + ", n <= " + std::to_string(max_n));
}

inline std::string show_homology(const std::map<int, HomologyGroup>& h) {
  std::string s;
  for (auto it = h.rbegin(); it != h.rend(); ++it) {
    s += (s.empty() ? "" : " ") + std::to_string(it->first) + ":" + std::to_string(it->second.betti);
    for (auto& x : it->second.torsion) s += "+Z/" + x.str();
  }
  return s;
}

inline SuiteResult suite_brac_vs_nbrac(int max_c = 3, int max_n = 3, int lo = -4, int hi = 0) {
  detail::Tally t;
  std::string info;
  for (int c = 1; c <= max_c; ++c)
    for (int n = 1; n <= max_n; ++n) {
      auto a = homology({ModelSpec::Brac, c, n}, lo, hi);
      auto b = homology({ModelSpec::NBrac, c, n}, lo, hi);
      bool same = a.size() == b.size();
      for (auto& [d, g] : a) same = same && b.count(d) && b[d].betti == g.betti;
      t.check(same, [&] {
        return "c=" + std::to_string(c) + " n=" + std::to_string(n) + ": " + show_homology(a) + " vs " +
               show_homology(b);
      });
      info += (info.empty() ? "" : "; ") + std::string("c=") + std::to_string(c) + ",n=" + std::to_string(n) +
              " [" + show_homology(b) + "]";
    }
  return detail::finish("brac-vs-nbrac", t, info);
}

inline SuiteResult suite_little_disks() {
  detail::Tally t;
  auto h2 = homology({ModelSpec::NBrac, 2, 2}, -4, 0);
  auto h3 = homology({ModelSpec::NBrac, 2, 3}, -4, 0);
  auto want = [](std::map<int, long> b) { return b; };
  auto check = [&](const std::map<int, HomologyGroup>& h, std::map<int, long> expect, const char* nm) {
    bool ok = true;
    long total = 0;
    for (auto& [d, g] : h) {
      long e = expect.count(d) ? expect[d] : 0;
      ok = ok && g.betti == e && g.torsion.empty();
      total += g.betti;
    }
    t.check(ok, [&] { return std::string(nm) + " = " + show_homology(h); });
    return total;
  };
  check(h2, want({{0, 1}, {-1, 1}}), "nbrac_2(2)");
  long tot = check(h3, want({{0, 1}, {-1, 3}, {-2, 2}}), "nbrac_2(3)");
  t.check(tot == 6, [&] { return "total rank of nbrac_2(3) is " + std::to_string(tot); });
  return detail::finish("little-disks", t, "nbrac_2(2) [" + show_homology(h2) + "], nbrac_2(3) [" + show_homology(h3) + "]");
}

// Complexity-3 path with moves 2,1,2,1; one of its faces has an internal point.
inline Path closure_picture_path() { return parse_path("lat 1,1;0 | 0 2:0 1:0 2:0 1:0"); }

inline SuiteResult suite_hbrac_closure(int max_k = 4) {
  detail::Tally t;
  std::string info;
  for (int c = 0; c <= 3; ++c)
    for (int n = 2; n <= 3; ++n) {
      auto v = hbrac_closure_check(c, n, max_k);
      bool expect_closed = c <= 2;
      t.check(v.closed == expect_closed, [&] {
        return "c=" + std::to_string(c) + " n=" + std::to_string(n) + " verdict " + (v.closed ? "closed" : "open");
      });
      if (!v.closed && info.empty())
        info = "c=3 counterexample " + to_string(*v.counterexample) + " -> " + detail::show(v.boundary);
    }
  Path pic = closure_picture_path();
  bool creates = false;
  for (auto& [q, c] : simplicial_differential(pic).terms) creates |= has_internal_point(q);
  t.check(complexity(pic) == 3 && !has_internal_point(pic) && creates,
          [&] { return "path 2,1,2,1 does not create an internal point"; });
  return detail::finish("hbrac-closure", t, info);
}

// Whiskering commutes with the differential and with insertion.
inline SuiteResult suite_whiskering(int max_k = 3, int budget = 3) {
  using detail::Tally;
  std::vector<Tree> amps;
  for (auto& s : detail::signatures(3, max_k, 0, 1))
    for (auto& x : enumerate_trees(s.k, 0)) amps.push_back(x);
  Tally t = detail::tally_over(amps, [&](const Tree& s, Tally& T) {
    T.check(whisker_commutes_with_d(s, budget), [&] { return "w(dS) != d w(S) at " + to_string(s); });
  });
  long part1 = t.cases;
  std::vector<std::tuple<const Tree*, int, const Tree*>> pairs;
  for (auto& a : amps)
    for (auto& b : amps) {
      if (white_count(a) + white_count(b) - 1 > 3) continue;
      if (tree_signature(a).ksum() + tree_signature(b).ksum() > max_k) continue;
      for (int i = 1; i <= white_count(a); ++i) pairs.push_back({&a, i, &b});
    }
  Tally t2 = detail::tally_over(pairs, [&](const auto& x, Tally& T) {
    auto [a, i, b] = x;
    T.check(whisker_commutes_with_insert(*a, i, *b, budget),
            [&] { return "w(S' o" + std::to_string(i) + " S'') at " + to_string(*a) + ", " + to_string(*b); });
  });
  t.merge(t2);
  return detail::finish("whiskering", t,
                        std::to_string(part1) + " differentials, " + std::to_string(pairs.size()) + " insertions, budget " +
                            std::to_string(budget));
}

// A labeled tree with stubs and its known value (coefficient -1).
inline const char* sample_tree() { return "B(L3,W1(W2(B(L5,L6),S,L8),L1,W3(L7)),W4(L4,S,L2))"; }
inline const char* sample_word() { return "a3 f1(f2(a5a6,1,a8),a1,f3(a7)) f4(a4,1,a2)"; }

inline SuiteResult suite_gerstenhaber(int max_arity = 3) {
  detail::Tally t;
  std::string info;
  for (auto& r : gerstenhaber_suite(max_arity)) {
    detail::Tally x;
    x.cases = r.cases;
    x.failures = r.failures;
    x.first = r.name + " " + r.first_failure;
    t.merge(x);
    info += (info.empty() ? "" : ", ") + r.name + " " + std::to_string(r.cases);
  }
  Value v = evaluate(parse_tree(sample_tree()));
  t.check(v.size() == 1 && to_string(v.terms.begin()->first) == sample_word() && v.terms.begin()->second == -1,
          [&] { return "sample tree evaluates to " + to_string(v); });
  return detail::finish("gerstenhaber", t, info + ", sample evaluation");
}

inline SuiteResult suite_decompose(int max_edges = 4) {
  using detail::Tally;
  std::vector<Tree> amps;
  // n whites need n-1 edges and the white arities sum to at most the edge count.
  for (auto& s : detail::signatures(max_edges + 1, max_edges, 0, 1))
    for (auto& x : enumerate_trees(s.k, 0))
      if (internal_edges(x) <= max_edges) amps.push_back(x);
  Tally t = detail::tally_over(amps, [&](const Tree& s, Tally& T) {
    std::string err;
    try {
      decompose(s);
    } catch (const std::exception& e) {
      err = e.what();
    }
    T.check(err.empty(), [&] { return to_string(s) + ": " + err; });
  });
  return detail::finish("decompose", t, std::to_string(amps.size()) + " amputated trees");
}

inline SuiteResult suite_operad_action(int samples = 3000) {
  std::vector<Tree> pool;
  for (auto& s : detail::signatures(2, 3, 3))
    for (auto& x : enumerate_trees(s.k, s.l, true)) pool.push_back(x);
  std::mt19937 rng(5);
  detail::Tally t;
  while (t.cases < samples) {
    auto& a = pool[rng() % pool.size()];
    int n = white_count(a);
    if (!n) continue;
    int i = 1 + int(rng() % n);
    int ki = white_arities(a)[i - 1];
    std::vector<const Tree*> fit;
    for (auto& b : pool)
      if (leg_count(b) == ki && n + white_count(b) <= 4) fit.push_back(&b);
    if (fit.empty()) continue;
    std::string why;
    bool ok = operad_action_holds(a, i, *fit[rng() % fit.size()], &why);
    t.check(ok, [&] { return why; });
  }
  return detail::finish("operad-action", t, std::to_string(samples) + " random insertions");
}

inline SuiteResult suite_injectivity(int max_k = 3) {
  detail::Tally t;
  long trees = 0;
  for (auto& s : detail::signatures(3, max_k, 3)) {
    auto xs = enumerate_trees(s.k, s.l, s.l <= 2);
    trees += long(xs.size());
    std::string why;
    bool ok = evaluation_injective(xs, &why);
    t.check(ok, [&] { return why; });
  }
  return detail::finish("injectivity", t, std::to_string(trees) + " trees");
}

struct SuiteEntry {
  std::string name;
  std::string about;
  std::function<SuiteResult(int)> run;  // argument: size bound, or -1 for the default
};

inline const std::vector<SuiteEntry>& suite_registry() {
  static const std::vector<SuiteEntry> reg = {
      {"simplicial-identities", "enumeration round trips, (co)simplicial identities",
       [](int k) { return suite_structural(k < 0 ? 4 : k); }},
      {"d-squared", "d^2 = 0 for lattice, tree and amputated models",
       [](int k) { return suite_d_squared(k < 0 ? 4 : k); }},
      {"tree-path", "tree <-> complexity-2 path bijection and composition",
       [](int k) { return suite_tree_path(k < 0 ? 3 : k); }},
      {"surjections", "surjection <-> path bijection", [](int k) { return suite_surjections(k < 0 ? 7 : k); }},
      {"brac-vs-nbrac", "Betti numbers of Brac_c(n) and its normalization",
       [](int k) { return suite_brac_vs_nbrac(k < 0 ? 3 : k); }},
      {"little-disks", "Betti numbers of nbrac_2(2), nbrac_2(3)", [](int) { return suite_little_disks(); }},
      {"hbrac-closure", "dg-closure of the internal-point-free part",
       [](int k) { return suite_hbrac_closure(k < 0 ? 4 : k); }},
      {"whiskering", "whiskering commutes with d and insertion", [](int k) { return suite_whiskering(k < 0 ? 3 : k); }},
      {"gerstenhaber", "Gerstenhaber identities and a sample evaluation",
       [](int k) { return suite_gerstenhaber(k < 0 ? 3 : k); }},
      {"decompose", "decomposition into brace and cup atoms", [](int k) { return suite_decompose(k < 0 ? 4 : k); }},
      {"operad-action", "trees act on cochains compatibly with insertion",
       [](int k) { return suite_operad_action(k < 0 ? 3000 : k); }},
      {"injectivity", "distinct trees give distinct operations", [](int k) { return suite_injectivity(k < 0 ? 3 : k); }},
  };
  return reg;
}

}  // namespace opforge
