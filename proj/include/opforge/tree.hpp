#pragma once
#include <cctype>
#include <map>
#include <numeric>

#include "lattice.hpp"

namespace opforge {

// Planar tree node. White vertices carry labels 1..n, legs carry labels 1..l.
// A black vertex represents the iterated product, a special vertex the unit.
struct Tree {
  enum Kind : unsigned char { White, Black, Special, Leg };
  Kind kind = Special;
  int label = 0;
  std::vector<Tree> kids;

  static Tree W(int lab, std::vector<Tree> c = {}) { return {White, lab, std::move(c)}; }
  static Tree B(std::vector<Tree> c) { return {Black, 0, std::move(c)}; }
  static Tree S() { return {Special, 0, {}}; }
  static Tree L(int lab) { return {Leg, lab, {}}; }

  bool is_star() const { return kind == Special; }
  bool is_bar() const { return kind == Leg; }

  friend bool operator==(const Tree& a, const Tree& b) {
    return a.kind == b.kind && a.label == b.label && a.kids == b.kids;
  }
  friend bool operator<(const Tree& a, const Tree& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    if (a.label != b.label) return a.label < b.label;
    return std::lexicographical_compare(a.kids.begin(), a.kids.end(), b.kids.begin(), b.kids.end());
  }
};

using TreeSum = FormalSum<Tree>;

// ---- text format ----

inline void print_tree(std::ostream& os, const Tree& t, bool top, bool leg_labels) {
  switch (t.kind) {
    case Tree::Special: os << (top ? "*" : "S"); return;
    case Tree::Leg:
      if (top) os << "|";
      else if (leg_labels) os << "L" << t.label;
      else os << "L";
      return;
    case Tree::White: os << "W" << t.label << "("; break;
    case Tree::Black: os << "B("; break;
  }
  for (std::size_t j = 0; j < t.kids.size(); ++j) {
    if (j) os << ",";
    print_tree(os, t.kids[j], false, leg_labels);
  }
  os << ")";
}

inline std::string to_string(const Tree& t, bool leg_labels = true) {
  std::ostringstream os;
  print_tree(os, t, true, leg_labels);
  return os.str();
}

namespace detail {
struct TreeParser {
  const std::string& s;
  std::size_t i = 0;
  bool unlabeled_leg = false;
  [[noreturn]] void fail(const std::string& what) {
    throw parse_error("tree parse error at column " + std::to_string(i + 1) + ": " + what);
  }
  void ws() {
    while (i < s.size() && std::isspace((unsigned char)s[i])) ++i;
  }
  int num() {
    std::size_t b = i;
    while (i < s.size() && std::isdigit((unsigned char)s[i])) ++i;
    if (b == i) return -1;
    return std::stoi(s.substr(b, i - b));
  }
  std::vector<Tree> args() {
    ws();
    if (i >= s.size() || s[i] != '(') fail("expected '('");
    ++i;
    std::vector<Tree> out;
    ws();
    if (i < s.size() && s[i] == ')') {
      ++i;
      return out;
    }
    while (true) {
      out.push_back(node(false));
      ws();
      if (i < s.size() && s[i] == ',') {
        ++i;
        continue;
      }
      if (i < s.size() && s[i] == ')') {
        ++i;
        return out;
      }
      fail("expected ',' or ')'");
    }
  }
  Tree node(bool top) {
    ws();
    if (i >= s.size()) fail("unexpected end of input");
    char c = s[i++];
    if (c == 'W') {
      int lab = num();
      if (lab < 1) fail("white vertex needs a positive label");
      return Tree::W(lab, args());
    }
    if (c == 'B') return Tree::B(args());
    if (c == 'S') return Tree::S();
    if (c == '*' && top) return Tree::S();
    if (c == '|' && top) return Tree::L(1);
    if (c == 'L') {
      int lab = num();
      if (lab < 0) {
        unlabeled_leg = true;
        lab = 0;
      }
      return Tree::L(lab);
    }
    --i;
    fail(std::string("unexpected character '") + c + "'");
  }
};
}  // namespace detail

void label_legs_planar(Tree& t);

inline Tree parse_tree(const std::string& s) {
  detail::TreeParser p{s};
  Tree t = p.node(true);
  p.ws();
  if (p.i != s.size()) p.fail("trailing characters");
  if (p.unlabeled_leg) label_legs_planar(t);
  return t;
}

// ---- basic data ----

template <class F>
void for_each_node(const Tree& t, F&& f) {
  f(t);
  for (auto& c : t.kids) for_each_node(c, f);
}

inline int leg_count(const Tree& t) {
  int c = 0;
  for_each_node(t, [&](const Tree& x) { c += x.kind == Tree::Leg; });
  return c;
}

inline int white_count(const Tree& t) {
  int c = 0;
  for_each_node(t, [&](const Tree& x) { c += x.kind == Tree::White; });
  return c;
}

// Arities of white vertices indexed by label-1.
inline std::vector<int> white_arities(const Tree& t) {
  std::vector<int> k(white_count(t), -1);
  for_each_node(t, [&](const Tree& x) {
    if (x.kind != Tree::White) return;
    if (x.label < 1 || x.label > int(k.size()) || k[x.label - 1] != -1)
      throw domain_error("white labels must form a permutation of 1..n");
    k[x.label - 1] = int(x.kids.size());
  });
  return k;
}

inline Signature tree_signature(const Tree& t) { return {white_arities(t), leg_count(t)}; }

inline int tree_degree(const Tree& t) {
  auto s = tree_signature(t);
  return s.l - s.ksum() + s.n() - 1;
}

inline void label_legs_planar(Tree& t) {
  int c = 0;
  auto rec = [&](auto&& self, Tree& x) -> void {
    if (x.kind == Tree::Leg) x.label = ++c;
    for (auto& y : x.kids) self(self, y);
  };
  rec(rec, t);
}

inline bool legs_planar(const Tree& t) {
  int c = 0;
  bool ok = true;
  for_each_node(t, [&](const Tree& x) {
    if (x.kind == Tree::Leg) ok &= x.label == ++c;
  });
  return ok;
}

inline void validate_tree(const Tree& t) {
  white_arities(t);
  int l = leg_count(t);
  std::vector<int> seen(l + 1, 0);
  for_each_node(t, [&](const Tree& x) {
    if (x.kind == Tree::Leg) {
      if (x.label < 1 || x.label > l || seen[x.label]++) throw domain_error("leg labels must form a permutation of 1..l");
    }
    if (x.kind == Tree::Black) {
      if (x.kids.size() < 2) throw domain_error("black vertices need arity >= 2");
      for (auto& c : x.kids)
        if (c.kind == Tree::Black || c.kind == Tree::Special)
          throw domain_error("no edge may join a black vertex to a black or special vertex");
    }
  });
}

// Black-black collapse, removal of specials under black vertices, and
// contraction of unary/nullary black vertices.
inline Tree normalize(const Tree& t) {
  if (t.kind == Tree::White) {
    Tree r = Tree::W(t.label);
    r.kids.reserve(t.kids.size());
    for (auto& c : t.kids) r.kids.push_back(normalize(c));
    return r;
  }
  if (t.kind != Tree::Black) return t;
  std::vector<Tree> kids;
  for (auto& c0 : t.kids) {
    Tree c = normalize(c0);
    if (c.kind == Tree::Black)
      for (auto& g : c.kids) kids.push_back(std::move(g));
    else if (c.kind != Tree::Special)
      kids.push_back(std::move(c));
  }
  if (kids.empty()) return Tree::S();
  if (kids.size() == 1) return std::move(kids[0]);
  return Tree::B(std::move(kids));
}

template <class F>
Tree map_tree(const Tree& t, F&& f) {
  Tree r = t;
  for (auto& c : r.kids) c = map_tree(c, f);
  return f(r);
}

inline Tree relabel_whites(const Tree& t, const std::function<int(int)>& f) {
  Tree r = t;
  if (r.kind == Tree::White) r.label = f(r.label);
  for (auto& c : r.kids) c = relabel_whites(c, f);
  return r;
}

inline Tree relabel_legs(const Tree& t, const std::function<int(int)>& f) {
  Tree r = t;
  if (r.kind == Tree::Leg) r.label = f(r.label);
  for (auto& c : r.kids) c = relabel_legs(c, f);
  return r;
}

// ---- Koszul signs ----

// seq holds (reference position, degree) in target order.
inline int koszul_sign(const std::vector<std::pair<int, int>>& seq) {
  long long e = 0;
  for (std::size_t a = 0; a < seq.size(); ++a) {
    if (seq[a].second % 2 == 0) continue;
    for (std::size_t b = a + 1; b < seq.size(); ++b)
      if (seq[a].first > seq[b].first) e += (long long)seq[a].second * seq[b].second;
  }
  return sgn_pow(e);
}

struct Symbol {
  char cls;  // 'm' product, 'u' unit, 'f' cochain, 'a' input
  int key;   // label for f/a, DFS position for m/u
  int deg;
};

inline std::vector<Symbol> symbol_string(const Tree& t, const std::vector<int>& k) {
  std::vector<Symbol> w;
  auto rec = [&](auto&& self, const Tree& x) -> void {
    switch (x.kind) {
      case Tree::Leg: w.push_back({'a', x.label, -1}); break;
      case Tree::Special: w.push_back({'u', int(w.size()), -1}); break;
      case Tree::Black:
        w.push_back({'m', int(w.size()), int(x.kids.size()) - 1});
        for (auto& c : x.kids) self(self, c);
        break;
      case Tree::White:
        w.push_back({'f', x.label, k[x.label - 1] - 1});
        for (auto& c : x.kids) self(self, c);
        break;
    }
  };
  rec(rec, t);
  return w;
}

// Sign of the operation of T: the Koszul sign carrying the reference order
// (products in DFS order, units in reverse DFS order, cochains by label,
// inputs by label) to the DFS string of T.
inline int eval_sign(const Tree& t, const std::vector<int>& k) {
  auto w = symbol_string(t, k);
  std::vector<int> idx(w.size());
  std::iota(idx.begin(), idx.end(), 0);
  auto rank = [](char c) { return c == 'm' ? 0 : c == 'u' ? 1 : c == 'f' ? 2 : 3; };
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    int ra = rank(w[a].cls), rb = rank(w[b].cls);
    if (ra != rb) return ra < rb;
    if (w[a].cls == 'u') return w[a].key > w[b].key;
    return w[a].key < w[b].key;
  });
  std::vector<int> pos(w.size());
  for (std::size_t r = 0; r < idx.size(); ++r) pos[idx[r]] = int(r);
  std::vector<std::pair<int, int>> seq;
  for (std::size_t a = 0; a < w.size(); ++a) seq.push_back({pos[a], w[a].deg});
  return koszul_sign(seq);
}

inline int eval_sign(const Tree& t) { return eval_sign(t, white_arities(t)); }

// Koszul sign of the permutation from label order to planar order, degrees k_i - 1.
inline int signature_sign(const Tree& t) {
  auto k = white_arities(t);
  std::vector<std::pair<int, int>> seq;
  for_each_node(t, [&](const Tree& x) {
    if (x.kind == Tree::White) seq.push_back({x.label, k[x.label - 1] - 1});
  });
  return koszul_sign(seq);
}

// ---- insertion ----

// Graft T2 in place of white vertex i of T1 without normalizing.
inline Tree tree_graft(const Tree& t1, int i, const Tree& t2) {
  auto k1 = white_arities(t1);
  if (i < 1 || i > int(k1.size())) throw domain_error("insertion slot out of range");
  int l2 = leg_count(t2);
  if (l2 != k1[i - 1])
    throw domain_error("insertion needs l'' = k'_i (" + std::to_string(l2) + " != " +
                       std::to_string(k1[i - 1]) + ")");
  int n2 = white_count(t2);
  auto rec = [&](auto&& self, const Tree& x) -> Tree {
    if (x.kind == Tree::White && x.label == i) {
      const auto& kids = x.kids;
      std::vector<Tree> sub;
      for (auto& c : kids) sub.push_back(self(self, c));
      auto g = [&](auto&& gself, const Tree& y) -> Tree {
        if (y.kind == Tree::Leg) return sub[y.label - 1];
        Tree r = y;
        if (r.kind == Tree::White) r.label += i - 1;
        for (auto& c : r.kids) c = gself(gself, c);
        return r;
      };
      return g(g, t2);
    }
    Tree r = x;
    if (r.kind == Tree::White && r.label > i) r.label += n2 - 1;
    for (auto& c : r.kids) c = self(self, c);
    return r;
  };
  return rec(rec, t1);
}

inline Tree tree_insert(const Tree& t1, int i, const Tree& t2) { return normalize(tree_graft(t1, i, t2)); }

// ---- differentials ----

inline Tree shift_legs_from(const Tree& t, int from, int by) {
  return relabel_legs(t, [&](int j) { return j >= from ? j + by : j; });
}

inline bool is_exceptional_star(const Tree& t) { return t.kind == Tree::Special; }

inline TreeSum tree_delta(const Tree& t) {
  TreeSum out;
  if (is_exceptional_star(t)) return out;
  auto k = white_arities(t);
  int l = leg_count(t);
  int e = eval_sign(t, k);
  auto put = [&](Tree x, int c) {
    x = normalize(x);
    out.add(x, c * e * eval_sign(x, k));
  };
  put(Tree::B({Tree::L(1), shift_legs_from(t, 1, 1)}), sgn_pow(l + 1));
  put(Tree::B({t, Tree::L(l + 1)}), 1);
  for (int s = 1; s <= l; ++s) {
    Tree x = map_tree(t, [&](const Tree& y) {
      if (y.kind != Tree::Leg) return y;
      if (y.label == s) return Tree::B({Tree::L(s), Tree::L(s + 1)});
      return Tree::L(y.label > s ? y.label + 1 : y.label);
    });
    put(x, sgn_pow(s - 1 + l));
  }
  return out;
}

// del_i: replaces white vertex i (k_i >= 1 inputs) by the three-term pattern.
inline TreeSum tree_partial(const Tree& t, int i) {
  TreeSum out;
  auto k = white_arities(t);
  int n = int(k.size());
  if (i < 1 || i > n) throw domain_error("vertex label out of range");
  int ki = k[i - 1];
  if (ki == 0) return out;
  int l = leg_count(t);
  auto k2 = k;
  --k2[i - 1];
  int tail = 0;
  for (int j = i - 1; j < n; ++j) tail += k[j];
  int overall = sgn_pow(tail + l + n + i);
  int e = eval_sign(t, k);
  int m = ki - 1;
  auto replace = [&](const std::function<Tree(const std::vector<Tree>&)>& mk) {
    return map_tree(t, [&](const Tree& y) {
      if (y.kind == Tree::White && y.label == i) return mk(y.kids);
      return y;
    });
  };
  auto put = [&](Tree x, int c) {
    x = normalize(x);
    out.add(x, overall * c * e * eval_sign(x, k2));
  };
  put(replace([&](const std::vector<Tree>& c) {
        return Tree::B({c[0], Tree::W(i, std::vector<Tree>(c.begin() + 1, c.end()))});
      }),
      sgn_pow(m + 1));
  put(replace([&](const std::vector<Tree>& c) {
        return Tree::B({Tree::W(i, std::vector<Tree>(c.begin(), c.end() - 1)), c.back()});
      }),
      1);
  for (int s = 1; s < ki; ++s)
    put(replace([&](const std::vector<Tree>& c) {
          std::vector<Tree> nc(c.begin(), c.begin() + (s - 1));
          nc.push_back(Tree::B({c[s - 1], c[s]}));
          nc.insert(nc.end(), c.begin() + s + 1, c.end());
          return Tree::W(i, nc);
        }),
        sgn_pow(s - 1 + m));
  return out;
}

inline TreeSum tree_partial_total(const Tree& t) {
  TreeSum out;
  if (is_exceptional_star(t) || t.kind == Tree::Leg) return out;
  int n = white_count(t);
  for (int i = 1; i <= n; ++i) out += tree_partial(t, i);
  return out;
}

// d = (del_1 + ... + del_n) - delta
inline TreeSum tree_differential(const Tree& t) {
  TreeSum out = tree_partial_total(t);
  out -= tree_delta(t);
  return out;
}

template <class F>
TreeSum linear(const TreeSum& x, F&& f) {
  TreeSum out;
  for (auto& [t, c] : x.terms) out += f(t).scaled(c);
  return out;
}

// ---- enumeration ----

namespace detail {
struct TreeEnum {
  std::vector<int> k;  // arity per label-1
  enum Parent { Top, UnderWhite, UnderBlack };

  // Distribute the white set `mask` and `legs` legs over `parts` ordered slots.
  template <class F>
  void distribute(int mask, int legs, int parts, F&& f) {
    std::vector<int> whites;
    for (int b = 0; b < 31; ++b)
      if (mask >> b & 1) whites.push_back(b);
    std::vector<int> gm(parts, 0), gl(parts, 0);
    auto legrec = [&](auto&& self, int p, int rest) -> void {
      if (p == parts - 1) {
        gl[p] = rest;
        f(gm, gl);
        return;
      }
      for (int v = 0; v <= rest; ++v) {
        gl[p] = v;
        self(self, p + 1, rest - v);
      }
    };
    auto wrec = [&](auto&& self, std::size_t w) -> void {
      if (w == whites.size()) {
        legrec(legrec, 0, legs);
        return;
      }
      for (int p = 0; p < parts; ++p) {
        gm[p] |= 1 << whites[w];
        self(self, w + 1);
        gm[p] &= ~(1 << whites[w]);
      }
    };
    wrec(wrec, 0);
  }

  void product(const std::vector<std::vector<Tree>>& opts, const std::function<void(std::vector<Tree>)>& f) {
    std::vector<Tree> cur;
    auto rec = [&](auto&& self, std::size_t j) -> void {
      if (j == opts.size()) {
        f(cur);
        return;
      }
      for (auto& o : opts[j]) {
        cur.push_back(o);
        self(self, j + 1);
        cur.pop_back();
      }
    };
    rec(rec, 0);
  }

  std::vector<Tree> trees(int mask, int legs, Parent parent) {
    std::vector<Tree> res;
    if (!mask && legs == 1) res.push_back(Tree::L(0));
    if (!mask && legs == 0 && parent == UnderWhite) res.push_back(Tree::S());
    int nw = __builtin_popcount(mask);
    for (int b = 0; b < 31; ++b) {
      if (!(mask >> b & 1)) continue;
      int rest = mask & ~(1 << b);
      int ar = k[b];
      if (ar == 0) {
        if (!rest && legs == 0) res.push_back(Tree::W(b + 1));
        continue;
      }
      distribute(rest, legs, ar, [&](const std::vector<int>& gm, const std::vector<int>& gl) {
        std::vector<std::vector<Tree>> opts;
        for (int p = 0; p < ar; ++p) {
          opts.push_back(trees(gm[p], gl[p], UnderWhite));
          if (opts.back().empty()) return;
        }
        product(opts, [&](std::vector<Tree> kids) { res.push_back(Tree::W(b + 1, std::move(kids))); });
      });
    }
    if (parent != UnderBlack) {
      for (int m = 2; m <= nw + legs; ++m)
        distribute(mask, legs, m, [&](const std::vector<int>& gm, const std::vector<int>& gl) {
          for (int p = 0; p < m; ++p)
            if (!gm[p] && !gl[p]) return;
          std::vector<std::vector<Tree>> opts;
          for (int p = 0; p < m; ++p) {
            opts.push_back(trees(gm[p], gl[p], UnderBlack));
            if (opts.back().empty()) return;
          }
          product(opts, [&](std::vector<Tree> kids) { res.push_back(Tree::B(std::move(kids))); });
        });
    }
    return res;
  }
};
}  // namespace detail

// All normalized (l;k)-trees. Legs are labeled in planar order unless
// all_leg_labelings is set, in which case every labeling is produced.
inline std::vector<Tree> enumerate_trees(const std::vector<int>& k, int l, bool all_leg_labelings = false) {
  detail::TreeEnum en{k};
  int n = int(k.size());
  std::vector<Tree> shapes;
  if (n == 0 && l == 0) shapes.push_back(Tree::S());
  auto more = en.trees((1 << n) - 1, l, detail::TreeEnum::Top);
  shapes.insert(shapes.end(), more.begin(), more.end());
  std::vector<Tree> out;
  for (auto& s : shapes) {
    if (!all_leg_labelings) {
      Tree t = s;
      label_legs_planar(t);
      out.push_back(std::move(t));
      continue;
    }
    std::vector<int> perm(l);
    std::iota(perm.begin(), perm.end(), 1);
    do {
      int c = 0;
      out.push_back(map_tree(s, [&](const Tree& y) { return y.kind == Tree::Leg ? Tree::L(perm[c++]) : y; }));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---- the tree <-> Lat_2 correspondence ----

// Walk around T: arriving at white vertex i and returning from each of its
// children advances direction i; a leg adds one to the current marking.
inline Path tree_to_path(const Tree& t) {
  Path p;
  p.sig = tree_signature(t);
  p.marks.push_back(0);
  auto rec = [&](auto&& self, const Tree& x) -> void {
    switch (x.kind) {
      case Tree::Leg: ++p.marks.back(); break;
      case Tree::Special: break;
      case Tree::Black:
        for (auto& c : x.kids) self(self, c);
        break;
      case Tree::White:
        p.moves.push_back(x.label);
        p.marks.push_back(0);
        for (auto& c : x.kids) {
          self(self, c);
          p.moves.push_back(x.label);
          p.marks.push_back(0);
        }
        break;
    }
  };
  rec(rec, t);
  return p;
}

inline Tree path_to_tree(const Path& p) {
  if (complexity(p) > 2) throw domain_error("path complexity exceeds 2; no tree corresponds");
  // token stream: 0 = leg, d > 0 = move in direction d
  std::vector<int> tok;
  for (int a = 0; a < p.points(); ++a) {
    tok.insert(tok.end(), p.marks[a], 0);
    if (a < int(p.moves.size())) tok.push_back(p.moves[a]);
  }
  std::map<int, std::vector<int>> occ;
  for (int j = 0; j < int(tok.size()); ++j)
    if (tok[j]) occ[tok[j]].push_back(j);
  auto bad = [] { throw domain_error("path does not decode to a tree"); };
  auto items = [&](auto&& self, int lo, int hi) -> std::vector<Tree> {
    std::vector<Tree> out;
    int j = lo;
    while (j < hi) {
      if (tok[j] == 0) {
        out.push_back(Tree::L(0));
        ++j;
        continue;
      }
      auto& o = occ[tok[j]];
      if (o.front() != j || o.back() >= hi) bad();
      Tree w = Tree::W(tok[j]);
      for (std::size_t t = 0; t + 1 < o.size(); ++t) {
        auto sub = self(self, o[t] + 1, o[t + 1]);
        if (sub.empty()) w.kids.push_back(Tree::S());
        else if (sub.size() == 1) w.kids.push_back(std::move(sub[0]));
        else w.kids.push_back(Tree::B(std::move(sub)));
      }
      out.push_back(std::move(w));
      j = o.back() + 1;
    }
    return out;
  };
  auto top = items(items, 0, int(tok.size()));
  Tree t = top.empty() ? Tree::S() : top.size() == 1 ? top[0] : Tree::B(top);
  label_legs_planar(t);
  if (tree_to_path(t) != p) bad();
  return t;
}

// nu(p) relating the tree differential to the lattice total differential:
// nu(q) d_lat = d_tree nu under T -> nu(phi_T) phi_T.
inline int dictionary_sign(const Tree& t) {
  auto s = tree_signature(t);
  long long e = (long long)s.l * (s.l - 1) / 2;
  for (int r = 0; r < s.n(); ++r)
    for (int q = r + 1; q < s.n(); ++q) e += (long long)s.k[r] * (s.k[q] + 1);
  return sgn_pow(e) * eval_sign(t, s.k);
}

struct Membership {
  bool in_Bhat, in_T, in_That;
};

inline bool has_stub(const Tree& t) {
  bool st = false;
  for_each_node(t, [&](const Tree& x) {
    if (x.kind == Tree::White)
      for (auto& c : x.kids) st |= c.kind == Tree::Special;
  });
  return st;
}

inline Membership suboperad_membership(const Tree& t) {
  Membership m;
  m.in_Bhat = !is_exceptional_star(t) && !has_stub(t);
  m.in_T = legs_planar(t);
  m.in_That = m.in_Bhat && m.in_T;
  return m;
}

}  // namespace opforge
