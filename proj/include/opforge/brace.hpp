#pragma once
#include <memory>

#include "tree.hpp"

namespace opforge {

struct Angle {
  int label;  // white vertex
  int slot;   // 0..k, position between children
  bool operator==(const Angle&) const = default;
};

// Angles of all white vertices in DFS order.
inline std::vector<Angle> angles(const Tree& s) {
  std::vector<Angle> out;
  auto rec = [&](auto&& self, const Tree& x) -> void {
    if (x.kind == Tree::White)
      for (int a = 0; a <= int(x.kids.size()); ++a) {
        out.push_back({x.label, a});
        if (a < int(x.kids.size())) self(self, x.kids[a]);
      }
    else
      for (auto& c : x.kids) self(self, c);
  };
  rec(rec, s);
  return out;
}

inline bool is_amputated(const Tree& s) {
  bool ok = true;
  for_each_node(s, [&](const Tree& x) { ok &= x.kind != Tree::Leg; });
  return ok;
}

inline void require_amputated(const Tree& s) {
  if (!is_amputated(s)) throw domain_error("expected an amputated tree (no legs)");
}

namespace detail {
// Put `items[a]` (in order) into angle a of s; angle order matches angles(s).
inline Tree fill_angles(const Tree& s, const std::vector<std::vector<Tree>>& items) {
  std::size_t pos = 0;
  auto rec = [&](auto&& self, const Tree& x) -> Tree {
    if (x.kind == Tree::White) {
      Tree r = Tree::W(x.label);
      for (int a = 0; a <= int(x.kids.size()); ++a) {
        for (auto& it : items[pos]) r.kids.push_back(it);
        ++pos;
        if (a < int(x.kids.size())) r.kids.push_back(self(self, x.kids[a]));
      }
      return r;
    }
    Tree r = x;
    for (auto& c : r.kids) c = self(self, c);
    return r;
  };
  return rec(rec, s);
}

// Monotone maps from `m` ordered items to `A` angles, as counts per angle.
template <class F>
void monotone_counts(int m, int A, F&& f) {
  std::vector<int> cnt(A, 0);
  auto rec = [&](auto&& self, int a, int rest) -> void {
    if (A == 0) {
      if (rest == 0) f(cnt);
      return;
    }
    if (a == A - 1) {
      cnt[a] = rest;
      f(cnt);
      return;
    }
    for (int v = rest; v >= 0; --v) {
      cnt[a] = v;
      self(self, a + 1, rest - v);
    }
  };
  rec(rec, 0, m);
}
}  // namespace detail

// All trees obtained from s by adding at most `budget` legs at its angles,
// legs labeled in planar order. Coefficients are +1.
inline TreeSum whisker(const Tree& s, int budget) {
  require_amputated(s);
  TreeSum out;
  auto A = angles(s);
  for (int total = 0; total <= budget; ++total)
    detail::monotone_counts(total, int(A.size()), [&](const std::vector<int>& cnt) {
      std::vector<std::vector<Tree>> items(A.size());
      for (std::size_t a = 0; a < A.size(); ++a) items[a].assign(cnt[a], Tree::L(0));
      Tree t = detail::fill_angles(s, items);
      label_legs_planar(t);
      out.add(normalize(t), 1);
    });
  return out;
}

inline Tree amputate(const Tree& t) {
  Tree r = t;
  r.kids.clear();
  for (auto& c : t.kids)
    if (c.kind != Tree::Leg) r.kids.push_back(amputate(c));
  return r;
}

// Differential of the brace operad on amputated trees: the del part of d with no legs.
inline TreeSum amputated_differential(const Tree& s) {
  require_amputated(s);
  return tree_partial_total(s);
}

// s1 o_i s2 on amputated trees: the inputs of white vertex i of s1 are
// distributed monotonically over the angles of s2.
inline TreeSum whiskered_insert(const Tree& s1, int i, const Tree& s2) {
  require_amputated(s1);
  require_amputated(s2);
  auto k1 = white_arities(s1);
  if (i < 1 || i > int(k1.size())) throw domain_error("insertion slot out of range");
  int n2 = white_count(s2);
  Tree s2r = relabel_whites(s2, [&](int j) { return j + i - 1; });
  const Tree* vi = nullptr;
  for_each_node(s1, [&](const Tree& x) {
    if (x.kind == Tree::White && x.label == i) vi = &x;
  });
  std::vector<Tree> inputs;
  for (auto& c : vi->kids) inputs.push_back(relabel_whites(c, [&](int j) { return j > i ? j + n2 - 1 : j; }));
  auto A = angles(s2r);
  TreeSum out;
  detail::monotone_counts(int(inputs.size()), int(A.size()), [&](const std::vector<int>& cnt) {
    std::vector<std::vector<Tree>> items(A.size());
    std::size_t p = 0;
    for (std::size_t a = 0; a < A.size(); ++a)
      for (int c = 0; c < cnt[a]; ++c) items[a].push_back(inputs[p++]);
    Tree sub = detail::fill_angles(s2r, items);
    auto rec = [&](auto&& self, const Tree& x) -> Tree {
      if (x.kind == Tree::White && x.label == i) return sub;
      Tree r = x;
      if (r.kind == Tree::White && r.label > i) r.label += n2 - 1;
      for (auto& c : r.kids) c = self(self, c);
      return r;
    };
    out.add(normalize(rec(rec, s1)), 1);
  });
  return out;
}

// w(dS) against d(w(S)) truncated to at most `budget` legs.
inline bool whisker_commutes_with_d(const Tree& s, int budget) {
  TreeSum lhs, rhs;
  for (auto& [t, c] : amputated_differential(s).terms) lhs += whisker(t, budget).scaled(c);
  for (auto& [t, c] : whisker(s, budget).terms)
    for (auto& [u, cu] : tree_differential(t).terms)
      if (leg_count(u) <= budget) rhs.add(u, c * cu);
  return lhs == rhs;
}

// w(S1 o_i S2) against the sum of T1 o_i T2 over whiskerings with matching legs.
inline bool whisker_commutes_with_insert(const Tree& s1, int i, const Tree& s2, int budget) {
  TreeSum lhs, rhs;
  for (auto& [t, c] : whiskered_insert(s1, i, s2).terms) lhs += whisker(t, budget).scaled(c);
  auto w1 = whisker(s1, budget);
  int top = 0;
  for (auto& [t, c] : w1.terms) top = std::max(top, white_arities(t)[i - 1]);
  std::vector<std::vector<Tree>> by_legs(top + 1);
  for (auto& [t, c] : whisker(s2, top).terms) by_legs[leg_count(t)].push_back(t);
  for (auto& [t, c] : w1.terms)
    for (auto& u : by_legs[white_arities(t)[i - 1]]) rhs.add(tree_insert(t, i, u), c);
  return lhs == rhs;
}

// ---- decomposition into generators ----

struct Expr {
  enum Kind { Atom, Compose, Relabel } kind = Atom;
  Tree atom;
  int slot = 0;
  std::shared_ptr<Expr> lhs, rhs;
  std::vector<int> perm;  // Relabel: white label j becomes perm[j-1]
};
using ExprPtr = std::shared_ptr<Expr>;

inline ExprPtr atom(Tree t) {
  auto e = std::make_shared<Expr>();
  e->atom = std::move(t);
  return e;
}
inline ExprPtr compose_expr(ExprPtr a, int i, ExprPtr b) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Compose;
  e->slot = i;
  e->lhs = std::move(a);
  e->rhs = std::move(b);
  return e;
}
inline ExprPtr relabel_expr(ExprPtr a, std::vector<int> perm) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Relabel;
  e->lhs = std::move(a);
  e->perm = std::move(perm);
  return e;
}

inline Tree brace_atom(int d) {
  Tree t = Tree::W(1);
  for (int j = 0; j < d; ++j) t.kids.push_back(Tree::W(j + 2));
  return t;
}
inline Tree cup_atom() { return Tree::B({Tree::W(1), Tree::W(2)}); }

// Koszul sign of relabeling whites (degrees k-1).
inline int relabel_sign(const Tree& t, const std::vector<int>& perm) {
  auto k = white_arities(t);
  std::vector<std::pair<int, int>> seq(k.size());
  for (std::size_t j = 0; j < k.size(); ++j) seq[perm[j] - 1] = {int(j), k[j] - 1};
  return koszul_sign(seq);
}

inline TreeSum eval_expr(const Expr& e) {
  switch (e.kind) {
    case Expr::Atom: {
      TreeSum s;
      s.add(e.atom, 1);
      return s;
    }
    case Expr::Relabel: {
      TreeSum out;
      for (auto& [t, c] : eval_expr(*e.lhs).terms)
        out.add(relabel_whites(t, [&](int j) { return e.perm[j - 1]; }), c * relabel_sign(t, e.perm));
      return out;
    }
    case Expr::Compose: {
      TreeSum a = eval_expr(*e.lhs), b = eval_expr(*e.rhs), out;
      for (auto& [x, cx] : a.terms)
        for (auto& [y, cy] : b.terms) out += whiskered_insert(x, e.slot, y).scaled(cx * cy);
      return out;
    }
  }
  return {};
}

inline std::string to_string(const Expr& e) {
  switch (e.kind) {
    case Expr::Atom: return to_string(e.atom);
    case Expr::Compose: return "(" + to_string(*e.lhs) + " o" + std::to_string(e.slot) + " " + to_string(*e.rhs) + ")";
    case Expr::Relabel: {
      std::string r = "relabel[";
      for (std::size_t j = 0; j < e.perm.size(); ++j) r += (j ? "," : "") + std::to_string(e.perm[j]);
      return r + "](" + to_string(*e.lhs) + ")";
    }
  }
  return {};
}

namespace detail {
// Expression evaluating to a tree equal to `s` up to white labels; the
// labels it produces are recorded in DFS order in `order`.
inline ExprPtr decompose_shape(const Tree& s, std::vector<int>& order) {
  if (s.kind == Tree::White) {
    order.push_back(s.label);
    int d = int(s.kids.size());
    if (d == 0) return atom(Tree::W(1));
    ExprPtr e = atom(brace_atom(d));
    // graft children right to left so earlier leaf labels stay put
    for (int j = d - 1; j >= 0; --j) {
      std::vector<int> sub;
      ExprPtr c = decompose_shape(s.kids[j], sub);
      e = compose_expr(e, j + 2, c);
    }
    std::vector<int> rest;
    for (auto& c : s.kids) decompose_shape(c, rest);
    order.insert(order.end(), rest.begin(), rest.end());
    return e;
  }
  if (s.kind == Tree::Black) {
    int d = int(s.kids.size());
    std::vector<int> sub;
    ExprPtr left;
    if (d == 2) {
      left = decompose_shape(s.kids[0], sub);
    } else {
      left = decompose_shape(Tree::B(std::vector<Tree>(s.kids.begin(), s.kids.end() - 1)), sub);
    }
    std::vector<int> sub2;
    ExprPtr right = decompose_shape(s.kids.back(), sub2);
    ExprPtr e = compose_expr(compose_expr(atom(cup_atom()), 2, right), 1, left);
    order.insert(order.end(), sub.begin(), sub.end());
    order.insert(order.end(), sub2.begin(), sub2.end());
    return e;
  }
  if (s.kind == Tree::Special) return atom(Tree::S());
  throw domain_error("decompose expects an amputated tree");
}
}  // namespace detail

struct Decomposition {
  ExprPtr expr;
  int sign = 1;  // eval(expr) == sign * tree
};

// Writes an amputated tree through the atoms W1(), *, the cup product and the
// brace corollas W1(W2(),...,W_{d+1}()). Stubs become extra leaves that are
// later filled with *.
inline Decomposition decompose(const Tree& s) {
  require_amputated(s);
  validate_tree(s);
  if (s.kind == Tree::Special) return {atom(Tree::S()), 1};
  int n = white_count(s);
  int extra = n;
  Tree filled = map_tree(s, [&](const Tree& x) {
    if (x.kind != Tree::White) return x;
    Tree r = x;
    for (auto& c : r.kids)
      if (c.kind == Tree::Special) c = Tree::W(++extra);
    return r;
  });
  std::vector<int> order;
  ExprPtr e = detail::decompose_shape(filled, order);
  // shape labels come out in DFS order; map them to the labels of `filled`
  std::vector<int> perm(order.size());
  for (std::size_t j = 0; j < order.size(); ++j) perm[j] = order[j];
  e = relabel_expr(e, perm);
  for (int j = extra; j > n; --j) e = compose_expr(e, j, atom(Tree::S()));
  auto v = eval_expr(*e);
  if (v.size() != 1 || v.terms.begin()->first != s)
    throw domain_error("decomposition failed to reproduce " + to_string(s));
  return {e, int(v.terms.begin()->second)};
}

inline int internal_edges(const Tree& s) {
  int c = 0;
  for_each_node(s, [&](const Tree& x) {
    for (auto& y : x.kids) c += y.kind != Tree::Leg;
  });
  return c;
}

}  // namespace opforge
