#pragma once
#include "brace.hpp"

namespace opforge {

// Words in the free algebra on inputs a_j and cochain symbols f_i(args).
struct Factor;
using Word = std::vector<Factor>;

struct Factor {
  int cochain = 0;  // 0: input a_index, else the label i of f_i
  int index = 0;
  std::vector<Word> args;

  static Factor a(int j) { return {0, j, {}}; }
  static Factor f(int i, std::vector<Word> args) { return {i, 0, std::move(args)}; }

  friend bool operator==(const Factor& x, const Factor& y) {
    return x.cochain == y.cochain && x.index == y.index && x.args == y.args;
  }
  friend bool operator<(const Factor& x, const Factor& y) {
    if (x.cochain != y.cochain) return x.cochain < y.cochain;
    if (x.index != y.index) return x.index < y.index;
    return std::lexicographical_compare(x.args.begin(), x.args.end(), y.args.begin(), y.args.end());
  }
};

using Value = FormalSum<Word>;

inline void print_word(std::ostream& os, const Word& w, const char* sep) {
  if (w.empty()) {
    os << "1";
    return;
  }
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (j) os << sep;
    const Factor& x = w[j];
    if (!x.cochain) {
      os << "a" << x.index;
      continue;
    }
    os << "f" << x.cochain << "(";
    for (std::size_t t = 0; t < x.args.size(); ++t) {
      if (t) os << ",";
      print_word(os, x.args[t], "");
    }
    os << ")";
  }
}

inline std::string to_string(const Word& w) {
  std::ostringstream os;
  print_word(os, w, " ");
  return os.str();
}

inline std::string to_string(const Value& v) {
  return format_sum(v, [](const Word& w) { return to_string(w); });
}

inline Word word_of(const Tree& t) {
  switch (t.kind) {
    case Tree::Leg: return {Factor::a(t.label)};
    case Tree::Special: return {};
    case Tree::Black: {
      Word w;
      for (auto& c : t.kids) {
        Word x = word_of(c);
        w.insert(w.end(), x.begin(), x.end());
      }
      return w;
    }
    case Tree::White: {
      std::vector<Word> args;
      for (auto& c : t.kids) args.push_back(word_of(c));
      return {Factor::f(t.label, std::move(args))};
    }
  }
  return {};
}

// The operation of a tree on Hochschild cochains of a graded algebra.
inline Value evaluate(const Tree& t) {
  Value v;
  v.add(word_of(t), eval_sign(t));
  return v;
}

inline Value evaluate(const TreeSum& x) {
  Value v;
  for (auto& [t, c] : x.terms) v += evaluate(t).scaled(c);
  return v;
}

inline Word subst(const Word& w, const std::function<Word(int)>& sub) {
  Word out;
  for (auto& x : w) {
    if (!x.cochain) {
      Word r = sub(x.index);
      out.insert(out.end(), r.begin(), r.end());
      continue;
    }
    Factor y = Factor::f(x.cochain, {});
    for (auto& a : x.args) y.args.push_back(subst(a, sub));
    out.push_back(std::move(y));
  }
  return out;
}

inline Word relabel_cochains(const Word& w, const std::function<int(int)>& f) {
  Word out = w;
  for (auto& x : out) {
    if (x.cochain) x.cochain = f(x.cochain);
    for (auto& a : x.args) a = relabel_cochains(a, f);
  }
  return out;
}

inline Word input(int j) { return {Factor::a(j)}; }

// Hochschild coboundary of a p-ary value, viewed as a function of a_1..a_p.
inline Value dH_value(const Value& x, int p) {
  Value out;
  for (auto& [w, c] : x.terms) {
    Word l = input(1);
    Word r = subst(w, [](int j) { return input(j + 1); });
    l.insert(l.end(), r.begin(), r.end());
    out.add(l, c * sgn_pow(p + 1));
    Word t = w;
    t.push_back(Factor::a(p + 1));
    out.add(t, c);
    for (int i = 0; i < p; ++i)
      out.add(subst(w,
                    [&](int j) {
                      if (j <= i) return input(j);
                      if (j == i + 1) return Word{Factor::a(j), Factor::a(j + 1)};
                      return input(j + 1);
                    }),
              c * sgn_pow(i + p));
  }
  return out;
}

namespace detail {
inline std::vector<std::pair<int, Word>> expand_dH(const Word& w, int i) {
  std::vector<std::pair<int, Word>> outs{{1, {}}};
  for (auto& x : w) {
    std::vector<std::pair<int, Word>> fopts;
    if (!x.cochain) {
      fopts.push_back({1, {x}});
    } else {
      std::vector<std::vector<std::pair<int, Word>>> argopts;
      for (auto& a : x.args) argopts.push_back(expand_dH(a, i));
      std::vector<std::pair<int, Word>> chosen;
      auto rec = [&](auto&& self, std::size_t j, int c) -> void {
        if (j == argopts.size()) {
          std::vector<Word> args;
          for (auto& [cc, v] : chosen) args.push_back(v);
          if (x.cochain != i) {
            fopts.push_back({c, {Factor::f(x.cochain, args)}});
            return;
          }
          int n = int(args.size()) - 1;
          if (n < 0) throw domain_error("d_H needs the expanded symbol to have arity >= 1");
          Word first = args[0];
          first.push_back(Factor::f(i, std::vector<Word>(args.begin() + 1, args.end())));
          fopts.push_back({c * sgn_pow(n + 1), first});
          Word last{Factor::f(i, std::vector<Word>(args.begin(), args.end() - 1))};
          last.insert(last.end(), args.back().begin(), args.back().end());
          fopts.push_back({c, last});
          for (int t = 0; t < n; ++t) {
            std::vector<Word> na(args.begin(), args.begin() + t);
            Word m = args[t];
            m.insert(m.end(), args[t + 1].begin(), args[t + 1].end());
            na.push_back(m);
            na.insert(na.end(), args.begin() + t + 2, args.end());
            fopts.push_back({c * sgn_pow(t + n), {Factor::f(i, na)}});
          }
          return;
        }
        for (auto& [cc, v] : argopts[j]) {
          chosen.push_back({cc, v});
          self(self, j + 1, c * cc);
          chosen.pop_back();
        }
      };
      rec(rec, 0, 1);
    }
    std::vector<std::pair<int, Word>> next;
    for (auto& [c1, v1] : outs)
      for (auto& [c2, v2] : fopts) {
        Word v = v1;
        v.insert(v.end(), v2.begin(), v2.end());
        next.push_back({c1 * c2, v});
      }
    outs = std::move(next);
  }
  return outs;
}
}  // namespace detail

// Replace f_i (arity k+1 in x) by d_H f_i evaluated on its arguments.
inline Value dH_f(const Value& x, int i) {
  Value out;
  for (auto& [w, c] : x.terms)
    for (auto& [cc, v] : detail::expand_dH(w, i)) out.add(v, c * cc);
  return out;
}

// ---- operations of amputated trees on symbols ----

// O_S(f_1..f_n) with f_i of arity ar[i-1].
inline Value operation(const Tree& s, const std::vector<int>& ar) {
  auto kS = white_arities(s);
  if (kS.size() != ar.size()) throw domain_error("arity list does not match the tree");
  int budget = 0;
  for (std::size_t j = 0; j < kS.size(); ++j) budget += ar[j] - kS[j];
  Value out;
  if (budget < 0) return out;
  for (auto& [t, c] : whisker(s, budget).terms)
    if (white_arities(t) == ar) out += evaluate(t).scaled(c);
  return out;
}

inline Value symbol(int i, int p) {
  std::vector<Word> a;
  for (int t = 1; t <= p; ++t) a.push_back(input(t));
  Value v;
  v.add({Factor::f(i, a)}, 1);
  return v;
}

inline int cup_sign(int p, int q) {
  Tree t = Tree::B({Tree::W(1), Tree::W(2)});
  for (int j = 1; j <= p; ++j) t.kids[0].kids.push_back(Tree::L(j));
  for (int j = 1; j <= q; ++j) t.kids[1].kids.push_back(Tree::L(p + j));
  return eval_sign(t);
}

inline int circ_sign(int p, int q, int j) {
  Tree inner = Tree::W(2);
  inner.kids.assign(q, Tree::L(0));
  Tree t = Tree::W(1);
  t.kids.assign(j, Tree::L(0));
  t.kids.push_back(inner);
  for (int r = 0; r < p - 1 - j; ++r) t.kids.push_back(Tree::L(0));
  label_legs_planar(t);
  return eval_sign(t);
}

// X of arity p, Y of arity q.
inline Value cupV(const Value& x, int p, const Value& y, int q) {
  Value out;
  int s = cup_sign(p, q);
  for (auto& [wx, cx] : x.terms)
    for (auto& [wy, cy] : y.terms) {
      Word w = wx;
      Word r = subst(wy, [&](int t) { return input(p + t); });
      w.insert(w.end(), r.begin(), r.end());
      out.add(w, s * cx * cy);
    }
  return out;
}

inline Value circV(const Value& x, int p, const Value& y, int q) {
  Value out;
  for (int j = 0; j < p; ++j) {
    int s = circ_sign(p, q, j);
    for (auto& [wx, cx] : x.terms)
      for (auto& [wy, cy] : y.terms) {
        Word ys = subst(wy, [&](int t) { return input(j + t); });
        out.add(subst(wx,
                      [&](int t) {
                        if (t <= j) return input(t);
                        if (t == j + 1) return ys;
                        return input(t + q - 1);
                      }),
                s * cx * cy);
      }
  }
  return out;
}

inline Value bracketV(const Value& x, int p, const Value& y, int q) {
  Value out = circV(x, p, y, q);
  out -= circV(y, q, x, p).scaled(sgn_pow((p - 1) * (q - 1)));
  return out;
}

struct IdentityResult {
  std::string name;
  long cases = 0;
  long failures = 0;
  std::string first_failure;
  bool ok() const { return failures == 0; }
};

// Image of d applied to the amputated tree S, on symbols of arities ar:
// -d_H O_S + sum_i sign_i O_S(.., d_H f_i, ..).
inline Value operation_of_differential(const Tree& s, const std::vector<int>& ar) {
  int n = int(ar.size());
  auto kS = white_arities(s);
  int l = 0;
  for (int j = 0; j < n; ++j) l += ar[j] - kS[j];
  Value out = dH_value(operation(s, ar), l).scaled(-1);
  for (int i = 1; i <= n; ++i) {
    auto ar2 = ar;
    ++ar2[i - 1];
    int tail = 0;
    for (int j = i - 1; j < n; ++j) tail += ar2[j];
    out += dH_f(operation(s, ar2), i).scaled(sgn_pow(tail + l + 1 + n + i));
  }
  return out;
}

// Gerstenhaber identities checked symbolically for cochain arities 0..max_arity.
inline std::vector<IdentityResult> gerstenhaber_suite(int max_arity) {
  std::vector<IdentityResult> res;
  auto cup = cup_atom();
  auto circ = Tree::W(1, {Tree::W(2)});
  auto dHs = [](int i, int p) { return dH_f(symbol(i, p + 1), i); };
  auto note = [](IdentityResult& r, const auto& resid, const std::string& where) {
    ++r.cases;
    if (!resid.empty()) {
      if (!r.failures) r.first_failure = where + ": residue " + format_sum(resid, [](auto& x) { return to_string(x); });
      ++r.failures;
    }
  };
  IdentityResult h0{"tree-operations-match-symbolic"}, h1{"leibniz-cup"}, h2{"cup-commutative-up-to-homotopy"},
      h3{"bracket-derivation"}, h4{"brace-homotopy"}, h5{"tree-level-boundaries"};
  for (int p = 0; p <= max_arity; ++p)
    for (int q = 0; q <= max_arity; ++q) {
      int m = p - 1, n = q - 1;
      std::string at = "p=" + std::to_string(p) + ",q=" + std::to_string(q);
      Value f = symbol(1, p), g = symbol(2, q);
      note(h0, operation(cup, {p, q}) - cupV(f, p, g, q), at + " cup");
      note(h0, operation(circ, {p, q}) - circV(f, p, g, q), at + " circ");
      // -d(f u g) = df u g + (-1)^m f u dg
      Value lhs = dH_value(cupV(f, p, g, q), p + q).scaled(-1);
      Value rhs = cupV(dHs(1, p), p + 1, g, q) + cupV(f, p, dHs(2, q), q + 1).scaled(sgn_pow(m));
      note(h1, lhs - rhs, at);
      // f u g + (-1)^{mn} g u f = df o g + (-1)^m f o dg - d(f o g)
      Value gf;
      for (auto& [w, c] : cupV(symbol(1, q), q, symbol(2, p), p).terms)
        gf.add(relabel_cochains(w, [](int i) { return 3 - i; }), c);
      lhs = cupV(f, p, g, q) + gf.scaled(sgn_pow(m * n));
      rhs = circV(dHs(1, p), p + 1, g, q) + circV(f, p, dHs(2, q), q + 1).scaled(sgn_pow(m)) -
            dH_value(circV(f, p, g, q), p + q - 1);
      note(h2, lhs - rhs, at);
      // d[f,g] = [df,g] + (-1)^m [f,dg]
      lhs = dH_value(bracketV(f, p, g, q), p + q - 1);
      rhs = bracketV(dHs(1, p), p + 1, g, q) + bracketV(f, p, dHs(2, q), q + 1).scaled(sgn_pow(m));
      note(h3, lhs - rhs, at);
      for (int r = 0; r <= max_arity; ++r) {
        int k = r - 1;
        Value h = symbol(3, r);
        Value t1 = bracketV(cupV(f, p, g, q), p + q, h, r);
        Value t2 = cupV(f, p, bracketV(g, q, h, r), q + r - 1);
        Value t3 = cupV(bracketV(f, p, h, r), p + r - 1, g, q);
        Value l2 = t1 - t2 - t3.scaled(sgn_pow(n * k));
        Tree s = Tree::W(3, {Tree::W(1), Tree::W(2)});
        note(h4, l2 - operation_of_differential(s, {p, q, r}), at + ",r=" + std::to_string(r));
      }
    }
  auto tree_sum = [](std::initializer_list<std::pair<const char*, int>> xs) {
    TreeSum s;
    for (auto& [t, c] : xs) s.add(parse_tree(t), c);
    return s;
  };
  auto tl = [&](const char* s, const TreeSum& want) {
    note(h5, amputated_differential(parse_tree(s)) - want, s);
  };
  tl("W1(W2())", tree_sum({{"B(W1(),W2())", 1}, {"B(W2(),W1())", 1}}));
  tl("B(W1(),W2())", {});
  tl("W3(W1(),W2())", tree_sum({{"B(W1(),W3(W2()))", 1}, {"B(W3(W1()),W2())", 1}, {"W3(B(W1(),W2()))", -1}}));
  return {h0, h1, h2, h3, h4, h5};
}

// ---- operad action of trees on cochains ----

namespace detail {
struct TaggedConst {
  char cls;  // 'm' or 'u'
  int origin;
  int idx;  // DFS index among the constants of its original tree
  int deg;
};

// Constants of t in DFS order, tagged with origin.
inline void tag_constants(const Tree& t, int origin, std::vector<TaggedConst>& out) {
  int c = 0;
  auto rec = [&](auto&& self, const Tree& x) -> void {
    if (x.kind == Tree::Black) out.push_back({'m', origin, c++, int(x.kids.size()) - 1});
    if (x.kind == Tree::Special) out.push_back({'u', origin, c++, -1});
    for (auto& y : x.kids) self(self, y);
  };
  rec(rec, t);
}

// Mutable tree used for tracked normalization.
struct MNode {
  Tree::Kind kind;
  int label;
  std::vector<std::unique_ptr<MNode>> kids;
};

inline std::unique_ptr<MNode> to_mutable(const Tree& t) {
  auto m = std::make_unique<MNode>();
  m->kind = t.kind;
  m->label = t.label;
  for (auto& c : t.kids) m->kids.push_back(to_mutable(c));
  return m;
}

inline Tree from_mutable(const MNode& m) {
  Tree t{m.kind, m.label, {}};
  for (auto& c : m.kids) t.kids.push_back(from_mutable(*c));
  return t;
}

inline void dfs_nodes(MNode* x, std::vector<MNode*>& out) {
  out.push_back(x);
  for (auto& c : x->kids) dfs_nodes(c.get(), out);
}

inline void post_nodes(MNode* x, std::vector<MNode*>& out) {
  for (auto& c : x->kids) post_nodes(c.get(), out);
  out.push_back(x);
}

inline long mdeg(const std::vector<MNode*>& xs) {
  long s = 0;
  for (auto* x : xs)
    if (x->kind == Tree::Black) s += long(x->kids.size()) - 1;
  return s;
}

inline long ucount(const std::vector<MNode*>& xs) {
  long s = 0;
  for (auto* x : xs) s += x->kind == Tree::Special;
  return s;
}

// One rewrite step of normalization, innermost first. Returns the sign
// exponent, or nothing when the tree is already normal.
inline std::optional<long> normalization_step(MNode* root) {
  std::vector<MNode*> order, post;
  dfs_nodes(root, order);
  post_nodes(root, post);
  auto after = [&](MNode* x) {
    auto it = std::find(order.begin(), order.end(), x);
    return std::vector<MNode*>(it + 1, order.end());
  };
  for (MNode* x : post) {
    if (x->kind != Tree::Black) continue;
    for (std::size_t j = 0; j < x->kids.size(); ++j) {
      MNode* c = x->kids[j].get();
      if (c->kind == Tree::Black) {
        long b = long(c->kids.size());
        std::vector<MNode*> prev;
        for (std::size_t s = 0; s < j; ++s) dfs_nodes(x->kids[s].get(), prev);
        long e = (b - 1) * long(j) + (b - 1) * mdeg(prev);
        auto grand = std::move(c->kids);
        x->kids.erase(x->kids.begin() + j);
        x->kids.insert(x->kids.begin() + j, std::make_move_iterator(grand.begin()),
                       std::make_move_iterator(grand.end()));
        return e;
      }
      if (c->kind == Tree::Special) {
        long e = long(j) + mdeg(after(x)) - ucount(after(c));
        x->kids.erase(x->kids.begin() + j);
        return e;
      }
    }
    if (x->kids.size() == 1) {
      auto ch = std::move(x->kids[0]);
      x->kind = ch->kind;
      x->label = ch->label;
      x->kids = std::move(ch->kids);
      return 0;
    }
    if (x->kids.empty()) {
      auto a = after(x);
      long e = mdeg(a) - ucount(a);
      x->kind = Tree::Special;
      return e;
    }
  }
  return std::nullopt;
}
}  // namespace detail

// Sign picked up by the constants while normalizing a raw tree.
inline std::pair<Tree, int> normalize_tracked(const Tree& raw) {
  auto m = detail::to_mutable(raw);
  long e = 0;
  while (true) {
    auto s = detail::normalization_step(m.get());
    if (!s) break;
    e += *s;
  }
  return {detail::from_mutable(*m), sgn_pow(e)};
}

// E(T1 o_i T2) against E(T1) o_i E(T2) for the given pairs.
inline bool operad_action_holds(const Tree& t1, int i, const Tree& t2, std::string* why = nullptr) {
  auto k1 = white_arities(t1);
  auto k2 = white_arities(t2);
  Tree raw = tree_graft(t1, i, t2);
  auto [t, nsign] = normalize_tracked(raw);
  if (t != normalize(raw)) {
    if (why) *why = "tracked normalization disagrees";
    return false;
  }
  // sigma: T2 moves past the cochains before slot i
  long pre = 0;
  for (int j = 0; j < i - 1; ++j) pre += k1[j] - 1;
  int sigma = sgn_pow(long(tree_degree(t2)) * pre);
  // kappa: constants of the graft reordered into T1's then T2's reference order
  std::vector<detail::TaggedConst> c1, c2;
  detail::tag_constants(t1, 1, c1);
  detail::tag_constants(t2, 2, c2);
  std::vector<detail::TaggedConst> rawc;
  {
    // DFS of the raw graft, tagging constants by origin
    std::map<const Tree*, int> idx1;
    int ic1 = 0;
    for_each_node(t1, [&](const Tree& x) {
      if (x.kind == Tree::Black || x.kind == Tree::Special) idx1[&x] = ic1++;
    });
    auto rec1 = [&](auto&& self, const Tree& x) -> void {
      if (x.kind == Tree::White && x.label == i) {
        int ic2 = 0;
        auto rec2 = [&](auto&& self2, const Tree& y) -> void {
          if (y.kind == Tree::Leg) {
            self(self, x.kids[y.label - 1]);
            return;
          }
          if (y.kind == Tree::Black) rawc.push_back({'m', 2, ic2++, int(y.kids.size()) - 1});
          if (y.kind == Tree::Special) rawc.push_back({'u', 2, ic2++, -1});
          for (auto& z : y.kids) self2(self2, z);
        };
        rec2(rec2, t2);
        return;
      }
      if (x.kind == Tree::Black) rawc.push_back({'m', 1, idx1.at(&x), int(x.kids.size()) - 1});
      if (x.kind == Tree::Special) rawc.push_back({'u', 1, idx1.at(&x), -1});
      for (auto& z : x.kids) self(self, z);
    };
    rec1(rec1, t1);
  }
  auto ref_order = [](std::vector<detail::TaggedConst> v) {
    std::vector<detail::TaggedConst> m, u;
    for (auto& x : v) (x.cls == 'm' ? m : u).push_back(x);
    std::reverse(u.begin(), u.end());
    m.insert(m.end(), u.begin(), u.end());
    return m;
  };
  auto target = ref_order(c1);
  auto t2ref = ref_order(c2);
  target.insert(target.end(), t2ref.begin(), t2ref.end());
  auto src = ref_order(rawc);
  std::vector<std::pair<int, int>> seq;
  for (auto& x : src) {
    int pos = -1;
    for (std::size_t j = 0; j < target.size(); ++j)
      if (target[j].origin == x.origin && target[j].idx == x.idx) pos = int(j);
    seq.push_back({pos, x.deg});
  }
  int kappa = koszul_sign(seq);
  auto k = white_arities(t);
  int predicted = eval_sign(t1, k1) * eval_sign(t2, k2) * sigma * kappa * nsign;
  // substituted monomial
  Word w1 = word_of(t1);
  Word w2 = relabel_cochains(word_of(t2), [&](int j) { return j + i - 1; });
  std::function<Word(const Word&)> sub = [&](const Word& w) {
    Word out;
    for (auto& x : w) {
      if (x.cochain == i) {
        std::vector<Word> args;
        for (auto& a : x.args) args.push_back(sub(a));
        Word r = subst(w2, [&](int j) { return args[j - 1]; });
        out.insert(out.end(), r.begin(), r.end());
        continue;
      }
      Factor y = x;
      if (y.cochain > i) y.cochain += int(k2.size()) - 1;
      for (auto& a : y.args) a = sub(a);
      out.push_back(std::move(y));
    }
    return out;
  };
  Word composed = sub(w1);
  Value lhs = evaluate(t), rhs;
  rhs.add(composed, predicted);
  if (!(lhs == rhs)) {
    if (why) *why = to_string(t1) + " o" + std::to_string(i) + " " + to_string(t2) + ": " + to_string(lhs) + " vs " + to_string(rhs);
    return false;
  }
  return true;
}

// Trees are distinguished by their operations on free symbols.
inline bool evaluation_injective(const std::vector<Tree>& trees, std::string* why = nullptr) {
  std::map<Word, Tree> seen;
  for (auto& t : trees) {
    Word w = word_of(t);
    auto [it, fresh] = seen.emplace(w, t);
    if (!fresh) {
      if (why) *why = to_string(t) + " and " + to_string(it->second) + " share " + to_string(w);
      return false;
    }
  }
  return true;
}

}  // namespace opforge
