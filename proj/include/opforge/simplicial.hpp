#pragma once
#include "path.hpp"

namespace opforge {

using PathSum = FormalSum<Path>;

namespace detail {
// Index into moves of the r-move crossing level i -> i+1.
inline int move_index(const Path& p, int r, int i) {
  int seen = 0;
  for (std::size_t a = 0; a < p.moves.size(); ++a)
    if (p.moves[a] == r && seen++ == i) return int(a);
  throw domain_error("level out of range");
}
inline void check_dir(const Path& p, int r) {
  if (r < 1 || r > p.n()) throw domain_error("direction " + std::to_string(r) + " out of range");
}
}  // namespace detail

// D^r_i: glue r-levels i and i+1; the two identified points add their markings.
inline Path face(const Path& p, int r, int i) {
  detail::check_dir(p, r);
  int kr = p.sig.k[r - 1];
  if (kr < 1) throw domain_error("face needs k_r >= 1");
  if (i < 0 || i > kr) throw domain_error("face level must lie in 0..k_r");
  int a = detail::move_index(p, r, i);
  Path q = p;
  --q.sig.k[r - 1];
  q.moves.erase(q.moves.begin() + a);
  q.marks[a] += q.marks[a + 1];
  q.marks.erase(q.marks.begin() + a + 1);
  return q;
}

// S^r_i: split the r-move at level i, adding an unmarked internal point.
inline Path degeneracy(const Path& p, int r, int i) {
  detail::check_dir(p, r);
  int kr = p.sig.k[r - 1];
  if (i < 0 || i > kr) throw domain_error("degeneracy level must lie in 0..k_r");
  int a = detail::move_index(p, r, i);
  Path q = p;
  ++q.sig.k[r - 1];
  q.moves.insert(q.moves.begin() + a, r);
  q.marks.insert(q.marks.begin() + a + 1, 0);
  return q;
}

// phi(j) for the functor [l+1] -> path: 0 is the origin, l+1 the end, and
// 1..l walk through the marked units in path order.
inline int phi_point(const Path& p, int j) {
  int L = p.sig.l;
  if (j == 0) return 0;
  if (j == L + 1) return p.points() - 1;
  int run = 0;
  for (int a = 0; a < p.points(); ++a) {
    run += p.marks[a];
    if (run >= j) return a;
  }
  throw domain_error("cosimplicial index out of range");
}

inline Path coface(const Path& p, int i) {
  if (i < 0 || i > p.sig.l + 1) throw domain_error("coface index must lie in 0..l+1");
  Path q = p;
  ++q.marks[phi_point(p, i)];
  ++q.sig.l;
  return q;
}

// s^i removes the (i+1)-th marked unit, so the targeted point is always marked.
inline Path codegeneracy(const Path& p, int i) {
  if (i < 0 || i >= p.sig.l) throw domain_error("codegeneracy index must lie in 0..l-1");
  Path q = p;
  int x = phi_point(p, i + 1);
  if (q.marks[x] == 0) throw domain_error("codegeneracy target point is unmarked");
  --q.marks[x];
  --q.sig.l;
  return q;
}

inline int direction_sign(const Signature& s, int r) {
  int e = 0;
  for (int j = 0; j < r - 1; ++j) e += s.k[j];
  return sgn_pow(e);
}

inline PathSum simplicial_differential(const Path& p) {
  PathSum out;
  for (int r = 1; r <= p.n(); ++r) {
    int kr = p.sig.k[r - 1];
    if (kr == 0) continue;
    int er = direction_sign(p.sig, r);
    for (int i = 0; i <= kr; ++i) out.add(face(p, r, i), er * sgn_pow(i));
  }
  return out;
}

inline PathSum cosimplicial_differential(const Path& p) {
  PathSum out;
  for (int i = 0; i <= p.sig.l + 1; ++i) out.add(coface(p, i), sgn_pow(i));
  return out;
}

// Lattice total differential d = delta + (-1)^l del; on l = 0 it is del.
inline PathSum total_differential(const Path& p) {
  PathSum out = cosimplicial_differential(p);
  out += simplicial_differential(p).scaled(sgn_pow(p.sig.l));
  return out;
}

template <class F>
PathSum linear(const PathSum& x, F&& f) {
  PathSum out;
  for (auto& [p, c] : x.terms) out += f(p).scaled(c);
  return out;
}

}  // namespace opforge
