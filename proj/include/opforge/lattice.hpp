#pragma once
#include "simplicial.hpp"

namespace opforge {

// psi(a) for a in 0..l+1: the point where the running marking total first reaches a.
inline std::vector<int> cut_points(const Path& p) {
  int L = p.sig.l;
  std::vector<int> psi(L + 2);
  psi[0] = 0;
  psi[L + 1] = p.points() - 1;
  for (int j = 1; j <= L; ++j) psi[j] = phi_point(p, j);
  return psi;
}

// outer o_i inner: each i-move of outer (level a -> a+1) becomes inner's
// segment psi(a) -> psi(a+1); outer markings ride along to image points.
inline Path compose(const Path& outer, int i, const Path& inner) {
  if (i < 1 || i > outer.n()) throw domain_error("slot out of range");
  if (inner.sig.l != outer.sig.k[i - 1])
    throw domain_error("colour mismatch: inner output " + std::to_string(inner.sig.l) +
                       " != outer input k" + std::to_string(i) + "=" +
                       std::to_string(outer.sig.k[i - 1]));
  int pn = inner.n();
  auto psi = cut_points(inner);
  Path r;
  r.sig.l = outer.sig.l;
  for (int j = 1; j <= outer.n(); ++j) {
    if (j == i)
      r.sig.k.insert(r.sig.k.end(), inner.sig.k.begin(), inner.sig.k.end());
    else
      r.sig.k.push_back(outer.sig.k[j - 1]);
  }
  r.marks.push_back(outer.marks[0]);
  int level = 0;
  for (std::size_t a = 0; a < outer.moves.size(); ++a) {
    int d = outer.moves[a];
    int m = outer.marks[a + 1];
    if (d != i) {
      r.moves.push_back(d < i ? d : d + pn - 1);
      r.marks.push_back(m);
      continue;
    }
    int from = psi[level], to = psi[level + 1];
    ++level;
    if (from == to) {
      r.marks.back() += m;
      continue;
    }
    for (int b = from; b < to; ++b) {
      r.moves.push_back(inner.moves[b] + i - 1);
      r.marks.push_back(b + 1 == to ? m : 0);
    }
  }
  return r;
}

inline Path unit_path(int k) {
  Path p;
  p.sig = {{k}, k};
  p.moves.assign(k + 1, 1);
  p.marks.assign(k + 2, 1);
  p.marks.front() = p.marks.back() = 0;
  return p;
}

// All ways of adding s new internal points marked 1 along the moves of p.
inline std::vector<Path> whisker_terms(const Path& p, int s) {
  for (int m : p.marks)
    if (m) throw domain_error("whiskering needs an unmarked path");
  std::vector<Path> out;
  int M = int(p.moves.size());
  std::vector<int> t(M, 0);
  auto emit = [&] {
    Path q;
    q.sig = p.sig;
    q.sig.l = s;
    q.marks.push_back(0);
    for (int j = 0; j < M; ++j) {
      int d = p.moves[j];
      q.sig.k[d - 1] += t[j];
      for (int x = 0; x <= t[j]; ++x) {
        q.moves.push_back(d);
        q.marks.push_back(x < t[j] ? 1 : 0);
      }
    }
    out.push_back(std::move(q));
  };
  auto rec = [&](auto&& self, int j, int rest) -> void {
    if (j == M - 1 || M == 0) {
      if (M) t[j] = rest;
      if (M || rest == 0) emit();
      return;
    }
    for (int v = rest; v >= 0; --v) {
      t[j] = v;
      self(self, j + 1, rest - v);
    }
  };
  rec(rec, 0, s);
  return out;
}

struct BracResult {
  PathSum sum;
  bool is_signed = true;  // false: coefficients are plain term counts
};

inline BracResult brac_compose(const Path& outer, int i, const Path& inner) {
  for (int m : outer.marks)
    if (m) throw domain_error("brac_compose needs unmarked outer path");
  if (i < 1 || i > outer.n()) throw domain_error("slot out of range");
  BracResult r;
  r.is_signed = complexity(outer) <= 2 && complexity(inner) <= 2;
  for (auto& w : whisker_terms(inner, outer.sig.k[i - 1])) r.sum.add(compose(outer, i, w), 1);
  return r;
}

inline PathSum normalize(const PathSum& x) {
  PathSum r;
  for (auto& [p, c] : x.terms) {
    for (int m : p.marks)
      if (m) throw domain_error("normalize acts on unmarked paths");
    if (!has_internal_point(p)) r.add(p, c);
  }
  return r;
}

// Compositions of `total` into n non-negative parts.
inline std::vector<std::vector<int>> weak_compositions(int total, int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(n, 0);
  auto rec = [&](auto&& self, int pos, int rest) -> void {
    if (n == 0) {
      if (rest == 0) out.push_back(cur);
      return;
    }
    if (pos == n - 1) {
      cur[pos] = rest;
      out.push_back(cur);
      return;
    }
    for (int v = 0; v <= rest; ++v) {
      cur[pos] = v;
      self(self, pos + 1, rest - v);
    }
  };
  rec(rec, 0, total);
  return out;
}

struct ClosureVerdict {
  bool closed = true;
  std::optional<Path> counterexample;
  PathSum boundary;
  long checked = 0;
};

inline ClosureVerdict hbrac_closure_check(int c, int n, int max_ksum) {
  ClosureVerdict v;
  for (int K = 0; K <= max_ksum; ++K)
    for (auto& k : weak_compositions(K, n))
      for (auto& p : enumerate_paths({k, 0}, c)) {
        if (has_internal_point(p)) continue;
        ++v.checked;
        auto b = simplicial_differential(p);
        for (auto& [q, coef] : b.terms)
          if (has_internal_point(q)) {
            v.closed = false;
            v.counterexample = p;
            v.boundary = b;
            return v;
          }
      }
  return v;
}

struct Surjection {
  int n = 0;
  std::vector<int> u;
  bool operator==(const Surjection&) const = default;
  bool nondegenerate() const {
    for (std::size_t j = 1; j < u.size(); ++j)
      if (u[j] == u[j - 1]) return false;
    return true;
  }
};

inline void check_surjection(const Surjection& s) {
  std::vector<int> seen(s.n, 0);
  for (int x : s.u) {
    if (x < 1 || x > s.n) throw domain_error("surjection value out of range 1..n");
    seen[x - 1] = 1;
  }
  for (int i = 0; i < s.n; ++i)
    if (!seen[i]) throw domain_error("not surjective: value " + std::to_string(i + 1) + " missing");
}

inline Path surjection_to_path(const Surjection& s) {
  check_surjection(s);
  if (!s.nondegenerate()) throw domain_error("degenerate surjection (adjacent repeat) gives an internal point");
  Signature sig;
  sig.k.assign(s.n, -1);
  for (int x : s.u) ++sig.k[x - 1];
  return validate_path(sig, s.u, std::vector<int>(s.u.size() + 1, 0));
}

inline Surjection path_to_surjection(const Path& p) {
  for (int m : p.marks)
    if (m) throw domain_error("surjection inverse needs an unmarked path");
  if (has_internal_point(p)) throw domain_error("path has an internal point (degenerate surjection)");
  return Surjection{p.n(), p.moves};
}

// Filtration level of a surjection: max alternations of its restriction to a pair.
inline int surjection_complexity(const Surjection& s) {
  int best = 0;
  for (int i = 1; i <= s.n; ++i)
    for (int j = i + 1; j <= s.n; ++j) {
      int last = 0, alt = 0;
      for (int x : s.u) {
        if (x != i && x != j) continue;
        if (last && x != last) ++alt;
        last = x;
      }
      best = std::max(best, alt);
    }
  return best;
}

inline std::vector<Surjection> nondegenerate_surjections(int m, int n) {
  std::vector<Surjection> out;
  std::vector<int> u(m);
  std::vector<int> used(n + 1, 0);
  auto rec = [&](auto&& self, int pos) -> void {
    if (pos == m) {
      for (int i = 1; i <= n; ++i)
        if (!used[i]) return;
      out.push_back({n, u});
      return;
    }
    for (int x = 1; x <= n; ++x) {
      if (pos && u[pos - 1] == x) continue;
      u[pos] = x;
      ++used[x];
      self(self, pos + 1);
      --used[x];
    }
  };
  if (m > 0) rec(rec, 0);
  return out;
}

inline std::string to_string(const Surjection& s) {
  std::string r = "surj n=" + std::to_string(s.n) + " :";
  for (std::size_t j = 0; j < s.u.size(); ++j) r += (j ? "," : " ") + std::to_string(s.u[j]);
  return r;
}

inline Surjection parse_surjection(const std::string& txt) {
  std::istringstream is(txt);
  std::string head, ntok, colon, vals;
  is >> head >> ntok >> colon;
  if (head != "surj" || ntok.rfind("n=", 0) != 0 || colon != ":")
    throw parse_error("surjection format is 'surj n=<n> : u1,...,um'");
  Surjection s;
  s.n = parse_int(ntok.substr(2), "surjection n");
  std::string rest;
  while (is >> vals) rest += vals;
  std::stringstream ss(rest);
  std::string tok;
  while (std::getline(ss, tok, ',')) s.u.push_back(parse_int(tok, "surjection value"));
  check_surjection(s);
  return s;
}

}  // namespace opforge
