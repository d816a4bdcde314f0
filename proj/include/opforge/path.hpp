#pragma once
#include <algorithm>
#include <compare>
#include <functional>
#include <tuple>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "formal_sum.hpp"

namespace opforge {

struct Signature {
  std::vector<int> k;
  int l = 0;
  int n() const { return int(k.size()); }
  int ksum() const { return std::accumulate(k.begin(), k.end(), 0); }
  auto operator<=>(const Signature&) const = default;
};

// Marked lattice path: the move sequence plus one marking per visited point.
struct Path {
  Signature sig;
  std::vector<int> moves;  // directions 1..n
  std::vector<int> marks;  // size moves.size()+1

  int n() const { return sig.n(); }
  int points() const { return int(marks.size()); }
  auto operator<=>(const Path&) const = default;
};

struct PointClassification {
  std::set<int> angles, internals, marked;
};

inline Path validate_path(const Signature& sig, std::vector<int> moves,
                          std::vector<int> marks) {
  if (sig.l < 0) throw domain_error("output colour l must be non-negative");
  for (int x : sig.k)
    if (x < 0) throw domain_error("input colours must be non-negative");
  std::vector<int> cnt(sig.k.size(), 0);
  for (int d : moves) {
    if (d < 1 || d > sig.n())
      throw domain_error("move direction " + std::to_string(d) + " out of range 1.." +
                         std::to_string(sig.n()));
    ++cnt[d - 1];
  }
  for (int i = 0; i < sig.n(); ++i)
    if (cnt[i] != sig.k[i] + 1)
      throw domain_error("direction " + std::to_string(i + 1) + " occurs " +
                         std::to_string(cnt[i]) + " times, expected k" +
                         std::to_string(i + 1) + "+1=" + std::to_string(sig.k[i] + 1));
  if (marks.size() != moves.size() + 1)
    throw domain_error("marking length " + std::to_string(marks.size()) +
                       " != number of points " + std::to_string(moves.size() + 1));
  long long s = 0;
  for (int m : marks) {
    if (m < 0) throw domain_error("markings must be non-negative");
    s += m;
  }
  if (s != sig.l)
    throw domain_error("marking sum " + std::to_string(s) + " != l=" + std::to_string(sig.l));
  return Path{sig, std::move(moves), std::move(marks)};
}

inline PointClassification classify_points(const Path& p) {
  PointClassification c;
  int N = p.points();
  for (int a = 1; a + 1 < N; ++a)
    (p.moves[a - 1] != p.moves[a] ? c.angles : c.internals).insert(a);
  for (int a = 0; a < N; ++a)
    if (p.marks[a] > 0) c.marked.insert(a);
  return c;
}

inline bool has_internal_point(const Path& p) {
  for (std::size_t a = 1; a < p.moves.size(); ++a)
    if (p.moves[a - 1] == p.moves[a]) return true;
  return false;
}

inline int angle_count(const std::vector<int>& moves) {
  int c = 0;
  for (std::size_t a = 1; a < moves.size(); ++a) c += moves[a - 1] != moves[a];
  return c;
}

// Projection to the face spanned by directions i<j; collapsed points add markings.
inline Path projection(const Path& p, int i, int j) {
  if (!(1 <= i && i < j && j <= p.n()))
    throw domain_error("projection needs 1 <= i < j <= n");
  Path q;
  q.sig.k = {p.sig.k[i - 1], p.sig.k[j - 1]};
  q.sig.l = p.sig.l;
  q.marks.push_back(p.marks[0]);
  for (std::size_t a = 0; a < p.moves.size(); ++a) {
    int d = p.moves[a];
    if (d == i || d == j) {
      q.moves.push_back(d == i ? 1 : 2);
      q.marks.push_back(p.marks[a + 1]);
    } else {
      q.marks.back() += p.marks[a + 1];
    }
  }
  return q;
}

inline int complexity(const Path& p) {
  int n = p.n(), best = 0;
  std::vector<int> sub;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      sub.clear();
      for (int d : p.moves)
        if (d == i || d == j) sub.push_back(d);
      best = std::max(best, angle_count(sub));
    }
  return best;
}

// Move words with the given multiplicities, lexicographic; optionally pruned by
// complexity bound (angle counts of pair projections only grow along a prefix).
inline std::vector<std::vector<int>> enumerate_moves(const std::vector<int>& k,
                                                     std::optional<int> c) {
  int n = int(k.size());
  std::vector<std::vector<int>> out;
  std::vector<int> left(n), word;
  int total = 0;
  for (int i = 0; i < n; ++i) total += left[i] = k[i] + 1;
  // last[i][j]: last direction seen in projection (i,j); ang[i][j]: its angles
  std::vector<int> last(n * n, 0), ang(n * n, 0);
  auto rec = [&](auto&& self) -> void {
    if (int(word.size()) == total) {
      out.push_back(word);
      return;
    }
    for (int d = 1; d <= n; ++d) {
      if (!left[d - 1]) continue;
      bool ok = true;
      std::vector<std::tuple<int, int, bool>> touched;
      for (int o = 1; o <= n && ok; ++o) {
        if (o == d) continue;
        int a = std::min(o, d) - 1, b = std::max(o, d) - 1, idx = a * n + b;
        int prev = last[idx];
        bool turn = prev && prev != d;
        touched.emplace_back(idx, prev, turn);
        if (turn && ++ang[idx] > c.value_or(1 << 30)) ok = false;
        last[idx] = d;
      }
      if (ok) {
        --left[d - 1];
        word.push_back(d);
        self(self);
        word.pop_back();
        ++left[d - 1];
      }
      for (auto& [idx, prev, turn] : touched) {
        ang[idx] -= turn;
        last[idx] = prev;
      }
    }
  };
  rec(rec);
  return out;
}

// Weak compositions of l into N parts, lexicographic.
inline void for_each_marking(int N, int l, const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> m(N, 0);
  auto rec = [&](auto&& self, int pos, int rest) -> void {
    if (pos == N - 1) {
      m[pos] = rest;
      f(m);
      return;
    }
    for (int v = 0; v <= rest; ++v) {
      m[pos] = v;
      self(self, pos + 1, rest - v);
    }
  };
  if (N > 0) rec(rec, 0, l);
}

inline std::vector<Path> enumerate_paths(const Signature& sig, std::optional<int> c = {}) {
  std::vector<Path> out;
  for (auto& mv : enumerate_moves(sig.k, c)) {
    int N = int(mv.size()) + 1;
    for_each_marking(N, sig.l, [&](const std::vector<int>& m) { out.push_back(Path{sig, mv, m}); });
  }
  return out;
}

inline std::string to_string(const Signature& s) {
  std::ostringstream os;
  for (int i = 0; i < s.n(); ++i) os << (i ? "," : "") << s.k[i];
  os << ";" << s.l;
  return os.str();
}

inline std::string to_string(const Path& p) {
  std::ostringstream os;
  os << "lat " << to_string(p.sig) << " | " << p.marks[0];
  for (std::size_t a = 0; a < p.moves.size(); ++a) os << " " << p.moves[a] << ":" << p.marks[a + 1];
  return os.str();
}

inline int parse_int(const std::string& s, const std::string& what) {
  if (s.empty()) throw parse_error("empty integer in " + what);
  std::size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(s, &pos);
  } catch (...) {
    throw parse_error("bad integer '" + s + "' in " + what);
  }
  if (pos != s.size()) throw parse_error("bad integer '" + s + "' in " + what);
  return v;
}

// "k1,...,kn;l"
inline Signature parse_signature(const std::string& txt) {
  auto semi = txt.find(';');
  if (semi == std::string::npos) throw parse_error("signature needs ';' separating inputs and l");
  Signature s;
  std::string ks = txt.substr(0, semi);
  std::stringstream ss(ks);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok.erase(std::remove(tok.begin(), tok.end(), ' '), tok.end());
    if (!tok.empty() || ks.find(',') != std::string::npos) s.k.push_back(parse_int(tok, "signature"));
  }
  std::string ls = txt.substr(semi + 1);
  ls.erase(std::remove(ls.begin(), ls.end(), ' '), ls.end());
  s.l = parse_int(ls, "signature");
  return s;
}

inline Path parse_path(const std::string& txt) {
  std::istringstream is(txt);
  std::string head;
  is >> head;
  if (head != "lat") throw parse_error("path must start with 'lat' (token 1)");
  std::string sigtxt;
  std::string tok;
  while (is >> tok && tok != "|") sigtxt += tok;
  if (tok != "|") throw parse_error("path is missing '|' after the signature");
  Signature sig = parse_signature(sigtxt);
  std::vector<int> moves, marks;
  int idx = 0;
  while (is >> tok) {
    ++idx;
    if (idx == 1) {
      marks.push_back(parse_int(tok, "origin marking (token " + std::to_string(idx) + ")"));
      continue;
    }
    auto colon = tok.find(':');
    if (colon == std::string::npos)
      throw parse_error("expected d:m at point token " + std::to_string(idx));
    moves.push_back(parse_int(tok.substr(0, colon), "move direction (token " + std::to_string(idx) + ")"));
    marks.push_back(parse_int(tok.substr(colon + 1), "marking (token " + std::to_string(idx) + ")"));
  }
  if (marks.empty()) throw parse_error("path has no points");
  return validate_path(sig, std::move(moves), std::move(marks));
}

}  // namespace opforge
