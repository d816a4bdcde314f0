#pragma once
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

namespace opforge {

// Raised when an input violates a domain invariant; the message names it.
struct domain_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed text input; the message carries the position.
struct parse_error : domain_error {
  using domain_error::domain_error;
};

template <class K>
struct FormalSum {
  std::map<K, std::int64_t> terms;

  FormalSum() = default;
  explicit FormalSum(const K& k, std::int64_t c = 1) { add(k, c); }

  void add(const K& k, std::int64_t c) {
    if (c == 0) return;
    auto [it, fresh] = terms.try_emplace(k, c);
    if (!fresh && (it->second += c) == 0) terms.erase(it);
  }
  FormalSum& operator+=(const FormalSum& o) {
    for (auto& [k, c] : o.terms) add(k, c);
    return *this;
  }
  FormalSum& operator-=(const FormalSum& o) {
    for (auto& [k, c] : o.terms) add(k, -c);
    return *this;
  }
  FormalSum scaled(std::int64_t s) const {
    FormalSum r;
    if (s == 0) return r;
    for (auto& [k, c] : terms) r.terms.emplace(k, c * s);
    return r;
  }
  bool empty() const { return terms.empty(); }
  std::size_t size() const { return terms.size(); }
  std::int64_t coeff(const K& k) const {
    auto it = terms.find(k);
    return it == terms.end() ? 0 : it->second;
  }
  friend FormalSum operator+(FormalSum a, const FormalSum& b) { return a += b; }
  friend FormalSum operator-(FormalSum a, const FormalSum& b) { return a -= b; }
  bool operator==(const FormalSum& o) const { return terms == o.terms; }

  // Applies a linear map given on basis elements.
  template <class F>
  auto apply(F&& f) const {
    decltype(f(terms.begin()->first)) r;
    for (auto& [k, c] : terms) r += f(k).scaled(c);
    return r;
  }
};

template <class K, class Show>
std::string format_sum(const FormalSum<K>& s, Show&& show) {
  if (s.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto& [k, c] : s.terms) {
    if (!first) os << " + ";
    first = false;
    os << c << "*" << show(k);
  }
  return os.str();
}

// Reads the format_sum grammar; a bare basis element means coefficient 1.
template <class K, class Parse>
FormalSum<K> parse_sum(const std::string& txt, Parse&& parse_basis) {
  auto trim = [](std::string s) {
    auto b = s.find_first_not_of(" \t\r\n"), e = s.find_last_not_of(" \t\r\n");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  FormalSum<K> out;
  std::string all = trim(txt);
  if (all == "0") return out;
  std::size_t pos = 0;
  for (int term = 1;; ++term) {
    auto plus = all.find('+', pos);
    std::string piece = trim(all.substr(pos, plus == std::string::npos ? plus : plus - pos));
    if (piece.empty()) throw parse_error("empty summand at term " + std::to_string(term));
    std::int64_t c = 1;
    auto star = piece.find('*');
    if (star != std::string::npos && star > 0 &&
        piece.find_first_not_of("-0123456789") >= star) {
      try {
        std::size_t used = 0;
        c = std::stoll(piece.substr(0, star), &used);
        if (used != star) throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw parse_error("bad coefficient in term " + std::to_string(term));
      }
      piece = trim(piece.substr(star + 1));
    }
    out.add(parse_basis(piece), c);
    if (plus == std::string::npos) break;
    pos = plus + 1;
  }
  return out;
}

inline int sgn_pow(long long e) { return (e % 2 == 0) ? 1 : -1; }

}  // namespace opforge
