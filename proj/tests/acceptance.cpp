// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <iomanip>
#include <iostream>

#include "opforge/suites.hpp"

using namespace opforge;

namespace {
struct Criterion {
  int id;
  const char* title;
  std::function<std::vector<SuiteResult>()> run;
};
}  // namespace

int main() {
  std::vector<Criterion> cs = {
      {1, "structural validity, n<=3, sum k<=4, l<=3", [] { return std::vector{suite_structural(4, 3, 3)}; }},
      {2, "d^2 = 0 in every model", [] { return std::vector{suite_d_squared(4)}; }},
      {3, "tree <-> path isomorphism, sum k<=3, l<=3", [] { return std::vector{suite_tree_path(3, 300)}; }},
      {4, "surjection <-> path isomorphism, m<=7, n<=3", [] { return std::vector{suite_surjections(7, 3)}; }},
      {5, "Brac_c(n) and nBrac_c(n) Betti numbers agree, c<=3, n<=3",
       [] { return std::vector{suite_brac_vs_nbrac(3, 3, -4, 0)}; }},
      {6, "Betti numbers of nBrac_2(2) and nBrac_2(3)", [] { return std::vector{suite_little_disks()}; }},
      {7, "closure dichotomy at c=2 / c=3", [] { return std::vector{suite_hbrac_closure(4)}; }},
      {8, "whiskering commutes with d and insertion, budget 3", [] { return std::vector{suite_whiskering(3, 3)}; }},
      {9, "Gerstenhaber identities, arities <= 3, sample evaluation", [] { return std::vector{suite_gerstenhaber(3)}; }},
      {10, "decomposition into atoms, <= 4 internal edges", [] { return std::vector{suite_decompose(4)}; }},
  };
  bool all = true;
  for (auto& c : cs) {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    long cases = 0;
    try {
      for (auto& r : c.run()) {
        ok = ok && r.pass;
        cases += r.cases;
        detail += (detail.empty() ? "" : "; ") + r.detail;
      }
    } catch (const std::exception& e) {
      ok = false;
      detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    all = all && ok;
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title << " (" << cases << " cases, "
              << std::fixed << std::setprecision(1) << secs << "s) " << detail << std::endl;
  }
  return all ? 0 : 1;
}
