#include <CLI11.hpp>
#include <iostream>
#include <iterator>
#include <json.hpp>

#include "opforge/suites.hpp"

using namespace opforge;
using json = nlohmann::json;

namespace {

std::string read_input(const std::string& arg) {
  if (!arg.empty() && arg != "-") return arg;
  std::string all((std::istreambuf_iterator<char>(std::cin)), std::istreambuf_iterator<char>());
  while (!all.empty() && std::isspace((unsigned char)all.back())) all.pop_back();
  if (all.empty()) throw parse_error("no input given (argument or standard input)");
  return all;
}

Tree read_tree(const std::string& s) {
  Tree t = parse_tree(s);
  validate_tree(t);
  return t;
}

PathSum read_paths(const std::string& s) { return parse_sum<Path>(s, parse_path); }
TreeSum read_trees(const std::string& s) { return parse_sum<Tree>(s, read_tree); }

template <class K, class Show>
void emit_sum(const FormalSum<K>& s, Show&& show, bool as_json, json extra = json::object()) {
  if (!as_json) {
    std::cout << format_sum(s, show) << "\n";
    return;
  }
  json terms = json::array();
  for (auto& [k, c] : s.terms) terms.push_back({{"coeff", c}, {"basis", show(k)}});
  extra["terms"] = terms;
  std::cout << extra.dump() << "\n";
}

auto show_path = [](const Path& p) { return to_string(p); };
auto show_tree = [](const Tree& t) { return to_string(t); };
auto show_word = [](const Word& w) { return to_string(w); };

std::vector<int> parse_list(const std::string& s, const std::string& what) {
  std::vector<int> out;
  if (s.empty()) return out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(parse_int(tok, what));
  return out;
}

std::pair<int, int> parse_degrees(const std::string& s) {
  auto dots = s.find("..");
  if (dots == std::string::npos) throw parse_error("degrees must look like a..b");
  int a = parse_int(s.substr(0, dots), "degree range"), b = parse_int(s.substr(dots + 2), "degree range");
  if (a > b) throw domain_error("empty degree range");
  return {a, b};
}

void print_result(const SuiteResult& r, bool as_json) {
  if (as_json) {
    std::cout << json{{"suite", r.name}, {"pass", r.pass}, {"cases", r.cases}, {"detail", r.detail}}.dump() << "\n";
    return;
  }
  std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << " (" << r.cases << " cases) " << r.detail << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"opforge: lattice path operads, tree operads and brace calculus"};
  app.require_subcommand(1);
  std::string fmt = "text";
  auto add_format = [&](CLI::App* sc) {
    sc->add_option("--format", fmt, "text or json")->check(CLI::IsMember({"text", "json"}));
  };
  std::function<int()> action;

  std::string arg1, arg2, slot_s, model = "lat", op;
  int cbound = -1, budget = 0;

  auto* en = app.add_subcommand("enumerate", "list the paths of a signature");
  std::string sig_s;
  en->add_option("--sig", sig_s, "signature k1,..,kn;l")->required();
  en->add_option("--c", cbound, "complexity bound");
  add_format(en);
  en->callback([&] {
    action = [&] {
      auto sig = parse_signature(sig_s);
      auto ps = cbound >= 0 ? enumerate_paths(sig, cbound) : enumerate_paths(sig);
      if (fmt == "json") {
        json a = json::array();
        for (auto& p : ps) a.push_back(to_string(p));
        std::cout << a.dump() << "\n";
      } else {
        for (auto& p : ps) std::cout << to_string(p) << "\n";
      }
      return 0;
    };
  });

  auto* cx = app.add_subcommand("complexity", "max angle count over pair projections");
  cx->add_option("path", arg1);
  cx->callback([&] { action = [&] { std::cout << complexity(parse_path(read_input(arg1))) << "\n"; return 0; }; });

  auto* df = app.add_subcommand("diff", "apply a differential");
  df->add_option("--model", model)->check(CLI::IsMember({"lat", "tree"}));
  df->add_option("--op", op, "lat: simplicial|cosimplicial|total; tree: total|partial|delta|amputated");
  df->add_option("input", arg1, "element or sum");
  add_format(df);
  df->callback([&] {
    action = [&] {
      bool js = fmt == "json";
      if (model == "lat") {
        std::string o = op.empty() ? "total" : op;
        auto x = read_paths(read_input(arg1));
        PathSum y;
        if (o == "simplicial") y = linear(x, simplicial_differential);
        else if (o == "cosimplicial") y = linear(x, cosimplicial_differential);
        else if (o == "total") y = linear(x, total_differential);
        else throw parse_error("unknown lattice op '" + o + "'");
        emit_sum(y, show_path, js);
      } else {
        std::string o = op.empty() ? "total" : op;
        auto x = read_trees(read_input(arg1));
        TreeSum y;
        if (o == "total") y = linear(x, tree_differential);
        else if (o == "partial") y = linear(x, tree_partial_total);
        else if (o == "delta") y = linear(x, tree_delta);
        else if (o == "amputated") y = linear(x, amputated_differential);
        else throw parse_error("unknown tree op '" + o + "'");
        emit_sum(y, show_tree, js);
      }
      return 0;
    };
  });

  auto* td = app.add_subcommand("tree-diff", "tree differential d = sum of partials minus delta");
  td->add_option("input", arg1);
  add_format(td);
  td->callback([&] {
    action = [&] {
      emit_sum(linear(read_trees(read_input(arg1)), tree_differential), show_tree, fmt == "json");
      return 0;
    };
  });

  auto* co = app.add_subcommand("compose", "operadic composition outer o_i inner");
  co->add_option("--model", model)->check(CLI::IsMember({"lat", "tree", "brac"}));
  co->add_option("outer", arg1)->required();
  co->add_option("slot", slot_s)->required();
  co->add_option("inner", arg2)->required();
  add_format(co);
  co->callback([&] {
    action = [&] {
      int i = parse_int(slot_s, "slot");
      bool js = fmt == "json";
      if (model == "lat") {
        auto r = to_string(compose(parse_path(arg1), i, parse_path(arg2)));
        std::cout << (js ? json{{"path", r}}.dump() : r) << "\n";
      } else if (model == "tree") {
        Tree a = read_tree(arg1), b = read_tree(arg2);
        if (i < 1 || i > white_count(a)) throw domain_error("slot out of range");
        if (leg_count(b) != white_arities(a)[i - 1])
          throw domain_error("colour mismatch: inner has " + std::to_string(leg_count(b)) + " legs, slot expects " +
                             std::to_string(white_arities(a)[i - 1]));
        auto r = to_string(tree_insert(a, i, b));
        std::cout << (js ? json{{"tree", r}}.dump() : r) << "\n";
      } else {
        auto r = brac_compose(parse_path(arg1), i, parse_path(arg2));
        if (js) emit_sum(r.sum, show_path, true, {{"signed", r.is_signed}});
        else {
          if (!r.is_signed) std::cout << "unsigned: ";
          emit_sum(r.sum, show_path, false);
        }
      }
      return 0;
    };
  });

  auto* nm = app.add_subcommand("normalize", "drop terms with internal points");
  nm->add_option("input", arg1);
  add_format(nm);
  nm->callback([&] {
    action = [&] {
      emit_sum(normalize(read_paths(read_input(arg1))), show_path, fmt == "json");
      return 0;
    };
  });

  auto* bc = app.add_subcommand("brace-compose", "insertion of amputated trees");
  bc->add_option("outer", arg1)->required();
  bc->add_option("slot", slot_s)->required();
  bc->add_option("inner", arg2)->required();
  add_format(bc);
  bc->callback([&] {
    action = [&] {
      emit_sum(whiskered_insert(read_tree(arg1), parse_int(slot_s, "slot"), read_tree(arg2)), show_tree,
               fmt == "json");
      return 0;
    };
  });

  auto* t2p = app.add_subcommand("tree2path", "tree to complexity-2 path");
  t2p->add_option("tree", arg1);
  t2p->callback([&] {
    action = [&] {
      Tree t = read_tree(read_input(arg1));
      if (!legs_planar(t)) throw domain_error("legs must be labeled in planar order");
      std::cout << to_string(tree_to_path(t)) << "\n";
      return 0;
    };
  });

  auto* p2t = app.add_subcommand("path2tree", "complexity-2 path to tree");
  p2t->add_option("path", arg1);
  p2t->callback([&] { action = [&] { std::cout << to_string(path_to_tree(parse_path(read_input(arg1)))) << "\n"; return 0; }; });

  auto* s2p = app.add_subcommand("surj2path", "nondegenerate surjection to path");
  s2p->add_option("surjection", arg1);
  s2p->callback([&] {
    action = [&] { std::cout << to_string(surjection_to_path(parse_surjection(read_input(arg1)))) << "\n"; return 0; };
  });

  auto* p2s = app.add_subcommand("path2surj", "internal-point-free path to surjection");
  p2s->add_option("path", arg1);
  p2s->callback([&] {
    action = [&] { std::cout << to_string(path_to_surjection(parse_path(read_input(arg1)))) << "\n"; return 0; };
  });

  auto* wh = app.add_subcommand("whisker", "add up to budget legs at the angles");
  wh->add_option("--budget", budget)->required();
  wh->add_option("tree", arg1);
  add_format(wh);
  wh->callback([&] {
    action = [&] {
      if (budget < 0) throw domain_error("budget must be non-negative");
      emit_sum(whisker(read_tree(read_input(arg1)), budget), show_tree, fmt == "json");
      return 0;
    };
  });

  auto* dc = app.add_subcommand("decompose", "write an amputated tree through cup and brace atoms");
  dc->add_option("tree", arg1);
  add_format(dc);
  dc->callback([&] {
    action = [&] {
      auto d = decompose(read_tree(read_input(arg1)));
      if (fmt == "json") std::cout << json{{"expr", to_string(*d.expr)}, {"sign", d.sign}}.dump() << "\n";
      else std::cout << d.sign << "*" << to_string(*d.expr) << "\n";
      return 0;
    };
  });

  auto* ev = app.add_subcommand("eval", "value of a tree on generic cochains");
  std::string ar_s;
  ev->add_option("--tree", arg1)->required();
  ev->add_option("--arities", ar_s, "cochain arities k1,..,kn");
  add_format(ev);
  ev->callback([&] {
    action = [&] {
      Tree t = read_tree(arg1);
      auto ar = parse_list(ar_s, "arity");
      Value v;
      if (is_amputated(t) && !ar_s.empty()) {
        v = operation(t, ar);
      } else {
        if (!ar_s.empty() && ar != white_arities(t)) throw domain_error("arities do not match the tree");
        v = evaluate(t);
      }
      emit_sum(v, show_word, fmt == "json");
      return 0;
    };
  });

  auto* gs = app.add_subcommand("gerstenhaber", "check the Gerstenhaber identities symbolically");
  int max_arity = 3;
  gs->add_option("--max-arity", max_arity);
  add_format(gs);
  gs->callback([&] {
    action = [&] {
      bool ok = true;
      json a = json::array();
      for (auto& r : gerstenhaber_suite(max_arity)) {
        ok = ok && r.ok();
        if (fmt == "json")
          a.push_back({{"identity", r.name}, {"cases", r.cases}, {"failures", r.failures}, {"residual", r.first_failure}});
        else
          std::cout << r.name << ": " << r.cases << " cases, residual "
                    << (r.ok() ? std::string("0") : r.first_failure) << "\n";
      }
      if (fmt == "json") std::cout << a.dump() << "\n";
      return ok ? 0 : 1;
    };
  });

  auto* hm = app.add_subcommand("homology", "homology of a finite degree window");
  std::string deg_s = "-4..0";
  ModelSpec spec;
  hm->add_option("--model", model)->check(CLI::IsMember({"brac", "nbrac", "tree-column", "total"}))->required();
  hm->add_option("--c", spec.c);
  hm->add_option("--n", spec.n);
  hm->add_option("--l", spec.l);
  hm->add_option("--degrees", deg_s, "a..b");
  add_format(hm);
  hm->callback([&] {
    action = [&] {
      spec.kind = parse_model(model);
      auto [lo, hi] = parse_degrees(deg_s);
      auto h = homology(spec, lo, hi);
      if (fmt == "json") {
        json o = json::object();
        for (auto& [d, g] : h) {
          json tor = json::array();
          for (auto& x : g.torsion) tor.push_back(x.str());
          o[std::to_string(d)] = {{"betti", g.betti}, {"torsion", tor}};
        }
        std::cout << o.dump() << "\n";
      } else {
        for (auto it = h.rbegin(); it != h.rend(); ++it) {
          std::cout << "H_" << it->first << " = Z^" << it->second.betti;
          for (auto& x : it->second.torsion) std::cout << " + Z/" << x;
          std::cout << "\n";
        }
      }
      return 0;
    };
  });

  auto* vf = app.add_subcommand("verify", "run a verification suite (or 'all', 'list')");
  std::string suite;
  int max_k = -1;
  vf->add_option("suite", suite)->required();
  vf->add_option("--max-k", max_k, "size bound of the suite");
  add_format(vf);
  vf->callback([&] {
    action = [&] {
      auto& reg = suite_registry();
      if (suite == "list") {
        for (auto& e : reg) std::cout << e.name << "  " << e.about << "\n";
        return 0;
      }
      bool found = false, ok = true;
      for (auto& e : reg) {
        if (suite != "all" && e.name != suite) continue;
        found = true;
        auto r = e.run(max_k);
        ok = ok && r.pass;
        print_result(r, fmt == "json");
        std::cout.flush();
      }
      if (!found) throw CLI::ValidationError("suite", "unknown suite '" + suite + "' (try 'verify list')");
      return ok ? 0 : 1;
    };
  });

  try {
    app.parse(argc, argv);
    return action();
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const parse_error& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 1;
  }
}
