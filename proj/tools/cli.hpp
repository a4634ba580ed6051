#pragma once

// Command-line front end. run_cli() is separate from main() so tests can drive
// it in-process. Exit codes: 0 success, 1 domain error, 2 resource cap,
// 64 usage error.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "superpat/superpat.hpp"

namespace superpat::cli {

inline constexpr int kExitDomain = 1;
inline constexpr int kExitResource = 2;
inline constexpr int kExitUsage = 64;

using AnyDfa = std::variant<WeightedDfa, SubsetDfa>;

struct DfaSpec {
  std::string kind;  // greedy | greedy-cheap | subset | two-track | random | file
  std::vector<int> word;
  std::string word_file;
  int r = 0;
  int k = 0;
  std::uint32_t states = 0;
  std::uint64_t seed = 0;
  std::string file;
};

struct Options {
  unsigned threads = 1;
  std::string format = "json";
  std::string caps_override;
  Caps caps;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Word load_word(const std::vector<int>& inline_letters, const std::string& file, int r) {
  if (!file.empty()) return parse_word(read_file(file));
  if (r > 0) return Word(inline_letters, r);
  return Word::from_letters(inline_letters);
}

inline Permutation load_perm(const std::vector<int>& inline_images, const std::string& file) {
  if (!file.empty()) return parse_permutation(read_file(file));
  return Permutation(inline_images);
}

inline AnyDfa build_dfa(const DfaSpec& s, const Caps& caps) {
  if (s.kind == "greedy" || s.kind == "greedy-cheap") {
    Word w = load_word(s.word, s.word_file, s.r);
    auto a = build_greedy_dfa(w);
    return s.kind == "greedy" ? a : cheapen(a);
  }
  if (s.kind == "subset") return SubsetDfa(s.k, caps);
  if (s.kind == "two-track") return build_two_track_dfa(s.k);
  if (s.kind == "random") return random_k_dfa(s.k, s.states, s.seed);
  if (s.kind == "file") return dfa_from_json(nlohmann::json::parse(read_file(s.file)));
  throw DomainError("unknown DFA kind '" + s.kind + "'");
}

inline WeightedDfa as_table(const AnyDfa& d, const Caps& caps) {
  if (auto* s = std::get_if<SubsetDfa>(&d)) return s->materialize(caps);
  return std::get<WeightedDfa>(d);
}

inline WeightedDfa::state_type resolve_state(const WeightedDfa& a, std::optional<std::int64_t> label) {
  if (!label) return a.root();
  auto v = a.find_label(*label);
  if (!v) throw DomainError("no state labelled " + std::to_string(*label));
  return *v;
}

inline SubsetDfa::state_type resolve_state(const SubsetDfa& a, std::optional<std::int64_t> label) {
  if (!label) return a.root();
  if (*label < 0 || !a.contains_state(static_cast<std::uint64_t>(*label)))
    throw DomainError("no subset state " + std::to_string(*label));
  return static_cast<std::uint64_t>(*label);
}

inline std::int64_t state_label(const WeightedDfa& a, WeightedDfa::state_type v) { return a.label(v); }
inline std::int64_t state_label(const SubsetDfa&, SubsetDfa::state_type v) { return static_cast<std::int64_t>(v); }

inline void add_dfa_options(CLI::App* cmd, DfaSpec& spec, bool positional) {
  if (positional)
    cmd->add_option("kind", spec.kind, "greedy | greedy-cheap | subset | two-track | random | file")->required();
  else
    cmd->add_option("--dfa", spec.kind, "greedy | greedy-cheap | subset | two-track | random | file")->required();
  cmd->add_option("--word", spec.word, "word letters (greedy kinds)");
  cmd->add_option("--word-file", spec.word_file, "word in text format");
  cmd->add_option("--r", spec.r, "alphabet size of --word (default: largest letter)");
  cmd->add_option("--k", spec.k, "alphabet size (subset, two-track, random)");
  cmd->add_option("--states", spec.states, "state count (random)");
  cmd->add_option("--seed", spec.seed, "seed (random)");
  cmd->add_option("--dfa-file", spec.file, "DFA JSON (kind file)");
}

// Flattens a JSON document into "key: value" lines.
inline void write_text(std::ostream& out, const nlohmann::json& j, const std::string& prefix = "") {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) write_text(out, it.value(), prefix.empty() ? it.key() : prefix + "." + it.key());
  } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array())) {
    for (std::size_t i = 0; i < j.size(); ++i) write_text(out, j[i], prefix + "[" + std::to_string(i) + "]");
  } else if (j.is_array()) {
    out << prefix << ":";
    for (const auto& x : j) out << " " << x.dump();
    out << "\n";
  } else {
    out << prefix << ": " << j.dump() << "\n";
  }
}

inline void emit(std::ostream& out, const Options& opt, nlohmann::json body) {
  body["caps"] = to_json(opt.caps);
  auto report = emit_report(std::move(body));
  if (opt.format == "text")
    write_text(out, report);
  else
    out << dump_report(report);
}

inline nlohmann::json embedding_json(const std::optional<Embedding>& e) {
  if (!e) return nullptr;
  return e->indices;
}

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
                   const std::string& env_caps = "") {
  CLI::App app{"superpattern and k-DFA toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_option("--threads", opt.threads, "worker threads (results do not depend on it)")->check(CLI::PositiveNumber);
  app.add_option("--format", opt.format, "json | text | dot")->check(CLI::IsMember({"json", "text", "dot"}));
  app.add_option("--caps", opt.caps_override, "cap overrides, e.g. max_perm_k=11,max_enumeration=100000000");

  // contains
  std::vector<int> word, perm;
  std::string word_file, perm_file;
  int r = 0;
  auto* contains = app.add_subcommand("contains", "is tau a pattern of the word");
  auto add_word = [&](CLI::App* c) {
    c->add_option("--word", word, "word letters");
    c->add_option("--word-file", word_file, "word in text format");
    c->add_option("--r", r, "alphabet size (default: largest letter)");
  };
  auto add_perm = [&](CLI::App* c, bool required) {
    auto* o = c->add_option("--perm", perm, "permutation in one-line notation");
    auto* f = c->add_option("--perm-file", perm_file, "permutation file");
    if (required) o->excludes(f);
  };
  add_word(contains);
  add_perm(contains, true);

  int k = 0;
  auto* census = app.add_subcommand("census", "patterns of length k contained in the word");
  add_word(census);
  census->add_option("--k", k, "pattern length")->required();

  auto* superpattern = app.add_subcommand("superpattern", "superpattern test or exhaustive search for f(k;r)");
  add_word(superpattern);
  superpattern->add_option("--k", k, "pattern length")->required();
  bool search = false;
  int n_max = 0;
  superpattern->add_flag("--search", search, "search all words of [r]^n for n <= n-max");
  superpattern->add_option("--n-max", n_max, "largest length searched");

  int n = 0;
  auto* foracle = app.add_subcommand("f-oracle", "exact F(k,n) by exhaustive search");
  foracle->add_option("--k", k)->required();
  foracle->add_option("--n", n)->required();

  // dfa
  auto* dfa = app.add_subcommand("dfa", "build and inspect weighted DFAs");
  dfa->require_subcommand(1);
  DfaSpec spec;
  bool include_inf = false;
  std::vector<int> walk_letters;
  std::optional<std::int64_t> start;
  std::optional<std::uint64_t> budget;
  auto* dfa_build = dfa->add_subcommand("build", "emit the DFA (json | dot | text)");
  auto* dfa_dot = dfa->add_subcommand("dot", "emit the DFA as DOT");
  auto* dfa_cost = dfa->add_subcommand("cost", "cost of a walk");
  auto* dfa_census = dfa->add_subcommand("census", "root-walk cost distribution over S_k");
  for (auto* c : {dfa_build, dfa_dot, dfa_cost, dfa_census}) add_dfa_options(c, spec, true);
  for (auto* c : {dfa_build, dfa_dot}) c->add_flag("--include-inf", include_inf, "draw infinite-cost self-loops");
  dfa_cost->add_option("--walk", walk_letters, "letters read")->required();
  dfa_cost->add_option("--start", start, "start state label (default root)");
  dfa_census->add_option("--n", budget, "cost budget");

  auto* cheapen_cmd = app.add_subcommand("cheapen", "k-DFA cheapening of a greedy DFA");
  add_dfa_options(cheapen_cmd, spec, false);
  cheapen_cmd->get_option("--dfa")->required(false)->default_str("greedy");
  spec.kind = "greedy";

  auto* walk = app.add_subcommand("walk", "full walk trace");
  add_dfa_options(walk, spec, false);
  walk->add_option("--walk", walk_letters, "letters read")->required();
  walk->add_option("--start", start, "start state label (default root)");

  int L = 0;
  double epsilon = 0;
  std::uint64_t samples = 0, seed = 0;
  std::string comparator = "<";
  auto* estimate = app.add_subcommand("estimate-p", "Monte-Carlo P(v,L,eps)");
  auto* exact = app.add_subcommand("exact-p", "exact P(v,L,eps)");
  bool max_states = false;
  for (auto* c : {estimate, exact}) {
    add_dfa_options(c, spec, false);
    c->add_option("--L", L)->required();
    c->add_option("--epsilon", epsilon)->required();
    c->add_option("--start", start, "state label (default root)");
    c->add_option("--comparator", comparator, "< or <=")->check(CLI::IsMember({"<", "<=", "lt", "le"}));
  }
  exact->add_flag("--max-over-states", max_states, "report max over all states");
  estimate->add_option("--samples", samples)->required();
  // --seed is shared with the random builder; estimate-p records it either way.
  estimate->get_option("--seed")->description("seed (random builder and sampling)");

  auto* decompose = app.add_subcommand("decompose", "C_j = X_j + Y_j split of a permutation's root walk");
  add_dfa_options(decompose, spec, false);
  add_perm(decompose, true);

  int M = 0;
  double eps_star = 0;
  std::uint64_t sample_seed = 0;
  auto* concentration = app.add_subcommand("concentration", "frequencies of the X and T concentration events");
  add_dfa_options(concentration, spec, false);
  concentration->add_option("--M", M)->required();
  concentration->add_option("--eps-star", eps_star)->required();
  concentration->add_option("--samples", samples)->required();
  concentration->add_option("--sample-seed", sample_seed, "seed for sampling (defaults to --seed)");

  std::optional<int> bk, bL, bM, br, bn;
  std::optional<double> beps, beps_star, balpha, bF, blogF;
  std::string log_base = "e";
  auto* bounds = app.add_subcommand("bounds", "evaluate bounds, constants and predicates");
  bounds->add_option("--k", bk);
  bounds->add_option("--L", bL);
  bounds->add_option("--epsilon", beps);
  bounds->add_option("--eps-star", beps_star);
  bounds->add_option("--M", bM);
  bounds->add_option("--alpha", balpha);
  bounds->add_option("--r", br);
  bounds->add_option("--n", bn);
  bounds->add_option("--F", bF, "upper bound on F(k,n)");
  bounds->add_option("--logF", blogF, "natural log of an upper bound on F(k,n)");
  bounds->add_option("--log-base", log_base, "base of log in the lower-order predicate")->check(CLI::IsMember({"e", "2", "10"}));

  auto* bcp = app.add_subcommand("bcp", "bi-directional circular pattern containment");
  add_word(bcp);
  add_perm(bcp, false);
  bcp->add_option("--k", k, "count all tau in S_k instead of one --perm");
  bool one_way = false;
  bcp->add_flag("--one-way", one_way, "rotations of the word only, no reversal");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  const Comparator cmp = (comparator == "<" || comparator == "lt") ? Comparator::Less : Comparator::LessEqual;

  try {
    opt.caps = Caps::parse(opt.caps_override, Caps::parse(env_caps));

    if (*contains) {
      const Word w = load_word(word, word_file, r);
      const Permutation tau = load_perm(perm, perm_file);
      nlohmann::json body{{"command", "contains"}, {"word", to_json(w)}, {"perm", to_json(tau)}};
      const auto e = find_embedding(w, tau);
      body["contained"] = e.has_value();
      body["witness"] = embedding_json(e);
      if (w.alphabet_size() == tau.size()) body["greedy"] = embedding_json(greedy_embed(w, tau));
      emit(out, opt, std::move(body));
    } else if (*census) {
      const Word w = load_word(word, word_file, r);
      const auto pats = pattern_set(w, k, opt.caps);
      nlohmann::json list = nlohmann::json::array();
      for (const auto& p : pats) list.push_back(to_json(p));
      emit(out, opt, {{"command", "census"}, {"k", k}, {"n", w.size()}, {"r", w.alphabet_size()},
                      {"count", pats.size()}, {"patterns", std::move(list)}, {"witness", to_json(w)}});
    } else if (*superpattern) {
      if (search) {
        if (r <= 0) throw DomainError("--search needs --r");
        const auto rows = exhaustive_f_search(k, r, n_max, opt.caps);
        nlohmann::json table = nlohmann::json::array();
        for (const auto& row : rows)
          table.push_back({{"n", row.n}, {"exists", row.exists},
                           {"witness", row.witness ? to_json(*row.witness) : nlohmann::json(nullptr)}});
        const auto least = least_superpattern_length(rows);
        emit(out, opt, {{"command", "superpattern"}, {"k", k}, {"r", r}, {"n_max", n_max}, {"table", std::move(table)},
                        {"least_n", least ? nlohmann::json(*least) : nlohmann::json(nullptr)}});
      } else {
        const Word w = load_word(word, word_file, r);
        const auto count = pattern_count(w, k, opt.caps);
        emit(out, opt, {{"command", "superpattern"}, {"k", k}, {"word", to_json(w)}, {"count", count},
                        {"k_factorial", detail::factorial(k)}, {"is_superpattern", count == detail::factorial(k)}});
      }
    } else if (*foracle) {
      const auto res = f_oracle(k, n, opt.caps);
      emit(out, opt, {{"command", "f-oracle"}, {"k", k}, {"n", n}, {"max_count", res.max_count},
                      {"witness", to_json(res.witness)}});
    } else if (*dfa) {
      const AnyDfa d = build_dfa(spec, opt.caps);
      if (*dfa_build || *dfa_dot) {
        const WeightedDfa a = as_table(d, opt.caps);
        if (*dfa_dot || opt.format == "dot")
          out << to_dot(a, include_inf);
        else if (opt.format == "text")
          out << to_table(a);
        else
          out << dump_report(emit_report({{"command", "dfa build"}, {"kind", spec.kind}, {"dfa", to_json(a)},
                                          {"caps", to_json(opt.caps)}}));
      } else if (*dfa_cost) {
        std::visit([&](const auto& a) {
          const auto trace = walk_cost(a, resolve_state(a, start), walk_letters);
          emit(out, opt, {{"command", "dfa cost"}, {"kind", spec.kind}, {"walk", walk_letters},
                          {"start", state_label(a, trace.states.front())}, {"cost", cost_to_json(trace.total)}});
        }, d);
      } else {
        std::visit([&](const auto& a) {
          const auto c = perm_cost_census(a, opt.caps, opt.threads);
          nlohmann::json hist = nlohmann::json::object();
          for (std::size_t i = 0; i < c.by_cost.size(); ++i)
            if (c.by_cost[i]) hist[std::to_string(i)] = c.by_cost[i];
          nlohmann::json body{{"command", "dfa census"}, {"kind", spec.kind}, {"k", a.alphabet_size()},
                              {"histogram", std::move(hist)}, {"infinite", c.infinite}};
          if (budget) {
            body["n"] = *budget;
            body["count"] = c.count_at_most(*budget);
          }
          emit(out, opt, std::move(body));
        }, d);
      }
    } else if (*cheapen_cmd) {
      const WeightedDfa a = as_table(build_dfa(spec, opt.caps), opt.caps);
      const WeightedDfa b = cheapen(a);
      if (opt.format == "dot")
        out << to_dot(b);
      else if (opt.format == "text")
        out << to_table(b);
      else
        out << dump_report(emit_report({{"command", "cheapen"}, {"is_k_dfa", is_k_dfa(b, opt.caps)}, {"dfa", to_json(b)},
                                        {"caps", to_json(opt.caps)}}));
    } else if (*walk) {
      std::visit([&](const auto& a) {
        const auto trace = walk_cost(a, resolve_state(a, start), walk_letters);
        nlohmann::json states = nlohmann::json::array(), steps = nlohmann::json::array();
        for (auto v : trace.states) states.push_back(state_label(a, v));
        for (auto c : trace.step_costs) steps.push_back(cost_to_json(c));
        emit(out, opt, {{"command", "walk"}, {"kind", spec.kind}, {"walk", walk_letters}, {"states", std::move(states)},
                        {"step_costs", std::move(steps)}, {"total", cost_to_json(trace.total)}, {"failed", trace.failed()}});
      }, build_dfa(spec, opt.caps));
    } else if (*estimate) {
      std::visit([&](const auto& a) {
        const auto rep = estimate_P(a, resolve_state(a, start), L, epsilon, samples, spec.seed, cmp, opt.threads, opt.caps);
        auto body = to_json(rep);
        body["command"] = "estimate-p";
        body["kind"] = spec.kind;
        body["start"] = state_label(a, resolve_state(a, start));
        emit(out, opt, std::move(body));
      }, build_dfa(spec, opt.caps));
    } else if (*exact) {
      std::visit([&](const auto& a) {
        nlohmann::json body{{"command", "exact-p"}, {"kind", spec.kind}, {"k", a.alphabet_size()}, {"L", L},
                            {"epsilon", epsilon}, {"comparator", to_string(cmp)},
                            {"threshold", static_cast<double>(cost_threshold(a.alphabet_size(), L, epsilon))}};
        ExactProbability p;
        if (max_states) {
          auto [best, arg] = exact_P_max(a, L, epsilon, cmp, opt.caps);
          p = best;
          body["argmax_state"] = state_label(a, arg);
        } else {
          p = exact_P(a, resolve_state(a, start), L, epsilon, cmp, opt.caps);
          body["start"] = state_label(a, resolve_state(a, start));
        }
        body["count"] = p.count;
        body["total"] = p.total;
        body["probability"] = p.value();
        emit(out, opt, std::move(body));
      }, build_dfa(spec, opt.caps));
    } else if (*decompose) {
      const Permutation tau = load_perm(perm, perm_file);
      std::visit([&](const auto& a) {
        auto body = to_json(xy_decompose(a, tau.images()));
        body["command"] = "decompose";
        body["kind"] = spec.kind;
        body["perm"] = to_json(tau);
        emit(out, opt, std::move(body));
      }, build_dfa(spec, opt.caps));
    } else if (*concentration) {
      const std::uint64_t s = concentration->count("--sample-seed") ? sample_seed : spec.seed;
      std::visit([&](const auto& a) {
        auto body = to_json(concentration_experiment(a, M, eps_star, samples, s, opt.threads, opt.caps));
        body["command"] = "concentration";
        body["kind"] = spec.kind;
        emit(out, opt, std::move(body));
      }, build_dfa(spec, opt.caps));
    } else if (*bounds) {
      nlohmann::json body{{"command", "bounds"}, {"bounds_version", kBoundsVersion}};
      std::optional<LogValue> logF;
      if (blogF) logF = LogValue{*blogF};
      if (bF) logF = LogValue::of(*bF);
      const LogBase base = log_base == "2" ? LogBase::Two : (log_base == "10" ? LogBase::Ten : LogBase::Natural);
      const auto num = [](double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(std::to_string(x)); };
      if (bk && bL) {
        body["birthday_ratio_log"] = num(birthday_ratio(*bk, *bL).log);
        if (beps) body["forL_bound_log"] = num(forL_bound(*bk, *bL, *beps).log);
      }
      if (bk && balpha) body["birthday_bound_log"] = num(birthday_bound(*bk, *balpha).log);
      if (beps_star) {
        const auto c = theorem_constants(*beps_star);
        body["theorem_constants"] = {{"epsilon", c.epsilon}, {"alpha", c.alpha}, {"c0", c.c0}};
        if (bM) {
          const auto cc = con_constants(*beps_star, *bM);
          body["con_constants"] = {{"c_con1", cc.c_con1}, {"c_con2_sup", cc.c_con2_sup}};
        }
      }
      if (bk && beps) {
        body["hoeffding_x_bound_log"] = num(hoeffding_x_bound(*bk, *beps).log);
        if (*bk >= 2) body["loworder_predicate"] = loworder_predicate(*bk, *beps, base);
      }
      if (bk && bn && logF) {
        if (br) body["infeasible"] = infeasibility(*bk, *br, *bn, *logF);
        body["gupta_check"] = gupta_check(*bk, *bn, *logF);
      }
      body["log_base"] = log_base;
      emit(out, opt, std::move(body));
    } else if (*bcp) {
      const Word w = load_word(word, word_file, r);
      nlohmann::json body{{"command", "bcp"}, {"word", to_json(w)}, {"bidirectional", !one_way}};
      if (!perm.empty() || !perm_file.empty()) {
        const Permutation tau = load_perm(perm, perm_file);
        body["perm"] = to_json(tau);
        body["contained"] = circular_contains(w, tau, !one_way);
      } else {
        require_perm_k(k, opt.caps);
        std::uint64_t count = 0;
        for_each_permutation(k, [&](const std::vector<int>& p) {
          if (circular_contains(w, Permutation(p), !one_way)) ++count;
        });
        body["k"] = k;
        body["count"] = count;
        body["k_factorial"] = detail::factorial(k);
        body["all_contained"] = count == detail::factorial(k);
      }
      emit(out, opt, std::move(body));
    }
  } catch (const ResourceError& e) {
    err << "resource error: " << e.what() << "\n";
    return kExitResource;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::overflow_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  return 0;
}

}  // namespace superpat::cli
