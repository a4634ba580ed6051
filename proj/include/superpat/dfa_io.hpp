#pragma once

// Text forms of a WeightedDfa: JSON (round-trippable), Graphviz DOT and a
// plain table. States are written by label.

#include <sstream>
#include <string>
#include <unordered_map>

#include "json.hpp"

#include "dfa.hpp"
#include "error.hpp"

namespace superpat {

inline nlohmann::json cost_to_json(ExtCost c) {
  if (c.is_infinite()) return "inf";
  return c.value();
}

inline ExtCost cost_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() != "inf") throw DomainError("cost must be a non-negative integer or \"inf\"");
    return kInfinity;
  }
  if (!j.is_number_unsigned()) throw DomainError("cost must be a non-negative integer or \"inf\"");
  return ExtCost(j.get<std::uint64_t>());
}

inline nlohmann::json to_json(const WeightedDfa& a) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::uint64_t i = 0; i < a.state_count(); ++i) {
    const auto v = static_cast<WeightedDfa::state_type>(i);
    for (Letter t = 1; t <= a.alphabet_size(); ++t) {
      rows.push_back({{"state", a.label(v)}, {"letter", t}, {"next", a.label(a.next(v, t))}, {"cost", cost_to_json(a.cost(v, t))}});
    }
  }
  return {{"k", a.alphabet_size()},
          {"root", a.label(a.root())},
          {"states", std::vector<std::int64_t>(a.labels().begin(), a.labels().end())},
          {"rows", std::move(rows)}};
}

inline WeightedDfa dfa_from_json(const nlohmann::json& j) {
  try {
    const int k = j.at("k").get<int>();
    auto labels = j.at("states").get<std::vector<std::int64_t>>();
    std::unordered_map<std::int64_t, WeightedDfa::state_type> index;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (!index.emplace(labels[i], static_cast<WeightedDfa::state_type>(i)).second)
        throw DomainError("duplicate state label " + std::to_string(labels[i]));
    const auto lookup = [&](std::int64_t label) {
      auto it = index.find(label);
      if (it == index.end()) throw DomainError("unknown state label " + std::to_string(label));
      return it->second;
    };
    if (k < 1) throw DomainError("alphabet size must be positive");
    const std::size_t n = labels.size();
    std::vector<WeightedDfa::state_type> delta(n * k);
    std::vector<ExtCost> cost(n * k);
    std::vector<char> filled(n * k, 0);
    for (const auto& row : j.at("rows")) {
      const auto v = lookup(row.at("state").get<std::int64_t>());
      const int t = row.at("letter").get<int>();
      if (t < 1 || t > k) throw DomainError("row letter outside [k]");
      const std::size_t i = static_cast<std::size_t>(v) * k + (t - 1);
      if (filled[i]) throw DomainError("duplicate row");
      filled[i] = 1;
      delta[i] = lookup(row.at("next").get<std::int64_t>());
      cost[i] = cost_from_json(row.at("cost"));
    }
    for (char f : filled)
      if (!f) throw DomainError("rows must cover every (state, letter)");
    return WeightedDfa(k, std::move(labels), lookup(j.at("root").get<std::int64_t>()), std::move(delta), std::move(cost));
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed DFA JSON: ") + e.what());
  }
}

// One edge per (v,t) labelled "t (cost)". Infinite-cost self-loops are left
// out unless include_infinite is set.
inline std::string to_dot(const WeightedDfa& a, bool include_infinite = false) {
  std::ostringstream out;
  out << "digraph dfa {\n  rankdir=LR;\n  node [shape=circle];\n";
  for (std::uint64_t i = 0; i < a.state_count(); ++i) {
    const auto v = static_cast<WeightedDfa::state_type>(i);
    out << "  \"" << a.label(v) << "\"";
    if (v == a.root()) out << " [style=bold]";
    out << ";\n";
  }
  for (std::uint64_t i = 0; i < a.state_count(); ++i) {
    const auto v = static_cast<WeightedDfa::state_type>(i);
    for (Letter t = 1; t <= a.alphabet_size(); ++t) {
      const ExtCost c = a.cost(v, t);
      if (c.is_infinite() && a.next(v, t) == v && !include_infinite) continue;
      out << "  \"" << a.label(v) << "\" -> \"" << a.label(a.next(v, t)) << "\" [label=\"" << t << " (" << c << ")\"];\n";
    }
  }
  out << "}\n";
  return out.str();
}

inline std::string to_table(const WeightedDfa& a) {
  std::ostringstream out;
  out << "k=" << a.alphabet_size() << " root=" << a.label(a.root()) << " states=" << a.state_count() << "\n";
  for (std::uint64_t i = 0; i < a.state_count(); ++i) {
    const auto v = static_cast<WeightedDfa::state_type>(i);
    for (Letter t = 1; t <= a.alphabet_size(); ++t)
      out << a.label(v) << " " << t << " -> " << a.label(a.next(v, t)) << " " << a.cost(v, t) << "\n";
  }
  return out.str();
}

}  // namespace superpat
