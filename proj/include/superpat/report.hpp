#pragma once

// JSON documents for results. nlohmann::json keeps object keys sorted, which
// gives every report a stable key order; all reports carry schema_version.

#include <string>

#include "json.hpp"

#include "bounds.hpp"
#include "patterns.hpp"
#include "walks.hpp"
#include "word.hpp"

namespace superpat {

inline constexpr int kSchemaVersion = 1;

inline nlohmann::json emit_report(nlohmann::json body) {
  body["schema_version"] = kSchemaVersion;
  return body;
}

inline std::string dump_report(const nlohmann::json& report) { return report.dump(2) + "\n"; }

inline nlohmann::json to_json(const Caps& c) {
  return {{"max_perm_k", c.max_perm_k},         {"max_enumeration", c.max_enumeration},
          {"f_oracle_max_k", c.f_oracle_max_k}, {"f_oracle_max_n", c.f_oracle_max_n},
          {"max_full_subset_k", c.max_full_subset_k}, {"max_lazy_subset_k", c.max_lazy_subset_k}};
}

inline nlohmann::json to_json(const Word& w) {
  return std::vector<int>(w.letters().begin(), w.letters().end());
}

inline nlohmann::json to_json(const Permutation& p) {
  return std::vector<int>(p.images().begin(), p.images().end());
}

inline nlohmann::json to_json(const EstimateReport& r) {
  return {{"estimate", r.estimate}, {"ci_low", r.ci_low},         {"ci_high", r.ci_high},
          {"samples", r.samples},   {"successes", r.successes},   {"seed", r.seed},
          {"threshold", r.threshold}, {"comparator", to_string(r.comparator)},
          {"k", r.k},               {"L", r.L},                   {"epsilon", r.epsilon},
          {"confidence", 0.99},     {"bounds_version", kBoundsVersion}};
}

inline EstimateReport estimate_report_from_json(const nlohmann::json& j) {
  EstimateReport r;
  r.estimate = j.at("estimate").get<double>();
  r.ci_low = j.at("ci_low").get<double>();
  r.ci_high = j.at("ci_high").get<double>();
  r.samples = j.at("samples").get<std::uint64_t>();
  r.successes = j.at("successes").get<std::uint64_t>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.threshold = j.at("threshold").get<double>();
  r.comparator = j.at("comparator").get<std::string>() == "<" ? Comparator::Less : Comparator::LessEqual;
  r.k = j.at("k").get<int>();
  r.L = j.at("L").get<int>();
  r.epsilon = j.at("epsilon").get<double>();
  return r;
}

inline nlohmann::json to_json(const Decomposition& d) {
  return {{"C", d.C}, {"X", d.X}, {"Y", d.Y}, {"S_size", d.S_size}, {"total", d.total},
          {"sum_x", d.sum_x()}, {"sum_y", d.sum_y()}};
}

inline nlohmann::json to_json(const ConcentrationReport& r) {
  nlohmann::json cells = nlohmann::json::array();
  const double bound = std::exp(-r.c_con1 * r.k);
  for (const auto& c : r.cells) {
    cells.push_back({{"m1", c.m1},
                     {"m2", c.m2},
                     {"con1_events", c.con1_events},
                     {"con1_frequency", r.frequency(c.con1_events)},
                     {"con2_events", c.con2_events},
                     {"con2_frequency", r.frequency(c.con2_events)},
                     {"con2_root_events", c.con2_root_events},
                     {"con2_root_frequency", r.frequency(c.con2_root_events)},
                     {"bound", bound}});
  }
  return {{"k", r.k}, {"M", r.M}, {"epsilon_star", r.epsilon_star}, {"samples", r.samples}, {"seed", r.seed},
          {"c_con1", r.c_con1}, {"cells", std::move(cells)}, {"bounds_version", kBoundsVersion}};
}

inline nlohmann::json to_json(const XSumReport& r) {
  return {{"k", r.k}, {"samples", r.samples}, {"seed", r.seed}, {"mean", r.mean()}, {"variance", r.variance()},
          {"threshold", r.threshold}, {"at_most_threshold", r.at_most_threshold}, {"frequency", r.frequency()}};
}

}  // namespace superpat
