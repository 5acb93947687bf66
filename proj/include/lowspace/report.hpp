#pragma once

// Run reports. One document per run with top-level keys
//   schema (1), command, params, result, stats, timing
// Everything nondeterministic (wall clock) lives under "timing".

#include <cstdint>
#include <sstream>
#include <string>

#include <json.hpp>

#include "collide.hpp"
#include "results.hpp"
#include "stats.hpp"

namespace lowspace {

using json = nlohmann::ordered_json;

inline constexpr int kReportSchema = 1;

inline const char* to_string(collide_end e) noexcept {
  switch (e) {
    case collide_end::pair: return "pair";
    case collide_end::star: return "star";
    case collide_end::pure_cycle: return "pure_cycle";
    case collide_end::hash_collision: return "hash_collision";
    case collide_end::budget: return "budget";
  }
  return "?";
}

inline json to_json(const block_stats& b) {
  return {{"level", b.level},
          {"trials", b.trials},
          {"steps", b.steps},
          {"peak_words", b.peak_words},
          {"min_peak_words", b.min_peak_words},
          {"budget_exhausted", b.budget_exhausted}};
}

inline json to_json(const solve_stats& s) {
  json blocks = json::array();
  for (const auto& b : s.blocks) blocks.push_back(to_json(b));
  json j = {{"trials", s.trials},
            {"total_steps", s.total_steps},
            {"peak_words", s.peak_words},
            {"star_ends", s.star_ends},
            {"pure_cycles", s.pure_cycles},
            {"hash_collisions", s.hash_collisions},
            {"budget_hits", s.budget_hits},
            {"same_side_pairs", s.same_side_pairs},
            {"blocks", std::move(blocks)}};
  if (s.witness)
    j["witness"] = {{"level", s.witness->level},
                    {"trial", s.witness->trial},
                    {"start", s.witness->start}};
  else
    j["witness"] = nullptr;
  return j;
}

inline json to_json(const estimate& e) {
  return {{"hits", e.hits},
          {"samples", e.samples},
          {"point", e.point},
          {"ci95", {e.ci_lo, e.ci_hi}}};
}

inline json to_json(const solver_config& c) {
  json j = {{"seed", c.seed},
            {"trials_mult", c.trial_multiplier},
            {"budget_mult", c.budget_multiplier},
            {"workers", c.workers}};
  j["delta"] = c.failure_target ? json(*c.failure_target) : json(nullptr);
  j["f2_hint"] = c.f2_hint ? json(*c.f2_hint) : json(nullptr);
  return j;
}

struct report {
  std::string command;
  json params = json::object();
  json result = json::object();
  json stats = json::object();
  json timing = json::object();

  json document() const {
    return {{"schema", kReportSchema},
            {"command", command},
            {"params", params},
            {"result", result},
            {"stats", stats},
            {"timing", timing}};
  }

  std::string to_json_text() const { return document().dump(2) + "\n"; }

  // One "dotted.key = value" line per scalar leaf; arrays are indexed.
  std::string to_text() const {
    std::ostringstream out;
    flatten(out, "", document());
    return out.str();
  }

 private:
  static void flatten(std::ostringstream& out, const std::string& key, const json& j) {
    if (j.is_object()) {
      for (const auto& [k, v] : j.items()) flatten(out, key.empty() ? k : key + "." + k, v);
    } else if (j.is_array()) {
      if (j.empty()) out << key << " = []\n";
      for (std::size_t i = 0; i < j.size(); ++i)
        flatten(out, key + "[" + std::to_string(i) + "]", j[i]);
    } else {
      out << key << " = " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
    }
  }
};

}  // namespace lowspace
