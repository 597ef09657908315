#pragma once

// Test oracles and fixture helpers. The oracles here deliberately avoid the
// library's planner: plain Dijkstra over `progress`, and subset enumeration.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <queue>
#include <random>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "mrx/mrx.hpp"

namespace mrx::testing {

inline std::string fixture_path(const std::string& rel) { return std::string(MRX_FIXTURES) + "/" + rel; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("missing file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline LiftedModel load(const std::string& domain_rel, const std::string& problem_rel) {
  const Domain d = parse_domain(slurp(fixture_path(domain_rel)), domain_rel);
  return parse_problem(slurp(fixture_path(problem_rel)), d, problem_rel);
}

inline LiftedModel fetch_robot() { return load("fetch/domain.pddl", "fetch/p1.pddl"); }
inline LiftedModel fetch_human(int which) {
  return load("fetch/human" + std::to_string(which) + "-domain.pddl", "fetch/p1.pddl");
}
inline Plan fetch_plan() { return parse_plan(slurp(fixture_path("fetch/plan.txt"))); }

inline std::vector<BenchProblem> bench_problems() { return load_fixture_dir(fixture_path("bench")); }

/// Cheapest goal cost found by Dijkstra, stopping at `bound` (exclusive).
/// nullopt when the state cap is hit.
inline std::optional<Cost> dijkstra_cost(const GroundTask& task, Cost bound = kInfiniteCost,
                                         std::size_t state_cap = 2'000'000) {
  using Entry = std::pair<Cost, std::size_t>;
  std::vector<State> states{task.initial_state()};
  std::vector<Cost> dist{0};
  std::unordered_map<State, std::size_t, BitsetHash> ids{{states[0], 0}};
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> pq;
  pq.emplace(0, 0);
  while (!pq.empty()) {
    auto [g, id] = pq.top();
    pq.pop();
    if (g != dist[id]) continue;
    if (g >= bound) break;
    if (task.satisfies_goal(states[id])) return g;
    for (const auto& a : task.actions) {
      auto next = progress(task, states[id], a.key());
      if (!next) continue;
      const Cost ng = g + a.cost;
      auto it = ids.find(*next);
      if (it == ids.end()) {
        if (states.size() >= state_cap) return std::nullopt;
        ids.emplace(*next, states.size());
        states.push_back(*next);
        dist.push_back(ng);
        pq.emplace(ng, states.size() - 1);
      } else if (ng < dist[it->second]) {
        dist[it->second] = ng;
        pq.emplace(ng, it->second);
      }
    }
  }
  return kInfiniteCost;
}

/// Number of states reachable from the initial state, or nullopt past `cap`.
inline std::optional<std::size_t> reachable_states(const GroundTask& task, std::size_t cap) {
  std::vector<State> frontier{task.initial_state()};
  std::unordered_map<State, bool, BitsetHash> seen{{frontier[0], true}};
  while (!frontier.empty()) {
    State s = std::move(frontier.back());
    frontier.pop_back();
    for (const auto& a : task.actions) {
      if (!task.applicable(a, s)) continue;
      State n = task.apply(a, s);
      if (seen.emplace(n, true).second) {
        if (seen.size() > cap) return std::nullopt;
        frontier.push_back(std::move(n));
      }
    }
  }
  return seen.size();
}

/// Is `plan` optimal in `task`, decided by Dijkstra. nullopt if the cap hit.
inline std::optional<bool> oracle_optimal(const GroundTask& task, const Plan& plan) {
  const Cost c = plan_cost(task, plan);
  if (!is_finite(c)) return false;
  auto best = dijkstra_cost(task, c);
  if (!best) return std::nullopt;
  return !is_finite(*best) || *best >= c;
}

/// Model obtained by applying `edits` to the human model, or nullopt when
/// the result is not a model.
inline std::optional<LiftedModel> edited_human(const MrpInstance& inst, const std::vector<Edit>& edits) {
  ModelState s = apply_edits(inst.human_state(), edits);
  if (!is_well_formed(s)) return std::nullopt;
  return gamma_inverse(s, inst.model_template());
}

/// Calls fn(subset) for every subset of `items` in order of increasing size;
/// stops when fn returns true.
template <class T>
void for_each_subset_by_size(const std::vector<T>& items, const std::function<bool(const std::vector<T>&)>& fn) {
  const std::size_t n = items.size();
  for (std::size_t k = 0; k <= n; ++k) {
    std::vector<bool> pick(n, false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k), true);
    do {
      std::vector<T> sub;
      for (std::size_t i = 0; i < n; ++i)
        if (pick[i]) sub.push_back(items[i]);
      if (fn(sub)) return;
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }
}

/// Brute-force minimum size of a complete explanation. Completeness is judged
/// by Dijkstra; nullopt if any check hit the cap.
inline std::optional<std::size_t> brute_force_min_complete(const MrpInstance& inst) {
  const auto delta = model_delta(inst.human_state(), inst.robot_state());
  std::optional<std::size_t> found;
  bool capped = false;
  for_each_subset_by_size<Edit>(delta, [&](const std::vector<Edit>& sub) {
    auto m = edited_human(inst, sub);
    if (!m) return false;
    auto ok = oracle_optimal(ground(*m), inst.plan());
    if (!ok) {
      capped = true;
      return true;
    }
    if (*ok) found = sub.size();
    return *ok;
  });
  if (capped) return std::nullopt;
  return found;
}

/// Every subset of `rest` added on top of `base` keeps the plan optimal
/// (Dijkstra-judged); ill-formed intermediate states are skipped.
inline bool oracle_monotonic(const MrpInstance& inst, const std::vector<Edit>& base, const std::vector<Edit>& rest) {
  const std::size_t n = rest.size();
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    std::vector<Edit> edits = base;
    for (std::size_t i = 0; i < n; ++i)
      if ((m >> i) & 1u) edits.push_back(rest[i]);
    auto model = edited_human(inst, edits);
    if (!model) continue;
    auto ok = oracle_optimal(ground(*model), inst.plan());
    if (!ok || !*ok) return false;
  }
  return true;
}

inline std::vector<Edit> remaining_delta(const MrpInstance& inst, const std::vector<Edit>& used) {
  std::vector<Edit> out;
  for (const auto& e : model_delta(inst.human_state(), inst.robot_state()))
    if (std::find(used.begin(), used.end(), e) == used.end()) out.push_back(e);
  return out;
}

struct GeneratedInstance {
  std::string label;
  MrpInstance inst;
};

/// Seeded fault-injection instances over the bench fixtures.
inline std::vector<GeneratedInstance> generate_instances(const std::vector<std::size_t>& fault_counts,
                                                         std::uint64_t seed, int seeds_per_count = 1,
                                                         Granularity g = Granularity::Lifted) {
  std::vector<GeneratedInstance> out;
  for (const auto& p : bench_problems()) {
    for (auto n : fault_counts) {
      for (int k = 0; k < seeds_per_count; ++k) {
        FaultSpec spec;
        spec.seed = seed + static_cast<std::uint64_t>(k) * 1000 + n;
        spec.n_faults = n;
        spec.granularity = g;
        LiftedModel human = inject(p.robot, spec);
        out.push_back({p.domain + "/" + p.problem + "/f" + std::to_string(n) + "s" + std::to_string(spec.seed),
                       MrpInstance::with_optimal_plan(p.robot, std::move(human), g)});
      }
    }
  }
  return out;
}

}  // namespace mrx::testing
