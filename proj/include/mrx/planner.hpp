#pragma once

// Cost-optimal planning over ground STRIPS tasks: A* with h_max (or blind
// uniform-cost search), with an optional strict upper bound used by the
// optimality test.

#include <chrono>
#include <cstdint>
#include <optional>
#include <queue>
#include <unordered_map>
#include <vector>

#include "mrx/ground.hpp"

namespace mrx {

struct Limits {
  std::uint64_t max_expansions = 1'000'000;
  std::chrono::milliseconds time_limit{60'000};
};

enum class PlanStatus { Solved, Unsolvable, BudgetExceeded };

inline const char* to_string(PlanStatus s) {
  switch (s) {
    case PlanStatus::Solved: return "solved";
    case PlanStatus::Unsolvable: return "unsolvable";
    case PlanStatus::BudgetExceeded: return "budget-exceeded";
  }
  return "?";
}

enum class SearchMode { Hmax, Blind };

struct PlanResult {
  PlanStatus status = PlanStatus::Unsolvable;
  Plan plan;
  Cost cost = kInfiniteCost;
  std::uint64_t expansions = 0;
  std::chrono::nanoseconds elapsed{0};
};

/// h_max over a fixed task. Holds per-task scratch space, so one instance
/// must not be shared between threads.
class HmaxHeuristic {
 public:
  explicit HmaxHeuristic(const GroundTask& task) : task_(task), consumers_(task.num_fluents()) {
    for (std::size_t a = 0; a < task.actions.size(); ++a) {
      const auto& act = task.actions[a];
      if (act.pre.empty()) free_actions_.push_back(a);
      for (auto f : act.pre) consumers_[f].push_back(a);
    }
  }

  Cost operator()(const State& s) {
    const std::size_t nf = task_.num_fluents();
    dist_.assign(nf, kInfiniteCost);
    remaining_.resize(task_.actions.size());
    support_.assign(task_.actions.size(), 0);
    for (std::size_t a = 0; a < task_.actions.size(); ++a) remaining_[a] = task_.actions[a].pre.size();
    using Entry = std::pair<Cost, FluentId>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> pq;
    auto relax = [&](std::size_t a, Cost base) {
      const auto& act = task_.actions[a];
      const Cost c = base + act.cost;
      for (auto f : act.add)
        if (c < dist_[f]) {
          dist_[f] = c;
          pq.emplace(c, f);
        }
    };
    for (FluentId f = 0; f < nf; ++f)
      if (s.test(f)) {
        dist_[f] = 0;
        pq.emplace(0, f);
      }
    for (auto a : free_actions_) relax(a, 0);
    std::size_t goals_left = task_.goal.size();
    while (!pq.empty() && goals_left > 0) {
      auto [d, f] = pq.top();
      pq.pop();
      if (d != dist_[f]) continue;
      for (auto g : task_.goal)
        if (g == f) --goals_left;
      for (auto a : consumers_[f]) {
        if (d > support_[a]) support_[a] = d;
        if (--remaining_[a] == 0) relax(a, support_[a]);
      }
    }
    Cost h = 0;
    for (auto g : task_.goal) h = std::max(h, dist_[g]);
    return h;
  }

 private:
  const GroundTask& task_;
  std::vector<std::vector<std::size_t>> consumers_;
  std::vector<std::size_t> free_actions_;
  std::vector<Cost> dist_;
  std::vector<std::size_t> remaining_;
  std::vector<Cost> support_;
};

/// A* search. Only plans with cost strictly below `bound` are sought;
/// Unsolvable then means "no plan cheaper than bound".
inline PlanResult astar(const GroundTask& task, const Limits& limits, SearchMode mode = SearchMode::Hmax,
                        Cost bound = kInfiniteCost) {
  const auto start = std::chrono::steady_clock::now();
  const auto deadline = start + limits.time_limit;
  PlanResult result;
  auto finish = [&](PlanStatus st) {
    result.status = st;
    result.elapsed = std::chrono::steady_clock::now() - start;
    return result;
  };

  struct Node {
    State state;
    Cost g;
    std::int64_t parent;
    std::size_t action;
  };
  std::vector<Node> nodes;
  std::unordered_map<State, std::size_t, BitsetHash> best;
  struct Entry {
    Cost f, h;
    std::uint64_t seq;
    std::size_t node;
    bool operator>(const Entry& o) const {
      if (f != o.f) return f > o.f;
      if (h != o.h) return h > o.h;
      return seq > o.seq;
    }
  };
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  std::uint64_t seq = 0;
  std::optional<HmaxHeuristic> hmax;
  if (mode == SearchMode::Hmax) hmax.emplace(task);
  auto heuristic = [&](const State& s) -> Cost { return hmax ? (*hmax)(s) : 0; };

  State s0 = task.initial_state();
  Cost h0 = heuristic(s0);
  if (!is_finite(h0) || h0 >= bound) return finish(PlanStatus::Unsolvable);
  nodes.push_back({s0, 0, -1, 0});
  best.emplace(s0, 0);
  open.push({h0, h0, seq++, 0});

  while (!open.empty()) {
    Entry top = open.top();
    open.pop();
    const Node& n = nodes[top.node];
    if (best.at(n.state) != top.node) continue;
    if (top.f >= bound) break;
    if (task.satisfies_goal(n.state)) {
      result.cost = n.g;
      std::vector<std::size_t> acts;
      for (std::int64_t i = static_cast<std::int64_t>(top.node); nodes[i].parent >= 0; i = nodes[i].parent)
        acts.push_back(nodes[i].action);
      for (auto it = acts.rbegin(); it != acts.rend(); ++it)
        result.plan.steps.push_back({task.actions[*it].schema, task.actions[*it].args});
      return finish(PlanStatus::Solved);
    }
    if (++result.expansions > limits.max_expansions) return finish(PlanStatus::BudgetExceeded);
    if ((result.expansions & 255) == 0 && std::chrono::steady_clock::now() > deadline)
      return finish(PlanStatus::BudgetExceeded);
    const State cur = n.state;
    const Cost g = n.g;
    for (std::size_t a = 0; a < task.actions.size(); ++a) {
      const auto& act = task.actions[a];
      if (!task.applicable(act, cur)) continue;
      State next = task.apply(act, cur);
      const Cost ng = g + act.cost;
      auto it = best.find(next);
      if (it != best.end() && nodes[it->second].g <= ng) continue;
      const Cost h = heuristic(next);
      if (!is_finite(h) || ng + h >= bound) continue;
      nodes.push_back({next, ng, static_cast<std::int64_t>(top.node), a});
      const std::size_t id = nodes.size() - 1;
      if (it != best.end())
        it->second = id;
      else
        best.emplace(std::move(next), id);
      open.push({ng + h, h, seq++, id});
    }
  }
  return finish(PlanStatus::Unsolvable);
}

/// π* and C*_M.
inline PlanResult optimal_plan(const GroundTask& task, const Limits& limits = {},
                               SearchMode mode = SearchMode::Hmax) {
  return astar(task, limits, mode);
}

/// C*_M without the plan: ∞ when unsolvable. Budget exhaustion is reported
/// through `status`.
inline PlanResult optimal_cost(const GroundTask& task, const Limits& limits = {},
                               SearchMode mode = SearchMode::Hmax) {
  PlanResult r = astar(task, limits, mode);
  r.plan = {};
  return r;
}

enum class Optimality { Optimal, NotOptimal, BudgetExceeded };

struct OptimalityVerdict {
  Optimality verdict = Optimality::NotOptimal;
  Cost plan_cost = kInfiniteCost;
  /// When NotOptimal and the task is solvable: an optimal plan of the task.
  std::optional<Plan> cheaper_plan;
  Cost optimal_cost = kInfiniteCost;
  bool optimal_cost_known = false;
  std::uint64_t expansions = 0;
  int planner_calls = 0;
};

/// C(π, M) = C*_M? A plan that fails to reach the goal is never optimal.
/// The search is bounded by C(π, M), so an optimal plan is returned
/// whenever a cheaper one exists. With `want_plan` the full optimum is also
/// computed for invalid plans.
inline OptimalityVerdict is_plan_optimal(const GroundTask& task, const Plan& plan, const Limits& limits = {},
                                         bool want_plan = false) {
  OptimalityVerdict v;
  v.plan_cost = plan_cost(task, plan);
  if (!is_finite(v.plan_cost) && !want_plan) return v;
  PlanResult r = astar(task, limits, SearchMode::Hmax, v.plan_cost);
  v.expansions = r.expansions;
  v.planner_calls = 1;
  switch (r.status) {
    case PlanStatus::BudgetExceeded:
      v.verdict = Optimality::BudgetExceeded;
      break;
    case PlanStatus::Solved:
      v.verdict = Optimality::NotOptimal;
      v.cheaper_plan = std::move(r.plan);
      v.optimal_cost = r.cost;
      v.optimal_cost_known = true;
      break;
    case PlanStatus::Unsolvable:
      v.verdict = is_finite(v.plan_cost) ? Optimality::Optimal : Optimality::NotOptimal;
      v.optimal_cost = v.plan_cost;
      v.optimal_cost_known = true;
      break;
  }
  return v;
}

}  // namespace mrx
