#pragma once

// Grounding of lifted models into STRIPS tasks, plus execution semantics:
// progression, plan cost and plan validation.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "mrx/bitset.hpp"
#include "mrx/pddl.hpp"

namespace mrx {

using Cost = std::int64_t;
inline constexpr Cost kInfiniteCost = std::numeric_limits<Cost>::max();

inline bool is_finite(Cost c) { return c != kInfiniteCost; }

inline std::string cost_to_string(Cost c) { return is_finite(c) ? std::to_string(c) : "inf"; }

using FluentId = std::uint32_t;
using State = Bitset;

/// Joins a name and arguments with '_' (e.g. `move_loc1_loc2`). Used for the
/// grounded rendering of actions and atoms.
inline std::string joined_name(const std::string& head, const std::vector<std::string>& args) {
  std::string s = head;
  for (const auto& a : args) s += "_" + a;
  return s;
}

struct GroundAction {
  std::string schema;
  std::vector<std::string> args;
  std::vector<FluentId> pre;
  std::vector<FluentId> add;
  std::vector<FluentId> del;
  Cost cost = 1;

  /// Lookup key: schema and arguments separated by single spaces.
  std::string key() const {
    std::string k = schema;
    for (const auto& a : args) k += " " + a;
    return k;
  }
  std::string to_pddl() const { return "(" + key() + ")"; }
};

class UnknownAction : public std::runtime_error {
 public:
  explicit UnknownAction(const std::string& name)
      : std::runtime_error("unknown action '" + name + "'"), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

/// Grounded STRIPS task. Fluents and actions are stored in canonical
/// (lexicographic) order; immutable after construction.
struct GroundTask {
  std::vector<Atom> fluents;
  std::map<Atom, FluentId> fluent_index;
  std::vector<GroundAction> actions;
  std::unordered_map<std::string, std::size_t> action_index;
  std::vector<FluentId> init;
  std::vector<FluentId> goal;

  std::size_t num_fluents() const { return fluents.size(); }

  std::optional<FluentId> find_fluent(const Atom& a) const {
    auto it = fluent_index.find(a);
    if (it == fluent_index.end()) return std::nullopt;
    return it->second;
  }
  std::optional<std::size_t> find_action(const std::string& key) const {
    auto it = action_index.find(key);
    if (it == action_index.end()) return std::nullopt;
    return it->second;
  }

  State initial_state() const {
    State s(fluents.size());
    for (auto f : init) s.set(f);
    return s;
  }
  bool satisfies_goal(const State& s) const {
    for (auto f : goal)
      if (!s.test(f)) return false;
    return true;
  }
  bool applicable(const GroundAction& a, const State& s) const {
    for (auto f : a.pre)
      if (!s.test(f)) return false;
    return true;
  }
  /// (s \ del) ∪ add. Precondition must be checked by the caller.
  State apply(const GroundAction& a, const State& s) const {
    State out = s;
    for (auto f : a.del) out.reset(f);
    for (auto f : a.add) out.set(f);
    return out;
  }
};

/// One plan step: an action name and its object arguments.
struct PlanStep {
  std::string action;
  std::vector<std::string> args;

  std::string key() const {
    std::string k = action;
    for (const auto& a : args) k += " " + a;
    return k;
  }
  bool operator==(const PlanStep&) const = default;
};

struct Plan {
  std::vector<PlanStep> steps;

  std::size_t size() const { return steps.size(); }
  bool empty() const { return steps.empty(); }
  bool operator==(const Plan&) const = default;
};

class PlanFormatError : public std::runtime_error {
 public:
  PlanFormatError(int line, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line), message_(msg) {}

  int line() const noexcept { return line_; }
  const std::string& message() const noexcept { return message_; }

 private:
  int line_;
  std::string message_;
};

/// Reads a plan file: one `(name obj...)` per line; blank lines and `;`
/// comments are ignored.
inline Plan parse_plan(std::istream& in) {
  Plan plan;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto semi = line.find(';');
    if (semi != std::string::npos) line.resize(semi);
    std::size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    std::size_t e = line.find_last_not_of(" \t\r");
    std::string body = line.substr(b, e - b + 1);
    if (body.size() < 2 || body.front() != '(' || body.back() != ')')
      throw PlanFormatError(lineno, "expected '(action args...)'");
    body = body.substr(1, body.size() - 2);
    if (body.find_first_of("()") != std::string::npos)
      throw PlanFormatError(lineno, "nested parentheses in plan step");
    std::istringstream words(body);
    PlanStep step;
    std::string w;
    while (words >> w) {
      for (auto& c : w) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      if (step.action.empty())
        step.action = w;
      else
        step.args.push_back(w);
    }
    if (step.action.empty()) throw PlanFormatError(lineno, "empty plan step");
    plan.steps.push_back(std::move(step));
  }
  return plan;
}

inline Plan parse_plan(const std::string& text) {
  std::istringstream in(text);
  return parse_plan(in);
}

inline std::string format_plan(const Plan& plan) {
  std::string out;
  for (const auto& s : plan.steps) out += "(" + s.key() + ")\n";
  return out;
}

namespace detail {

inline Atom substitute(const Atom& a, const std::map<std::string, std::string>& binding) {
  Atom out{a.predicate, {}};
  out.args.reserve(a.args.size());
  for (const auto& arg : a.args) {
    auto it = binding.find(arg);
    out.args.push_back(it == binding.end() ? arg : it->second);
  }
  return out;
}

/// Calls fn(args) for every type-consistent binding of `params`.
template <class Fn>
void for_each_binding(const Domain& d, const std::map<std::string, std::string>& objects,
                      const std::vector<TypedName>& params, Fn&& fn) {
  std::vector<std::vector<std::string>> candidates;
  for (const auto& p : params) {
    std::vector<std::string> c;
    for (const auto& [name, type] : objects)
      if (d.is_subtype(type, p.type)) c.push_back(name);
    if (c.empty()) return;
    candidates.push_back(std::move(c));
  }
  std::vector<std::size_t> idx(params.size(), 0);
  std::vector<std::string> args(params.size());
  for (;;) {
    for (std::size_t k = 0; k < params.size(); ++k) args[k] = candidates[k][idx[k]];
    fn(args);
    std::size_t k = params.size();
    for (; k > 0; --k) {
      if (++idx[k - 1] < candidates[k - 1].size()) break;
      idx[k - 1] = 0;
    }
    if (k == 0) return;
  }
}

struct LooseAction {
  std::string schema;
  std::vector<std::string> args;
  std::vector<Atom> pre, add, del;
  Cost cost;
};

}  // namespace detail

/// Instantiates every schema with every type-consistent object binding.
/// No reachability pruning: edited models change reachability.
inline GroundTask ground(const LiftedModel& model) {
  const Domain& d = model.domain;
  const auto objects = model.all_objects();
  std::vector<detail::LooseAction> loose;
  std::map<Atom, FluentId> index;
  for (const auto& a : model.problem.init) index.emplace(a, 0);
  for (const auto& a : model.problem.goal) index.emplace(a, 0);
  for (const auto& [name, schema] : d.schemas) {
    detail::for_each_binding(d, objects, schema.parameters, [&](const std::vector<std::string>& args) {
      std::map<std::string, std::string> binding;
      for (std::size_t k = 0; k < args.size(); ++k) binding[schema.parameters[k].name] = args[k];
      detail::LooseAction la{name, args, {}, {}, {}, schema.cost};
      for (const auto& a : schema.preconditions) la.pre.push_back(detail::substitute(a, binding));
      for (const auto& a : schema.add_effects) la.add.push_back(detail::substitute(a, binding));
      for (const auto& a : schema.del_effects) la.del.push_back(detail::substitute(a, binding));
      for (const auto* v : {&la.pre, &la.add, &la.del})
        for (const auto& a : *v) index.emplace(a, 0);
      loose.push_back(std::move(la));
    });
  }
  GroundTask t;
  t.fluents.reserve(index.size());
  for (auto& [atom, id] : index) {
    id = static_cast<FluentId>(t.fluents.size());
    t.fluents.push_back(atom);
  }
  t.fluent_index = std::move(index);
  auto ids = [&](const std::vector<Atom>& atoms) {
    std::vector<FluentId> out;
    for (const auto& a : atoms) out.push_back(t.fluent_index.at(a));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };
  t.actions.reserve(loose.size());
  for (auto& la : loose) {
    GroundAction ga{la.schema, std::move(la.args), ids(la.pre), ids(la.add), ids(la.del), la.cost};
    // Binding two parameters to one object can make an atom both added and
    // deleted; add wins, as in PDDL.
    std::erase_if(ga.del, [&](FluentId f) { return std::binary_search(ga.add.begin(), ga.add.end(), f); });
    t.action_index.emplace(ga.key(), t.actions.size());
    t.actions.push_back(std::move(ga));
  }
  for (const auto& a : model.problem.init) t.init.push_back(t.fluent_index.at(a));
  for (const auto& a : model.problem.goal) t.goal.push_back(t.fluent_index.at(a));
  return t;
}

/// δ(s, a): the successor state, or nullopt when a is not applicable.
/// Throws UnknownAction when `action_key` does not ground in `task`.
inline std::optional<State> progress(const GroundTask& task, const State& s, const std::string& action_key) {
  auto idx = task.find_action(action_key);
  if (!idx) throw UnknownAction(action_key);
  const GroundAction& a = task.actions[*idx];
  if (!task.applicable(a, s)) return std::nullopt;
  return task.apply(a, s);
}

/// C(π, M): summed action cost when π reaches the goal from init, ∞ otherwise.
inline Cost plan_cost(const GroundTask& task, const Plan& plan) {
  State s = task.initial_state();
  Cost total = 0;
  for (const auto& step : plan.steps) {
    auto idx = task.find_action(step.key());
    if (!idx) return kInfiniteCost;
    const GroundAction& a = task.actions[*idx];
    if (!task.applicable(a, s)) return kInfiniteCost;
    s = task.apply(a, s);
    total += a.cost;
  }
  return task.satisfies_goal(s) ? total : kInfiniteCost;
}

struct ValidationReport {
  bool valid = false;
  Cost cost = kInfiniteCost;
  /// Index of the first step that could not be executed.
  std::optional<std::size_t> failing_step;
  bool unknown_action = false;
  std::vector<Atom> missing_preconditions;
  /// Goal atoms unmet after the last step (only when every step executed).
  std::vector<Atom> goal_gap;
};

inline ValidationReport validate(const GroundTask& task, const Plan& plan) {
  ValidationReport r;
  State s = task.initial_state();
  Cost total = 0;
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    auto idx = task.find_action(plan.steps[i].key());
    if (!idx) {
      r.failing_step = i;
      r.unknown_action = true;
      return r;
    }
    const GroundAction& a = task.actions[*idx];
    for (auto f : a.pre)
      if (!s.test(f)) r.missing_preconditions.push_back(task.fluents[f]);
    if (!r.missing_preconditions.empty()) {
      r.failing_step = i;
      return r;
    }
    s = task.apply(a, s);
    total += a.cost;
  }
  for (auto f : task.goal)
    if (!s.test(f)) r.goal_gap.push_back(task.fluents[f]);
  r.valid = r.goal_gap.empty();
  if (r.valid) r.cost = total;
  return r;
}

/// Rewrites a lifted model into an equivalent parameterless one: every
/// ground action becomes a schema named `schema_arg1_arg2` and every ground
/// atom a nullary predicate named the same way.
inline LiftedModel propositionalize(const LiftedModel& model) {
  const GroundTask t = ground(model);
  LiftedModel out;
  out.domain.name = model.domain.name;
  out.domain.requirements = model.domain.requirements;
  out.domain.requirements.erase(":typing");
  auto prop = [&](FluentId f) { return Atom{joined_name(t.fluents[f].predicate, t.fluents[f].args), {}}; };
  for (FluentId f = 0; f < t.fluents.size(); ++f) {
    Atom p = prop(f);
    out.domain.predicates.emplace(p.predicate, PredicateDecl{p.predicate, {}});
  }
  for (const auto& ga : t.actions) {
    ActionSchema s;
    s.name = joined_name(ga.schema, ga.args);
    for (auto f : ga.pre) s.preconditions.insert(prop(f));
    for (auto f : ga.add) s.add_effects.insert(prop(f));
    for (auto f : ga.del) s.del_effects.insert(prop(f));
    s.cost = static_cast<int>(ga.cost);
    out.domain.schemas.emplace(s.name, std::move(s));
  }
  out.problem.name = model.problem.name;
  out.problem.domain_name = model.problem.domain_name;
  for (auto f : t.init) out.problem.init.insert(prop(f));
  for (auto f : t.goal) out.problem.goal.insert(prop(f));
  return out;
}

/// Maps plan steps onto the names used by `propositionalize`.
inline Plan propositionalize(const Plan& plan) {
  Plan out;
  for (const auto& s : plan.steps) out.steps.push_back({joined_name(s.action, s.args), {}});
  return out;
}

}  // namespace mrx
