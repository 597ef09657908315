#pragma once

// Explanation generators for a model reconciliation instance: a plan that is
// optimal in the planner's (robot's) model, and the human's divergent model.
// Every explanation is a set of edits oriented from the human model towards
// the robot model.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "mrx/bitset.hpp"
#include "mrx/ground.hpp"
#include "mrx/model_space.hpp"
#include "mrx/planner.hpp"

namespace mrx {

enum class Granularity { Lifted, Grounded };

enum class ExplanationClass { Mpe, Ppe, Mce, MceApprox, Mme };

inline const char* to_string(ExplanationClass c) {
  switch (c) {
    case ExplanationClass::Mpe: return "mpe";
    case ExplanationClass::Ppe: return "ppe";
    case ExplanationClass::Mce: return "mce";
    case ExplanationClass::MceApprox: return "mce-approx";
    case ExplanationClass::Mme: return "mme";
  }
  return "?";
}

inline std::optional<ExplanationClass> parse_explanation_class(std::string_view s) {
  for (auto c : {ExplanationClass::Mpe, ExplanationClass::Ppe, ExplanationClass::Mce,
                 ExplanationClass::MceApprox, ExplanationClass::Mme})
    if (s == to_string(c)) return c;
  return std::nullopt;
}

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The plan handed to an instance is not optimal in the robot model.
class MrpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Delta too large for exhaustive monotonic search.
class SearchSpaceTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExplainerStats {
  std::uint64_t expansions = 0;
  std::uint64_t planner_calls = 0;
  std::uint64_t pruned = 0;
  std::chrono::nanoseconds elapsed{0};

  double elapsed_ms() const { return std::chrono::duration<double, std::milli>(elapsed).count(); }
};

struct Explanation {
  ExplanationClass cls = ExplanationClass::Mpe;
  std::vector<Edit> edits;
  ExplainerStats stats;
  std::vector<std::string> notes;

  std::size_t size() const { return edits.size(); }
};

struct ExplainOptions {
  Limits planner;
  std::uint64_t max_model_expansions = 1'000'000;
  /// Wall-clock cap for a whole explainer call; zero means none.
  std::chrono::milliseconds time_limit{0};
  /// Prefer edits on actions of the explained plan or of the current
  /// model's optimal plan when popping among equal-size candidates.
  bool use_heuristic = true;
  /// Randomised tie-breaking among equally ranked candidates.
  std::optional<std::uint64_t> seed;
  /// Largest delta for which exact monotonic search is attempted.
  std::size_t mme_max_delta = 16;
  /// Prune supersets of failed change sets during monotonic search.
  bool mme_pruning = true;
};

/// ⟨π*, ⟨M^R, M^H⟩⟩. Construction verifies that π* is optimal in M^R.
class MrpInstance {
 public:
  MrpInstance(LiftedModel robot, LiftedModel human, Plan plan, Granularity g = Granularity::Lifted,
              const Limits& limits = {})
      : granularity_(g), source_plan_(std::move(plan)) {
    if (g == Granularity::Grounded) {
      robot_ = propositionalize(robot);
      human_ = propositionalize(human);
      plan_ = propositionalize(source_plan_);
    } else {
      robot_ = std::move(robot);
      human_ = std::move(human);
      plan_ = source_plan_;
    }
    template_ = merge_template(robot_, human_);
    robot_state_ = gamma(robot_);
    human_state_ = gamma(human_);
    const GroundTask task = ground(robot_);
    const OptimalityVerdict v = is_plan_optimal(task, plan_, limits);
    if (v.verdict == Optimality::BudgetExceeded)
      throw BudgetExceeded("budget exceeded while checking the plan in the robot model");
    if (!is_finite(v.plan_cost)) throw MrpError("plan is not executable in the robot model");
    if (v.verdict != Optimality::Optimal)
      throw MrpError("plan cost " + std::to_string(v.plan_cost) + " exceeds the robot model optimum " +
                     std::to_string(v.optimal_cost));
    plan_cost_ = v.plan_cost;
  }

  /// Builds an instance around an optimal plan computed in the robot model.
  static MrpInstance with_optimal_plan(LiftedModel robot, LiftedModel human, Granularity g = Granularity::Lifted,
                                       const Limits& limits = {}) {
    PlanResult r = optimal_plan(ground(robot), limits);
    if (r.status == PlanStatus::BudgetExceeded) throw BudgetExceeded("budget exceeded planning in the robot model");
    if (r.status != PlanStatus::Solved) throw MrpError("robot model is unsolvable");
    return MrpInstance(std::move(robot), std::move(human), std::move(r.plan), g, limits);
  }

  Granularity granularity() const { return granularity_; }
  /// Working models: propositionalised in grounded mode.
  const LiftedModel& robot() const { return robot_; }
  const LiftedModel& human() const { return human_; }
  /// The plan in working-model action names.
  const Plan& plan() const { return plan_; }
  /// The plan as supplied (lifted action names).
  const Plan& source_plan() const { return source_plan_; }
  Cost plan_cost() const { return plan_cost_; }
  const LiftedModel& model_template() const { return template_; }
  const ModelState& robot_state() const { return robot_state_; }
  const ModelState& human_state() const { return human_state_; }

 private:
  Granularity granularity_;
  LiftedModel robot_, human_, template_;
  Plan source_plan_, plan_;
  ModelState robot_state_, human_state_;
  Cost plan_cost_ = 0;
};

/// Each step of `plan` supplies an add effect that a later step (or the
/// goal) needs, with no deletion of it in between. Invalid steps fail.
inline bool every_step_has_causal_link(const GroundTask& task, const Plan& plan) {
  std::vector<const GroundAction*> steps;
  for (const auto& s : plan.steps) {
    auto idx = task.find_action(s.key());
    if (!idx) return false;
    steps.push_back(&task.actions[*idx]);
  }
  auto contains = [](const std::vector<FluentId>& v, FluentId f) { return std::binary_search(v.begin(), v.end(), f); };
  for (std::size_t i = 0; i < steps.size(); ++i) {
    bool linked = false;
    for (FluentId p : steps[i]->add) {
      for (std::size_t k = i + 1; k <= steps.size() && !linked; ++k) {
        const bool consumes = k < steps.size() ? contains(steps[k]->pre, p)
                                               : std::binary_search(task.goal.begin(), task.goal.end(), p);
        if (consumes) {
          linked = true;
          break;
        }
        if (k < steps.size() && contains(steps[k]->del, p)) break;
      }
      if (linked) break;
    }
    if (!linked) return false;
  }
  return true;
}

namespace detail {

/// Models between two endpoints, addressed by which delta features have
/// been flipped relative to the start endpoint.
class ModelSpace {
 public:
  struct Eval {
    bool well_formed = false;
    Cost plan_cost = kInfiniteCost;
    Optimality optimality = Optimality::NotOptimal;
    std::optional<Plan> optimal_plan;
    bool plan_searched = false;
  };

  ModelSpace(const MrpInstance& inst, bool from_human, const ExplainOptions& opts, ExplainerStats& stats)
      : inst_(inst), opts_(opts), stats_(stats), start_(std::chrono::steady_clock::now()) {
    const auto& h = inst.human_state().features;
    const auto& r = inst.robot_state().features;
    std::set_intersection(h.begin(), h.end(), r.begin(), r.end(), std::inserter(common_.features, common_.features.end()));
    std::set_symmetric_difference(h.begin(), h.end(), r.begin(), r.end(), std::back_inserter(delta_));
    in_robot_ = Bitset(delta_.size());
    for (std::size_t i = 0; i < delta_.size(); ++i)
      if (r.count(delta_[i])) in_robot_.set(i);
    base_ = from_human ? (in_robot_ ^ all_bits()) : in_robot_;
    for (const auto& s : inst.plan().steps) plan_actions_.insert(s.action);
  }

  std::size_t size() const { return delta_.size(); }
  const std::vector<ModelFeature>& delta() const { return delta_; }
  Bitset empty_set() const { return Bitset(delta_.size()); }
  Bitset all_bits() const {
    Bitset b(delta_.size());
    for (std::size_t i = 0; i < delta_.size(); ++i) b.set(i);
    return b;
  }

  /// Edit for delta feature i, oriented human -> robot.
  Edit edit(std::size_t i) const {
    return {in_robot_.test(i) ? EditSign::Add : EditSign::Remove, delta_[i]};
  }
  std::vector<Edit> edits(const Bitset& flips) const {
    std::vector<Edit> out;
    for (auto i : flips.indices()) out.push_back(edit(i));
    std::sort(out.begin(), out.end());
    return out;
  }
  /// Index of an edit within the delta, if it is a legal human -> robot edit.
  std::optional<std::size_t> index_of(const Edit& e) const {
    auto it = std::lower_bound(delta_.begin(), delta_.end(), e.feature);
    if (it == delta_.end() || !(*it == e.feature)) return std::nullopt;
    std::size_t i = static_cast<std::size_t>(it - delta_.begin());
    if (edit(i).sign != e.sign) return std::nullopt;
    return i;
  }

  ModelState state(const Bitset& flips) const {
    ModelState s = common_;
    const Bitset present = base_ ^ flips;
    for (auto i : present.indices()) s.features.insert(delta_[i]);
    return s;
  }

  bool relevant(std::size_t i, const std::set<std::string>& extra_actions) const {
    const ModelFeature& f = delta_[i];
    if (!f.is_action_feature()) return true;
    return plan_actions_.count(f.action) || extra_actions.count(f.action);
  }

  /// Plan cost and optimality of the explained plan in the model at `flips`.
  /// Memoised on the flip set, which identifies the model canonically
  /// within this space.
  const Eval& evaluate(const Bitset& flips, bool want_plan) {
    check_time();
    auto it = memo_.find(flips);
    if (it != memo_.end() && (!want_plan || it->second.plan_searched || it->second.optimality == Optimality::Optimal))
      return it->second;
    Eval e;
    const ModelState s = state(flips);
    if (!is_well_formed(s)) return memo_[flips] = e;
    e.well_formed = true;
    const GroundTask task = ground(gamma_inverse(s, inst_.model_template()));
    OptimalityVerdict v = is_plan_optimal(task, inst_.plan(), opts_.planner, want_plan);
    stats_.planner_calls += v.planner_calls;
    if (v.verdict == Optimality::BudgetExceeded) throw BudgetExceeded("planner budget exceeded");
    e.plan_cost = v.plan_cost;
    e.optimality = v.verdict;
    e.optimal_plan = std::move(v.cheaper_plan);
    e.plan_searched = v.planner_calls > 0;
    return memo_[flips] = std::move(e);
  }

  /// Plan cost of an arbitrary plan in the model at `flips` (no search).
  Cost cost_of(const Bitset& flips, const Plan& plan, bool* causal_links = nullptr) {
    check_time();
    const ModelState s = state(flips);
    if (!is_well_formed(s)) return kInfiniteCost;
    const GroundTask task = ground(gamma_inverse(s, inst_.model_template()));
    if (causal_links) *causal_links = every_step_has_causal_link(task, plan);
    return plan_cost(task, plan);
  }

  void count_expansion() {
    if (++stats_.expansions > opts_.max_model_expansions) throw BudgetExceeded("model-space expansion budget exceeded");
  }

  void check_time() const {
    if (opts_.time_limit.count() > 0 && std::chrono::steady_clock::now() - start_ > opts_.time_limit)
      throw BudgetExceeded("explainer time limit exceeded");
  }

 private:
  const MrpInstance& inst_;
  const ExplainOptions& opts_;
  ExplainerStats& stats_;
  std::chrono::steady_clock::time_point start_;
  ModelState common_;
  std::vector<ModelFeature> delta_;
  Bitset in_robot_;
  Bitset base_;
  std::set<std::string> plan_actions_;
  std::unordered_map<Bitset, Eval, BitsetHash> memo_;
};

class StatsTimer {
 public:
  explicit StatsTimer(ExplainerStats& s) : s_(s), t0_(std::chrono::steady_clock::now()) {}
  ~StatsTimer() { s_.elapsed = std::chrono::steady_clock::now() - t0_; }

 private:
  ExplainerStats& s_;
  std::chrono::steady_clock::time_point t0_;
};

inline std::set<std::string> action_names(const Plan& p) {
  std::set<std::string> out;
  for (const auto& s : p.steps) out.insert(s.action);
  return out;
}

/// Best-first search over flip sets from the human model, cardinality first.
/// `is_goal` decides whether a popped model explains the plan; it may fill
/// `plan_hint` with the actions of the current model's optimal plan.
template <class GoalFn>
Bitset search_from_human(ModelSpace& space, const ExplainOptions& opts, GoalFn&& is_goal) {
  struct Entry {
    std::size_t size;
    int rank;
    std::uint64_t tie;
    Bitset flips;
    bool operator>(const Entry& o) const {
      if (size != o.size) return size > o.size;
      if (rank != o.rank) return rank > o.rank;
      return tie > o.tie;
    }
  };
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  std::unordered_map<Bitset, int, BitsetHash> best_rank;
  std::unordered_set<Bitset, BitsetHash> closed;
  std::mt19937_64 rng(opts.seed.value_or(0));
  std::uint64_t seq = 0;
  auto tie = [&] { return opts.seed ? rng() : seq++; };

  Bitset root = space.empty_set();
  open.push({0, 0, tie(), root});
  best_rank.emplace(root, 0);
  while (!open.empty()) {
    Entry e = open.top();
    open.pop();
    if (closed.count(e.flips) || best_rank.at(e.flips) != e.rank) continue;
    closed.insert(e.flips);
    space.count_expansion();
    std::set<std::string> hint;
    if (is_goal(e.flips, hint)) return e.flips;
    for (std::size_t i = 0; i < space.size(); ++i) {
      if (e.flips.test(i)) continue;
      Bitset child = e.flips;
      child.set(i);
      if (closed.count(child)) continue;
      const int rank = (!opts.use_heuristic || space.relevant(i, hint)) ? 0 : 1;
      auto it = best_rank.find(child);
      if (it != best_rank.end() && it->second <= rank) continue;
      best_rank[child] = rank;
      open.push({e.size + 1, rank, tie(), std::move(child)});
    }
  }
  throw std::logic_error("model-space search exhausted without reaching the robot model");
}

inline Explanation make_explanation(ExplanationClass cls, std::vector<Edit> edits, const ExplainerStats& stats) {
  Explanation e;
  e.cls = cls;
  std::sort(edits.begin(), edits.end());
  e.edits = std::move(edits);
  e.stats = stats;
  return e;
}

}  // namespace detail

/// Model patch: the whole difference Γ(M^R) Δ Γ(M^H).
inline Explanation mpe(const MrpInstance& inst) {
  ExplainerStats stats;
  std::vector<Edit> edits;
  {
    detail::StatsTimer timer(stats);
    edits = model_delta(inst.human_state(), inst.robot_state());
  }
  return detail::make_explanation(ExplanationClass::Mpe, std::move(edits), stats);
}

/// Plan patch: differences on actions used by the plan, plus init/goal
/// differences on atoms those steps mention in either model.
inline Explanation ppe(const MrpInstance& inst) {
  ExplainerStats stats;
  std::vector<Edit> edits;
  bool touched_init_goal = false;
  {
    detail::StatsTimer timer(stats);
    const auto used = detail::action_names(inst.plan());
    std::set<Atom> atoms;
    for (const LiftedModel* m : {&inst.robot(), &inst.human()}) {
      for (const auto& step : inst.plan().steps) {
        auto it = m->domain.schemas.find(step.action);
        if (it == m->domain.schemas.end() || it->second.parameters.size() != step.args.size()) continue;
        std::map<std::string, std::string> binding;
        for (std::size_t k = 0; k < step.args.size(); ++k) binding[it->second.parameters[k].name] = step.args[k];
        for (const auto* set : {&it->second.preconditions, &it->second.add_effects, &it->second.del_effects})
          for (const auto& a : *set) atoms.insert(detail::substitute(a, binding));
      }
    }
    for (auto& e : model_delta(inst.human_state(), inst.robot_state())) {
      if (e.feature.is_action_feature()) {
        if (used.count(e.feature.action)) edits.push_back(std::move(e));
      } else if (atoms.count(e.feature.atom)) {
        touched_init_goal = true;
        edits.push_back(std::move(e));
      }
    }
  }
  Explanation out = detail::make_explanation(ExplanationClass::Ppe, std::move(edits), stats);
  if (touched_init_goal) out.notes.push_back("includes init/goal differences on atoms used by plan steps");
  return out;
}

/// Minimally complete explanation: smallest edit set after which the plan
/// is optimal in the updated human model.
inline Explanation mce_exact(const MrpInstance& inst, const ExplainOptions& opts = {}) {
  ExplainerStats stats;
  std::vector<Edit> edits;
  {
    detail::StatsTimer timer(stats);
    detail::ModelSpace space(inst, true, opts, stats);
    if (space.size() > 0) {
      Bitset found = detail::search_from_human(space, opts, [&](const Bitset& flips, std::set<std::string>& hint) {
        const auto& ev = space.evaluate(flips, opts.use_heuristic);
        if (ev.well_formed && ev.optimality == Optimality::Optimal) return true;
        if (ev.optimal_plan) hint = detail::action_names(*ev.optimal_plan);
        return false;
      });
      edits = space.edits(found);
    }
  }
  return detail::make_explanation(ExplanationClass::Mce, std::move(edits), stats);
}

/// Approximate MCE: the optimality test is replaced by three cheap
/// conditions on the hypothesis model M̂:
///   the plan is executable in M̂;
///   it got cheaper than in M^H, or the human's optimal plan fails in M̂;
///   every step supplies a causal link.
inline Explanation mce_approx(const MrpInstance& inst, const ExplainOptions& opts = {}) {
  ExplainerStats stats;
  std::vector<Edit> edits;
  {
    detail::StatsTimer timer(stats);
    detail::ModelSpace space(inst, true, opts, stats);
    if (space.size() > 0) {
      const Bitset root = space.empty_set();
      const auto& root_eval = space.evaluate(root, true);
      if (!(root_eval.well_formed && root_eval.optimality == Optimality::Optimal)) {
        const Cost human_cost = root_eval.plan_cost;
        const std::optional<Plan> human_plan = root_eval.optimal_plan;
        std::set<std::string> fixed_hint;
        if (human_plan) fixed_hint = detail::action_names(*human_plan);
        Bitset found = detail::search_from_human(space, opts, [&](const Bitset& flips, std::set<std::string>& hint) {
          hint = fixed_hint;
          if (flips.none()) return false;
          bool links = false;
          const Cost c = space.cost_of(flips, inst.plan(), &links);
          if (!is_finite(c)) return false;
          const bool expected_plan_fails = !human_plan || !is_finite(space.cost_of(flips, *human_plan));
          if (!(expected_plan_fails || c < human_cost)) return false;
          return links;
        });
        edits = space.edits(found);
      }
    }
  }
  return detail::make_explanation(ExplanationClass::MceApprox, std::move(edits), stats);
}

/// Result of the monotonic search: the chosen explanation plus every
/// alternative of the same (minimal) size.
struct MmeResult {
  Explanation best;
  std::vector<Explanation> alternatives;
};

/// Minimally monotonic explanations. Searches from the robot model towards
/// the human model for the largest change set whose every subset keeps the
/// plan optimal; the explanation is the rest of the difference. Among
/// several, the lexicographically smallest edit list is returned first.
inline MmeResult mme_all(const MrpInstance& inst, const ExplainOptions& opts = {}) {
  ExplainerStats stats;
  std::vector<Bitset> winners;
  std::vector<Explanation> alts;
  std::optional<detail::ModelSpace> holder;
  {
    detail::StatsTimer timer(stats);
    holder.emplace(inst, false, opts, stats);
    detail::ModelSpace& space = *holder;
    const std::size_t n = space.size();
    if (n > opts.mme_max_delta)
      throw SearchSpaceTooLarge("model difference of " + std::to_string(n) +
                                " exceeds the monotonic search limit of " + std::to_string(opts.mme_max_delta) +
                                "; use --class mce instead");
    if (n == 0) {
      winners.push_back(space.empty_set());
    } else {
      std::vector<Bitset> failed;
      std::vector<Bitset> passed;
      auto has_failed_subset = [&](const Bitset& b) {
        return std::any_of(failed.begin(), failed.end(), [&](const Bitset& f) { return f.is_subset_of(b); });
      };
      struct Entry {
        std::size_t size;
        std::uint64_t seq;
        Bitset flips;
        bool operator>(const Entry& o) const { return size != o.size ? size > o.size : seq > o.seq; }
      };
      std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
      std::unordered_set<Bitset, BitsetHash> seen;
      std::uint64_t seq = 0;
      open.push({0, seq++, space.empty_set()});
      seen.insert(space.empty_set());
      while (!open.empty()) {
        Entry e = open.top();
        open.pop();
        // Failures found since this node was queued may now cover it.
        if (opts.mme_pruning && has_failed_subset(e.flips)) {
          ++stats.pruned;
          continue;
        }
        space.count_expansion();
        const auto& ev = space.evaluate(e.flips, false);
        if (ev.well_formed) {
          if (ev.optimality != Optimality::Optimal) {
            failed.push_back(e.flips);
            continue;
          }
          passed.push_back(e.flips);
        }
        for (std::size_t i = 0; i < n; ++i) {
          if (e.flips.test(i)) continue;
          Bitset child = e.flips;
          child.set(i);
          if (seen.count(child)) continue;
          if (opts.mme_pruning && has_failed_subset(child)) {
            ++stats.pruned;
            continue;
          }
          seen.insert(child);
          open.push({e.size + 1, seq++, std::move(child)});
        }
      }
      std::size_t best = 0;
      for (const auto& p : passed) {
        if (has_failed_subset(p)) continue;
        const std::size_t c = p.count();
        if (c > best) {
          best = c;
          winners.clear();
        }
        if (c == best) winners.push_back(p);
      }
    }
    // The explanation is the complement; order candidates by its edit list.
    const Bitset all = space.all_bits();
    std::sort(winners.begin(), winners.end(),
              [&](const Bitset& a, const Bitset& b) { return (all ^ a).lex_less(all ^ b); });
  }
  for (const auto& w : winners)
    alts.push_back(detail::make_explanation(ExplanationClass::Mme, holder->edits(holder->all_bits() ^ w), stats));
  MmeResult out{alts.front(), alts};
  return out;
}

inline Explanation mme(const MrpInstance& inst, const ExplainOptions& opts = {}) { return mme_all(inst, opts).best; }

/// Dispatches on class. `use_heuristic` in `opts` selects the MCE variant.
inline Explanation explain(const MrpInstance& inst, ExplanationClass cls, const ExplainOptions& opts = {}) {
  switch (cls) {
    case ExplanationClass::Mpe: return mpe(inst);
    case ExplanationClass::Ppe: return ppe(inst);
    case ExplanationClass::Mce: return mce_exact(inst, opts);
    case ExplanationClass::MceApprox: return mce_approx(inst, opts);
    case ExplanationClass::Mme: return mme(inst, opts);
  }
  throw std::invalid_argument("unknown explanation class");
}

namespace detail {

inline Bitset flips_of(const ModelSpace& space, const std::vector<Edit>& edits) {
  Bitset b = space.empty_set();
  for (const auto& e : edits) {
    auto i = space.index_of(e);
    if (!i) throw std::invalid_argument("edit outside the model difference: " + render(e));
    b.set(*i);
  }
  return b;
}

}  // namespace detail

/// R1: the plan is optimal in M^H updated by the edits.
inline bool check_completeness(const MrpInstance& inst, const std::vector<Edit>& edits, const Limits& limits = {}) {
  ModelState s = apply_edits(inst.human_state(), edits);
  if (!is_well_formed(s)) return false;
  const GroundTask task = ground(gamma_inverse(s, inst.model_template()));
  const auto v = is_plan_optimal(task, inst.plan(), limits);
  if (v.verdict == Optimality::BudgetExceeded) throw BudgetExceeded("planner budget exceeded");
  return v.verdict == Optimality::Optimal;
}

inline bool check_completeness(const MrpInstance& inst, const Explanation& e, const Limits& limits = {}) {
  return check_completeness(inst, e.edits, limits);
}

struct MonotonicityReport {
  bool monotonic = true;
  bool exhaustive = true;
  std::uint64_t models_checked = 0;
  /// Rule-of-three 95% upper bound on the violation rate when sampled.
  double violation_rate_bound = 0.0;
  /// Extra edits (beyond the explanation) that break optimality.
  std::optional<std::vector<Edit>> witness;

  explicit operator bool() const { return monotonic; }
};

/// R3: the plan stays optimal after the explanation plus any further subset
/// of the remaining difference. Exhaustive up to 20 remaining edits,
/// otherwise `samples` random supersets are checked.
inline MonotonicityReport check_monotonicity(const MrpInstance& inst, const std::vector<Edit>& edits,
                                             const ExplainOptions& opts = {}, std::size_t samples = 4096) {
  ExplainerStats stats;
  detail::ModelSpace space(inst, true, opts, stats);
  const Bitset applied = detail::flips_of(space, edits);
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < space.size(); ++i)
    if (!applied.test(i)) rest.push_back(i);
  MonotonicityReport rep;
  auto check = [&](const Bitset& extra) {
    const auto& ev = space.evaluate(applied | extra, false);
    ++rep.models_checked;
    if (!ev.well_formed || ev.optimality == Optimality::Optimal) return true;
    rep.monotonic = false;
    rep.witness = space.edits(extra);
    return false;
  };
  if (rest.size() <= 20) {
    const std::uint64_t total = std::uint64_t{1} << rest.size();
    for (std::uint64_t m = 0; m < total; ++m) {
      Bitset extra = space.empty_set();
      for (std::size_t k = 0; k < rest.size(); ++k)
        if ((m >> k) & 1u) extra.set(rest[k]);
      if (!check(extra)) return rep;
    }
    return rep;
  }
  rep.exhaustive = false;
  std::mt19937_64 rng(opts.seed.value_or(0));
  for (std::size_t n = 0; n < samples; ++n) {
    Bitset extra = space.empty_set();
    for (auto i : rest)
      if (rng() & 1u) extra.set(i);
    if (!check(extra)) return rep;
  }
  rep.violation_rate_bound = 3.0 / static_cast<double>(samples);
  return rep;
}

inline MonotonicityReport check_monotonicity(const MrpInstance& inst, const Explanation& e,
                                             const ExplainOptions& opts = {}) {
  return check_monotonicity(inst, e.edits, opts);
}

}  // namespace mrx
