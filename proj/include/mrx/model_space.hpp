#pragma once

// Planning models as sets of model features, and unit edits between them.

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "mrx/ground.hpp"
#include "mrx/pddl.hpp"

namespace mrx {

enum class FeatureKind { InitHas, GoalHas, Precondition, AddEffect, DelEffect, Cost };

inline const char* to_string(FeatureKind k) {
  switch (k) {
    case FeatureKind::InitHas: return "init-has";
    case FeatureKind::GoalHas: return "goal-has";
    case FeatureKind::Precondition: return "precondition";
    case FeatureKind::AddEffect: return "add-effect";
    case FeatureKind::DelEffect: return "del-effect";
    case FeatureKind::Cost: return "cost";
  }
  return "?";
}

/// One element of the model encoding space. `action` is empty for init/goal
/// features; `atom` is unused for cost features and `cost` only for them.
/// Ordered by (action, kind, atom, cost).
struct ModelFeature {
  std::string action;
  FeatureKind kind = FeatureKind::InitHas;
  Atom atom;
  int cost = 0;

  auto operator<=>(const ModelFeature&) const = default;
  bool operator==(const ModelFeature&) const = default;

  bool is_action_feature() const { return kind != FeatureKind::InitHas && kind != FeatureKind::GoalHas; }

  static ModelFeature init_has(Atom a) { return {"", FeatureKind::InitHas, std::move(a), 0}; }
  static ModelFeature goal_has(Atom a) { return {"", FeatureKind::GoalHas, std::move(a), 0}; }
  static ModelFeature precondition(std::string act, Atom a) {
    return {std::move(act), FeatureKind::Precondition, std::move(a), 0};
  }
  static ModelFeature add_effect(std::string act, Atom a) {
    return {std::move(act), FeatureKind::AddEffect, std::move(a), 0};
  }
  static ModelFeature del_effect(std::string act, Atom a) {
    return {std::move(act), FeatureKind::DelEffect, std::move(a), 0};
  }
  static ModelFeature cost_of(std::string act, int c) { return {std::move(act), FeatureKind::Cost, {}, c}; }
};

/// `<action>-has-<kind>-<atom>`, e.g. `move-has-precondition-hand-tucked`,
/// `init-has-block-at_b1_loc1`, `tuck-has-cost-1`.
inline std::string render(const ModelFeature& f) {
  switch (f.kind) {
    case FeatureKind::InitHas:
    case FeatureKind::GoalHas:
      return std::string(to_string(f.kind)) + "-" + joined_name(f.atom.predicate, f.atom.args);
    case FeatureKind::Cost:
      return f.action + "-has-cost-" + std::to_string(f.cost);
    default:
      return f.action + "-has-" + to_string(f.kind) + "-" + joined_name(f.atom.predicate, f.atom.args);
  }
}

struct ModelState {
  std::set<ModelFeature> features;

  bool contains(const ModelFeature& f) const { return features.count(f) > 0; }
  std::size_t size() const { return features.size(); }
  bool operator==(const ModelState&) const = default;
};

enum class EditSign { Add, Remove };

inline const char* to_string(EditSign s) { return s == EditSign::Add ? "add" : "remove"; }

struct Edit {
  EditSign sign = EditSign::Add;
  ModelFeature feature;

  auto operator<=>(const Edit& o) const {
    if (auto c = feature <=> o.feature; c != 0) return c;
    return sign <=> o.sign;
  }
  bool operator==(const Edit&) const = default;
};

inline std::string render(const Edit& e) {
  return (e.sign == EditSign::Add ? "+" : "-") + render(e.feature);
}

class IllFormedState : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IllegalEdit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Γ(M): one feature per init atom, goal atom, schema precondition, add and
/// delete effect, plus one cost feature per schema.
inline ModelState gamma(const LiftedModel& m) {
  ModelState s;
  for (const auto& a : m.problem.init) s.features.insert(ModelFeature::init_has(a));
  for (const auto& a : m.problem.goal) s.features.insert(ModelFeature::goal_has(a));
  for (const auto& [name, schema] : m.domain.schemas) {
    for (const auto& a : schema.preconditions) s.features.insert(ModelFeature::precondition(name, a));
    for (const auto& a : schema.add_effects) s.features.insert(ModelFeature::add_effect(name, a));
    for (const auto& a : schema.del_effects) s.features.insert(ModelFeature::del_effect(name, a));
    s.features.insert(ModelFeature::cost_of(name, schema.cost));
  }
  return s;
}

/// Why `s` does not describe a model, or nullopt when it does. A missing
/// cost feature is tolerated (cost defaults to 1).
inline std::optional<std::string> ill_formed_reason(const ModelState& s) {
  std::map<std::string, int> costs;
  std::set<std::pair<std::string, Atom>> adds;
  for (const auto& f : s.features) {
    if (f.kind == FeatureKind::Cost) {
      if (++costs[f.action] > 1) return "action '" + f.action + "' has more than one cost";
    } else if (f.kind == FeatureKind::AddEffect) {
      adds.emplace(f.action, f.atom);
    }
  }
  for (const auto& f : s.features)
    if (f.kind == FeatureKind::DelEffect && adds.count({f.action, f.atom}))
      return "action '" + f.action + "' both adds and deletes " + to_pddl(f.atom);
  return std::nullopt;
}

inline bool is_well_formed(const ModelState& s) { return !ill_formed_reason(s).has_value(); }

/// Union of the non-feature parts of two models (types, predicates,
/// objects, schema signatures) so that states mixing both can be decoded.
inline LiftedModel merge_template(const LiftedModel& a, const LiftedModel& b) {
  LiftedModel t;
  t.domain.name = a.domain.name;
  t.problem.name = a.problem.name;
  t.problem.domain_name = a.problem.domain_name;
  t.domain.requirements = a.domain.requirements;
  t.domain.requirements.insert(b.domain.requirements.begin(), b.domain.requirements.end());
  auto merge_map = [](auto& into, const auto& from, const char* what) {
    for (const auto& [k, v] : from) {
      auto [it, fresh] = into.emplace(k, v);
      if (!fresh && !(it->second == v))
        throw std::invalid_argument(std::string("models disagree on ") + what + " '" + k + "'");
    }
  };
  for (const LiftedModel* m : {&a, &b}) {
    merge_map(t.domain.types, m->domain.types, "type");
    merge_map(t.domain.predicates, m->domain.predicates, "predicate");
    merge_map(t.domain.constants, m->domain.constants, "constant");
    merge_map(t.problem.objects, m->problem.objects, "object");
    for (const auto& [name, s] : m->domain.schemas) {
      ActionSchema sig;
      sig.name = name;
      sig.parameters = s.parameters;
      auto [it, fresh] = t.domain.schemas.emplace(name, sig);
      if (!fresh && it->second.parameters != sig.parameters)
        throw std::invalid_argument("models disagree on the parameters of action '" + name + "'");
    }
  }
  return t;
}

/// Γ⁻¹: rebuilds a model from features, taking everything else from
/// `templ`. Schemas of the template without any feature in `s` are dropped.
/// Throws IllFormedState for contradictory states or unknown actions.
inline LiftedModel gamma_inverse(const ModelState& s, const LiftedModel& templ,
                                 std::vector<std::string>* warnings = nullptr) {
  if (auto why = ill_formed_reason(s)) throw IllFormedState(*why);
  LiftedModel m;
  m.domain.name = templ.domain.name;
  m.domain.requirements = templ.domain.requirements;
  m.domain.types = templ.domain.types;
  m.domain.predicates = templ.domain.predicates;
  m.domain.constants = templ.domain.constants;
  m.problem.name = templ.problem.name;
  m.problem.domain_name = templ.problem.domain_name;
  m.problem.objects = templ.problem.objects;
  std::set<std::string> costed;
  for (const auto& f : s.features) {
    if (f.kind == FeatureKind::InitHas) {
      m.problem.init.insert(f.atom);
      continue;
    }
    if (f.kind == FeatureKind::GoalHas) {
      m.problem.goal.insert(f.atom);
      continue;
    }
    auto sit = m.domain.schemas.find(f.action);
    if (sit == m.domain.schemas.end()) {
      auto tit = templ.domain.schemas.find(f.action);
      if (tit == templ.domain.schemas.end()) throw IllFormedState("unknown action '" + f.action + "'");
      ActionSchema sig;
      sig.name = f.action;
      sig.parameters = tit->second.parameters;
      sit = m.domain.schemas.emplace(f.action, std::move(sig)).first;
    }
    ActionSchema& a = sit->second;
    switch (f.kind) {
      case FeatureKind::Precondition: a.preconditions.insert(f.atom); break;
      case FeatureKind::AddEffect: a.add_effects.insert(f.atom); break;
      case FeatureKind::DelEffect: a.del_effects.insert(f.atom); break;
      case FeatureKind::Cost:
        a.cost = f.cost;
        costed.insert(f.action);
        break;
      default: break;
    }
  }
  for (const auto& [name, a] : m.domain.schemas)
    if (!costed.count(name) && warnings) warnings->push_back("action '" + name + "' has no cost feature; using 1");
  return m;
}

/// Edits turning `from` into `to`: Add for to \ from, Remove for from \ to.
inline std::vector<Edit> model_delta(const ModelState& from, const ModelState& to) {
  std::vector<Edit> out;
  for (const auto& f : to.features)
    if (!from.contains(f)) out.push_back({EditSign::Add, f});
  for (const auto& f : from.features)
    if (!to.contains(f)) out.push_back({EditSign::Remove, f});
  std::sort(out.begin(), out.end());
  return out;
}

/// Applies an edit set. Order-independent; each Add must target an absent
/// feature and each Remove a present one.
inline ModelState apply_edits(const ModelState& s, const std::vector<Edit>& edits) {
  ModelState out = s;
  std::set<ModelFeature> touched;
  for (const auto& e : edits) {
    if (!touched.insert(e.feature).second)
      throw IllegalEdit("feature edited twice: " + render(e.feature));
    if (e.sign == EditSign::Add) {
      if (s.contains(e.feature)) throw IllegalEdit("adding a present feature: " + render(e.feature));
      out.features.insert(e.feature);
    } else {
      if (!s.contains(e.feature)) throw IllegalEdit("removing an absent feature: " + render(e.feature));
      out.features.erase(e.feature);
    }
  }
  return out;
}

}  // namespace mrx
