#pragma once

// Human models by fault injection: features of the robot model are removed
// (and, optionally, spurious ones added) under a seeded RNG.

#include <cstdint>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "mrx/explain.hpp"
#include "mrx/model_space.hpp"

namespace mrx {

enum class FaultKind { DropPrecondition, DropAddEffect, DropDelEffect, DropInit, DropGoal };

inline const char* to_string(FaultKind k) {
  switch (k) {
    case FaultKind::DropPrecondition: return "drop-precondition";
    case FaultKind::DropAddEffect: return "drop-add-effect";
    case FaultKind::DropDelEffect: return "drop-del-effect";
    case FaultKind::DropInit: return "drop-init";
    case FaultKind::DropGoal: return "drop-goal";
  }
  return "?";
}

inline std::optional<FaultKind> parse_fault_kind(std::string_view s) {
  for (auto k : {FaultKind::DropPrecondition, FaultKind::DropAddEffect, FaultKind::DropDelEffect,
                 FaultKind::DropInit, FaultKind::DropGoal})
    if (s == to_string(k)) return k;
  return std::nullopt;
}

inline FeatureKind feature_kind(FaultKind k) {
  switch (k) {
    case FaultKind::DropPrecondition: return FeatureKind::Precondition;
    case FaultKind::DropAddEffect: return FeatureKind::AddEffect;
    case FaultKind::DropDelEffect: return FeatureKind::DelEffect;
    case FaultKind::DropInit: return FeatureKind::InitHas;
    case FaultKind::DropGoal: return FeatureKind::GoalHas;
  }
  return FeatureKind::Precondition;
}

struct FaultSpec {
  std::uint64_t seed = 0;
  std::size_t n_faults = 0;
  std::set<FaultKind> fault_kinds{FaultKind::DropPrecondition, FaultKind::DropAddEffect, FaultKind::DropDelEffect};
  Granularity granularity = Granularity::Lifted;
  /// Also draw faults that add features absent from the model.
  bool allow_additions = false;
};

class InsufficientCandidates : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

/// Features of the requested kinds that could be added to `m` without
/// contradicting it.
inline std::vector<ModelFeature> addition_candidates(const LiftedModel& m, const std::set<FeatureKind>& kinds) {
  std::vector<ModelFeature> out;
  const ModelState present = gamma(m);
  const auto objects = m.all_objects();
  auto push = [&](ModelFeature f) {
    if (!present.contains(f)) out.push_back(std::move(f));
  };
  for (const auto& [pname, pred] : m.domain.predicates) {
    if (kinds.count(FeatureKind::InitHas) || kinds.count(FeatureKind::GoalHas)) {
      for_each_binding(m.domain, objects, pred.params, [&](const std::vector<std::string>& args) {
        if (kinds.count(FeatureKind::InitHas)) push(ModelFeature::init_has({pname, args}));
        if (kinds.count(FeatureKind::GoalHas)) push(ModelFeature::goal_has({pname, args}));
      });
    }
    for (const auto& [sname, schema] : m.domain.schemas) {
      // Terms an argument slot can take: parameters and constants.
      std::map<std::string, std::string> terms = m.domain.constants;
      for (const auto& p : schema.parameters) terms[p.name] = p.type;
      for_each_binding(m.domain, terms, pred.params, [&](const std::vector<std::string>& args) {
        Atom a{pname, args};
        if (kinds.count(FeatureKind::Precondition)) push(ModelFeature::precondition(sname, a));
        if (kinds.count(FeatureKind::AddEffect) && !schema.del_effects.count(a))
          push(ModelFeature::add_effect(sname, a));
        if (kinds.count(FeatureKind::DelEffect) && !schema.add_effects.count(a))
          push(ModelFeature::del_effect(sname, a));
      });
    }
  }
  return out;
}

}  // namespace detail

/// Derives a human model from `model`. Deterministic in `spec.seed`; the
/// result differs from the (possibly propositionalised) input in exactly
/// `spec.n_faults` features.
inline LiftedModel inject(const LiftedModel& model, const FaultSpec& spec) {
  const LiftedModel base = spec.granularity == Granularity::Grounded ? propositionalize(model) : model;
  ModelState state = gamma(base);
  std::set<FeatureKind> kinds;
  for (auto k : spec.fault_kinds) kinds.insert(feature_kind(k));
  std::vector<ModelFeature> candidates;
  for (const auto& f : state.features)
    if (kinds.count(f.kind)) candidates.push_back(f);
  if (spec.allow_additions) {
    auto extra = detail::addition_candidates(base, kinds);
    candidates.insert(candidates.end(), extra.begin(), extra.end());
  }
  std::mt19937_64 rng(spec.seed);
  std::size_t accepted = 0;
  // Partial Fisher-Yates; additions that would contradict the model so far
  // are skipped.
  for (std::size_t i = 0; i < candidates.size() && accepted < spec.n_faults; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng() % (candidates.size() - i));
    std::swap(candidates[i], candidates[j]);
    const ModelFeature& f = candidates[i];
    if (state.contains(f)) {
      state.features.erase(f);
    } else {
      state.features.insert(f);
      if (!is_well_formed(state)) {
        state.features.erase(f);
        continue;
      }
    }
    ++accepted;
  }
  if (accepted < spec.n_faults)
    throw InsufficientCandidates("only " + std::to_string(accepted) + " fault candidates for " +
                                 std::to_string(spec.n_faults) + " requested faults");
  return gamma_inverse(state, base);
}

}  // namespace mrx
