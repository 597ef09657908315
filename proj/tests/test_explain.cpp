#include <gtest/gtest.h>

#include "support.hpp"

using namespace mrx;
namespace t = mrx::testing;

namespace {

std::vector<std::string> rendered(const Explanation& e) {
  std::vector<std::string> out;
  for (const auto& ed : e.edits) out.push_back(render(ed));
  return out;
}

MrpInstance fetch_instance(int human, Granularity g = Granularity::Lifted) {
  return MrpInstance(t::fetch_robot(), t::fetch_human(human), t::fetch_plan(), g);
}

MrpInstance prop2_instance() {
  return MrpInstance(t::load("prop2/robot-domain.pddl", "prop2/robot-problem.pddl"),
                     t::load("prop2/human-domain.pddl", "prop2/human-problem.pddl"),
                     parse_plan(t::slurp(t::fixture_path("prop2/plan.txt"))));
}

const std::vector<t::GeneratedInstance>& small_instances() {
  static const auto v = t::generate_instances({1, 2, 3, 4}, 101);
  return v;
}

}  // namespace

TEST(Explain, RejectsNonOptimalPlan) {
  Plan bad = t::fetch_plan();
  bad.steps.insert(bad.steps.begin(), PlanStep{"crouch", {}});
  EXPECT_THROW(MrpInstance(t::fetch_robot(), t::fetch_human(1), bad), MrpError);
  EXPECT_THROW(MrpInstance(t::fetch_robot(), t::fetch_human(1), parse_plan("(tuck)\n")), MrpError);
}

TEST(Explain, FetchLifted) {
  const MrpInstance inst = fetch_instance(1);
  EXPECT_EQ(inst.plan_cost(), 4);
  EXPECT_EQ(rendered(mpe(inst)), (std::vector<std::string>{"+move-has-precondition-crouched",
                                                           "+move-has-precondition-hand-tucked",
                                                           "+tuck-has-add-effect-crouched"}));
  EXPECT_EQ(ppe(inst).size(), 3u);
  EXPECT_EQ(rendered(mce_exact(inst)), (std::vector<std::string>{"+move-has-precondition-hand-tucked"}));
  EXPECT_EQ(rendered(mce_approx(inst)), (std::vector<std::string>{"+move-has-precondition-hand-tucked"}));
  EXPECT_EQ(rendered(mme(inst)),
            (std::vector<std::string>{"+move-has-precondition-crouched", "+tuck-has-add-effect-crouched"}));
}

TEST(Explain, FetchGrounded) {
  const MrpInstance inst = fetch_instance(1, Granularity::Grounded);
  EXPECT_EQ(rendered(mce_exact(inst)), (std::vector<std::string>{"+move_loc1_loc2-has-precondition-hand-tucked"}));
  const Explanation m = mme(inst);
  EXPECT_EQ(m.size(), 2u);
  EXPECT_TRUE(check_monotonicity(inst, m));
}

TEST(Explain, FetchMceIsNotMonotonic) {
  const MrpInstance inst = fetch_instance(1);
  const MonotonicityReport rep = check_monotonicity(inst, mce_exact(inst));
  EXPECT_FALSE(rep);
  EXPECT_TRUE(rep.exhaustive);
  ASSERT_TRUE(rep.witness);
  EXPECT_EQ(*rep.witness,
            (std::vector<Edit>{{EditSign::Add, ModelFeature::precondition("move", {"crouched", {}})}}));
  EXPECT_TRUE(check_monotonicity(inst, mme(inst)));
  EXPECT_TRUE(check_monotonicity(inst, mpe(inst)));
}

// Two minimum-size monotonic explanations exist on Fetch: either move
// precondition can be left out of the robot side.
TEST(Explain, MmeEnumeratesAlternatives) {
  const MrpInstance inst = fetch_instance(1);
  const MmeResult all = mme_all(inst);
  ASSERT_GE(all.alternatives.size(), 2u);
  EXPECT_EQ(rendered(all.best), rendered(all.alternatives.front()));
  for (const auto& e : all.alternatives) {
    EXPECT_EQ(e.size(), all.best.size());
    EXPECT_TRUE(check_completeness(inst, e));
    EXPECT_TRUE(check_monotonicity(inst, e));
  }
}

TEST(Explain, CompletenessOfEachClass) {
  const MrpInstance inst = fetch_instance(3);
  EXPECT_FALSE(check_completeness(inst, ppe(inst)));
  EXPECT_TRUE(check_completeness(inst, mpe(inst)));
  const Explanation e = mce_exact(inst);
  EXPECT_TRUE(check_completeness(inst, e));
  EXPECT_EQ(e.size(), 2u);
  EXPECT_TRUE(check_completeness(inst, mme(inst)));
}

TEST(Explain, IdenticalModelsGiveEmptyExplanations) {
  const MrpInstance inst(t::fetch_robot(), t::fetch_robot(), t::fetch_plan());
  for (auto cls : {ExplanationClass::Mpe, ExplanationClass::Ppe, ExplanationClass::Mce, ExplanationClass::MceApprox,
                   ExplanationClass::Mme}) {
    const Explanation e = explain(inst, cls);
    EXPECT_EQ(e.size(), 0u) << to_string(cls);
  }
  EXPECT_EQ(mce_exact(inst).stats.expansions, 0u);
}

TEST(Explain, PpeFlagsInitGoalEdits) {
  const MrpInstance inst = prop2_instance();
  const Explanation e = ppe(inst);
  EXPECT_FALSE(e.notes.empty());
  EXPECT_NE(std::find(e.edits.begin(), e.edits.end(), Edit{EditSign::Add, ModelFeature::init_has({"ticket", {}})}),
            e.edits.end());
}

// Making the plan executable is necessary but not sufficient: the search
// must continue past that point.
TEST(Explain, FeasibleIsNotComplete) {
  const MrpInstance inst = prop2_instance();
  const std::vector<Edit> feasible{{EditSign::Add, ModelFeature::init_has({"ticket", {}})}};
  auto m = t::edited_human(inst, feasible);
  ASSERT_TRUE(m);
  EXPECT_TRUE(is_finite(plan_cost(ground(*m), inst.plan())));
  EXPECT_FALSE(check_completeness(inst, feasible));
  const Explanation e = mce_exact(inst);
  auto names = rendered(e);
  std::sort(names.begin(), names.end());
  EXPECT_EQ(names, (std::vector<std::string>{"+hop-has-precondition-boots", "+init-has-ticket"}));
  EXPECT_TRUE(check_completeness(inst, e));
}

TEST(Explain, BudgetsAndLimits) {
  const MrpInstance inst = fetch_instance(3);
  ExplainOptions tiny;
  tiny.max_model_expansions = 1;
  EXPECT_THROW(mce_exact(inst, tiny), BudgetExceeded);
  ExplainOptions cap;
  cap.mme_max_delta = 2;
  EXPECT_THROW(mme(inst, cap), SearchSpaceTooLarge);
}

TEST(Explain, PruningOnlySavesWork) {
  const MrpInstance inst = fetch_instance(3);
  ExplainOptions off;
  off.mme_pruning = false;
  const Explanation a = mme(inst);
  const Explanation b = mme(inst, off);
  EXPECT_EQ(rendered(a), rendered(b));
  EXPECT_LT(a.stats.expansions, b.stats.expansions);
}

TEST(Explain, SeededTieBreakingKeepsMinimality) {
  const MrpInstance inst = fetch_instance(3);
  const std::size_t size = mce_exact(inst).size();
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    ExplainOptions o;
    o.seed = seed;
    const Explanation e = mce_exact(inst, o);
    EXPECT_EQ(e.size(), size);
    EXPECT_TRUE(check_completeness(inst, e));
  }
}

TEST(Explain, ExactMceMatchesBruteForce) {
  for (const auto& [label, inst] : small_instances()) {
    const auto oracle = t::brute_force_min_complete(inst);
    ASSERT_TRUE(oracle) << label;
    const Explanation e = mce_exact(inst);
    EXPECT_EQ(e.size(), *oracle) << label;
    EXPECT_TRUE(check_completeness(inst, e)) << label;
  }
}

TEST(Explain, MmeMatchesPowerSetOracle) {
  for (const auto& [label, inst] : small_instances()) {
    const Explanation e = mme(inst);
    EXPECT_TRUE(t::oracle_monotonic(inst, e.edits, t::remaining_delta(inst, e.edits))) << label;
    // No smaller edit set is both complete and monotonic.
    const auto delta = model_delta(inst.human_state(), inst.robot_state());
    std::optional<std::size_t> smallest;
    t::for_each_subset_by_size<Edit>(delta, [&](const std::vector<Edit>& sub) {
      if (t::oracle_monotonic(inst, sub, t::remaining_delta(inst, sub))) smallest = sub.size();
      return smallest.has_value();
    });
    ASSERT_TRUE(smallest) << label;
    EXPECT_EQ(e.size(), *smallest) << label;
  }
}

TEST(Explain, SizeChainAndHeuristicNonDegradation) {
  for (const auto& [label, inst] : small_instances()) {
    ExplainOptions plain;
    plain.use_heuristic = false;
    const Explanation approx = mce_approx(inst);
    const Explanation exact = mce_exact(inst);
    const Explanation unguided = mce_exact(inst, plain);
    const Explanation mono = mme(inst);
    const Explanation patch = mpe(inst);
    EXPECT_LE(approx.size(), exact.size()) << label;
    EXPECT_LE(exact.size(), mono.size()) << label;
    EXPECT_LE(mono.size(), patch.size()) << label;
    EXPECT_EQ(exact.size(), unguided.size()) << label;
    EXPECT_TRUE(check_completeness(inst, mono)) << label;
  }
}

TEST(Explain, MonotonicityCheckSamplesLargeRemainders) {
  const auto robot = t::bench_problems().front().robot;
  FaultSpec spec;
  spec.seed = 9;
  spec.n_faults = 22;
  const auto inst = MrpInstance::with_optimal_plan(robot, inject(robot, spec));
  const auto rep = check_monotonicity(inst, mpe(inst));
  EXPECT_TRUE(rep.monotonic);
  const auto rep2 = check_monotonicity(inst, std::vector<Edit>{});
  if (model_delta(inst.human_state(), inst.robot_state()).size() > 20) {
    EXPECT_FALSE(rep2.exhaustive);
    if (rep2.monotonic) EXPECT_GT(rep2.violation_rate_bound, 0.0);
  }
}
