#include <gtest/gtest.h>

#include "support.hpp"

using namespace mrx;
namespace t = mrx::testing;

namespace {

State state_of(const GroundTask& task, const std::vector<Atom>& atoms) {
  State s(task.num_fluents());
  for (const auto& a : atoms) s.set(*task.find_fluent(a));
  return s;
}

Plan random_plan(const GroundTask& task, std::mt19937_64& rng, std::size_t max_len) {
  Plan p;
  const std::size_t len = rng() % (max_len + 1);
  for (std::size_t i = 0; i < len; ++i) {
    const auto& a = task.actions[rng() % task.actions.size()];
    p.steps.push_back({a.schema, a.args});
  }
  return p;
}

}  // namespace

TEST(Ground, FetchActionUniverse) {
  const GroundTask task = ground(t::fetch_robot());
  for (const char* key : {"move loc1 loc2", "move loc2 loc1", "tuck", "crouch", "pick-up b1 loc1", "put-down b1 loc2"})
    EXPECT_TRUE(task.find_action(key).has_value()) << key;
  EXPECT_FALSE(task.find_action("pick-up loc1 b1").has_value());
}

TEST(Ground, RobotAndHumanShareActionNames) {
  const GroundTask r = ground(t::fetch_robot());
  const GroundTask h = ground(t::fetch_human(1));
  ASSERT_EQ(r.actions.size(), h.actions.size());
  for (std::size_t i = 0; i < r.actions.size(); ++i) EXPECT_EQ(r.actions[i].key(), h.actions[i].key());
  const auto& rm = r.actions[*r.find_action("move loc1 loc2")];
  const auto& hm = h.actions[*h.find_action("move loc1 loc2")];
  EXPECT_GT(rm.pre.size(), hm.pre.size());
}

TEST(Ground, TuckProgression) {
  const GroundTask task = ground(t::fetch_robot());
  auto s = progress(task, task.initial_state(), "tuck");
  ASSERT_TRUE(s);
  State expected = task.initial_state();
  expected.set(*task.find_fluent({"hand-tucked", {}}));
  expected.set(*task.find_fluent({"crouched", {}}));
  EXPECT_EQ(*s, expected);
  EXPECT_FALSE(progress(task, task.initial_state(), "move loc1 loc2"));
  EXPECT_THROW(progress(task, task.initial_state(), "fly loc1"), UnknownAction);
}

TEST(Ground, FetchPlanCosts) {
  const Plan plan = t::fetch_plan();
  EXPECT_EQ(plan_cost(ground(t::fetch_robot()), plan), 4);
  EXPECT_EQ(plan_cost(ground(t::fetch_human(1)), plan), 4);
  EXPECT_FALSE(is_finite(plan_cost(ground(t::fetch_human(2)), plan)));
}

TEST(Ground, ValidateReportsMissingPrecondition) {
  const ValidationReport r = validate(ground(t::fetch_human(2)), t::fetch_plan());
  EXPECT_FALSE(r.valid);
  ASSERT_TRUE(r.failing_step);
  EXPECT_EQ(*r.failing_step, 2u);
  EXPECT_EQ(r.missing_preconditions, (std::vector<Atom>{{"crouched", {}}}));
}

TEST(Ground, ValidateGoalGapAndUnknownAction) {
  const GroundTask task = ground(t::fetch_robot());
  ValidationReport r = validate(task, parse_plan("(tuck)\n"));
  EXPECT_FALSE(r.valid);
  EXPECT_FALSE(r.failing_step);
  EXPECT_EQ(r.goal_gap, (std::vector<Atom>{{"block-at", {"b1", "loc2"}}}));
  r = validate(task, parse_plan("(teleport b1)\n"));
  EXPECT_TRUE(r.unknown_action);
  EXPECT_FALSE(is_finite(plan_cost(task, parse_plan("(teleport b1)\n"))));
}

TEST(Ground, EmptyPlanOnTrivialGoal) {
  LiftedModel m = t::fetch_robot();
  m.problem.goal = {{"robot-at", {"loc1"}}};
  EXPECT_EQ(plan_cost(ground(m), Plan{}), 0);
}

TEST(Ground, AddWinsOverDeleteOnCollapsedBinding) {
  const auto problems = t::bench_problems();
  const GroundTask task = ground(problems.front().robot);  // blocksworld
  const auto& stack_aa = task.actions[*task.find_action("stack a a")];
  const FluentId clear_a = *task.find_fluent({"clear", {"a"}});
  EXPECT_TRUE(std::binary_search(stack_aa.add.begin(), stack_aa.add.end(), clear_a));
  EXPECT_FALSE(std::binary_search(stack_aa.del.begin(), stack_aa.del.end(), clear_a));
}

TEST(Ground, PlanParsing) {
  const Plan p = parse_plan("; a comment\n(Pick-Up B1 Loc1)\n\n  (tuck)  ; trailing\n");
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p.steps[0].key(), "pick-up b1 loc1");
  EXPECT_EQ(parse_plan(format_plan(p)), p);
  try {
    parse_plan("(tuck)\nthis is not a plan\n");
    FAIL();
  } catch (const PlanFormatError& e) {
    EXPECT_EQ(e.line(), 2);
  }
  EXPECT_THROW(parse_plan("(a (b))\n"), PlanFormatError);
  EXPECT_THROW(parse_plan("()\n"), PlanFormatError);
}

TEST(Ground, PropositionalisedModelKeepsPlanCost) {
  const LiftedModel prop = propositionalize(t::fetch_robot());
  EXPECT_TRUE(prop.domain.schemas.count("move_loc1_loc2"));
  EXPECT_TRUE(prop.domain.predicates.count("robot-at_loc1"));
  const Plan plan = propositionalize(t::fetch_plan());
  EXPECT_EQ(plan.steps[2].action, "move_loc1_loc2");
  EXPECT_EQ(plan_cost(ground(prop), plan), 4);
  EXPECT_FALSE(is_finite(plan_cost(ground(propositionalize(t::fetch_human(2))), plan)));
}

// Cost of a plan equals the fold of single-step progression; validate agrees
// with plan_cost on validity.
TEST(Ground, FuzzedPlansFoldAndValidateAgree) {
  std::mt19937_64 rng(11);
  std::vector<LiftedModel> models{t::fetch_robot(), t::fetch_human(2)};
  for (const auto& p : t::bench_problems()) models.push_back(p.robot);
  for (const auto& m : models) {
    const GroundTask task = ground(m);
    for (int i = 0; i < 100; ++i) {
      const Plan p = random_plan(task, rng, 8);
      State s = task.initial_state();
      Cost total = 0;
      bool ok = true;
      for (const auto& step : p.steps) {
        auto n = progress(task, s, step.key());
        if (!n) {
          ok = false;
          break;
        }
        s = *n;
        total += task.actions[*task.find_action(step.key())].cost;
      }
      ok = ok && task.satisfies_goal(s);
      const Cost c = plan_cost(task, p);
      EXPECT_EQ(ok, is_finite(c));
      if (ok) EXPECT_EQ(c, total);
      const ValidationReport r = validate(task, p);
      EXPECT_EQ(r.valid, is_finite(c));
      EXPECT_EQ(r.cost, c);
    }
  }
}

// STRIPS progression is monotone: more facts never disable an action, and
// successors keep the subset relation.
TEST(Ground, ProgressionIsMonotone) {
  std::mt19937_64 rng(5);
  for (const auto& p : t::bench_problems()) {
    const GroundTask task = ground(p.robot);
    for (int i = 0; i < 50; ++i) {
      State small(task.num_fluents()), big(task.num_fluents());
      for (FluentId f = 0; f < task.num_fluents(); ++f) {
        const auto r = rng() % 4;
        if (r == 0) small.set(f);
        if (r <= 1) big.set(f);
      }
      for (const auto& a : task.actions) {
        auto s1 = progress(task, small, a.key());
        auto s2 = progress(task, big, a.key());
        if (s1) {
          ASSERT_TRUE(s2);
          EXPECT_TRUE(s1->is_subset_of(*s2));
        }
      }
    }
  }
}

TEST(Ground, StateHelper) {
  const GroundTask task = ground(t::fetch_robot());
  EXPECT_EQ(state_of(task, {{"block-at", {"b1", "loc1"}}, {"robot-at", {"loc1"}}, {"hand-empty", {}}}),
            task.initial_state());
}
