#include <gtest/gtest.h>

#include "support.hpp"

using namespace mrx;
namespace t = mrx::testing;

TEST(Perturb, ZeroFaultsIsIdentity) {
  const LiftedModel m = t::fetch_robot();
  FaultSpec spec;
  spec.n_faults = 0;
  EXPECT_EQ(inject(m, spec), m);
}

TEST(Perturb, DeterministicInSeed) {
  for (const auto& p : t::bench_problems()) {
    FaultSpec spec;
    spec.seed = 42;
    spec.n_faults = 4;
    EXPECT_EQ(inject(p.robot, spec), inject(p.robot, spec));
  }
  const LiftedModel m = t::bench_problems().front().robot;
  std::set<std::vector<Edit>> distinct;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    FaultSpec spec;
    spec.seed = seed;
    spec.n_faults = 3;
    distinct.insert(model_delta(gamma(inject(m, spec)), gamma(m)));
  }
  EXPECT_GT(distinct.size(), 1u);
}

TEST(Perturb, DeltaSizeAndKindsMatchSpec) {
  for (const auto& p : t::bench_problems()) {
    for (std::size_t n : {1u, 3u, 6u}) {
      FaultSpec spec;
      spec.seed = n * 7;
      spec.n_faults = n;
      const LiftedModel h = inject(p.robot, spec);
      const auto delta = model_delta(gamma(h), gamma(p.robot));
      EXPECT_EQ(delta.size(), n);
      for (const auto& e : delta) {
        EXPECT_EQ(e.sign, EditSign::Add);  // the human lacks what the robot has
        EXPECT_TRUE(e.feature.kind == FeatureKind::Precondition || e.feature.kind == FeatureKind::AddEffect ||
                    e.feature.kind == FeatureKind::DelEffect);
      }
      // The mutant survives a trip through PDDL text.
      const PddlText text = emit_pddl(h);
      EXPECT_EQ(parse_problem(text.problem, parse_domain(text.domain)), h);
    }
  }
}

TEST(Perturb, InitAndGoalFaults) {
  const LiftedModel m = t::fetch_robot();
  FaultSpec spec;
  spec.n_faults = 2;
  spec.fault_kinds = {FaultKind::DropInit, FaultKind::DropGoal};
  spec.seed = 1;
  const auto delta = model_delta(gamma(inject(m, spec)), gamma(m));
  ASSERT_EQ(delta.size(), 2u);
  for (const auto& e : delta) EXPECT_FALSE(e.feature.is_action_feature());
}

TEST(Perturb, InsufficientCandidates) {
  FaultSpec spec;
  spec.n_faults = 1000;
  EXPECT_THROW(inject(t::fetch_robot(), spec), InsufficientCandidates);
  spec.n_faults = 2;
  spec.fault_kinds = {FaultKind::DropGoal};
  EXPECT_THROW(inject(t::fetch_robot(), spec), InsufficientCandidates);
}

TEST(Perturb, AdditionsStayWellFormed) {
  const LiftedModel m = t::bench_problems().front().robot;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    FaultSpec spec;
    spec.seed = seed;
    spec.n_faults = 5;
    spec.allow_additions = true;
    const LiftedModel h = inject(m, spec);
    EXPECT_TRUE(is_well_formed(gamma(h)));
    EXPECT_EQ(model_delta(gamma(h), gamma(m)).size(), 5u);
  }
}

TEST(Perturb, GroundedFaultsWorkOnPropositionalModel) {
  const LiftedModel m = t::fetch_robot();
  FaultSpec spec;
  spec.seed = 3;
  spec.n_faults = 4;
  spec.granularity = Granularity::Grounded;
  const LiftedModel h = inject(m, spec);
  EXPECT_TRUE(h.domain.schemas.count("move_loc1_loc2"));
  EXPECT_EQ(model_delta(gamma(h), gamma(propositionalize(m))).size(), 4u);
  EXPECT_NO_THROW(MrpInstance::with_optimal_plan(m, h, Granularity::Grounded));
}

// 200 mutants: Γ⁻¹∘Γ is the identity and PDDL text round-trips.
TEST(Perturb, MutantsRoundTrip) {
  int checked = 0;
  for (const auto& p : t::bench_problems()) {
    for (std::uint64_t seed = 0; seed < 17; ++seed) {
      FaultSpec spec;
      spec.seed = seed;
      spec.n_faults = 1 + seed % 8;
      spec.allow_additions = seed % 3 == 0;
      const LiftedModel h = inject(p.robot, spec);
      EXPECT_EQ(gamma_inverse(gamma(h), h), h);
      const PddlText text = emit_pddl(h);
      EXPECT_EQ(parse_problem(text.problem, parse_domain(text.domain)), h);
      ++checked;
    }
  }
  EXPECT_GE(checked, 200);
}
