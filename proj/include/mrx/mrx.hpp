#pragma once

#include "mrx/sexpr.hpp"
#include "mrx/pddl.hpp"
#include "mrx/bitset.hpp"
#include "mrx/ground.hpp"
#include "mrx/planner.hpp"
#include "mrx/model_space.hpp"
#include "mrx/explain.hpp"
#include "mrx/perturb.hpp"
#include "mrx/bench.hpp"
#include "mrx/report.hpp"
