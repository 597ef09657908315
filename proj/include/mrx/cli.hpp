#pragma once

// The `mrx` command line: plan, validate, explain and bench subcommands.
// Exit codes: 0 ok, 1 input error, 2 unsolvable (or invalid plan for
// validate), 3 budget exceeded.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mrx/mrx.hpp"

namespace mrx::cli {

enum ExitCode : int { kOk = 0, kInputError = 1, kUnsolvable = 2, kBudget = 3 };

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline LiftedModel load_model(const std::string& domain_path, const std::string& problem_path) {
  const Domain d = parse_domain(read_file(domain_path), domain_path);
  return parse_problem(read_file(problem_path), d, problem_path);
}

inline Plan load_plan(const std::string& path) {
  std::istringstream in(read_file(path));
  try {
    return parse_plan(in);
  } catch (const PlanFormatError& e) {
    throw InputError(path + ":" + std::to_string(e.line()) + ":1: plan format error: " + e.message());
  }
}

struct Budget {
  std::uint64_t max_expansions = 1'000'000;
  double time_limit_s = 60.0;

  Limits limits() const {
    return {max_expansions, std::chrono::milliseconds(static_cast<std::int64_t>(time_limit_s * 1000.0))};
  }
  ExplainOptions options() const {
    ExplainOptions o;
    o.planner = limits();
    o.max_model_expansions = max_expansions;
    o.time_limit = o.planner.time_limit;
    return o;
  }
};

inline void add_budget(CLI::App* app, Budget& b) {
  app->add_option("--max-expansions", b.max_expansions,
                  "Node budget for each planner call and for the model-space search")
      ->capture_default_str();
  app->add_option("--time-limit", b.time_limit_s, "Wall-clock limit in seconds")->capture_default_str();
}

inline std::map<std::string, Granularity> granularity_map() {
  return {{"lifted", Granularity::Lifted}, {"grounded", Granularity::Grounded}};
}

}  // namespace detail

/// Runs the command line with `args` (program name excluded).
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  using namespace detail;
  CLI::App app{"Explains plans by reconciling a planner's model with a human's model", "mrx"};
  app.require_subcommand(1);

  std::string robot_domain, robot_problem, human_domain, human_problem, plan_path;
  Budget budget;
  bool json = false;

  // plan
  auto* plan_cmd = app.add_subcommand("plan", "Compute a cost-optimal plan for the robot model");
  plan_cmd->add_option("--robot-domain,--domain", robot_domain, "Domain file")->required();
  plan_cmd->add_option("--robot-problem,--problem", robot_problem, "Problem file")->required();
  add_budget(plan_cmd, budget);

  // validate
  auto* val_cmd = app.add_subcommand("validate", "Check a plan against a model");
  val_cmd->add_option("--robot-domain,--domain", robot_domain, "Domain file")->required();
  val_cmd->add_option("--robot-problem,--problem", robot_problem, "Problem file")->required();
  val_cmd->add_option("--plan", plan_path, "Plan file")->required();

  // explain
  std::string cls_name = "mce";
  bool no_heuristic = false, verify = false;
  Granularity granularity = Granularity::Lifted;
  std::optional<std::uint64_t> seed;
  auto* ex_cmd = app.add_subcommand("explain", "Explain the robot plan to the human model");
  ex_cmd->add_option("--robot-domain", robot_domain, "Robot domain file")->required();
  ex_cmd->add_option("--robot-problem", robot_problem, "Robot problem file")->required();
  ex_cmd->add_option("--human-domain", human_domain, "Human domain file")->required();
  ex_cmd->add_option("--human-problem", human_problem, "Human problem file (defaults to the robot problem)");
  ex_cmd->add_option("--plan", plan_path, "Plan file (computed in the robot model when omitted)");
  ex_cmd->add_option("--class", cls_name, "Explanation class")
      ->check(CLI::IsMember({"mpe", "ppe", "mce", "mce-approx", "mme"}))
      ->capture_default_str();
  ex_cmd->add_flag("--no-heuristic", no_heuristic, "Disable relevance-preferred expansion");
  ex_cmd->add_option("--granularity", granularity, "lifted or grounded")
      ->transform(CLI::CheckedTransformer(granularity_map(), CLI::ignore_case));
  ex_cmd->add_option("--seed", seed, "Randomise tie-breaking with this seed");
  ex_cmd->add_flag("--json", json, "Emit JSON");
  ex_cmd->add_flag("--verify", verify, "Also run the monotonicity check");
  add_budget(ex_cmd, budget);

  // bench
  std::string fixtures = "fixtures/bench", output;
  std::vector<std::size_t> faults{3};
  std::uint64_t bench_seed = 0;
  int instances = 1, jobs = 1, repeats = 3;
  bool no_timing = false, allow_additions = false;
  std::vector<std::string> explainer_names, fault_kind_names;
  auto* bench_cmd = app.add_subcommand("bench", "Run the fault-injection experiment matrix");
  bench_cmd->add_option("--fixtures", fixtures, "Directory of <domain>/domain.pddl + p*.pddl")->capture_default_str();
  bench_cmd->add_option("--faults", faults, "Fault counts (one spec per count and seed)")->capture_default_str();
  bench_cmd->add_option("--seed", bench_seed, "First seed")->capture_default_str();
  bench_cmd->add_option("--instances", instances, "Seeds per problem and fault count")->capture_default_str();
  bench_cmd->add_option("--granularity", granularity, "lifted or grounded")
      ->transform(CLI::CheckedTransformer(granularity_map(), CLI::ignore_case));
  bench_cmd->add_option("--explainers", explainer_names, "Subset of mpe,ppe,mme,mce-noheur,mce,mce-approx")
      ->delimiter(',');
  bench_cmd->add_option("--fault-kinds", fault_kind_names, "drop-precondition,drop-add-effect,...")->delimiter(',');
  bench_cmd->add_flag("--allow-additions", allow_additions, "Also inject spurious features");
  bench_cmd->add_option("--jobs", jobs, "Worker threads")->capture_default_str();
  bench_cmd->add_option("--repeats", repeats, "Timed runs per cell (median reported)")->capture_default_str();
  bench_cmd->add_flag("--no-timing", no_timing, "Write time_ms as 0 for reproducible output");
  bench_cmd->add_flag("--json", json, "Emit JSON instead of CSV");
  bench_cmd->add_option("--output,-o", output, "Write to this file instead of stdout");
  add_budget(bench_cmd, budget);

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "mrx: " << e.what() << '\n';
    return kInputError;
  }

  try {
    if (plan_cmd->parsed()) {
      const GroundTask task = ground(load_model(robot_domain, robot_problem));
      const PlanResult r = optimal_plan(task, budget.limits());
      if (r.status == PlanStatus::BudgetExceeded) {
        err << "mrx: budget exceeded after " << r.expansions << " expansions\n";
        return kBudget;
      }
      if (r.status == PlanStatus::Unsolvable) {
        err << "mrx: unsolvable\n";
        out << "; unsolvable\n";
        return kUnsolvable;
      }
      out << format_plan(r.plan) << "; cost = " << r.cost << '\n';
      return kOk;
    }

    if (val_cmd->parsed()) {
      const GroundTask task = ground(load_model(robot_domain, robot_problem));
      const Plan plan = load_plan(plan_path);
      const ValidationReport rep = validate(task, plan);
      if (rep.valid) {
        out << "valid; cost = " << rep.cost << '\n';
        return kOk;
      }
      out << "invalid";
      if (rep.failing_step) {
        out << " at step " << *rep.failing_step << " (" << plan.steps[*rep.failing_step].key() << ")";
        if (rep.unknown_action) {
          out << ": unknown action";
        } else {
          out << ": missing {";
          for (std::size_t i = 0; i < rep.missing_preconditions.size(); ++i)
            out << (i ? ", " : "") << to_pddl(rep.missing_preconditions[i]);
          out << "}";
        }
      } else {
        out << ": goal not reached, missing {";
        for (std::size_t i = 0; i < rep.goal_gap.size(); ++i) out << (i ? ", " : "") << to_pddl(rep.goal_gap[i]);
        out << "}";
      }
      out << '\n';
      return kUnsolvable;
    }

    if (ex_cmd->parsed()) {
      LiftedModel robot = load_model(robot_domain, robot_problem);
      LiftedModel human = load_model(human_domain, human_problem.empty() ? robot_problem : human_problem);
      ExplainOptions opts = budget.options();
      opts.use_heuristic = !no_heuristic;
      opts.seed = seed;
      std::optional<Plan> computed;
      Plan plan;
      if (plan_path.empty()) {
        PlanResult r = optimal_plan(ground(robot), opts.planner);
        if (r.status == PlanStatus::BudgetExceeded) {
          err << "mrx: budget exceeded while planning in the robot model\n";
          return kBudget;
        }
        if (r.status == PlanStatus::Unsolvable) {
          err << "mrx: robot model is unsolvable\n";
          return kUnsolvable;
        }
        plan = r.plan;
        computed = r.plan;
      } else {
        plan = load_plan(plan_path);
      }
      std::optional<MrpInstance> inst;
      try {
        inst.emplace(std::move(robot), std::move(human), plan, granularity, opts.planner);
      } catch (const MrpError& e) {
        throw InputError(std::string(plan_path.empty() ? "<plan>" : plan_path) + ": " + e.what());
      }
      ExplanationReport rep;
      rep.explanation = explain(*inst, *parse_explanation_class(cls_name), opts);
      rep.complete = check_completeness(*inst, rep.explanation, opts.planner);
      if (verify) rep.monotonic = check_monotonicity(*inst, rep.explanation, opts).monotonic;
      if (json) {
        nlohmann::json j = to_json(rep);
        if (computed) {
          nlohmann::json steps = nlohmann::json::array();
          for (const auto& s : computed->steps) steps.push_back("(" + s.key() + ")");
          j["plan"] = steps;
          j["plan_cost"] = inst->plan_cost();
        }
        out << j.dump(2) << '\n';
      } else {
        if (computed) out << format_plan(*computed) << "; cost = " << inst->plan_cost() << '\n';
        write_text(out, rep.explanation);
        for (const auto& n : rep.explanation.notes) err << "mrx: note: " << n << '\n';
        if (!*rep.complete) err << "mrx: note: explanation is not complete\n";
        if (rep.monotonic && !*rep.monotonic) err << "mrx: note: explanation is not monotonic\n";
      }
      return kOk;
    }

    if (bench_cmd->parsed()) {
      BenchConfig cfg;
      cfg.options = budget.options();
      cfg.jobs = jobs;
      cfg.repeats = repeats;
      cfg.timing = !no_timing;
      if (!explainer_names.empty()) {
        cfg.explainers.clear();
        for (const auto& n : explainer_names) {
          auto e = parse_bench_explainer(n);
          if (!e) throw InputError("unknown explainer '" + n + "'");
          cfg.explainers.push_back(*e);
        }
      }
      FaultSpec proto;
      proto.granularity = granularity;
      proto.allow_additions = allow_additions;
      if (!fault_kind_names.empty()) {
        proto.fault_kinds.clear();
        for (const auto& n : fault_kind_names) {
          auto k = parse_fault_kind(n);
          if (!k) throw InputError("unknown fault kind '" + n + "'");
          proto.fault_kinds.insert(*k);
        }
      }
      for (auto n : faults)
        for (int i = 0; i < instances; ++i) {
          FaultSpec s = proto;
          s.n_faults = n;
          s.seed = bench_seed + static_cast<std::uint64_t>(i);
          cfg.specs.push_back(s);
        }
      if (!std::filesystem::is_directory(fixtures)) throw InputError(fixtures + ": not a directory");
      const auto problems = load_fixture_dir(fixtures);
      const auto rows = run_matrix(problems, cfg);
      std::ofstream file;
      if (!output.empty()) {
        file.open(output);
        if (!file) throw InputError(output + ": cannot write");
      }
      std::ostream& dst = output.empty() ? out : file;
      if (json)
        write_json(dst, rows);
      else
        write_csv(dst, rows);
      return kOk;
    }
  } catch (const InputError& e) {
    err << e.what() << '\n';
    return kInputError;
  } catch (const PddlError& e) {
    err << e.what() << '\n';
    return kInputError;
  } catch (const BudgetExceeded& e) {
    err << "mrx: " << e.what() << '\n';
    return kBudget;
  } catch (const SearchSpaceTooLarge& e) {
    err << "mrx: " << e.what() << '\n';
    return kBudget;
  } catch (const std::exception& e) {
    err << "mrx: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

}  // namespace mrx::cli
