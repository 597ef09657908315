#pragma once

// Experiment matrix: fixtures x fault specs x explainers -> one row each.

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "mrx/explain.hpp"
#include "mrx/perturb.hpp"

namespace mrx {

/// An explainer column of the matrix. `mce` and `mce-noheur` differ only in
/// the relevance preference.
struct BenchExplainer {
  std::string label;
  ExplanationClass cls;
  bool use_heuristic = true;
};

inline std::vector<BenchExplainer> default_bench_explainers() {
  return {{"mpe", ExplanationClass::Mpe, true},
          {"ppe", ExplanationClass::Ppe, true},
          {"mme", ExplanationClass::Mme, true},
          {"mce-noheur", ExplanationClass::Mce, false},
          {"mce", ExplanationClass::Mce, true},
          {"mce-approx", ExplanationClass::MceApprox, true}};
}

inline std::optional<BenchExplainer> parse_bench_explainer(std::string_view s) {
  for (auto& e : default_bench_explainers())
    if (e.label == s) return e;
  return std::nullopt;
}

struct BenchProblem {
  std::string domain;
  std::string problem;
  LiftedModel robot;
};

struct BenchRow {
  std::string domain;
  std::string problem;
  std::string explainer;
  std::optional<std::size_t> size;
  double time_ms = 0.0;
  std::uint64_t expansions = 0;
  std::uint64_t planner_calls = 0;
  std::string status = "ok";
};

struct BenchConfig {
  std::vector<FaultSpec> specs;
  std::vector<BenchExplainer> explainers = default_bench_explainers();
  ExplainOptions options;
  int repeats = 3;
  int jobs = 1;
  /// When false, time_ms is written as 0 so that output is reproducible.
  bool timing = true;
};

/// Loads `<dir>/<domain>/domain.pddl` with every `p*.pddl` beside it, in
/// lexicographic order of domain then problem.
inline std::vector<BenchProblem> load_fixture_dir(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw std::runtime_error("cannot read " + p.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  std::vector<fs::path> domains;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_directory() && fs::exists(e.path() / "domain.pddl")) domains.push_back(e.path());
  std::sort(domains.begin(), domains.end());
  std::vector<BenchProblem> out;
  for (const auto& d : domains) {
    const Domain dom = parse_domain(slurp(d / "domain.pddl"), (d / "domain.pddl").string());
    std::vector<fs::path> probs;
    for (const auto& e : fs::directory_iterator(d)) {
      const std::string name = e.path().filename().string();
      if (e.is_regular_file() && name.size() > 6 && name[0] == 'p' && e.path().extension() == ".pddl")
        probs.push_back(e.path());
    }
    std::sort(probs.begin(), probs.end());
    for (const auto& p : probs)
      out.push_back({d.filename().string(), p.stem().string(), parse_problem(slurp(p), dom, p.string())});
  }
  return out;
}

namespace detail {

inline BenchRow run_cell(const std::string& domain, const std::string& problem, const MrpInstance& inst,
                         const BenchExplainer& ex, const BenchConfig& cfg) {
  BenchRow row{domain, problem, ex.label, std::nullopt, 0.0, 0, 0, "ok"};
  ExplainOptions opts = cfg.options;
  opts.use_heuristic = ex.use_heuristic;
  std::vector<double> times;
  try {
    for (int r = 0; r < std::max(1, cfg.repeats); ++r) {
      Explanation e = explain(inst, ex.cls, opts);
      times.push_back(e.stats.elapsed_ms());
      row.size = e.size();
      row.expansions = e.stats.expansions;
      row.planner_calls = e.stats.planner_calls;
    }
    std::sort(times.begin(), times.end());
    row.time_ms = cfg.timing ? times[times.size() / 2] : 0.0;
  } catch (const BudgetExceeded&) {
    row.status = "budget-exceeded";
    row.size.reset();
  } catch (const SearchSpaceTooLarge&) {
    row.status = "too-large";
    row.size.reset();
  } catch (const std::exception&) {
    row.status = "error";
    row.size.reset();
  }
  return row;
}

}  // namespace detail

/// One row per (problem, spec, explainer), in that canonical order
/// regardless of `jobs`. Failures are recorded in the row status.
inline std::vector<BenchRow> run_matrix(const std::vector<BenchProblem>& problems, const BenchConfig& cfg) {
  struct Unit {
    const BenchProblem* problem;
    const FaultSpec* spec;
  };
  std::vector<Unit> units;
  for (const auto& p : problems)
    for (const auto& s : cfg.specs) units.push_back({&p, &s});
  const std::size_t width = cfg.explainers.size();
  std::vector<BenchRow> rows(units.size() * width);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t u = next++; u < units.size(); u = next++) {
      const auto& [prob, spec] = units[u];
      std::string pid = prob->problem;
      if (cfg.specs.size() > 1)
        pid += "@f" + std::to_string(spec->n_faults) + "s" + std::to_string(spec->seed);
      std::optional<MrpInstance> inst;
      std::string failure;
      try {
        LiftedModel human = inject(prob->robot, *spec);
        inst.emplace(MrpInstance::with_optimal_plan(prob->robot, std::move(human), spec->granularity,
                                                    cfg.options.planner));
      } catch (const BudgetExceeded&) {
        failure = "budget-exceeded";
      } catch (const InsufficientCandidates&) {
        failure = "insufficient-candidates";
      } catch (const std::exception&) {
        failure = "error";
      }
      for (std::size_t k = 0; k < width; ++k) {
        BenchRow& row = rows[u * width + k];
        if (!inst) {
          row = {prob->domain, pid, cfg.explainers[k].label, std::nullopt, 0.0, 0, 0, failure};
          continue;
        }
        row = detail::run_cell(prob->domain, pid, *inst, cfg.explainers[k], cfg);
      }
    }
  };
  const int jobs = std::max(1, cfg.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return rows;
}

inline std::string format_time_ms(double ms) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(3) << ms;
  return os.str();
}

inline void write_csv(std::ostream& os, const std::vector<BenchRow>& rows) {
  os << "domain,problem,explainer,size,time_ms,expansions,planner_calls,status\n";
  for (const auto& r : rows) {
    os << r.domain << ',' << r.problem << ',' << r.explainer << ',' << (r.size ? std::to_string(*r.size) : "")
       << ',' << format_time_ms(r.time_ms) << ',' << r.expansions << ',' << r.planner_calls << ',' << r.status
       << '\n';
  }
}

}  // namespace mrx
