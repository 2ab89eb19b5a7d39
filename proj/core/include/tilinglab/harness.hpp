#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tilinglab/mpgraph.hpp"

namespace tilinglab::harness {

enum class HostKind { None, Extremal, Sublinear, Custom };
enum class SolverKind { Exact, Pipeline, Greedy };

struct HostSpec {
  HostKind kind = HostKind::None;
  double alpha = 0.1;   // extremal
  double omega = 2.0;   // sublinear
  std::string path;     // custom
};

struct SweepConfig {
  int r = 3;
  std::vector<int> n_values;
  std::vector<double> c_grid;  // p = c * n^{-2/r}
  int trials_per_cell = 1;
  HostSpec host;
  SolverKind solver = SolverKind::Exact;
  std::uint64_t master_seed = 0;
  std::uint64_t budget = 5'000'000;
  // pipeline-solver parameters; empirical defaults, not derived constants
  double pipeline_d = 0.4;
  double pipeline_delta = 0.04;
  int threads = 1;
};

enum class Outcome { Perfect, NoTiling, BudgetExceeded, PipelineFailure };

std::string outcome_to_string(Outcome outcome, const std::string& stage);

struct TrialRecord {
  int n = 0;
  double c = 0.0;
  double p = 0.0;
  std::uint64_t seed = 0;
  Outcome outcome = Outcome::NoTiling;
  std::string failure_stage;  // pipeline failures only
  std::int64_t wall_ms = 0;
  std::size_t clique_count = 0;
  std::size_t leftover = 0;
  std::uint64_t digest = 0;  // tiling digest for perfect outcomes
};

struct CellStats {
  int n = 0;
  double c = 0.0;
  std::size_t trials = 0;
  std::size_t successes = 0;
  double fraction = 0.0;
  double ci_lo = 0.0;  // Wilson 95%
  double ci_hi = 0.0;
};

struct TransitionFit {
  double c50 = 0.0;
  double slope = 0.0;  // logistic steepness in log c
  double log_likelihood = 0.0;
  double c50_lo = 0.0;  // profile 95% CI
  double c50_hi = 0.0;
};

struct SweepResult {
  std::vector<TrialRecord> records;  // sorted by (n, c, seed)
  std::vector<CellStats> cells;
  std::vector<std::pair<int, TransitionFit>> fits;  // per n with a valid fit
  std::optional<double> exponent_estimate;  // slope of log p50 vs log n
};

/// trial seed = splitmix64 chain over (master, n, c-index, trial-index);
/// the scheme is documented in the README.
std::uint64_t trial_seed(std::uint64_t master, int n, std::size_t c_index,
                         int trial_index);

/// Builds the host, unions the seeded G_r(n, c n^{-2/r}) sample, runs the
/// configured solver and re-validates any claimed tiling. Solver failures
/// become outcomes, never exceptions.
TrialRecord run_trial(const SweepConfig& cfg, int n, std::size_t c_index,
                      int trial_index);

/// Runs every cell; deterministic given master_seed regardless of the worker
/// count. on_progress (optional) fires after each completed cell with all
/// records finished so far, already sorted.
SweepResult sweep(const SweepConfig& cfg,
                  const std::function<void(const std::vector<TrialRecord>&)>&
                      on_progress = nullptr,
                  const std::vector<TrialRecord>* resume_from = nullptr);

/// Maximum-likelihood 2-parameter logistic fit in log c over the cells of
/// one n. Throws DegenerateData when every cell is all-success or every cell
/// is all-failure.
TransitionFit fit_transition(std::span<const CellStats> cells);

SweepConfig parse_config(const std::string& json_text);

/// Fixed schema `n,c,p,seed,outcome,wall_ms,cliques,leftover`. wall_ms is
/// emitted as 0 unless with_timings is set, keeping the file byte-identical
/// across reruns and worker counts.
std::string records_to_csv(std::span<const TrialRecord> records,
                           bool with_timings = false);
std::vector<TrialRecord> records_from_csv(const std::string& text);

std::string summary_to_json(const SweepConfig& cfg, const SweepResult& result);

/// Gnuplot-ready transition data: one block per n, columns c fraction lo hi.
std::string transition_data(const SweepResult& result);

}  // namespace tilinglab::harness
