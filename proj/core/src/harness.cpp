#include "tilinglab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "tilinglab/absorber.hpp"
#include "tilinglab/generators.hpp"
#include "tilinglab/rng.hpp"
#include "tilinglab/tiler.hpp"

namespace tilinglab::harness {

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

PartiteGraph build_host(const SweepConfig& cfg, int n) {
  switch (cfg.host.kind) {
    case HostKind::None:
      return PartiteGraph(cfg.r, n, {});
    case HostKind::Extremal:
      return gen::gen_extremal(cfg.r, n, cfg.host.alpha);
    case HostKind::Sublinear:
      return gen::gen_sublinear(cfg.r, n, cfg.host.omega);
    case HostKind::Custom: {
      std::ifstream in(cfg.host.path);
      if (!in)
        throw Error(ErrorCode::ConfigError,
                    "cannot open host file " + cfg.host.path);
      std::stringstream buffer;
      buffer << in.rdbuf();
      PartiteGraph g = PartiteGraph::deserialize(buffer.str());
      if (g.parts() != cfg.r || g.part_size() != n)
        throw Error(ErrorCode::ConfigError,
                    "custom host shape does not match the sweep cell");
      return g;
    }
  }
  throw Error(ErrorCode::ConfigError, "bad host kind");
}

}  // namespace

std::string outcome_to_string(Outcome outcome, const std::string& stage) {
  switch (outcome) {
    case Outcome::Perfect: return "perfect";
    case Outcome::NoTiling: return "no_tiling";
    case Outcome::BudgetExceeded: return "budget_exceeded";
    case Outcome::PipelineFailure: return "pipeline_failure:" + stage;
  }
  return "unknown";
}

std::uint64_t trial_seed(std::uint64_t master, int n, std::size_t c_index,
                         int trial_index) {
  return derive_seed(master, {static_cast<std::uint64_t>(n),
                              static_cast<std::uint64_t>(c_index),
                              static_cast<std::uint64_t>(trial_index)});
}

TrialRecord run_trial(const SweepConfig& cfg, int n, std::size_t c_index,
                      int trial_index) {
  const double c = cfg.c_grid.at(c_index);
  TrialRecord rec;
  rec.n = n;
  rec.c = c;
  rec.p = std::min(1.0, c * std::pow(static_cast<double>(n), -2.0 / cfg.r));
  rec.seed = trial_seed(cfg.master_seed, n, c_index, trial_index);

  const auto t0 = std::chrono::steady_clock::now();
  const PartiteGraph host = build_host(cfg, n);

  if (cfg.solver == SolverKind::Pipeline) {
    absorber::PipelineConfig pc;
    pc.d = cfg.pipeline_d;
    pc.delta = cfg.pipeline_delta;
    pc.p = rec.p;
    pc.seed = rec.seed;
    pc.match_budget = cfg.budget;
    absorber::PipelineResult pr = absorber::star_tiling_pipeline(host, pc);
    if (pr.perfect) {
      rec.outcome = Outcome::Perfect;
      rec.leftover = 0;
      rec.clique_count = pr.tiling.copies.size();
      rec.digest = tiler::tiling_digest(pr.tiling);
    } else {
      rec.outcome = Outcome::PipelineFailure;
      rec.failure_stage = absorber::pipeline_stage_name(pr.failed_stage);
      rec.leftover = static_cast<std::size_t>(n) - pr.trace.m_size;
      rec.clique_count = pr.trace.f_tilde_edges;
    }
  } else {
    const PartiteGraph instance =
        graph_union(host, gen::gen_random(cfg.r, n, {rec.p, rec.seed}));
    if (cfg.solver == SolverKind::Exact) {
      tiler::TilingSearchResult sr =
          tiler::exact_perfect_tiling(instance, cfg.budget);
      rec.clique_count = sr.clique_count;
      switch (sr.status) {
        case tiler::SearchStatus::Perfect:
          rec.outcome = Outcome::Perfect;
          rec.leftover = 0;
          if (!tiler::validate_tiling(instance, sr.tiling, true))
            throw Error(ErrorCode::Internal, "solver tiling failed validation");
          rec.digest = tiler::tiling_digest(sr.tiling);
          break;
        case tiler::SearchStatus::NoTiling:
          rec.outcome = Outcome::NoTiling;
          rec.leftover = n;
          break;
        case tiler::SearchStatus::BudgetExceeded:
          rec.outcome = Outcome::BudgetExceeded;
          rec.leftover = n;
          break;
      }
    } else {
      tiler::Tiling tiling =
          tiler::greedy_partial_tiling(instance, derive_seed(rec.seed, {7}));
      rec.clique_count = tiler::enumerate_kr(instance).copies.size();
      rec.leftover = tiling.leftover_per_class(n);
      if (rec.leftover == 0) {
        rec.outcome = Outcome::Perfect;
        if (!tiler::validate_tiling(instance, tiling, true))
          throw Error(ErrorCode::Internal, "greedy tiling failed validation");
        rec.digest = tiler::tiling_digest(tiling);
      } else {
        rec.outcome = Outcome::PipelineFailure;
        rec.failure_stage = "greedy_stall";
      }
    }
  }
  rec.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  return rec;
}

namespace {

double wilson_lo(double phat, double nn) {
  if (nn == 0) return 0.0;
  const double z = 1.959963985;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = phat + z2 / (2 * nn);
  const double half = z * std::sqrt(phat * (1 - phat) / nn + z2 / (4 * nn * nn));
  return std::max(0.0, (center - half) / denom);
}

double wilson_hi(double phat, double nn) {
  if (nn == 0) return 1.0;
  const double z = 1.959963985;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = phat + z2 / (2 * nn);
  const double half = z * std::sqrt(phat * (1 - phat) / nn + z2 / (4 * nn * nn));
  return std::min(1.0, (center + half) / denom);
}

std::vector<CellStats> make_cells(const SweepConfig& cfg,
                                  const std::vector<TrialRecord>& records) {
  std::vector<CellStats> cells;
  for (int n : cfg.n_values)
    for (double c : cfg.c_grid) {
      CellStats cell;
      cell.n = n;
      cell.c = c;
      for (const TrialRecord& rec : records) {
        if (rec.n != n || rec.c != c) continue;
        ++cell.trials;
        if (rec.outcome == Outcome::Perfect) ++cell.successes;
      }
      if (cell.trials == 0) continue;
      cell.fraction =
          static_cast<double>(cell.successes) / static_cast<double>(cell.trials);
      cell.ci_lo = wilson_lo(cell.fraction, static_cast<double>(cell.trials));
      cell.ci_hi = wilson_hi(cell.fraction, static_cast<double>(cell.trials));
      cells.push_back(cell);
    }
  return cells;
}

}  // namespace

TransitionFit fit_transition(std::span<const CellStats> cells) {
  if (cells.size() < 3)
    throw Error(ErrorCode::DegenerateData, "need >= 3 cells");
  bool any_success = false, any_failure = false;
  for (const CellStats& cell : cells) {
    if (cell.successes > 0) any_success = true;
    if (cell.successes < cell.trials) any_failure = true;
  }
  if (!any_success || !any_failure)
    throw Error(ErrorCode::DegenerateData, "all-0 or all-1 success data");

  const double kMaxSlope = 60.0;
  auto log_likelihood = [&](double x0, double k) {
    double ll = 0.0;
    for (const CellStats& cell : cells) {
      const double x = std::log(cell.c);
      const double q = 1.0 / (1.0 + std::exp(-k * (x - x0)));
      const double qc = std::clamp(q, 1e-12, 1.0 - 1e-12);
      ll += cell.successes * std::log(qc) +
            (cell.trials - cell.successes) * std::log1p(-qc);
    }
    return ll;
  };

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  for (const CellStats& cell : cells) {
    xmin = std::min(xmin, std::log(cell.c));
    xmax = std::max(xmax, std::log(cell.c));
  }

  auto best_k_for = [&](double x0) {
    double best_k = 0.1, best_ll = -std::numeric_limits<double>::infinity();
    for (double k = 0.1; k <= kMaxSlope; k *= 1.05) {
      const double ll = log_likelihood(x0, k);
      if (ll > best_ll) {
        best_ll = ll;
        best_k = k;
      }
    }
    return std::pair{best_k, best_ll};
  };

  TransitionFit fit;
  double best_ll = -std::numeric_limits<double>::infinity();
  const double lo = xmin - 1.0, hi = xmax + 1.0;
  const int steps = 1600;
  std::vector<double> profile(steps + 1);
  for (int i = 0; i <= steps; ++i) {
    const double x0 = lo + (hi - lo) * i / steps;
    auto [k, ll] = best_k_for(x0);
    profile[i] = ll;
    if (ll > best_ll) {
      best_ll = ll;
      fit.c50 = std::exp(x0);
      fit.slope = k;
    }
  }
  fit.log_likelihood = best_ll;

  // profile likelihood 95% interval: logL >= max - 1.92
  double ci_lo = fit.c50, ci_hi = fit.c50;
  for (int i = 0; i <= steps; ++i)
    if (profile[i] >= best_ll - 1.92) {
      const double c = std::exp(lo + (hi - lo) * i / steps);
      ci_lo = std::min(ci_lo, c);
      ci_hi = std::max(ci_hi, c);
    }
  fit.c50_lo = ci_lo;
  fit.c50_hi = ci_hi;
  return fit;
}

SweepResult sweep(
    const SweepConfig& cfg,
    const std::function<void(const std::vector<TrialRecord>&)>& on_progress,
    const std::vector<TrialRecord>* resume_from) {
  if (cfg.n_values.empty() || cfg.c_grid.empty() || cfg.trials_per_cell < 1)
    throw Error(ErrorCode::ConfigError, "empty sweep grid");

  struct Task {
    int n;
    std::size_t c_index;
    int trial;
  };
  std::vector<Task> tasks;
  for (int n : cfg.n_values)
    for (std::size_t ci = 0; ci < cfg.c_grid.size(); ++ci)
      for (int t = 0; t < cfg.trials_per_cell; ++t)
        tasks.push_back({n, ci, t});

  std::vector<TrialRecord> records(tasks.size());
  std::vector<char> done(tasks.size(), 0);

  if (resume_from) {
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      const std::uint64_t seed = trial_seed(cfg.master_seed, tasks[i].n,
                                            tasks[i].c_index, tasks[i].trial);
      for (const TrialRecord& rec : *resume_from)
        if (rec.seed == seed && rec.n == tasks[i].n &&
            rec.c == cfg.c_grid[tasks[i].c_index]) {
          records[i] = rec;
          done[i] = 1;
          break;
        }
    }
  }

  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::vector<char> finished(tasks.size(), 0);
  std::size_t n_done = 0;
  const std::size_t flush_every =
      std::max<std::size_t>(1, cfg.trials_per_cell);
  auto flush_locked = [&]() {
    std::vector<TrialRecord> partial;
    for (std::size_t i = 0; i < tasks.size(); ++i)
      if (finished[i]) partial.push_back(records[i]);
    std::sort(partial.begin(), partial.end(),
              [](const TrialRecord& a, const TrialRecord& b) {
                return std::tie(a.n, a.c, a.seed) < std::tie(b.n, b.c, b.seed);
              });
    on_progress(partial);
  };
  auto work = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      TrialRecord rec;
      const bool fresh = !done[i];
      if (fresh)
        rec = run_trial(cfg, tasks[i].n, tasks[i].c_index, tasks[i].trial);
      std::lock_guard<std::mutex> lock(mu);
      if (fresh) records[i] = rec;
      finished[i] = 1;
      if (on_progress && ++n_done % flush_every == 0) flush_locked();
    }
  };

  const int workers = std::max(1, cfg.threads);
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& th : pool) th.join();

  SweepResult result;
  result.records = std::move(records);
  std::sort(result.records.begin(), result.records.end(),
            [](const TrialRecord& a, const TrialRecord& b) {
              return std::tie(a.n, a.c, a.seed) < std::tie(b.n, b.c, b.seed);
            });
  result.cells = make_cells(cfg, result.records);
  if (on_progress) on_progress(result.records);

  for (int n : cfg.n_values) {
    std::vector<CellStats> cells_n;
    for (const CellStats& cell : result.cells)
      if (cell.n == n) cells_n.push_back(cell);
    try {
      result.fits.emplace_back(n, fit_transition(cells_n));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateData) throw;
    }
  }

  if (result.fits.size() >= 2) {
    // least-squares slope of log p50 against log n
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [n, fit] : result.fits) {
      const double x = std::log(static_cast<double>(n));
      const double y =
          std::log(fit.c50 * std::pow(static_cast<double>(n), -2.0 / cfg.r));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double m = static_cast<double>(result.fits.size());
    result.exponent_estimate = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  }
  return result;
}

SweepConfig parse_config(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("bad JSON: ") + e.what());
  }
  SweepConfig cfg;
  try {
    cfg.r = j.at("r").get<int>();
    cfg.n_values = j.at("n_values").get<std::vector<int>>();
    cfg.c_grid = j.at("c_grid").get<std::vector<double>>();
    cfg.trials_per_cell = j.at("trials_per_cell").get<int>();
    cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
    if (j.contains("budget")) cfg.budget = j["budget"].get<std::uint64_t>();
    if (j.contains("threads")) cfg.threads = j["threads"].get<int>();

    const auto& host = j.at("host");
    const std::string kind = host.at("kind").get<std::string>();
    if (kind == "none") {
      cfg.host.kind = HostKind::None;
    } else if (kind == "extremal") {
      cfg.host.kind = HostKind::Extremal;
      cfg.host.alpha = host.at("alpha").get<double>();
    } else if (kind == "sublinear") {
      cfg.host.kind = HostKind::Sublinear;
      cfg.host.omega = host.at("omega").get<double>();
    } else if (kind == "custom") {
      cfg.host.kind = HostKind::Custom;
      cfg.host.path = host.at("path").get<std::string>();
    } else {
      throw Error(ErrorCode::ConfigError, "unknown host kind " + kind);
    }

    const std::string solver = j.at("solver").get<std::string>();
    if (solver == "exact")
      cfg.solver = SolverKind::Exact;
    else if (solver == "pipeline")
      cfg.solver = SolverKind::Pipeline;
    else if (solver == "greedy")
      cfg.solver = SolverKind::Greedy;
    else
      throw Error(ErrorCode::ConfigError, "unknown solver " + solver);

    if (j.contains("pipeline")) {
      cfg.pipeline_d = j["pipeline"].value("d", cfg.pipeline_d);
      cfg.pipeline_delta = j["pipeline"].value("delta", cfg.pipeline_delta);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("bad config: ") + e.what());
  }
  for (double c : cfg.c_grid)
    if (!(c > 0.0)) throw Error(ErrorCode::ConfigError, "c values must be > 0");
  if (cfg.trials_per_cell < 1)
    throw Error(ErrorCode::ConfigError, "trials_per_cell must be >= 1");
  return cfg;
}

std::string records_to_csv(std::span<const TrialRecord> records,
                           bool with_timings) {
  std::ostringstream out;
  out << "n,c,p,seed,outcome,wall_ms,cliques,leftover\n";
  for (const TrialRecord& rec : records) {
    out << rec.n << ',' << fmt_double(rec.c) << ',' << fmt_double(rec.p) << ','
        << rec.seed << ',' << outcome_to_string(rec.outcome, rec.failure_stage)
        << ',' << (with_timings ? rec.wall_ms : 0) << ',' << rec.clique_count
        << ',' << rec.leftover << '\n';
  }
  return out.str();
}

std::vector<TrialRecord> records_from_csv(const std::string& text) {
  std::vector<TrialRecord> records;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::istringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() != 8)
      throw Error(ErrorCode::ParseError, "bad CSV row: " + line);
    TrialRecord rec;
    rec.n = std::stoi(fields[0]);
    rec.c = std::stod(fields[1]);
    rec.p = std::stod(fields[2]);
    rec.seed = std::stoull(fields[3]);
    std::string outcome = fields[4];
    if (outcome == "perfect") {
      rec.outcome = Outcome::Perfect;
    } else if (outcome == "no_tiling") {
      rec.outcome = Outcome::NoTiling;
    } else if (outcome == "budget_exceeded") {
      rec.outcome = Outcome::BudgetExceeded;
    } else if (outcome.rfind("pipeline_failure:", 0) == 0) {
      rec.outcome = Outcome::PipelineFailure;
      rec.failure_stage = outcome.substr(std::string("pipeline_failure:").size());
    } else {
      throw Error(ErrorCode::ParseError, "bad outcome: " + outcome);
    }
    rec.wall_ms = std::stoll(fields[5]);
    rec.clique_count = std::stoull(fields[6]);
    rec.leftover = std::stoull(fields[7]);
    records.push_back(rec);
  }
  return records;
}

std::string summary_to_json(const SweepConfig& cfg, const SweepResult& result) {
  nlohmann::json j;
  j["r"] = cfg.r;
  j["trials_per_cell"] = cfg.trials_per_cell;
  j["master_seed"] = cfg.master_seed;
  j["cells"] = nlohmann::json::array();
  for (const CellStats& cell : result.cells)
    j["cells"].push_back({{"n", cell.n},
                          {"c", cell.c},
                          {"trials", cell.trials},
                          {"successes", cell.successes},
                          {"fraction", cell.fraction},
                          {"ci", {cell.ci_lo, cell.ci_hi}},
                          {"ci_method", "wilson95"}});
  j["fits"] = nlohmann::json::array();
  for (const auto& [n, fit] : result.fits)
    j["fits"].push_back(
        {{"n", n},
         {"c50", fit.c50},
         {"slope", fit.slope},
         {"log_likelihood", fit.log_likelihood},
         {"c50_ci", {fit.c50_lo, fit.c50_hi}},
         {"p50", fit.c50 * std::pow(static_cast<double>(n), -2.0 / cfg.r)}});
  if (result.exponent_estimate)
    j["exponent_estimate"] = *result.exponent_estimate;
  j["digests"] = nlohmann::json::array();
  for (const TrialRecord& rec : result.records)
    if (rec.outcome == Outcome::Perfect) {
      char hex[32];
      std::snprintf(hex, sizeof(hex), "%016llx",
                    static_cast<unsigned long long>(rec.digest));
      j["digests"].push_back(
          {{"n", rec.n}, {"c", rec.c}, {"seed", rec.seed}, {"digest", hex}});
    }
  return j.dump(2) + "\n";
}

std::string transition_data(const SweepResult& result) {
  std::ostringstream out;
  out << "# c fraction ci_lo ci_hi\n";
  int last_n = -1;
  for (const CellStats& cell : result.cells) {
    if (cell.n != last_n) {
      if (last_n >= 0) out << "\n\n";
      out << "# n=" << cell.n << "\n";
      last_n = cell.n;
    }
    out << fmt_double(cell.c) << ' ' << fmt_double(cell.fraction) << ' '
        << fmt_double(cell.ci_lo) << ' ' << fmt_double(cell.ci_hi) << '\n';
  }
  return out.str();
}

}  // namespace tilinglab::harness
