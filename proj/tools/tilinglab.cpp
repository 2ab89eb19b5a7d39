#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "tilinglab/absorber.hpp"
#include "tilinglab/bounds.hpp"
#include "tilinglab/generators.hpp"
#include "tilinglab/harness.hpp"
#include "tilinglab/regularity.hpp"
#include "tilinglab/rng.hpp"
#include "tilinglab/startile.hpp"
#include "tilinglab/tiler.hpp"

namespace tl = tilinglab;
using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw tl::Error(tl::ErrorCode::ConfigError, "cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out)
    throw tl::Error(tl::ErrorCode::ConfigError, "cannot write " + out_path);
  out << text;
}

tl::PartiteGraph load_graph(const std::string& path) {
  return tl::PartiteGraph::deserialize(slurp(path));
}

json vertex_json(const tl::VertexRef& v) {
  return json{{"part", v.part + 1}, {"index", v.index + 1}};
}

json tiling_json(const tl::tiler::Tiling& tiling, int r) {
  json copies = json::array();
  for (const auto& copy : tiling.copies) {
    json cj = json::array();
    for (int p = 0; p < r; ++p)
      cj.push_back(vertex_json({p, copy.index_per_part[p]}));
    copies.push_back(cj);
  }
  char hex[32];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(tl::tiler::tiling_digest(tiling)));
  return json{{"copies", copies}, {"digest", hex}};
}

int cmd_gen(const std::string& kind, int r, int n, double p, double alpha,
            double omega, double d, std::uint64_t seed,
            const std::string& out) {
  tl::PartiteGraph g;
  if (kind == "random")
    g = tl::gen::gen_random(r, n, {p, seed});
  else if (kind == "extremal")
    g = tl::gen::gen_extremal(r, n, alpha);
  else if (kind == "sublinear")
    g = tl::gen::gen_sublinear(r, n, omega);
  else if (kind == "star")
    g = tl::gen::gen_superregular_star(r, n, d, seed);
  else
    throw tl::Error(tl::ErrorCode::ConfigError, "unknown kind " + kind);
  emit(g.serialize(), out);
  return 0;
}

int cmd_tile(const std::string& in, bool greedy, std::uint64_t budget,
             std::uint64_t seed, const std::string& out) {
  const tl::PartiteGraph g = load_graph(in);
  json j;
  if (greedy) {
    tl::tiler::Tiling tiling = tl::tiler::greedy_partial_tiling(g, seed);
    j["mode"] = "greedy";
    j["tiling"] = tiling_json(tiling, g.parts());
    j["leftover_per_class"] = tiling.leftover_per_class(g.part_size());
    j["perfect"] = tiling.perfect(g.part_size());
    j["valid"] = tl::tiler::validate_tiling(g, tiling, false);
  } else {
    tl::tiler::TilingSearchResult res = tl::tiler::exact_perfect_tiling(g, budget);
    j["mode"] = "exact";
    j["cliques"] = res.clique_count;
    j["expansions"] = res.expansions;
    switch (res.status) {
      case tl::tiler::SearchStatus::Perfect:
        j["outcome"] = "perfect";
        j["tiling"] = tiling_json(res.tiling, g.parts());
        j["valid"] = tl::tiler::validate_tiling(g, res.tiling, true);
        break;
      case tl::tiler::SearchStatus::NoTiling:
        j["outcome"] = "no_tiling";
        break;
      case tl::tiler::SearchStatus::BudgetExceeded:
        j["outcome"] = "budget_exceeded";
        break;
    }
  }
  emit(j.dump(2) + "\n", out);
  return 0;
}

int cmd_lp(const std::string& in, int t, const std::string& out) {
  const tl::PartiteGraph g = load_graph(in);
  tl::startile::LpResult res = tl::startile::solve_fractional(g, t);
  json j;
  j["t"] = t;
  j["stars_enumerated"] = res.star_count;
  j["pivots"] = res.pivots;
  if (res.status == tl::startile::LpStatus::Feasible) {
    j["status"] = "feasible";
    json stars = json::array();
    for (std::size_t s = 0; s < res.tiling.stars.size(); ++s) {
      const auto& star = res.tiling.stars[s];
      json leaves = json::array();
      for (const auto& leaf : star.small_leaves) leaves.push_back(vertex_json(leaf));
      stars.push_back({{"center", vertex_json(star.center)},
                       {"big_leaf", vertex_json(star.big_leaf)},
                       {"small_leaves", leaves},
                       {"weight",
                        tl::startile::rational_to_string(res.tiling.weights[s])}});
    }
    j["weights"] = stars;
    j["verified"] = tl::startile::verify_fractional(g, res.tiling);
    tl::startile::Integralization integral = tl::startile::integralize(res.tiling);
    j["integralization"] = {{"denominator", integral.denominator.get_str()}};
  } else {
    j["status"] = "infeasible";
    json x = json::array();
    for (const auto& xi : res.certificate.x)
      x.push_back(tl::startile::rational_to_string(xi));
    j["certificate"] = x;
    j["verified"] = tl::startile::verify_certificate(g, t, res.certificate);
  }
  emit(j.dump(2) + "\n", out);
  return 0;
}

int cmd_regcheck(const std::string& in, const std::string& pair, double epsilon,
                 double d, const std::string& mode, std::size_t samples,
                 std::uint64_t seed, const std::string& out) {
  const tl::PartiteGraph g = load_graph(in);
  const auto colon = pair.find(':');
  if (colon == std::string::npos)
    throw tl::Error(tl::ErrorCode::ConfigError, "--pair wants i:j (1-based)");
  const int pa = std::stoi(pair.substr(0, colon)) - 1;
  const int pb = std::stoi(pair.substr(colon + 1)) - 1;
  tl::reg::VertexSet a{pa, {}}, b{pb, {}};
  for (int v = 0; v < g.part_size(); ++v) {
    a.indices.push_back(v);
    b.indices.push_back(v);
  }
  const tl::reg::CheckMode m = mode == "exhaustive"
                                   ? tl::reg::CheckMode::Exhaustive
                                   : tl::reg::CheckMode::Sampled;
  tl::reg::RegularityReport rep =
      tl::reg::check_superregular(g, a, b, {epsilon, d}, m, samples, seed);
  json j;
  j["pair"] = pair;
  j["epsilon"] = epsilon;
  j["d"] = d;
  j["mode"] = rep.mode == tl::reg::CheckMode::Exhaustive ? "exhaustive" : "sampled";
  j["base_density"] = rep.base_density;
  j["worst_deviation_found"] = rep.worst_deviation_found;
  j["samples_taken"] = rep.samples_taken;
  j["ok"] = rep.ok;
  if (rep.degree_witness)
    j["degree_witness"] = vertex_json(*rep.degree_witness);
  if (rep.density_witness)
    j["density_witness"] = {{"x", rep.density_witness->x},
                            {"y", rep.density_witness->y},
                            {"density", rep.density_witness->density}};
  emit(j.dump(2) + "\n", out);
  return 0;
}

int cmd_pipeline(const std::string& in, double d, double delta, double p,
                 std::uint64_t seed, const std::string& out) {
  const tl::PartiteGraph g = load_graph(in);
  tl::absorber::PipelineConfig cfg;
  cfg.d = d;
  cfg.delta = delta;
  cfg.p = p;
  cfg.seed = seed;
  tl::absorber::PipelineResult res = tl::absorber::star_tiling_pipeline(g, cfg);
  json j;
  j["perfect"] = res.perfect;
  j["trace"] = {{"f_edges", res.trace.f_edges},
                {"f_tilde_edges", res.trace.f_tilde_edges},
                {"m_target", res.trace.m_target},
                {"m_size", res.trace.m_size},
                {"leftover_per_side", res.trace.leftover_per_side},
                {"f_prime_edges", res.trace.f_prime_edges},
                {"f_tilde_prime_edges", res.trace.f_tilde_prime_edges},
                {"m_prime_size", res.trace.m_prime_size},
                {"g1_edges", res.trace.g1_edges},
                {"g2_edges", res.trace.g2_edges},
                {"hall_perfect", res.trace.hall_perfect}};
  if (res.perfect) {
    j["tiling"] = tiling_json(res.tiling, g.parts());
    j["revalidated"] =
        tl::tiler::validate_tiling(res.revealed_union, res.tiling, true);
  } else {
    j["failed_stage"] = tl::absorber::pipeline_stage_name(res.failed_stage);
    if (!res.hall_witness.empty()) j["hall_witness"] = res.hall_witness;
  }
  emit(j.dump(2) + "\n", out);
  return 0;
}

int cmd_bounds(const std::string& formula, double mu, double xi, double delta_bar,
               double mu_prime, double t, int r, int n, double p, double omega,
               int m_override, const std::string& out) {
  json j;
  if (formula == "chernoff") {
    j["two_sided"] = tl::bounds::chernoff_tail(mu, xi);
    if (auto upper = tl::bounds::chernoff_upper_tail(t, mu))
      j["upper_tail_exp_minus_k"] = *upper;
  } else if (formula == "janson") {
    tl::bounds::JansonBounds b =
        tl::bounds::janson_bounds({mu, delta_bar, mu_prime}, t);
    j["lower_p_s0"] = b.lower_p_s0;
    j["upper_p_s0"] = b.upper_p_s0;
    j["upper_p_s0_weak"] = b.upper_p_s0_weak;
    j["lower_tail"] = b.lower_tail;
    j["log_lower_p_s0"] = b.log_lower_p_s0;
    j["log_upper_p_s0"] = b.log_upper_p_s0;
    j["log_lower_tail"] = b.log_lower_tail;
  } else if (formula == "krmoments") {
    tl::bounds::KrMoments km = tl::bounds::kr_count_moments(r, n, p, m_override);
    j["mu"] = km.mu;
    j["delta_bar"] = km.delta_bar;
  } else if (formula == "isolated") {
    tl::bounds::IsolatedMoments im =
        tl::bounds::isolated_vertex_moments(r, n, p, omega);
    j["mu"] = im.mu;
    j["mu_prime"] = im.mu_prime;
    j["delta_bar"] = im.delta_bar;
    j["delta_bar_simplified"] = im.delta_bar_simplified;
    j["ex_lower"] = im.ex_lower;
  } else {
    throw tl::Error(tl::ErrorCode::ConfigError, "unknown formula " + formula);
  }
  emit(j.dump(2) + "\n", out);
  return 0;
}

int cmd_sweep(const std::string& config_path, int threads_override,
              const std::string& out_dir, bool resume, bool timings,
              bool plot_data) {
  tl::harness::SweepConfig cfg = tl::harness::parse_config(slurp(config_path));
  if (threads_override > 0) cfg.threads = threads_override;

  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const std::string csv_path = (fs::path(out_dir) / "results.csv").string();

  std::vector<tl::harness::TrialRecord> previous;
  if (resume && fs::exists(csv_path))
    previous = tl::harness::records_from_csv(slurp(csv_path));

  auto flush = [&](const std::vector<tl::harness::TrialRecord>& records) {
    std::ofstream out(csv_path);
    out << tl::harness::records_to_csv(records, timings);
  };
  tl::harness::SweepResult result =
      tl::harness::sweep(cfg, flush, previous.empty() ? nullptr : &previous);

  {
    std::ofstream out(csv_path);
    out << tl::harness::records_to_csv(result.records, timings);
  }
  {
    std::ofstream out(fs::path(out_dir) / "summary.json");
    out << tl::harness::summary_to_json(cfg, result);
  }
  if (plot_data) {
    std::ofstream out(fs::path(out_dir) / "transition.dat");
    out << tl::harness::transition_data(result);
  }
  std::cerr << "sweep complete: " << result.records.size() << " trials, "
            << result.cells.size() << " cells -> " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"desk-scale laboratory for perfect K_r-tilings of randomly "
               "perturbed balanced multipartite graphs"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a host or random graph");
  std::string kind = "random", out = "-";
  int r = 3, n = 10;
  double p = 0.5, alpha = 0.1, omega = 2.0, d = 0.4;
  std::uint64_t seed = 0;
  gen->add_option("--kind", kind, "random|extremal|sublinear|star");
  gen->add_option("--r", r);
  gen->add_option("--n", n);
  gen->add_option("--p", p);
  gen->add_option("--alpha", alpha);
  gen->add_option("--omega", omega);
  gen->add_option("--d", d);
  gen->add_option("--seed", seed);
  gen->add_option("--out", out);

  // tile
  auto* tile = app.add_subcommand("tile", "decide or approximate a perfect tiling");
  std::string tile_in;
  bool tile_exact = false, tile_greedy = false;
  std::uint64_t budget = 5'000'000, tile_seed = 0;
  tile->add_option("--in", tile_in)->required();
  tile->add_flag("--exact", tile_exact);
  tile->add_flag("--greedy", tile_greedy);
  tile->add_option("--budget", budget);
  tile->add_option("--seed", tile_seed);
  tile->add_option("--out", out);

  // lp
  auto* lp = app.add_subcommand("lp", "perfect fractional star tiling LP");
  std::string lp_in;
  int t = 1;
  lp->add_option("--in", lp_in)->required();
  lp->add_option("--t", t)->required();
  lp->add_option("--out", out);

  // regcheck
  auto* regcheck = app.add_subcommand("regcheck", "super-regularity check");
  std::string reg_in, pair = "1:2", mode = "sampled";
  double epsilon = 0.1;
  std::size_t samples = 2000;
  std::uint64_t reg_seed = 0;
  regcheck->add_option("--in", reg_in)->required();
  regcheck->add_option("--pair", pair);
  regcheck->add_option("--epsilon", epsilon);
  regcheck->add_option("--d", d);
  regcheck->add_option("--mode", mode, "exhaustive|sampled");
  regcheck->add_option("--samples", samples);
  regcheck->add_option("--seed", reg_seed);
  regcheck->add_option("--out", out);

  // pipeline
  auto* pipeline = app.add_subcommand("pipeline", "star-tiling pipeline run");
  std::string pipe_in;
  double pipe_d = 0.4, pipe_delta = 0.04, pipe_p = 0.3;
  std::uint64_t pipe_seed = 0;
  pipeline->add_option("--in", pipe_in)->required();
  pipeline->add_option("--d", pipe_d);
  pipeline->add_option("--delta", pipe_delta);
  pipeline->add_option("--p", pipe_p);
  pipeline->add_option("--seed", pipe_seed);
  pipeline->add_option("--out", out);

  // bounds
  auto* bounds = app.add_subcommand("bounds", "concentration-bound calculators");
  std::string formula = "chernoff";
  double mu = 0, xi = 0.5, delta_bar = 0, mu_prime = 0, tdev = 0, bp = 0.3,
         bomega = 2.0;
  int br = 3, bn = 10, m_override = -1;
  bounds->add_option("--formula", formula, "chernoff|janson|krmoments|isolated");
  bounds->add_option("--mu", mu);
  bounds->add_option("--xi", xi);
  bounds->add_option("--delta-bar", delta_bar);
  bounds->add_option("--mu-prime", mu_prime);
  bounds->add_option("--t", tdev);
  bounds->add_option("--r", br);
  bounds->add_option("--n", bn);
  bounds->add_option("--p", bp);
  bounds->add_option("--omega", bomega);
  bounds->add_option("--m", m_override);
  bounds->add_option("--out", out);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "seeded Monte Carlo threshold sweep");
  std::string config_path, out_dir = "sweep-out";
  int threads = 0;
  bool resume = false, timings = false, plot_data = false;
  sweep->add_option("config", config_path, "JSON sweep config")->required();
  sweep->add_option("--threads", threads);
  sweep->add_option("--out-dir", out_dir);
  sweep->add_flag("--resume", resume);
  sweep->add_flag("--timings", timings,
                  "write measured wall_ms (breaks byte-identical reruns)");
  sweep->add_flag("--plot-data", plot_data);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return cmd_gen(kind, r, n, p, alpha, omega, d, seed, out);
    if (*tile) {
      if (tile_exact == tile_greedy)
        throw tl::Error(tl::ErrorCode::ConfigError,
                        "pass exactly one of --exact / --greedy");
      return cmd_tile(tile_in, tile_greedy, budget, tile_seed, out);
    }
    if (*lp) return cmd_lp(lp_in, t, out);
    if (*regcheck)
      return cmd_regcheck(reg_in, pair, epsilon, d, mode, samples, reg_seed, out);
    if (*pipeline)
      return cmd_pipeline(pipe_in, pipe_d, pipe_delta, pipe_p, pipe_seed, out);
    if (*bounds)
      return cmd_bounds(formula, mu, xi, delta_bar, mu_prime, tdev, br, bn, bp,
                        bomega, m_override, out);
    if (*sweep)
      return cmd_sweep(config_path, threads, out_dir, resume, timings, plot_data);
  } catch (const tl::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == tl::ErrorCode::ConfigError ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
