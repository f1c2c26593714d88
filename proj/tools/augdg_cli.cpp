// Command-line driver for the augmented-basis positivity-preserving DG
// solver: experiment presets, CFL robustness sweeps, augmentation searches,
// and the closed-form Q2 verification.
#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "augdg/experiments.hpp"

using namespace augdg;
using namespace augdg::experiments;

namespace {

void write_or_print(const CsvTable& t, const std::string& out) {
  if (out.empty())
    std::cout << t.to_string();
  else
    t.write(out);
}

std::string with_suffix(const std::string& path, const std::string& suffix) {
  const auto dot = path.rfind('.');
  if (dot == std::string::npos) return path + suffix;
  return path.substr(0, dot) + suffix + path.substr(dot);
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  c.preset = j.value("preset", c.preset);
  c.nx = j.value("nx", c.nx);
  c.ny = j.value("ny", c.ny);
  c.nt = j.value("nt", c.nt);
  c.alpha = j.value("alpha", c.alpha);
  c.beta = j.value("beta", c.beta);
  c.gamma = j.value("gamma", c.gamma);
  if (j.contains("space")) c.family = family_from_letter(j["space"].get<std::string>().at(0));
  c.k = j.value("k", c.k);
  c.r = j.value("r", c.r);
  c.augment = j.value("augment", c.augment);
  c.limiter = j.value("limit", c.limiter);
  c.seed = j.value("seed", c.seed);
  c.out = j.value("out", c.out);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"augmented-basis positivity-preserving DG solver"};
  app.require_subcommand(1);

  std::string space = "Q", augment = "off", regime = "low", which = "all", out, config_path;
  int k = 2, r = 0, nx = 10, ny = 10, nt = 10, dim = 2, samples = 100, aug_samples = 1;
  double alpha = 1.0, beta = 1.0, gamma = 0.0, dx = 2.0, dy = 2.0, dz = 2.0;
  bool limit = false;
  uint64_t seed = 1;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "RNG seed");
    cmd->add_option("--out", out, "output CSV/JSON path (stdout when omitted)");
  };

  auto* solve = app.add_subcommand("solve", "solve one preset configuration");
  solve->add_option("--preset", which, "conv2d|conv3d|step2d|step3d")->default_str("conv2d");
  solve->add_option("--config", config_path, "JSON config file (fields mirror the flags)");
  solve->add_option("--space", space, "P|Q|S");
  solve->add_option("--k", k, "approximation degree");
  solve->add_option("--r", r, "ansatz degree for optimized augmentation");
  solve->add_option("--nx", nx);
  solve->add_option("--ny", ny);
  solve->add_option("--nt", nt);
  solve->add_option("--alpha", alpha);
  solve->add_option("--beta", beta);
  solve->add_option("--gamma", gamma);
  solve->add_option("--augment", augment, "off|table|optimize|adaptive");
  solve->add_flag("--limit", limit, "apply the scaling limiter");
  add_common(solve);

  auto* conv = app.add_subcommand("convergence", "manufactured-solution accuracy study");
  conv->add_option("--dim", dim, "2 or 3");
  add_common(conv);

  auto* ce = app.add_subcommand("counterexample", "positivity-violation studies");
  ce->add_option("--which", which, "S2|Q2|P2|table1|all");
  add_common(ce);

  auto* step = app.add_subcommand("step", "step-propagation with limiter");
  step->add_option("--dim", dim, "2 or 3");
  add_common(step);

  auto* cfl = app.add_subcommand("cfl-sweep", "randomized CFL robustness sweep");
  cfl->add_option("--space", space, "P|Q|S");
  cfl->add_option("--k", k);
  cfl->add_option("--regime", regime, "low|high (ignored for P)");
  cfl->add_option("--samples", samples);
  add_common(cfl);

  auto* aug = app.add_subcommand("augment", "search for an augmented basis function");
  aug->add_option("--space", space, "P|Q|S");
  aug->add_option("--k", k);
  aug->add_option("--r", r);
  aug->add_option("--dim", dim, "2 or 3");
  aug->add_option("--alpha", alpha);
  aug->add_option("--beta", beta);
  aug->add_option("--gamma", gamma);
  aug->add_option("--dx", dx);
  aug->add_option("--dy", dy);
  aug->add_option("--dz", dz);
  aug->add_option("--samples", aug_samples,
                  "when > 1: stack constraints over sampled tuples in the regime");
  aug->add_option("--regime", regime, "low|high sampling regime for --samples mode");
  add_common(aug);

  auto* appa = app.add_subcommand("appendix-a", "closed-form Q2 coefficient verification");
  appa->add_option("--samples", samples)->default_val(10000);
  add_common(appa);

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) {
      ExperimentConfig cfg;
      if (!config_path.empty()) {
        std::ifstream f(config_path);
        if (!f) throw std::runtime_error("cannot read config: " + config_path);
        nlohmann::json j;
        f >> j;
        cfg = config_from_json(j);
      }
      if (which != "all") cfg.preset = which;
      for (const auto* opt : {"--space", "--k", "--r", "--nx", "--ny", "--nt", "--alpha",
                              "--beta", "--gamma", "--augment", "--seed", "--out"})
        (void)opt;
      if (solve->count("--space")) cfg.family = family_from_letter(space[0]);
      if (solve->count("--k")) cfg.k = k;
      if (solve->count("--r")) cfg.r = r;
      if (solve->count("--nx")) cfg.nx = nx;
      if (solve->count("--ny")) cfg.ny = ny;
      if (solve->count("--nt")) cfg.nt = nt;
      if (solve->count("--alpha")) cfg.alpha = alpha;
      if (solve->count("--beta")) cfg.beta = beta;
      if (solve->count("--gamma")) cfg.gamma = gamma;
      if (solve->count("--augment")) cfg.augment = augment;
      if (limit) cfg.limiter = true;
      if (solve->count("--seed")) cfg.seed = seed;
      if (solve->count("--out")) cfg.out = out;
      auto res = run_generic_solve(cfg);
      write_or_print(res.summary, cfg.out);
      std::fprintf(stderr, "solved %d cells in %.3f s\n", res.cells, res.seconds);
      return 0;
    }
    if (conv->parsed()) {
      const auto res = dim == 3 ? run_convergence_3d({2, 4, 8}, seed)
                                : run_convergence_2d({10, 20, 40, 80}, seed);
      write_or_print(res.csv(dim, seed), out);
      std::fprintf(stderr, "convergence study in %.1f s\n", res.seconds);
      return 0;
    }
    if (ce->parsed()) {
      if (which == "S2" || which == "all") {
        auto res = run_counterexample_s2();
        write_or_print(res.csv(seed), out.empty() ? out : with_suffix(out, "-s2"));
      }
      if (which == "Q2" || which == "all") {
        auto res = run_counterexample_q2(seed);
        write_or_print(res.csv(seed), out.empty() ? out : with_suffix(out, "-q2"));
      }
      if (which == "P2" || which == "all") {
        auto res = run_counterexample_p2();
        write_or_print(res.csv(seed), out.empty() ? out : with_suffix(out, "-p2"));
      }
      if (which == "table1" || which == "all") {
        auto res = run_variable_coefficient(seed);
        write_or_print(res.csv(seed), out.empty() ? out : with_suffix(out, "-table1"));
      }
      return 0;
    }
    if (step->parsed()) {
      const auto res = dim == 3 ? run_step_3d(seed) : run_step_2d(seed);
      write_or_print(res.csv(dim, seed), out);
      if (!out.empty()) {
        res.profile.write(with_suffix(out, "-profile"));
        res.theta_csv.write(with_suffix(out, "-theta"));
      }
      std::fprintf(stderr, "step study in %.1f s\n", res.seconds);
      for (const auto& r : res.rows)
        if (r.min_limited_lobatto < -1e-12) return 2;
      return 0;
    }
    if (cfl->parsed()) {
      const SpaceFamily fam = family_from_letter(space[0]);
      CflSweepResult res;
      if (fam == SpaceFamily::P) {
        res = run_pk_optimized_sweep(k, samples, seed);
        write_or_print(res.csv(fam, k, Regime::LowB, seed), out);
      } else {
        const Regime reg = regime == "high" ? Regime::HighB : Regime::LowB;
        res = run_cfl_sweep(fam, k, reg, samples, seed);
        write_or_print(res.csv(fam, k, reg, seed), out);
      }
      std::fprintf(stderr, "%zu samples in %.1f s\n", res.samples.size(), res.seconds);
      for (const auto& s : res.samples)
        if (s.min_v < -1e-12) return 2;
      return 0;
    }
    if (aug->parsed()) {
      const SpaceFamily fam = family_from_letter(space[0]);
      AugmentOptions ao;
      ao.r = r;
      ao.seed = seed;
      if (aug_samples > 1) {
        // pre-processing mode: one psi valid across sampled tuples
        const Regime reg = regime == "high" ? Regime::HighB : Regime::LowB;
        std::mt19937_64 rng(seed);
        auto logu = [&rng](double lo, double hi) {
          std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
          return std::exp(u(rng));
        };
        while (static_cast<int>(ao.tuples.size()) < aug_samples) {
          ParamTuple tp;
          tp.dim = dim;
          tp.width = {logu(1e-2, 1.0), logu(1e-2, 1.0), dim == 3 ? logu(1e-2, 1.0) : 2.0};
          tp.adv = {logu(1e-1, 1e1), logu(1e-1, 1e1), 1.0};
          tp.gamma = logu(1e-3, 1.0);
          if (fam != SpaceFamily::P && !regime_admits(fam, k, reg, tp.cfl_b())) continue;
          ao.tuples.push_back(tp);
        }
      } else {
        ParamTuple tp;
        tp.dim = dim;
        tp.adv = {alpha, beta, 1.0};
        tp.gamma = gamma;
        tp.width = {dx, dy, dz};
        ao.tuples = {tp};
      }
      Timer timer;
      const AugmentedBasis ab = find_augmented_basis(SpaceSpec{fam, k, dim}, ao);
      std::fprintf(stderr, "%c%d (dim %d, r %d): feasible augmentation in %.4f s\n",
                   family_letter(fam), k, dim, ab.r, timer.seconds());
      const std::string doc = to_json(ab).dump(2);
      if (out.empty())
        std::cout << doc << "\n";
      else {
        std::ofstream f(out);
        f << doc << "\n";
      }
      return 0;
    }
    if (appa->parsed()) {
      const auto res = run_appendix_a(samples, seed);
      write_or_print(res.table, out);
      std::fprintf(stderr,
                   "sign bounds %s; cross-validation max rel dev %.2e; grid min %.2e (%.1f s)\n",
                   res.sign_bounds.ok ? "ok" : res.sign_bounds.message.c_str(),
                   res.max_cross_validation_dev, res.min_grid_v, res.seconds);
      return res.ok() ? 0 : 2;
    }
  } catch (const AugmentFailure& e) {
    std::fprintf(stderr, "augmentation infeasible: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
