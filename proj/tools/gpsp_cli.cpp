// Command-line front end: sweep | ablation | theory | pde | face | examples.
// Values from --config are applied first and flags override them; every
// output embeds the resolved configuration for provenance.

#include "gpsp/cli.hpp"

#include <CLI11.hpp>

#include <string>

using gpsp::cli::RunConfig;

int main(int argc, char** argv) {
  CLI::App app{"Block-sparse recovery toolkit (projected subspace pursuit and friends)"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("gpsp ") + gpsp::kToolVersion);

  RunConfig cfg;
  std::string config_path;

  // The config file loads before flag parsing so flags win; find it (and the
  // subcommand, for section selection) with a pre-scan.
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) config_path = argv[i + 1];
    if (!arg.empty() && arg[0] != '-' && cfg.subcommand.empty() && arg != config_path)
      cfg.subcommand = arg;
  }
  const int preload = gpsp::cli::run_guarded([&]() -> int {
    if (!config_path.empty())
      gpsp::cli::apply_config(cfg, gpsp::cli::parse_config_file(config_path));
    return gpsp::cli::kExitOk;
  });
  if (preload != gpsp::cli::kExitOk) return preload;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "INI-style config file");
    sub->add_option("--seed", cfg.seed, "master seed");
    sub->add_option("--out", cfg.out_dir, "output directory");
    sub->add_option("--jobs", cfg.jobs, "worker threads (0 = all cores)");
    sub->add_option("--trials", cfg.trials, "trials per cell");
  };
  auto add_sweep_opts = [&](CLI::App* sub) {
    sub->add_option("--family", cfg.family, "hetero_gaussian | poisson | bernoulli");
    sub->add_option("--block-sizes", cfg.block_sizes, "block sizes M")->delimiter(',');
    sub->add_option("--sigmas", cfg.sigmas, "noise levels")->delimiter(',');
    sub->add_option("--normalized", cfg.normalized_opts, "0/1 column normalization")
        ->delimiter(',');
    sub->add_option("--n-rows", cfg.n_rows, "observations N");
    sub->add_option("--gm", cfg.gm, "total columns G*M");
    sub->add_option("--sparsity-min", cfg.sparsity_min, "smallest k");
    sub->add_option("--sparsity-max", cfg.sparsity_max, "largest k (0 = N/(2M))");
    sub->add_option("--algorithms", cfg.algorithms, "algorithm names")->delimiter(',');
  };

  CLI::App* sweep = app.add_subcommand("sweep", "success-rate sweeps per algorithm");
  add_common(sweep);
  add_sweep_opts(sweep);

  CLI::App* ablation =
      app.add_subcommand("ablation", "criteria-combination ablation sweeps");
  add_common(ablation);
  add_sweep_opts(ablation);

  CLI::App* theory = app.add_subcommand("theory", "thresholds, constants, verification");
  add_common(theory);
  theory->add_option("--instances", cfg.theory_instances, "certified instances to verify");
  theory->add_option("--grid-points", cfg.grid_points, "constant-curve samples");

  CLI::App* pde = app.add_subcommand("pde", "solve and identify the reference PDE");
  add_common(pde);
  pde->add_option("--fine-x-step", cfg.pde_fine_x_step, "solver spatial step");
  pde->add_option("--fine-t-step", cfg.pde_fine_t_step, "solver temporal step");
  pde->add_option("--sparsity", cfg.pde_sparsity, "number of terms to select");

  CLI::App* face = app.add_subcommand("face", "face-recognition benchmark");
  add_common(face);
  face->add_option("--yaleb-root", cfg.yaleb_root, "dataset root (cropped PGM images)");
  face->add_flag("--fixture", cfg.face_fixture, "use the synthetic orthogonal fixture");
  face->add_option("--train-per-subject", cfg.train_sizes, "training images per subject")
      ->delimiter(',');
  face->add_option("--reduction", cfg.reductions, "pca | randproj | downsample")
      ->delimiter(',');
  face->add_option("--face-seeds", cfg.face_seeds, "random splits to average");
  face->add_option("--algorithms", cfg.algorithms, "algorithm names")->delimiter(',');

  CLI::App* examples =
      app.add_subcommand("examples", "evaluate the worked criterion examples");
  add_common(examples);

  CLI11_PARSE(app, argc, argv);
  cfg.subcommand = app.get_subcommands().front()->get_name();

  return gpsp::cli::run_guarded([&]() -> int {
    if (cfg.subcommand == "sweep") return gpsp::cli::cmd_sweep(cfg);
    if (cfg.subcommand == "ablation") return gpsp::cli::cmd_ablation(cfg);
    if (cfg.subcommand == "theory") return gpsp::cli::cmd_theory(cfg);
    if (cfg.subcommand == "pde") return gpsp::cli::cmd_pde(cfg);
    if (cfg.subcommand == "face") return gpsp::cli::cmd_face(cfg);
    if (cfg.subcommand == "examples") return gpsp::cli::cmd_examples(cfg);
    return gpsp::cli::kExitBadConfig;
  });
}
