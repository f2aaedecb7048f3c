#pragma once

#include "gpsp/artifacts.hpp"
#include "gpsp/face.hpp"
#include "gpsp/pdeident.hpp"
#include "gpsp/synthgen.hpp"
#include "gpsp/theory.hpp"
#include "gpsp/worked_examples.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace gpsp::cli {

// Exit codes: 0 success, 2 invalid configuration, 3 I/O failure,
// 4 enumeration guard exceeded, 5 dataset missing.
inline constexpr int kExitOk = 0;
inline constexpr int kExitBadConfig = 2;
inline constexpr int kExitIoError = 3;
inline constexpr int kExitCapacity = 4;
inline constexpr int kExitNoDataset = 5;

struct RunConfig {
  std::string subcommand;
  std::uint64_t seed = 0;
  std::string out_dir = "out";
  int jobs = 0;  // 0 = all cores
  int trials = 100;

  // sweep / ablation
  std::string family = "hetero_gaussian";
  std::vector<int> block_sizes = {5, 8, 10};
  std::vector<double> sigmas;          // empty = subcommand default
  std::vector<int> normalized_opts;    // empty = subcommand default
  int n_rows = 400;
  int gm = 1000;
  int sparsity_min = 1;
  int sparsity_max = 0;  // 0 = N / (2M)
  std::vector<std::string> algorithms;  // empty = subcommand default

  // theory
  int theory_instances = 3;
  int grid_points = 60;

  // pde
  double pde_fine_x_step = 0.02;
  double pde_fine_t_step = 3e-4;
  int pde_sparsity = 2;

  // face
  std::string yaleb_root;
  bool face_fixture = false;
  std::vector<int> train_sizes = {9};
  std::vector<std::string> reductions = {"pca", "randproj", "downsample"};
  int face_seeds = 3;

  /// Semantic configuration only: the parallelism degree is excluded so
  /// replayed outputs stay byte-identical across job counts.
  std::string serialize() const {
    std::ostringstream s;
    auto join_i = [](const std::vector<int>& v) {
      std::string out;
      for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
      return out;
    };
    auto join_d = [](const std::vector<double>& v) {
      std::string out;
      for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_compact(v[i]);
      return out;
    };
    auto join_s = [](const std::vector<std::string>& v) {
      std::string out;
      for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + v[i];
      return out;
    };
    s << "subcommand=" << subcommand << ";seed=" << seed
      << ";trials=" << trials << ";family=" << family << ";block_sizes=" << join_i(block_sizes)
      << ";sigmas=" << join_d(sigmas) << ";normalized=" << join_i(normalized_opts)
      << ";n_rows=" << n_rows << ";gm=" << gm << ";sparsity_min=" << sparsity_min
      << ";sparsity_max=" << sparsity_max << ";algorithms=" << join_s(algorithms)
      << ";theory_instances=" << theory_instances << ";grid_points=" << grid_points
      << ";pde_fine_x_step=" << format_compact(pde_fine_x_step)
      << ";pde_fine_t_step=" << format_compact(pde_fine_t_step)
      << ";pde_sparsity=" << pde_sparsity << ";yaleb_root=" << yaleb_root
      << ";face_fixture=" << (face_fixture ? 1 : 0) << ";train_sizes=" << join_i(train_sizes)
      << ";reductions=" << join_s(reductions) << ";face_seeds=" << face_seeds;
    return s.str();
  }
};

namespace detail {

using gpsp::detail::require;

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

inline std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  for (const auto& item : split_list(s)) out.push_back(std::stoi(item));
  return out;
}

inline std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  for (const auto& item : split_list(s)) out.push_back(std::stod(item));
  return out;
}

inline synth::EnsembleFamily parse_family(const std::string& name) {
  if (name == "hetero_gaussian") return synth::EnsembleFamily::kHeteroGaussian;
  if (name == "poisson") return synth::EnsembleFamily::kPoisson;
  if (name == "bernoulli") return synth::EnsembleFamily::kBernoulli;
  throw std::invalid_argument("unknown ensemble family: " + name);
}

inline face::ReductionMethod parse_reduction(const std::string& name) {
  if (name == "pca") return face::ReductionMethod::kPca;
  if (name == "randproj") return face::ReductionMethod::kRandomProjection;
  if (name == "downsample") return face::ReductionMethod::kDownsample;
  throw std::invalid_argument("unknown reduction: " + name);
}

}  // namespace detail

/// Flat INI-style config: [section] headers, key=value lines, '#' comments.
/// Returns keys as "section.key"; keys before any section land in "common".
inline std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::map<std::string, std::string> kv;
  std::string line, section = "common";
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    detail::require(eq != std::string::npos, "config line is not key=value");
    kv[section + "." + trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

/// Applies "common.*" then "<subcommand>.*" keys; unknown keys are rejected.
inline void apply_config(RunConfig& cfg, const std::map<std::string, std::string>& kv) {
  auto apply_one = [&](const std::string& key, const std::string& value) {
    if (key == "seed") cfg.seed = std::stoull(value);
    else if (key == "out") cfg.out_dir = value;
    else if (key == "jobs") cfg.jobs = std::stoi(value);
    else if (key == "trials") cfg.trials = std::stoi(value);
    else if (key == "family") cfg.family = value;
    else if (key == "block_sizes") cfg.block_sizes = detail::parse_int_list(value);
    else if (key == "sigmas") cfg.sigmas = detail::parse_double_list(value);
    else if (key == "normalized") cfg.normalized_opts = detail::parse_int_list(value);
    else if (key == "n_rows") cfg.n_rows = std::stoi(value);
    else if (key == "gm") cfg.gm = std::stoi(value);
    else if (key == "sparsity_min") cfg.sparsity_min = std::stoi(value);
    else if (key == "sparsity_max") cfg.sparsity_max = std::stoi(value);
    else if (key == "algorithms") cfg.algorithms = detail::split_list(value);
    else if (key == "instances") cfg.theory_instances = std::stoi(value);
    else if (key == "grid_points") cfg.grid_points = std::stoi(value);
    else if (key == "fine_x_step") cfg.pde_fine_x_step = std::stod(value);
    else if (key == "fine_t_step") cfg.pde_fine_t_step = std::stod(value);
    else if (key == "sparsity") cfg.pde_sparsity = std::stoi(value);
    else if (key == "yaleb_root") cfg.yaleb_root = value;
    else if (key == "fixture") cfg.face_fixture = value == "1" || value == "true";
    else if (key == "train_sizes") cfg.train_sizes = detail::parse_int_list(value);
    else if (key == "reductions") cfg.reductions = detail::split_list(value);
    else if (key == "face_seeds") cfg.face_seeds = std::stoi(value);
    else throw std::invalid_argument("unknown config key: " + key);
  };
  for (const auto& [full_key, value] : kv) {
    const auto dot = full_key.find('.');
    const std::string section = full_key.substr(0, dot);
    if (section != "common" && section != cfg.subcommand) continue;
    apply_one(full_key.substr(dot + 1), value);
  }
}

namespace detail {

inline void write_provenance(CsvWriter& csv, const RunConfig& cfg) {
  csv.comment(std::string("gpsp ") + kToolVersion);
  csv.comment("config: " + cfg.serialize());
}

inline std::vector<synth::AlgorithmSpec> resolve_algorithms(const RunConfig& cfg,
                                                            bool ablation) {
  if (cfg.algorithms.empty())
    return ablation ? synth::ablation_algorithms() : synth::default_algorithms();
  std::vector<synth::AlgorithmSpec> out;
  for (const auto& name : cfg.algorithms) out.push_back(synth::algorithm_by_name(name));
  return out;
}

/// Shared body of the sweep and ablation commands: one CSV + SVG per
/// (family, M, sigma, normalization) setting.
inline int sweep_like(const RunConfig& cfg, bool ablation) {
  namespace fs = std::filesystem;
  const auto family = parse_family(cfg.family);
  const auto algorithms = resolve_algorithms(cfg, ablation);
  const std::vector<double> sigmas =
      !cfg.sigmas.empty() ? cfg.sigmas
                          : (ablation ? std::vector<double>{0.0, 0.1, 0.5, 1.0}
                                      : std::vector<double>{0.0});
  const std::vector<int> normalized = !cfg.normalized_opts.empty()
                                          ? cfg.normalized_opts
                                          : (ablation ? std::vector<int>{1}
                                                      : std::vector<int>{0, 1});
  fs::create_directories(cfg.out_dir);

  for (int m : cfg.block_sizes) {
    require(cfg.gm % m == 0, "gm must be divisible by the block size");
    const int g_count = cfg.gm / m;
    const int cap = cfg.n_rows / (2 * m);
    const int k_max = cfg.sparsity_max > 0 ? std::min(cfg.sparsity_max, cap) : cap;
    std::vector<int> sparsities;
    for (int k = cfg.sparsity_min; k <= k_max; ++k) sparsities.push_back(k);
    require(!sparsities.empty(), "empty sparsity range");

    for (double sigma : sigmas) {
      for (int norm : normalized) {
        synth::EnsembleSpec spec;
        spec.family = family;
        spec.n_rows = cfg.n_rows;
        spec.n_blocks = g_count;
        spec.block_size = m;
        spec.normalize_columns = norm != 0;
        spec.master_seed = cfg.seed;
        const synth::SweepResult result = synth::run_sweep(
            spec, algorithms, sparsities, cfg.trials, sigma, cfg.jobs);

        char base[160];
        std::snprintf(base, sizeof(base), "%s_%s_M%d_sigma%s_%s",
                      ablation ? "ablation" : "sweep", cfg.family.c_str(), m,
                      format_compact(sigma).c_str(), norm ? "normalized" : "raw");
        CsvWriter csv(fs::path(cfg.out_dir) / (std::string(base) + ".csv"));
        write_provenance(csv, cfg);
        csv.header({"family", "algorithm", "M", "sparsity", "sigma", "normalized",
                    "trials", "successes", "rate", "seed"});
        for (const auto& cell : result.cells)
          csv.row({cfg.family, cell.algorithm, std::to_string(m),
                   std::to_string(cell.sparsity), format_compact(sigma),
                   std::to_string(norm), std::to_string(cell.trials),
                   std::to_string(cell.successes), format_double(cell.success_rate),
                   std::to_string(cfg.seed)});

        std::vector<SvgSeries> series;
        for (const auto& alg : algorithms) {
          SvgSeries s;
          s.label = alg.name;
          for (const auto& cell : result.cells)
            if (cell.algorithm == alg.name) {
              s.x.push_back(cell.sparsity);
              s.y.push_back(cell.success_rate);
            }
          series.push_back(std::move(s));
        }
        char title[160];
        std::snprintf(title, sizeof(title), "%s M=%d sigma=%s %s", cfg.family.c_str(), m,
                      format_compact(sigma).c_str(), norm ? "normalized" : "raw");
        write_svg_chart(fs::path(cfg.out_dir) / (std::string(base) + ".svg"), title,
                        "block sparsity k", "exact recovery rate", series);
        std::cout << base << ": done (" << result.cells.size() << " cells)\n";
      }
    }
  }
  return kExitOk;
}

}  // namespace detail

inline int cmd_sweep(const RunConfig& cfg) { return detail::sweep_like(cfg, false); }

inline int cmd_ablation(const RunConfig& cfg) { return detail::sweep_like(cfg, true); }

/// Threshold bisection, constant curves for re-plotting, and brute-force
/// verification of the per-iteration bounds on certified small instances.
inline int cmd_theory(const RunConfig& cfg) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  nlohmann::json report;
  report["version"] = kToolVersion;
  report["config"] = cfg.serialize();

  const double c_root = theory::bisect_threshold(
      [](double d) { return theory::exact_recovery_bound(d); }, 1e-4, 0.5, 1e-6);
  const double f_root = theory::bisect_threshold(
      [](double d) { return theory::noisy_residual_bound(d); }, 1e-4, 0.5, 1e-6);
  report["thresholds"]["exact_recovery_root"] = c_root;
  report["thresholds"]["noisy_decay_root"] = f_root;
  report["thresholds"]["distortion_at_noisy_root"] = theory::distortion_factor(f_root);
  report["thresholds"]["distortion_at_0.0937"] = theory::distortion_factor(0.0937);

  CsvWriter grid(fs::path(cfg.out_dir) / "theory_constants_grid.csv");
  detail::write_provenance(grid, cfg);
  grid.header({"delta", "exact_bound", "distortion", "noisy_decay_bound",
               "noisy_miss_decay", "noisy_noise_gain"});
  for (int i = 1; i <= cfg.grid_points; ++i) {
    const double d = 0.3 * i / cfg.grid_points;
    grid.row({format_double(d, 6), format_double(theory::exact_recovery_bound(d), 8),
              format_double(theory::distortion_factor(d), 8),
              format_double(theory::noisy_residual_bound(d), 8),
              format_double(theory::noisy_miss_decay(d), 8),
              format_double(theory::noisy_noise_gain(d), 8)});
  }

  nlohmann::json instances = nlohmann::json::array();
  for (int i = 0; i < cfg.theory_instances; ++i) {
    const BlockMatrix a =
        theory::make_near_isometry(40, 6, 2, 2, 0.05, 0.11, cfg.seed + i);
    const theory::BricReport bric = theory::bric_report(a, {1, 2});
    StreamRng rng(cfg.seed, static_cast<std::uint64_t>(i), 0x7468ULL);
    const int g = static_cast<int>(rng.uniform_int(6));
    BlockSignal c = BlockSignal::zero(6, 2);
    c.block(g)(0) = rng.normal(1.0, 1.0);
    c.block(g)(1) = rng.normal(1.0, 1.0);
    const Vector y = a.entries() * c.coeffs();
    const PursuitResult run = run_gpsp(a, y, 1);
    const theory::VerificationReport rep = theory::verify_gpsp_theorems(a, c, run, bric);

    nlohmann::json j;
    j["delta_1"] = rep.delta_1;
    j["delta_k"] = rep.delta_k;
    j["delta_2k"] = rep.delta_2k;
    j["exact_bound"] = rep.constants.exact_bound;
    j["hypothesis_met"] = rep.hypothesis_met;
    j["exact_recovery"] = rep.exact_recovery;
    j["checks"] = nlohmann::json::array();
    for (const auto& chk : rep.checks)
      j["checks"].push_back({{"iteration", chk.iteration},
                             {"name", chk.name},
                             {"lhs", chk.lhs},
                             {"rhs", chk.rhs},
                             {"pass", chk.holds}});
    j["all_pass"] = rep.all_hold();

    // Perturbed variant of the same instance: checks the noisy bounds,
    // including the final reconstruction-distortion inequality.
    Vector e(y.size());
    for (Eigen::Index r = 0; r < e.size(); ++r) e(r) = rng.normal();
    e *= 0.05 * y.norm() / e.norm();
    const PursuitResult noisy_run = run_gpsp(a, y + e, 1);
    const theory::VerificationReport noisy_rep =
        theory::verify_gpsp_theorems(a, c, noisy_run, bric, e.norm());
    j["noisy"]["support_recovered"] = noisy_rep.exact_recovery;
    j["noisy"]["checks"] = nlohmann::json::array();
    for (const auto& chk : noisy_rep.checks)
      j["noisy"]["checks"].push_back({{"iteration", chk.iteration},
                                      {"name", chk.name},
                                      {"lhs", chk.lhs},
                                      {"rhs", chk.rhs},
                                      {"pass", chk.holds}});
    j["noisy"]["all_pass"] = noisy_rep.all_hold();
    instances.push_back(std::move(j));
  }
  report["verification"] = std::move(instances);

  std::ofstream out(fs::path(cfg.out_dir) / "theory_report.json");
  if (!out) throw std::runtime_error("cannot write theory_report.json");
  out << report.dump(2) << "\n";

  std::cout << "exact-recovery threshold: " << format_double(c_root, 6) << "\n"
            << "noisy-decay threshold:    " << format_double(f_root, 6) << "\n"
            << "distortion factor there:  "
            << format_double(theory::distortion_factor(f_root), 4) << "\n";
  for (const auto& inst : report["verification"])
    std::cout << "instance delta_2k=" << format_double(inst["delta_2k"], 4)
              << " recovery=" << (inst["exact_recovery"].get<bool>() ? "yes" : "no")
              << " bounds=" << (inst["all_pass"].get<bool>() ? "PASS" : "FAIL") << "\n";
  return kExitOk;
}

/// Full identification pipeline: solve, differentiate, assemble, pursue.
inline int cmd_pde(const RunConfig& cfg) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);

  std::cout << "solving..." << std::flush;
  const pde::PdeGrid grid = pde::solve_burgers(cfg.pde_fine_x_step, cfg.pde_fine_t_step);
  std::cout << " done\n";

  CsvWriter sol(fs::path(cfg.out_dir) / "pde_solution.csv");
  detail::write_provenance(sol, cfg);
  sol.header({"x", "t", "u"});
  for (int i = 0; i < grid.u.rows(); ++i)
    for (int s = 0; s < grid.u.cols(); ++s)
      sol.row({format_double(-1.0 + i * grid.x_step, 4), format_double(s * grid.t_step, 4),
               format_double(grid.u(i, s), 10)});

  std::cout << "assembling features..." << std::flush;
  const pde::FeatureData features = pde::evaluate_features(grid);
  const pde::BsplineBasis2d basis = pde::default_basis(0.3);
  const pde::BlockSystem sys = pde::assemble_block_system(features, grid, basis);
  std::cout << " done (" << sys.a.rows() << " rows, " << sys.a.n_blocks()
            << " blocks of " << sys.a.block_size() << ")\n";

  CsvWriter terms(fs::path(cfg.out_dir) / "pde_identified_terms.csv");
  detail::write_provenance(terms, cfg);
  terms.header({"algorithm", "terms"});
  for (const auto& alg : synth::default_algorithms()) {
    const auto found = pde::identify_pde(sys, cfg.pde_sparsity, alg.criteria, alg.max_iter);
    std::string joined;
    for (std::size_t i = 0; i < found.size(); ++i)
      joined += (i ? " " : "") + found[i].name();
    terms.row({alg.name, joined});
    std::cout << alg.name << ": " << joined << "\n";
  }
  return kExitOk;
}

/// Face-recognition accuracy per (train size, reduction, algorithm), averaged
/// over face_seeds random splits.
inline int cmd_face(const RunConfig& cfg) {
  namespace fs = std::filesystem;
  face::FaceDataset ds;
  if (cfg.face_fixture) {
    ds = face::make_orthogonal_fixture(8, 12, 24, cfg.seed);
  } else {
    if (cfg.yaleb_root.empty()) {
      std::cerr << "error: --yaleb-root is required (or use --fixture)\n";
      return kExitNoDataset;
    }
    try {
      ds = face::load_yaleb(cfg.yaleb_root);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitNoDataset;
    }
  }
  fs::create_directories(cfg.out_dir);

  CsvWriter csv(fs::path(cfg.out_dir) / "face_accuracy.csv");
  detail::write_provenance(csv, cfg);
  csv.header({"m_train", "reduction", "algorithm", "seed", "accuracy"});
  for (int m : cfg.train_sizes) {
    for (const auto& red_name : cfg.reductions) {
      for (int s = 0; s < cfg.face_seeds; ++s) {
        const std::uint64_t split_seed = cfg.seed + static_cast<std::uint64_t>(s);
        const face::SplitResult split = face::split_train_test(ds, m, split_seed);
        face::ReductionSpec rspec;
        rspec.method = detail::parse_reduction(red_name);
        rspec.target_dim = std::min(132, ds.pixel_dim());
        rspec.seed = split_seed;
        const face::ReducedData red = face::reduce(split.train, split.test, rspec);
        for (const auto& alg : detail::resolve_algorithms(cfg, false)) {
          const double acc = face::evaluate_accuracy(red, m, alg.criteria, cfg.jobs);
          csv.row({std::to_string(m), red_name, alg.name, std::to_string(split_seed),
                   format_double(acc)});
          std::cout << "M=" << m << " " << red_name << " " << alg.name << " seed="
                    << split_seed << ": " << format_double(acc, 4) << "\n";
        }
      }
    }
  }
  return kExitOk;
}

/// Evaluates the two worked reference systems and prints a pass/fail table.
inline int cmd_examples(const RunConfig&) {
  int failures = 0;
  auto check = [&](const char* label, bool ok) {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << label << "\n";
    if (!ok) ++failures;
  };

  const BlockMatrix a1 = examples::inclusion_contrast_system();
  const Vector d = examples::inclusion_contrast_target();
  Vector ipc(3), spc(3);
  for (int g = 0; g < 3; ++g) {
    ipc(g) = score_ipc(a1.block(g), d);
    spc(g) = score_spc(a1.block(g), d);
  }
  std::cout << "inclusion scores (blocks 1..3, 1-based):\n  inner-product: "
            << format_double(ipc(0), 2) << " " << format_double(ipc(1), 2) << " "
            << format_double(ipc(2), 2) << "\n  projection:    "
            << format_double(spc(0), 2) << " " << format_double(spc(1), 2) << " "
            << format_double(spc(2), 2) << "\n";
  check("inner-product scores are (4.12, 5.20, 1.00)",
        std::abs(ipc(0) - 4.12) < 5e-3 && std::abs(ipc(1) - 5.20) < 5e-3 &&
            std::abs(ipc(2) - 1.00) < 5e-3);
  check("projection scores are (4.12, 4.06, 1.00)",
        std::abs(spc(0) - 4.12) < 5e-3 && std::abs(spc(1) - 4.06) < 5e-3 &&
            std::abs(spc(2) - 1.00) < 5e-3);
  int ipc_arg = 0, spc_arg = 0;
  ipc.maxCoeff(&ipc_arg);
  spc.maxCoeff(&spc_arg);
  check("inner-product picks block 2, projection picks block 1",
        ipc_arg == 1 && spc_arg == 0);

  const BlockMatrix a2 = examples::exclusion_contrast_system();
  {
    const Vector y = examples::exclusion_contrast_clean();
    const BlockSignal x(least_squares(a2.entries(), y), 2);
    const bool rcc_first = score_rcc(x, 0) > score_rcc(x, 1);
    const bool rmc_first =
        score_rmc(a2.block(0), x.block(0)) > score_rmc(a2.block(1), x.block(1));
    check("clean system: both shrink criteria keep block 1", rcc_first && rmc_first);
  }
  {
    const Vector y = examples::exclusion_contrast_perturbed();
    const BlockSignal x(least_squares(a2.entries(), y), 2);
    const double rmc0 = score_rmc(a2.block(0), x.block(0));
    const double rmc1 = score_rmc(a2.block(1), x.block(1));
    std::cout << "perturbed system shrink scores:\n  coefficient: "
              << format_double(score_rcc(x, 0), 4) << " vs "
              << format_double(score_rcc(x, 1), 4) << "\n  response:    "
              << format_double(rmc0, 4) << " vs " << format_double(rmc1, 4) << "\n";
    check("perturbed system: coefficient criterion flips to block 2",
          score_rcc(x, 1) > score_rcc(x, 0));
    check("perturbed system: response criterion keeps block 1 with scores (1.4142, 0.1)",
          std::abs(rmc0 - std::sqrt(2.0)) < 1e-6 && std::abs(rmc1 - 0.1) < 1e-6);
  }
  return failures == 0 ? kExitOk : 1;
}

/// Maps exceptions to the documented exit codes.
template <typename Fn>
inline int run_guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const capacity_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIoError;
  }
}

}  // namespace gpsp::cli
