#pragma once

#include "gpsp/block_linalg.hpp"
#include "gpsp/parallel.hpp"
#include "gpsp/pursuit.hpp"
#include "gpsp/rng.hpp"

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

namespace gpsp::synth {

enum class EnsembleFamily { kHeteroGaussian, kPoisson, kBernoulli };

inline const char* family_name(EnsembleFamily f) {
  switch (f) {
    case EnsembleFamily::kHeteroGaussian: return "hetero_gaussian";
    case EnsembleFamily::kPoisson: return "poisson";
    case EnsembleFamily::kBernoulli: return "bernoulli";
  }
  return "?";
}

struct EnsembleSpec {
  EnsembleFamily family = EnsembleFamily::kHeteroGaussian;
  int n_rows = 400;
  int n_blocks = 200;
  int block_size = 5;
  bool normalize_columns = false;
  std::uint64_t master_seed = 0;
};

namespace detail {

using gpsp::detail::require;

// Stream tags separating the matrix, signal, and noise draws of one trial.
inline constexpr std::uint64_t kMatrixStream = 0;
inline constexpr std::uint64_t kSignalStream = 1;
inline constexpr std::uint64_t kNoiseStream = 2;

}  // namespace detail

/// Blocks with entries N(mu_g, sigma_g); per block, mu_g ~ N(1, 5) and
/// sigma_g = |N(1, 5)| (redrawn on an exact zero). Block parameters are drawn
/// first, then entries block by block, so the draw order is part of the
/// determinism contract.
inline BlockMatrix gen_hetero_gaussian(const EnsembleSpec& spec, std::uint64_t trial) {
  StreamRng rng(spec.master_seed, trial, detail::kMatrixStream);
  const int g_count = spec.n_blocks, m = spec.block_size, n = spec.n_rows;
  std::vector<double> mu(static_cast<std::size_t>(g_count)),
      sigma(static_cast<std::size_t>(g_count));
  for (int g = 0; g < g_count; ++g) {
    mu[static_cast<std::size_t>(g)] = rng.normal(1.0, 5.0);
    double s = std::fabs(rng.normal(1.0, 5.0));
    while (s == 0.0) s = std::fabs(rng.normal(1.0, 5.0));
    sigma[static_cast<std::size_t>(g)] = s;
  }
  Matrix a(n, static_cast<Eigen::Index>(g_count) * m);
  for (int g = 0; g < g_count; ++g)
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < n; ++i)
        a(i, static_cast<Eigen::Index>(g) * m + j) =
            rng.normal(mu[static_cast<std::size_t>(g)], sigma[static_cast<std::size_t>(g)]);
  return BlockMatrix(std::move(a), g_count, m);
}

/// Poisson blocks; the block mean is the square of an N(5, 20) draw,
/// redrawn above 1e6 to keep sampling cost bounded.
inline BlockMatrix gen_poisson_blocks(const EnsembleSpec& spec, std::uint64_t trial) {
  StreamRng rng(spec.master_seed, trial, detail::kMatrixStream);
  const int g_count = spec.n_blocks, m = spec.block_size, n = spec.n_rows;
  std::vector<double> lambda(static_cast<std::size_t>(g_count));
  for (int g = 0; g < g_count; ++g) {
    double l = std::pow(rng.normal(5.0, 20.0), 2);
    while (l > 1e6) l = std::pow(rng.normal(5.0, 20.0), 2);
    lambda[static_cast<std::size_t>(g)] = l;
  }
  Matrix a(n, static_cast<Eigen::Index>(g_count) * m);
  for (int g = 0; g < g_count; ++g)
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < n; ++i)
        a(i, static_cast<Eigen::Index>(g) * m + j) =
            static_cast<double>(rng.poisson(lambda[static_cast<std::size_t>(g)]));
  return BlockMatrix(std::move(a), g_count, m);
}

/// 0/1 blocks; the per-block success probability is Uniform[0, 1].
inline BlockMatrix gen_bernoulli_blocks(const EnsembleSpec& spec, std::uint64_t trial) {
  StreamRng rng(spec.master_seed, trial, detail::kMatrixStream);
  const int g_count = spec.n_blocks, m = spec.block_size, n = spec.n_rows;
  std::vector<double> p(static_cast<std::size_t>(g_count));
  for (int g = 0; g < g_count; ++g) p[static_cast<std::size_t>(g)] = rng.uniform();
  Matrix a(n, static_cast<Eigen::Index>(g_count) * m);
  for (int g = 0; g < g_count; ++g)
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < n; ++i)
        a(i, static_cast<Eigen::Index>(g) * m + j) =
            rng.uniform() < p[static_cast<std::size_t>(g)] ? 1.0 : 0.0;
  return BlockMatrix(std::move(a), g_count, m);
}

inline BlockMatrix gen_matrix(const EnsembleSpec& spec, std::uint64_t trial) {
  switch (spec.family) {
    case EnsembleFamily::kHeteroGaussian: return gen_hetero_gaussian(spec, trial);
    case EnsembleFamily::kPoisson: return gen_poisson_blocks(spec, trial);
    case EnsembleFamily::kBernoulli: return gen_bernoulli_blocks(spec, trial);
  }
  throw std::invalid_argument("gen_matrix: unknown family");
}

/// Block k-sparse signal supported on the first k blocks, entries
/// N(mu_c, 1) with mu_c ~ N(1, 5).
inline BlockSignal gen_signal(int n_blocks, int block_size, int k, std::uint64_t trial,
                              std::uint64_t master_seed) {
  detail::require(k >= 0 && k <= n_blocks, "gen_signal: k out of range");
  StreamRng rng(master_seed, trial, detail::kSignalStream);
  const double mu_c = rng.normal(1.0, 5.0);
  BlockSignal c = BlockSignal::zero(n_blocks, block_size);
  for (int g = 0; g < k; ++g)
    for (int j = 0; j < block_size; ++j) c.block(g)(j) = rng.normal(mu_c, 1.0);
  return c;
}

/// Adds i.i.d. N(0, sigma) noise; sigma = 0 returns the input untouched.
inline Vector add_noise(const Vector& y, double sigma, std::uint64_t trial,
                        std::uint64_t master_seed) {
  detail::require(sigma >= 0.0, "add_noise: negative sigma");
  if (sigma == 0.0) return y;
  StreamRng rng(master_seed, trial, detail::kNoiseStream);
  Vector out = y;
  for (Eigen::Index i = 0; i < out.size(); ++i) out(i) += rng.normal(0.0, sigma);
  return out;
}

// ---------------------------------------------------------------------------
// Success-rate sweeps.
// ---------------------------------------------------------------------------

struct AlgorithmSpec {
  std::string name;
  CriteriaSpec criteria;
  int max_iter = 50;
};

/// The five named algorithms.
inline std::vector<AlgorithmSpec> default_algorithms() {
  return {{"BOMP", CriteriaSpec::bomp()},
          {"BOMPR", CriteriaSpec::bompr()},
          {"BCoSaMP", CriteriaSpec::bcosamp()},
          {"BSP", CriteriaSpec::bsp()},
          {"GPSP", CriteriaSpec::gpsp()}};
}

/// The four expansion/shrink criteria combinations of the ablation study.
/// IPC-RCC coincides with BSP and SPC-RMC with GPSP.
inline std::vector<AlgorithmSpec> ablation_algorithms() {
  using I = InclusionCriterion;
  using E = ExclusionCriterion;
  auto combo = [](I inc, E exc) {
    return CriteriaSpec{inc, exc, ExpansionWidth::kK, InitRule::kTopKByInclusion};
  };
  return {{"SPC-RCC", combo(I::kSpc, E::kRcc)},
          {"IPC-RCC", combo(I::kIpc, E::kRcc)},
          {"SPC-RMC", combo(I::kSpc, E::kRmc)},
          {"IPC-RMC", combo(I::kIpc, E::kRmc)}};
}

inline AlgorithmSpec algorithm_by_name(const std::string& name) {
  for (const auto& a : default_algorithms())
    if (a.name == name) return a;
  for (const auto& a : ablation_algorithms())
    if (a.name == name) return a;
  throw std::invalid_argument("unknown algorithm: " + name);
}

struct TrialResult {
  std::string algorithm;
  int sparsity = 0;
  bool success = false;
  double residual_norm = 0.0;
  double wall_time = 0.0;
};

struct SweepCell {
  std::string algorithm;
  int sparsity = 0;
  int trials = 0;
  int successes = 0;
  double success_rate = 0.0;
};

struct SweepResult {
  std::vector<SweepCell> cells;          // ordered by (sparsity, algorithm)
  std::vector<TrialResult> trial_log;    // populated when keep_trials is set

  const SweepCell& cell(const std::string& algorithm, int sparsity) const {
    for (const auto& c : cells)
      if (c.algorithm == algorithm && c.sparsity == sparsity) return c;
    throw std::invalid_argument("SweepResult: no such cell");
  }

  double mean_rate(const std::string& algorithm) const {
    double sum = 0.0;
    int n = 0;
    for (const auto& c : cells)
      if (c.algorithm == algorithm) {
        sum += c.success_rate;
        ++n;
      }
    gpsp::detail::require(n > 0, "SweepResult: no cells for algorithm");
    return sum / n;
  }
};

/// Runs trials_per_cell recoveries for every (algorithm, sparsity) cell.
/// One instance (matrix, signal, noise) is generated per (sparsity, trial)
/// key and shared across algorithms; success means the recovered block
/// support equals the planted one. The observation is always built from the
/// raw ensemble matrix (b = A c* + e); column normalization is a processing
/// step applied to the matrix handed to the algorithms, so the noise level
/// is measured against the unnormalized response scale. Per-trial substreams
/// make the result a pure function of the configuration, independent of the
/// job count.
inline SweepResult run_sweep(const EnsembleSpec& spec,
                             const std::vector<AlgorithmSpec>& algorithms,
                             const std::vector<int>& sparsities, int trials_per_cell,
                             double noise_sigma, int jobs = 1, bool keep_trials = false) {
  detail::require(!algorithms.empty(), "run_sweep: no algorithms");
  detail::require(trials_per_cell >= 1, "run_sweep: trials must be >= 1");
  const int cap = spec.n_rows / (2 * spec.block_size);
  for (int k : sparsities)
    detail::require(k >= 1 && k <= cap, "run_sweep: sparsity beyond N/(2M) cap");

  const std::size_t n_k = sparsities.size();
  const std::size_t n_alg = algorithms.size();
  const std::size_t n_tasks = n_k * static_cast<std::size_t>(trials_per_cell);
  std::vector<TrialResult> log(n_tasks * n_alg);

  parallel_for(n_tasks, jobs, [&](std::size_t task) {
    const std::size_t ki = task / static_cast<std::size_t>(trials_per_cell);
    const std::size_t t = task % static_cast<std::size_t>(trials_per_cell);
    const int k = sparsities[ki];
    const std::uint64_t instance = (static_cast<std::uint64_t>(k) << 32) | t;

    BlockMatrix a = gen_matrix(spec, instance);
    const BlockSignal c = gen_signal(spec.n_blocks, spec.block_size, k, instance,
                                     spec.master_seed);
    const BlockSupport truth = c.block_support();
    const Vector y = add_noise(a.entries() * c.coeffs(), noise_sigma, instance,
                               spec.master_seed);
    if (spec.normalize_columns) a = column_normalize(a).first;

    for (std::size_t ai = 0; ai < n_alg; ++ai) {
      const auto start = std::chrono::steady_clock::now();
      const PursuitResult r =
          generic_pursuit(a, y, k, algorithms[ai].criteria, algorithms[ai].max_iter);
      const std::chrono::duration<double> elapsed =
          std::chrono::steady_clock::now() - start;
      TrialResult& out = log[task * n_alg + ai];
      out.algorithm = algorithms[ai].name;
      out.sparsity = k;
      out.success = r.outcome.support == truth;
      out.residual_norm = r.outcome.final_residual_norm;
      out.wall_time = elapsed.count();
    }
  });

  SweepResult result;
  for (std::size_t ki = 0; ki < n_k; ++ki) {
    for (std::size_t ai = 0; ai < n_alg; ++ai) {
      SweepCell cell;
      cell.algorithm = algorithms[ai].name;
      cell.sparsity = sparsities[ki];
      cell.trials = trials_per_cell;
      for (int t = 0; t < trials_per_cell; ++t)
        cell.successes +=
            log[(ki * trials_per_cell + t) * n_alg + ai].success ? 1 : 0;
      cell.success_rate = static_cast<double>(cell.successes) / cell.trials;
      result.cells.push_back(std::move(cell));
    }
  }
  if (keep_trials) result.trial_log = std::move(log);
  return result;
}

}  // namespace gpsp::synth
