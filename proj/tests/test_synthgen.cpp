#include <catch2/catch.hpp>

#include "gpsp/synthgen.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace gpsp;
using namespace gpsp::synth;

TEST_CASE("hetero-Gaussian generation", "[synthgen]") {
  EnsembleSpec spec;
  spec.master_seed = 42;

  SECTION("paper-scale dimensions") {
    spec.n_rows = 400;
    spec.n_blocks = 200;
    spec.block_size = 5;
    const BlockMatrix a = gen_hetero_gaussian(spec, 0);
    REQUIRE(a.rows() == 400);
    REQUIRE(a.cols() == 1000);
  }

  SECTION("same key twice is bit-identical, different trials differ") {
    spec.n_rows = 30;
    spec.n_blocks = 4;
    spec.block_size = 3;
    const BlockMatrix a = gen_hetero_gaussian(spec, 5);
    const BlockMatrix b = gen_hetero_gaussian(spec, 5);
    const BlockMatrix c = gen_hetero_gaussian(spec, 6);
    REQUIRE((a.entries() - b.entries()).norm() == 0.0);
    REQUIRE((a.entries() - c.entries()).norm() != 0.0);
  }

  SECTION("per-block moments match the drawn parameters") {
    // 1e5 entries per block; the drawn (mu_g, sigma_g) are recovered from the
    // stream by replaying its head.
    spec.n_rows = 20000;
    spec.n_blocks = 2;
    spec.block_size = 5;
    const BlockMatrix a = gen_hetero_gaussian(spec, 3);
    StreamRng replay(spec.master_seed, 3, 0);
    for (int g = 0; g < 2; ++g) {
      const double mu = replay.normal(1.0, 5.0);
      double sg = std::fabs(replay.normal(1.0, 5.0));
      while (sg == 0.0) sg = std::fabs(replay.normal(1.0, 5.0));
      const auto blk = a.block(g);
      const double n = static_cast<double>(blk.size());
      const double mean = blk.sum() / n;
      const double var = (blk.array() - mean).square().sum() / (n - 1.0);
      REQUIRE(mean == Approx(mu).margin(3.0 * sg / std::sqrt(n)));
      REQUIRE(std::sqrt(var) == Approx(sg).margin(3.0 * sg / std::sqrt(2.0 * n)));
    }
  }
}

TEST_CASE("poisson and bernoulli ensembles", "[synthgen]") {
  EnsembleSpec spec;
  spec.master_seed = 7;
  spec.n_rows = 20000;
  spec.n_blocks = 2;
  spec.block_size = 5;

  SECTION("bernoulli entries are exactly zero or one with matching frequency") {
    spec.family = EnsembleFamily::kBernoulli;
    const BlockMatrix a = gen_bernoulli_blocks(spec, 1);
    REQUIRE(((a.entries().array() == 0.0) || (a.entries().array() == 1.0)).all());
    StreamRng replay(spec.master_seed, 1, 0);
    for (int g = 0; g < 2; ++g) {
      const double p = replay.uniform();
      const auto blk = a.block(g);
      const double n = static_cast<double>(blk.size());
      const double freq = blk.sum() / n;
      REQUIRE(freq == Approx(p).margin(3.0 * std::sqrt(p * (1.0 - p) / n)));
    }
  }

  SECTION("poisson block mean within three standard errors") {
    spec.family = EnsembleFamily::kPoisson;
    const BlockMatrix a = gen_poisson_blocks(spec, 2);
    StreamRng replay(spec.master_seed, 2, 0);
    for (int g = 0; g < 2; ++g) {
      double lambda = std::pow(replay.normal(5.0, 20.0), 2);
      while (lambda > 1e6) lambda = std::pow(replay.normal(5.0, 20.0), 2);
      const auto blk = a.block(g);
      const double n = static_cast<double>(blk.size());
      const double mean = blk.sum() / n;
      REQUIRE(mean == Approx(lambda).margin(3.0 * std::sqrt(lambda / n)));
    }
  }
}

TEST_CASE("signal generation", "[synthgen]") {
  SECTION("support is exactly the first k blocks") {
    const BlockSignal c = gen_signal(6, 3, 2, 0, 9);
    REQUIRE(c.block_support() == BlockSupport({0, 1}));
  }
  SECTION("k = 0 is the zero signal") {
    REQUIRE(gen_signal(4, 2, 0, 0, 9).coeffs().norm() == 0.0);
  }
  SECTION("k = G is fully dense") {
    const BlockSignal c = gen_signal(4, 2, 4, 0, 9);
    REQUIRE(c.block_support().size() == 4);
  }
  SECTION("k > G rejected") {
    REQUIRE_THROWS_AS(gen_signal(4, 2, 5, 0, 9), std::invalid_argument);
  }
}

TEST_CASE("noise injection", "[synthgen]") {
  const Vector y = oracles::random_vector(64, 11);
  SECTION("sigma zero returns the input bit-identically") {
    REQUIRE((add_noise(y, 0.0, 0, 1) - y).norm() == 0.0);
  }
  SECTION("negative sigma rejected") {
    REQUIRE_THROWS_AS(add_noise(y, -1.0, 0, 1), std::invalid_argument);
  }
  SECTION("different trials draw different noise") {
    REQUIRE((add_noise(y, 0.5, 0, 1) - add_noise(y, 0.5, 1, 1)).norm() != 0.0);
  }
  SECTION("empirical standard deviation") {
    const Vector big = Vector::Zero(100000);
    const Vector noisy = add_noise(big, 0.3, 2, 1);
    const double n = static_cast<double>(noisy.size());
    const double mean = noisy.sum() / n;
    const double sd = std::sqrt((noisy.array() - mean).square().sum() / (n - 1.0));
    REQUIRE(sd == Approx(0.3).margin(3.0 * 0.3 / std::sqrt(2.0 * n)));
  }
}

TEST_CASE("sweep runner", "[synthgen]") {
  EnsembleSpec spec;
  spec.n_rows = 60;
  spec.n_blocks = 20;
  spec.block_size = 3;
  spec.normalize_columns = true;
  spec.master_seed = 123;
  const std::vector<int> ks = {1, 2};

  SECTION("sparsity-one recovery is perfect for the projection algorithms") {
    const SweepResult r = run_sweep(spec, default_algorithms(), {1}, 20, 0.0, 2);
    REQUIRE(r.cell("GPSP", 1).success_rate == 1.0);
    REQUIRE(r.cell("BOMPR", 1).success_rate == 1.0);
  }

  SECTION("sparsity-one recovery holds over 100 trials at reference scale") {
    EnsembleSpec paper;
    paper.n_rows = 400;
    paper.n_blocks = 200;
    paper.block_size = 5;
    paper.normalize_columns = true;
    paper.master_seed = 1;
    const std::vector<AlgorithmSpec> only_gpsp = {{"GPSP", CriteriaSpec::gpsp()}};
    const SweepResult r = run_sweep(paper, only_gpsp, {1}, 100, 0.0, 2);
    REQUIRE(r.cell("GPSP", 1).success_rate == 1.0);
  }

  SECTION("deterministic replay and job-count independence") {
    const SweepResult serial = run_sweep(spec, default_algorithms(), ks, 5, 0.1, 1);
    const SweepResult parallel = run_sweep(spec, default_algorithms(), ks, 5, 0.1, 4);
    const SweepResult replay = run_sweep(spec, default_algorithms(), ks, 5, 0.1, 1);
    REQUIRE(serial.cells.size() == parallel.cells.size());
    for (std::size_t i = 0; i < serial.cells.size(); ++i) {
      REQUIRE(serial.cells[i].algorithm == parallel.cells[i].algorithm);
      REQUIRE(serial.cells[i].successes == parallel.cells[i].successes);
      REQUIRE(serial.cells[i].successes == replay.cells[i].successes);
    }
  }

  SECTION("sparsity cap enforced") {
    REQUIRE_THROWS_AS(run_sweep(spec, default_algorithms(), {11}, 2, 0.0, 1),
                      std::invalid_argument);
  }

  SECTION("ablation set contains the named equivalents") {
    const SweepResult named = run_sweep(spec, default_algorithms(), ks, 5, 0.0, 2);
    const SweepResult combos = run_sweep(spec, ablation_algorithms(), ks, 5, 0.0, 2);
    for (int k : ks) {
      REQUIRE(combos.cell("SPC-RMC", k).successes == named.cell("GPSP", k).successes);
      REQUIRE(combos.cell("IPC-RCC", k).successes == named.cell("BSP", k).successes);
    }
  }
}

TEST_CASE("success is symmetric under block relabeling", "[synthgen][property]") {
  // Permuting the blocks of A and c* consistently permutes the recovered
  // support.
  EnsembleSpec spec;
  spec.n_rows = 24;
  spec.n_blocks = 6;
  spec.block_size = 2;
  spec.master_seed = 321;
  const BlockMatrix a = gen_hetero_gaussian(spec, 0);
  const BlockSignal c = gen_signal(6, 2, 2, 0, spec.master_seed);
  const Vector y = a.entries() * c.coeffs();
  const BlockSupport base = run_gpsp(a, y, 2).outcome.support;

  const std::vector<int> perm = {3, 5, 0, 2, 4, 1};  // block g -> perm[g]
  Matrix pm(a.rows(), a.cols());
  Vector pc = Vector::Zero(c.coeffs().size());
  for (int g = 0; g < 6; ++g) {
    pm.middleCols(perm[g] * 2, 2) = a.entries().middleCols(g * 2, 2);
    pc.segment(perm[g] * 2, 2) = c.block(g);
  }
  const BlockMatrix ap(pm, 6, 2);
  const Vector yp = ap.entries() * pc;
  REQUIRE((yp - y).norm() < 1e-12);  // same observation by construction
  const BlockSupport permuted = run_gpsp(ap, yp, 2).outcome.support;

  std::vector<int> expected;
  for (int g : base) expected.push_back(perm[g]);
  REQUIRE(permuted == BlockSupport::from_unsorted(expected));
}
