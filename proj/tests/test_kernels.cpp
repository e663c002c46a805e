#include <doctest.h>

#include <cmath>
#include <random>

#include "covpath/kernels.hpp"
#include "oracles.hpp"

using namespace covpath;
namespace k = covpath::kernels;

TEST_CASE("total variation matches the double loop") {
  std::mt19937_64 rng(1);
  for (int it = 0; it < 50; ++it) {
    const MaskGrid g = oracle::blobs(rng, 5 + it % 40, 3 + (it * 7) % 37, 3, 0.05);
    const double ref = oracle::total_variation(g);
    CHECK(k::serial::total_variation(g) == doctest::Approx(ref).epsilon(1e-12));
    CHECK(k::parallel::total_variation(g) == doctest::Approx(ref).epsilon(1e-12));
  }
}

TEST_CASE("total variation of a single centre cell") {
  MaskGrid g(3, 3, 0);
  g(1, 1) = 1;
  CHECK(k::total_variation(g) == 2.0 + std::sqrt(2.0));
  CHECK(k::serial::total_variation(g) == 2.0 + std::sqrt(2.0));
}

TEST_CASE("total variation of constant and degenerate grids") {
  CHECK(k::total_variation(MaskGrid(8, 8, 0)) == 0.0);
  CHECK(k::total_variation(MaskGrid(8, 8, 1)) == 0.0);
  MaskGrid row(9, 1, 1);
  row(4, 0) = 0;
  CHECK(k::total_variation(row) == 0.0);  // no cell has an upper neighbour
}

TEST_CASE("float total variation agrees with the oracle") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<float> u(0.f, 1.f);
  Grid<float> g(23, 17);
  for (auto& v : g.raw()) v = u(rng);
  CHECK(k::parallel::total_variation(g) == doctest::Approx(oracle::total_variation(g)).epsilon(1e-9));
}

TEST_CASE("squared EDT equals brute force") {
  std::mt19937_64 rng(3);
  std::bernoulli_distribution coin(0.05);
  for (int it = 0; it < 20; ++it) {
    MaskGrid seeds(7 + it * 2, 5 + it * 3, 0);
    for (auto& v : seeds.raw()) v = coin(rng);
    const Grid<double> ref = oracle::squared_edt(seeds);
    CHECK(k::serial::squared_edt(seeds) == ref);
    CHECK(k::parallel::squared_edt(seeds) == ref);
  }
}

TEST_CASE("squared EDT with no seeds is infinite") {
  const Grid<double> d = k::squared_edt(MaskGrid(4, 4, 0));
  for (double v : d.values()) CHECK(std::isinf(v));
}

TEST_CASE("block OR pooling equals per-block OR, partial blocks included") {
  std::mt19937_64 rng(4);
  std::bernoulli_distribution coin(0.02);
  for (int f : {1, 2, 3, 4, 16}) {
    MaskGrid fine(37, 29, 0);
    for (auto& v : fine.raw()) v = coin(rng);
    CHECK(k::serial::block_or_pool(fine, f) == oracle::block_or(fine, f));
    CHECK(k::parallel::block_or_pool(fine, f) == oracle::block_or(fine, f));
  }
}

TEST_CASE("block mean pooling counts outside cells as the fill value") {
  Grid<float> fine(3, 3, 1.0f);
  const Grid<float> c = k::block_mean_pool(fine, 2, 0.0f);
  REQUIRE(c.width() == 2);
  CHECK(c(0, 0) == 1.0f);
  CHECK(c(1, 0) == 0.5f);
  CHECK(c(1, 1) == 0.25f);
  CHECK(k::serial::block_mean_pool(fine, 2, 0.0f) == c);
}

TEST_CASE("frontier mask follows the definition") {
  std::mt19937_64 rng(5);
  for (int it = 0; it < 20; ++it) {
    const MaskGrid cov = oracle::blobs(rng, 40, 30, 3, 0.0);
    const MaskGrid obs = oracle::blobs(rng, 40, 30, 2, 0.02);
    const MaskGrid ref = oracle::frontier(cov, obs);
    CHECK(k::serial::frontier_mask(cov, obs) == ref);
    CHECK(k::parallel::frontier_mask(cov, obs) == ref);
  }
}

TEST_CASE("single covered cell has its 8 neighbours as frontier") {
  MaskGrid cov(5, 5, 0), obs(5, 5, 0);
  cov(2, 2) = 1;
  const MaskGrid f = k::frontier_mask(cov, obs);
  CHECK(count_set(f) == 8);
  CHECK(f(2, 2) == 0);
}
