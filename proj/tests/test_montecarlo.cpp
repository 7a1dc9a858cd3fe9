#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "no3l/census.hpp"
#include "no3l/heuristic.hpp"
#include "no3l/montecarlo.hpp"

using namespace no3l;

namespace {

double exact_collinear_fraction(std::int64_t n) {
  const auto t = count_triples_fast(GridSize(n)).value;
  return static_cast<double>(t) / static_cast<double>(choose3(static_cast<u128>(n * n)));
}

}  // namespace

TEST_CASE("subset sampler draws distinct in-range indices") {
  std::mt19937_64 rng(1);
  SubsetSampler sampler(25, 7);
  for (int i = 0; i < 2000; ++i) {
    const auto d = sampler.draw(rng);
    REQUIRE(d.size() == 7);
    std::set<std::uint32_t> seen(d.begin(), d.end());
    REQUIRE(seen.size() == 7);
    REQUIRE(*seen.rbegin() < 25);
  }
  CHECK_THROWS_AS(SubsetSampler(3, 4), DomainError);
}

TEST_CASE("subset sampling is uniform per point (chi-squared, 24 dof)") {
  std::mt19937_64 rng(2024);
  SubsetSampler sampler(25, 5);
  std::vector<double> hits(25, 0);
  const int samples = 100000;
  for (int i = 0; i < samples; ++i)
    for (auto idx : sampler.draw(rng)) hits[idx] += 1;
  const double expected = samples * 5.0 / 25.0;
  double chi2 = 0;
  for (double h : hits) chi2 += (h - expected) * (h - expected) / expected;
  // Upper 1e-3 quantile of chi-squared with 24 degrees of freedom.
  CHECK(chi2 < 51.17859777737739);
}

TEST_CASE("survival sampling examples") {
  const auto full = sample_survival(GridSize(2), 2.0, 1000, 5);
  CHECK(full.subset_size == 4);
  CHECK(full.survivors == 1000);
  CHECK(full.p_hat == 1.0);
  CHECK(full.std_error == 0.0);

  const auto tri = sample_survival(GridSize(3), 1.0, 100000, 11);
  CHECK(tri.subset_size == 3);
  const double exact = 1.0 - 8.0 / 84.0;
  CHECK(std::abs(tri.p_hat - exact) < 3 * tri.std_error);
  CHECK(tri.std_error == doctest::Approx(std::sqrt(tri.p_hat * (1 - tri.p_hat) / 100000)));

  CHECK_THROWS_AS(sample_survival(GridSize(10), 0.2, 10, 1), DomainError);
  CHECK_THROWS_AS(sample_survival(GridSize(3), 4.0, 10, 1), DomainError);
  CHECK_THROWS_AS(sample_survival(GridSize(3), 1.0, 0, 1), DomainError);
}

TEST_CASE("sampling is deterministic for fixed seed and worker count") {
  const auto a = sample_survival(GridSize(10), 1.5, 100000, 77);
  const auto b = sample_survival(GridSize(10), 1.5, 100000, 77);
  CHECK(a.survivors == b.survivors);
  const auto c = sample_survival(GridSize(10), 1.5, 100000, 77, 4);
  const auto d = sample_survival(GridSize(10), 1.5, 100000, 77, 4);
  CHECK(c.survivors == d.survivors);
  CHECK(c.samples == 100000);
  CHECK(c.workers == 4);
  // Six points survive often enough for the seed to matter.
  const auto e1 = sample_survival(GridSize(10), 0.6, 100000, 77);
  const auto e2 = sample_survival(GridSize(10), 0.6, 100000, 78);
  CHECK(e1.survivors > 0);
  CHECK(e1.survivors != e2.survivors);

  const auto t1 = sample_triple_collinearity(GridSize(20), 50000, 3, 3);
  const auto t2 = sample_triple_collinearity(GridSize(20), 50000, 3, 3);
  CHECK(t1.survivors == t2.survivors);
}

TEST_CASE("worker w is seeded with seed + w") {
  // With one sample per worker, worker w's draw is the first draw of a
  // single-worker run seeded seed + w.
  std::uint64_t sum = 0;
  for (unsigned w = 0; w < 5; ++w) sum += sample_triple_collinearity(GridSize(4), 1, 100 + w).survivors;
  CHECK(sample_triple_collinearity(GridSize(4), 5, 100, 5).survivors == sum);
}

TEST_CASE("triple collinearity sampling converges to the census") {
  CHECK(sample_triple_collinearity(GridSize(2), 10000, 1).survivors == 0);

  const auto t3 = sample_triple_collinearity(GridSize(3), 100000, 9);
  CHECK(std::abs(t3.p_hat - 2.0 / 21.0) < 3 * t3.std_error);

  const auto t50 = sample_triple_collinearity(GridSize(50), 1000000, 42, 4);
  CHECK(std::abs(t50.p_hat - exact_collinear_fraction(50)) < 3 * t50.std_error);
  CHECK_THROWS_AS(sample_triple_collinearity(GridSize(1), 10, 1), DomainError);
}

TEST_CASE("subset size 3: survival and triple sampling estimate the same thing") {
  for (std::int64_t n : {4, 7, 12}) {
    const auto s = sample_survival(GridSize(n), 3.0 / static_cast<double>(n), 100000, 500 + n);
    const auto t = sample_triple_collinearity(GridSize(n), 100000, 900 + n);
    const double combined = std::hypot(s.std_error, t.std_error);
    CHECK(std::abs(s.p_hat - (1 - t.p_hat)) < 3 * combined);
  }
}

TEST_CASE("independence gap") {
  const auto g2 = independence_gap(GridSize(2), 2.0, 1000, 3);
  REQUIRE(g2.gap.has_value());
  CHECK(*g2.gap == doctest::Approx(-survival_log(GridSize(2), 2.0)));
  CHECK(*g2.error_bar == 0.0);

  for (std::int64_t n : {5, 10, 20}) {
    const double k = 3.0 / static_cast<double>(n);
    const auto g = independence_gap(GridSize(n), k, 100000, 1000 + n);
    REQUIRE(g.gap.has_value());
    const double exact = std::log(1 - exact_collinear_fraction(n)) - survival_log(GridSize(n), k);
    CHECK(std::abs(*g.gap - exact) < 3 * *g.error_bar);
  }

  const auto g30 = independence_gap(GridSize(30), 1.2, 20000, 8);
  CHECK(g30.trials.subset_size == 36);
  if (g30.gap) {
    CHECK(std::isfinite(*g30.gap));
  } else {
    CHECK(g30.all_died);
  }

  // 90 points in a 30 x 30 grid: every sample has a collinear triple.
  const auto dead = independence_gap(GridSize(30), 3.0, 200, 1);
  CHECK(dead.all_died);
  CHECK_FALSE(dead.gap.has_value());
  CHECK(dead.gap_upper_bound == doctest::Approx(std::log(3.0 / 200) - survival_log(GridSize(30), 3.0)));
}
