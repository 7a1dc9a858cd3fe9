#include "no3l/montecarlo.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <thread>

#include "no3l/heuristic.hpp"

namespace no3l {

SubsetSampler::SubsetSampler(std::uint32_t population, std::uint32_t subset_size)
    : index_(population), subset_size_(subset_size) {
  if (subset_size > population) throw DomainError("subset larger than population");
  std::iota(index_.begin(), index_.end(), 0u);
  swapped_with_.reserve(subset_size);
}

std::span<const std::uint32_t> SubsetSampler::draw(std::mt19937_64& rng) {
  for (std::size_t i = swapped_with_.size(); i-- > 0;) std::swap(index_[i], index_[swapped_with_[i]]);
  swapped_with_.clear();
  const auto pop = static_cast<std::uint32_t>(index_.size());
  for (std::uint32_t i = 0; i < subset_size_; ++i) {
    std::uniform_int_distribution<std::uint32_t> pick(i, pop - 1);
    const std::uint32_t j = pick(rng);
    std::swap(index_[i], index_[j]);
    swapped_with_.push_back(j);
  }
  return {index_.data(), subset_size_};
}

namespace {

// Runs `trial(rng)` samples times across workers and returns the number of
// trials for which it returned true.
std::uint64_t run_trials(std::uint64_t samples, std::uint64_t seed, unsigned workers,
                         const std::function<std::function<bool(std::mt19937_64&)>()>& make_trial) {
  workers = std::max(1u, workers);
  std::vector<std::uint64_t> hits(workers, 0);
  auto body = [&](unsigned w) {
    std::mt19937_64 rng(seed + w);
    const std::uint64_t quota = samples / workers + (w < samples % workers ? 1 : 0);
    auto trial = make_trial();
    std::uint64_t h = 0;
    for (std::uint64_t s = 0; s < quota; ++s) h += trial(rng) ? 1 : 0;
    hits[w] = h;
  };
  if (workers == 1) {
    body(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body, w);
  }
  return std::accumulate(hits.begin(), hits.end(), std::uint64_t{0});
}

void finish(TrialSummary& t) {
  t.p_hat = static_cast<double>(t.survivors) / static_cast<double>(t.samples);
  t.std_error = std::sqrt(t.p_hat * (1 - t.p_hat) / static_cast<double>(t.samples));
}

GridPoint point_of(std::uint32_t idx, Coord n) {
  return {static_cast<Coord>(idx % static_cast<std::uint32_t>(n)),
          static_cast<Coord>(idx / static_cast<std::uint32_t>(n))};
}

void check_population(GridSize n) {
  if (n.point_count() > std::numeric_limits<std::uint32_t>::max())
    throw DomainError("sampling supports at most 2^32 - 1 grid points");
}

}  // namespace

TrialSummary sample_survival(GridSize n, double k, std::uint64_t samples, std::uint64_t seed,
                             unsigned workers) {
  if (!(k > 0)) throw DomainError("k must be positive");
  if (samples == 0) throw DomainError("samples must be positive");
  check_population(n);
  const double m = std::round(k * static_cast<double>(n.value()));
  if (m < 3 || m > static_cast<double>(n.point_count()))
    throw DomainError("sample_survival requires 3 <= round(k n) <= n^2");

  TrialSummary t;
  t.n = n.value();
  t.k = k;
  t.subset_size = static_cast<std::int64_t>(m);
  t.samples = samples;
  t.seed = seed;
  t.workers = std::max(1u, workers);
  t.predicted_log = survival_log(n, k);

  const auto N = static_cast<Coord>(n.value());
  const auto pop = static_cast<std::uint32_t>(n.point_count());
  const auto size = static_cast<std::uint32_t>(m);
  t.survivors = run_trials(samples, seed, t.workers, [=] {
    return [sampler = SubsetSampler(pop, size), pts = std::vector<GridPoint>(size),
            N](std::mt19937_64& rng) mutable {
      const auto idx = sampler.draw(rng);
      for (std::size_t i = 0; i < idx.size(); ++i) pts[i] = point_of(idx[i], N);
      return !first_collinear_triple(pts).has_value();
    };
  });
  finish(t);
  return t;
}

TrialSummary sample_triple_collinearity(GridSize n, std::uint64_t samples, std::uint64_t seed,
                                        unsigned workers) {
  if (n.value() < 2) throw DomainError("triple sampling requires n >= 2");
  if (samples == 0) throw DomainError("samples must be positive");
  check_population(n);
  TrialSummary t;
  t.n = n.value();
  t.subset_size = 3;
  t.k = 3.0 / static_cast<double>(n.value());
  t.samples = samples;
  t.seed = seed;
  t.workers = std::max(1u, workers);
  t.predicted_log = survival_log(n, t.k);

  const auto N = static_cast<Coord>(n.value());
  const auto pop = static_cast<std::uint32_t>(n.point_count());
  t.survivors = run_trials(samples, seed, t.workers, [=] {
    return [sampler = SubsetSampler(pop, 3), N](std::mt19937_64& rng) mutable {
      const auto idx = sampler.draw(rng);
      return collinear(point_of(idx[0], N), point_of(idx[1], N), point_of(idx[2], N));
    };
  });
  finish(t);
  return t;
}

IndependenceGap independence_gap(GridSize n, double k, std::uint64_t samples, std::uint64_t seed,
                                 unsigned workers) {
  IndependenceGap g;
  g.trials = sample_survival(n, k, samples, seed, workers);
  const auto& t = g.trials;
  if (t.survivors == 0) {
    g.all_died = true;
    g.gap_upper_bound = std::log(3.0 / static_cast<double>(t.samples)) - t.predicted_log;
    return g;
  }
  g.gap = std::log(t.p_hat) - t.predicted_log;
  g.error_bar = t.std_error / t.p_hat;
  return g;
}

}  // namespace no3l
