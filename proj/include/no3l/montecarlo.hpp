// montecarlo.hpp
// Sampling experiments against the independence estimate: how often do
// uniformly random subsets of the grid avoid collinear triples?
//
// Random source: std::mt19937_64. Trials are split over workers; worker w
// is seeded with seed + w and handles samples / W trials (the first
// samples % W workers take one extra). Results are reproducible for a fixed
// (seed, workers) pair.

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "no3l/grid.hpp"

namespace no3l {

inline constexpr std::string_view kRngAlgorithm = "mt19937_64";

struct TrialSummary {
  std::int64_t n = 0;
  double k = 0;
  std::int64_t subset_size = 0;
  std::uint64_t samples = 0;
  std::uint64_t survivors = 0;
  double p_hat = 0;
  double std_error = 0;
  // ln of the independence prediction, survival_log(n, k).
  double predicted_log = 0;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

// Uniform random subsets of {0, ..., population - 1} by partial Fisher-Yates
// over a persistent index array. Each draw undoes the previous one's swaps
// first, so every draw starts from the identity permutation.
class SubsetSampler {
 public:
  SubsetSampler(std::uint32_t population, std::uint32_t subset_size);

  std::span<const std::uint32_t> draw(std::mt19937_64& rng);

 private:
  std::vector<std::uint32_t> index_;
  std::vector<std::uint32_t> swapped_with_;
  std::uint32_t subset_size_;
};

// Fraction of random round(kn)-subsets with no three in line.
// Requires 3 <= round(kn) <= n^2 and samples > 0.
TrialSummary sample_survival(GridSize n, double k, std::uint64_t samples, std::uint64_t seed,
                             unsigned workers = 1);

// Fraction of random distinct triples that are collinear (estimates
// t_n / C(n^2, 3)). Here `survivors` counts collinear triples.
TrialSummary sample_triple_collinearity(GridSize n, std::uint64_t samples, std::uint64_t seed,
                                        unsigned workers = 1);

struct IndependenceGap {
  TrialSummary trials;
  // ln(p_hat) - survival_log(n, k); positive means survival beats the
  // independence prediction.
  std::optional<double> gap;
  // Delta-method error bar stderr / p_hat.
  std::optional<double> error_bar;
  // Set when survivors == 0; then only gap < ln(3 / samples) - predicted
  // can be claimed (rule of three, ~95%).
  bool all_died = false;
  double gap_upper_bound = 0;
};

IndependenceGap independence_gap(GridSize n, double k, std::uint64_t samples, std::uint64_t seed,
                                 unsigned workers = 1);

}  // namespace no3l
