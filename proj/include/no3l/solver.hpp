// solver.hpp
// Exact search for large no-three-in-line sets in the n x n grid.
//
// The search walks columns left to right and places 0, 1 or 2 points in each
// (at most two per column by pigeonhole). Every pair of placed points forbids
// the cells further along its line; the forbidden marks are reference counts
// undone from a trail on backtrack.

#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "no3l/grid.hpp"

namespace no3l {

struct SolverConfig {
  std::optional<std::uint64_t> node_budget;
  std::optional<std::chrono::duration<double>> time_budget;
  std::optional<std::int64_t> target_size;
  // Must be set to run without any budget or target.
  bool exhaustive = false;
  // Keep only first-column choices that are lexicographically no larger than
  // their vertical mirror image.
  bool symmetry_breaking = false;
  unsigned thread_count = 1;

  // target 2n, 60 second time budget.
  static SolverConfig defaults(GridSize n);

  // Throws DomainError on an unbounded or malformed configuration.
  void validate() const;
};

struct SolverResult {
  std::int64_t n = 0;
  std::int64_t best_size = 0;
  PointSet witness{GridSize(1)};
  // True when the tree was exhausted or best_size meets the pigeonhole bound.
  bool proven_optimal = false;
  bool tree_exhausted = false;
  std::uint64_t nodes_explored = 0;
  std::chrono::duration<double> elapsed{};
};

// Upper bound on f_n from at most two points per column: min(2, n) * n.
std::int64_t pigeonhole_bound(GridSize n);

SolverResult solve(GridSize n, const SolverConfig& cfg);

// Number of labelled no-three-in-line sets of exactly `size` points. No
// symmetry quotient.
std::uint64_t count_solutions_of_size(GridSize n, std::int64_t size);

inline constexpr std::int64_t kDefaultCountCap = 5;

struct MaximumSolutionCount {
  std::int64_t max_size = 0;  // f_n
  std::uint64_t count = 0;    // labelled sets of size f_n
};

// Counts maximum solutions by descending from the pigeonhole bound until a
// size with at least one solution appears. Refuses n > cap.
MaximumSolutionCount count_maximum_solutions(GridSize n, std::int64_t cap = kDefaultCountCap);

struct VerifyReport {
  bool valid = false;
  std::string reason;
  std::optional<Triple> offending;
};

// Checks a parsed witness using grid-core primitives only: grid bounds,
// duplicates, then an all-triples scan. Reports the first offending triple
// in input order.
VerifyReport verify_points(const RawPointList& raw);

// Throws ParseError on malformed input.
VerifyReport verify_witness(std::istream& is);
VerifyReport verify_witness(const std::filesystem::path& path);

}  // namespace no3l
