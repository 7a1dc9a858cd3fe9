// census.hpp
// Exact count of unordered collinear triples in the n x n grid.

#pragma once

#include <cstdint>
#include <string>

#include "no3l/grid.hpp"

namespace no3l {

using u128 = unsigned __int128;

std::string to_decimal(u128 v);

// C(m, 3) for m points. Throws std::overflow_error past 128 bits.
u128 choose3(u128 m);

struct TripleCount {
  std::int64_t n = 0;
  u128 value = 0;
};

// Sum over difference vectors (a, b), 0 <= a, b < n, of
//   mult(a, b) * (n - a) * (n - b) * (gcd(a, b) - 1)
// with mult = 2 off the axes (both slope signs). Every collinear triple has
// one extreme pair and one interior point, so this counts each exactly once.
//
// Rows of the difference rectangle are split across `threads` workers and
// summed as exact integers, so the result does not depend on the split.
// Throws std::overflow_error rather than wrapping.
TripleCount count_triples_fast(GridSize n, unsigned threads = 1);

inline constexpr std::int64_t kDefaultBruteCap = 14;

// Scans all C(n^2, 3) triples with `collinear`. Refuses n > cap with a
// DomainError.
TripleCount count_triples_brute(GridSize n, std::int64_t cap = kDefaultBruteCap);

struct AsymptoticComparison {
  std::int64_t n = 0;
  TripleCount exact;
  double main_term = 0;  // (3 / pi^2) n^4 ln n
  double ratio = 0;      // exact / main_term
};

AsymptoticComparison compare_asymptotic(GridSize n, unsigned threads = 1);

}  // namespace no3l
