#include "no3l/census.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <vector>

namespace no3l {

std::string to_decimal(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v != 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

namespace {

u128 checked_mul(u128 a, u128 b) {
  u128 r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("triple count exceeds 128 bits");
  return r;
}

u128 checked_add(u128 a, u128 b) {
  u128 r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("triple count exceeds 128 bits");
  return r;
}

// gcd(a, r) for every residue r < a, filled divisor by divisor in
// ascending order so the largest common divisor wins. O(sigma(a)).
void residue_gcds(std::uint64_t a, std::vector<std::uint64_t>& g) {
  g.assign(a, 1);
  g[0] = a;
  std::vector<std::uint64_t> small, large;
  for (std::uint64_t d = 2; d * d <= a; ++d) {
    if (a % d != 0) continue;
    small.push_back(d);
    if (d * d != a) large.push_back(a / d);
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  for (std::uint64_t d : small)
    for (std::uint64_t r = d; r < a; r += d) g[r] = d;
}

// Contribution of the difference-vector row with horizontal offset a.
u128 row_sum(std::uint64_t n, std::uint64_t a, std::vector<std::uint64_t>& g) {
  // (n - b)(g - 1) <= n^2 < 2^60, and at most n terms, so the inner sum fits
  // comfortably in 128 bits.
  u128 inner = 0;
  if (a == 0) {
    // gcd(0, b) = b; b = 0 is not a difference vector.
    for (std::uint64_t b = 2; b < n; ++b) inner += static_cast<u128>(n - b) * (b - 1);
    return checked_mul(inner, n);
  }
  residue_gcds(a, g);
  for (std::uint64_t b = 1, r = 1 % a; b < n; ++b) {
    if (g[r] > 1) inner += static_cast<u128>(n - b) * (g[r] - 1);
    if (++r == a) r = 0;
  }
  // Off-axis vectors (a > 0, b > 0) carry both slope signs; the axis vector
  // (a, 0) has a - 1 interior points and weight 1.
  const u128 axis = static_cast<u128>(n) * (a - 1);
  return checked_mul(checked_add(checked_mul(inner, 2), axis), n - a);
}

}  // namespace

u128 choose3(u128 m) {
  if (m < 3) return 0;
  // m(m-1)(m-2) is divisible by 6; divide early to delay overflow.
  u128 a = m, b = m - 1, c = m - 2;
  if (a % 3 == 0) a /= 3; else if (b % 3 == 0) b /= 3; else c /= 3;
  if (a % 2 == 0) a /= 2; else b /= 2;
  return checked_mul(checked_mul(a, b), c);
}

TripleCount count_triples_fast(GridSize n, unsigned threads) {
  const auto N = static_cast<std::uint64_t>(n.value());
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::min<std::uint64_t>(N, 1024))));

  std::vector<u128> partial(threads, 0);
  std::vector<std::exception_ptr> errors(threads);
  auto work = [&](unsigned w) {
    try {
      u128 acc = 0;
      std::vector<std::uint64_t> g;
      // Strided rows balance the uneven per-row cost.
      for (std::uint64_t a = w; a < N; a += threads) acc = checked_add(acc, row_sum(N, a, g));
      partial[w] = acc;
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  TripleCount out{n.value(), 0};
  for (u128 p : partial) out.value = checked_add(out.value, p);
  return out;
}

TripleCount count_triples_brute(GridSize n, std::int64_t cap) {
  if (n.value() > cap) {
    throw DomainError("brute-force census refuses n = " + std::to_string(n.value()) +
                      " above cap " + std::to_string(cap));
  }
  std::vector<GridPoint> pts;
  for (Coord y = 0; y < n.value(); ++y)
    for (Coord x = 0; x < n.value(); ++x) pts.push_back({x, y});
  u128 count = 0;
  const std::size_t m = pts.size();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      for (std::size_t k = j + 1; k < m; ++k)
        if (collinear(pts[i], pts[j], pts[k])) ++count;
  return {n.value(), count};
}

AsymptoticComparison compare_asymptotic(GridSize n, unsigned threads) {
  if (n.value() < 2) throw DomainError("asymptotic comparison requires n >= 2");
  AsymptoticComparison out;
  out.n = n.value();
  out.exact = count_triples_fast(n, threads);
  const double nn = static_cast<double>(n.value());
  out.main_term = 3.0 / (std::numbers::pi * std::numbers::pi) * nn * nn * nn * nn * std::log(nn);
  out.ratio = static_cast<double>(out.exact.value) / out.main_term;
  return out;
}

}  // namespace no3l
