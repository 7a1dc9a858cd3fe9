// heuristic.hpp
// Numerical evaluation of the probabilistic estimate for the number of
// no-three-in-line sets with kn points.
//
// All logarithms are natural unless a name says log10. Probabilities that
// can underflow are carried as logarithms.

#pragma once

#include <cstdint>
#include <functional>

#include "no3l/census.hpp"
#include "no3l/grid.hpp"

namespace no3l {

struct TripleProbability {
  double exact = 0;       // t_n / C(n^2, 3)
  double asymptotic = 0;  // 18 ln n / (pi^2 n^2)
  // Exact rational form, available while C(n^2, 3) fits in 128 bits.
  u128 numerator = 0;
  u128 denominator = 0;
  bool rational_available = false;
};

TripleProbability triple_probability(GridSize n, unsigned threads = 1);

// The O(n) slack of the survival estimate, never folded into the value:
// the report carries [value - C n, value + C n].
struct LogBracket {
  double value = 0;
  double lower = 0;
  double upper = 0;
};

// -3 k^3 n ln n / pi^2: log-probability that kn random points have no three
// in line, if all C(kn, 3) triple events were independent.
double survival_log(GridSize n, double k);
LogBracket survival_log_bracket(GridSize n, double k, double slack_constant = 1.0);

struct ExponentPair {
  double corrected = 0;  // k - 3k^3/pi^2
  double erroneous = 0;  // 2 - 3k^3/pi^2
};

ExponentPair exponent_comparison(double k);
double corrected_exponent(double k);
double erroneous_exponent(double k);

struct SolutionCountEstimate {
  std::int64_t subset_size = 0;  // round(kn)
  double log_binomial = 0;       // ln C(n^2, round(kn)), exact log-Gamma
  double count_log10 = 0;        // (log_binomial + survival_log) / ln 10
  double leading_exponent = 0;   // coefficient of n ln n in ln(count)
  // ln of the leading-order form n^{(k - 3k^3/pi^2) n}, i.e. what remains
  // after Stirling with all O(n) terms dropped.
  double leading_log = 0;
};

// Throws DomainError unless 3 <= round(kn) <= n^2 and k > 0.
SolutionCountEstimate estimate_solution_count(GridSize n, double k);

// ln C(total, choose) via lgamma.
double log_binomial(double total, double choose);

struct ConjectureConstants {
  double k_corrected = 0;  // pi / sqrt(3)
  double k_original = 0;   // (2 pi^2 / 3)^{1/3}
};

ConjectureConstants conjecture_constants();

// Bisection for a sign change of f on [lo, hi]; iterates until the bracket
// stops shrinking in double precision. Throws DomainError if f(lo) and
// f(hi) share a sign.
double bisect_root(const std::function<double(double)>& f, double lo, double hi);

struct EstimateReport {
  std::int64_t n = 0;
  double k = 0;
  std::int64_t subset_size = 0;
  double p_triple_exact = 0;
  double p_triple_asym = 0;
  LogBracket survival;
  double log_binomial = 0;
  double count_log10 = 0;
  double count_log10_lower = 0;  // with the -C n slack
  double count_log10_upper = 0;  // with the +C n slack
  double exponent_corrected = 0;
  double exponent_erroneous = 0;
};

EstimateReport make_estimate_report(GridSize n, double k, double slack_constant = 1.0,
                                    unsigned threads = 1);

}  // namespace no3l
