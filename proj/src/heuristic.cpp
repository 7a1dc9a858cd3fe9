#include "no3l/heuristic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace no3l {

namespace {

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

void require_k(double k) {
  if (!(k > 0) || !std::isfinite(k)) throw DomainError("k must be a positive finite real");
}

}  // namespace

TripleProbability triple_probability(GridSize n, unsigned threads) {
  if (n.value() < 2) throw DomainError("triple probability requires n >= 2");
  TripleProbability out;
  const auto t = count_triples_fast(n, threads).value;
  const auto N = static_cast<u128>(n.point_count());
  const double nn = static_cast<double>(n.value());
  try {
    out.denominator = choose3(N);
    out.numerator = t;
    out.rational_available = true;
    out.exact = static_cast<double>(static_cast<long double>(t) / static_cast<long double>(out.denominator));
  } catch (const std::overflow_error&) {
    const long double m = static_cast<long double>(n.point_count());
    out.exact = static_cast<double>(static_cast<long double>(t) / (m * (m - 1) * (m - 2) / 6));
  }
  out.asymptotic = 18.0 * std::log(nn) / (kPi2 * nn * nn);
  return out;
}

double survival_log(GridSize n, double k) {
  require_k(k);
  const double nn = static_cast<double>(n.value());
  if (n.value() < 2) throw DomainError("survival_log requires n >= 2");
  if (k * nn < 3 - 1e-9) throw DomainError("survival_log requires k n >= 3");
  return -3.0 * k * k * k * nn * std::log(nn) / kPi2;
}

LogBracket survival_log_bracket(GridSize n, double k, double slack_constant) {
  const double v = survival_log(n, k);
  const double slack = slack_constant * static_cast<double>(n.value());
  return {v, v - slack, v + slack};
}

double corrected_exponent(double k) { return k - 3.0 * k * k * k / kPi2; }
double erroneous_exponent(double k) { return 2.0 - 3.0 * k * k * k / kPi2; }

ExponentPair exponent_comparison(double k) {
  require_k(k);
  return {corrected_exponent(k), erroneous_exponent(k)};
}

double log_binomial(double total, double choose) {
  return std::lgamma(total + 1) - std::lgamma(choose + 1) - std::lgamma(total - choose + 1);
}

SolutionCountEstimate estimate_solution_count(GridSize n, double k) {
  require_k(k);
  const double nn = static_cast<double>(n.value());
  const double m = std::round(k * nn);
  if (n.value() < 2 || m < 3 || m > static_cast<double>(n.point_count()))
    throw DomainError("estimate requires n >= 2 and 3 <= round(k n) <= n^2");
  SolutionCountEstimate out;
  out.subset_size = static_cast<std::int64_t>(m);
  out.log_binomial = log_binomial(static_cast<double>(n.point_count()), m);
  out.count_log10 = (out.log_binomial + survival_log(n, k)) / std::numbers::ln10;
  out.leading_exponent = corrected_exponent(k);
  out.leading_log = out.leading_exponent * nn * std::log(nn);
  return out;
}

ConjectureConstants conjecture_constants() {
  return {std::numbers::pi / std::sqrt(3.0), std::cbrt(2.0 * kPi2 / 3.0)};
}

double bisect_root(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0) return lo;
  if (fhi == 0) return hi;
  if ((flo < 0) == (fhi < 0)) throw DomainError("bisection bracket has no sign change");
  for (int it = 0; it < 200; ++it) {
    const double mid = lo + (hi - lo) / 2;
    if (mid == lo || mid == hi) break;
    const double fm = f(mid);
    if (fm == 0) return mid;
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return lo + (hi - lo) / 2;
}

EstimateReport make_estimate_report(GridSize n, double k, double slack_constant, unsigned threads) {
  const auto est = estimate_solution_count(n, k);
  const auto prob = triple_probability(n, threads);
  EstimateReport r;
  r.n = n.value();
  r.k = k;
  r.subset_size = est.subset_size;
  r.p_triple_exact = prob.exact;
  r.p_triple_asym = prob.asymptotic;
  r.survival = survival_log_bracket(n, k, slack_constant);
  r.log_binomial = est.log_binomial;
  r.count_log10 = est.count_log10;
  r.count_log10_lower = (est.log_binomial + r.survival.lower) / std::numbers::ln10;
  r.count_log10_upper = (est.log_binomial + r.survival.upper) / std::numbers::ln10;
  const auto e = exponent_comparison(k);
  r.exponent_corrected = e.corrected;
  r.exponent_erroneous = e.erroneous;
  return r;
}

}  // namespace no3l
