#include "apq/inversion.hpp"

#include <algorithm>
#include <array>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "apq/errors.hpp"

namespace apq {

namespace {

using BigFloat = boost::multiprecision::cpp_bin_float_50;

constexpr int kMinOrder = 8;
constexpr int kMaxOrder = 20;
constexpr double kQuantileBracketWidth = 1e-8;

BigFloat factorial(int n) {
  BigFloat f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Stehfest weights V_k, k = 1..n:
//   V_k = (-1)^{k + n/2} sum_j j^{n/2} (2j)! /
//         ((n/2 - j)! j! (j-1)! (k-j)! (2j-k)!)
// over j = floor((k+1)/2) .. min(k, n/2). Stored as V_k / k, the coefficients
// of the CDF sum.
std::vector<BigFloat> stehfest_weights_over_k(int order) {
  const int half = order / 2;
  std::vector<BigFloat> out(static_cast<std::size_t>(order));
  for (int k = 1; k <= order; ++k) {
    BigFloat sum = 0;
    const int j_lo = (k + 1) / 2;
    const int j_hi = std::min(k, half);
    for (int j = j_lo; j <= j_hi; ++j) {
      BigFloat term = pow(BigFloat(j), half) * factorial(2 * j);
      term /= factorial(half - j) * factorial(j) * factorial(j - 1) * factorial(k - j) *
              factorial(2 * j - k);
      sum += term;
    }
    if ((k + half) % 2 != 0) sum = -sum;
    out[static_cast<std::size_t>(k - 1)] = sum / k;
  }
  return out;
}

const std::vector<BigFloat>& weights_for(int order) {
  static const auto tables = [] {
    std::array<std::vector<BigFloat>, (kMaxOrder - kMinOrder) / 2 + 1> t;
    for (int n = kMinOrder; n <= kMaxOrder; n += 2) {
      t[static_cast<std::size_t>((n - kMinOrder) / 2)] = stehfest_weights_over_k(n);
    }
    return t;
  }();
  return tables[static_cast<std::size_t>((order - kMinOrder) / 2)];
}

void validate_order(int order) {
  if (order < kMinOrder || order > kMaxOrder || order % 2 != 0) {
    std::ostringstream os;
    os << "inversion order must be an even integer in [" << kMinOrder << ", " << kMaxOrder
       << "], got " << order;
    throw validation_error(os.str());
  }
}

}  // namespace

CdfValue invert_cdf_detail(const LstFunction& f, double t, int order) {
  validate_order(order);
  if (!(t > 0.0)) throw validation_error("invert_cdf: t must be positive");
  if (!f.eval) throw validation_error("invert_cdf: empty evaluator");
  const auto& w = weights_for(order);
  const double log2_over_t = std::numbers::ln2 / t;
  BigFloat sum = 0;
  for (int k = 1; k <= order; ++k) {
    const double fk = f.eval(static_cast<double>(k) * log2_over_t);
    sum += w[static_cast<std::size_t>(k - 1)] * BigFloat(fk);
  }
  CdfValue out;
  out.raw = sum.convert_to<double>();
  out.flagged = out.raw < -1e-3 || out.raw > 1.0 + 1e-3;
  out.value = std::clamp(out.raw, 0.0, 1.0);
  return out;
}

double invert_cdf(const LstFunction& f, double t, int order) {
  return invert_cdf_detail(f, t, order).value;
}

namespace {

// Smallest t with CDF(t) >= p, assuming cdf(lo) <= p <= cdf(hi).
double bisect_quantile(const LstFunction& f, double p, double lo, double hi, int order) {
  while (hi - lo > kQuantileBracketWidth) {
    const double mid = 0.5 * (lo + hi);
    if (invert_cdf(f, mid, order) >= p) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double grow_upper_bracket(const LstFunction& f, double p, double lo, double step, int order) {
  double hi = lo + step;
  for (int i = 0; i < 200; ++i) {
    if (invert_cdf(f, hi, order) >= p) return hi;
    step *= 2.0;
    hi = lo + step;
  }
  throw numeric_error("quantile: no upper bracket found; p may exceed the reachable CDF range");
}

void validate_quantile_p(const LstFunction& f, double p) {
  if (!(p > 0.0 && p < 1.0)) throw validation_error("quantile: p must lie strictly in (0, 1)");
  if (f.atom_at_zero && p <= *f.atom_at_zero) {
    std::ostringstream os;
    os << "quantile: p = " << p << " does not exceed the atom at zero (size " << *f.atom_at_zero
       << ")";
    throw atom_error(os.str(), *f.atom_at_zero);
  }
}

}  // namespace

double quantile(const LstFunction& f, double p, int order) {
  validate_quantile_p(f, p);
  double hi;
  if (f.mean && *f.mean > 0.0) {
    // Markov: P(X > mean/(1-p)) <= 1-p, so the CDF there is at least p.
    hi = *f.mean / (1.0 - p);
    if (invert_cdf(f, hi, order) < p) hi = grow_upper_bracket(f, p, 0.0, 2.0 * hi, order);
  } else {
    hi = grow_upper_bracket(f, p, 0.0, 1.0, order);
  }
  return bisect_quantile(f, p, 0.0, hi, order);
}

std::vector<double> sorted_quantiles(const LstFunction& f, const std::vector<double>& ps,
                                     int order) {
  std::vector<double> out;
  out.reserve(ps.size());
  double prev_q = 0.0;
  double last_gap = 1.0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (i > 0 && ps[i] < ps[i - 1]) {
      throw validation_error("sorted_quantiles: probabilities must be ascending");
    }
    validate_quantile_p(f, ps[i]);
    const double lo = std::max(0.0, prev_q - kQuantileBracketWidth);
    const double hi = grow_upper_bracket(f, ps[i], lo, std::max(last_gap, 1e-6), order);
    const double q = bisect_quantile(f, ps[i], lo, hi, order);
    last_gap = std::max(q - prev_q, 1e-6);
    prev_q = q;
    out.push_back(q);
  }
  return out;
}

}  // namespace apq
