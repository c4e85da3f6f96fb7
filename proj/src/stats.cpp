#include "apq/stats.hpp"

#include <algorithm>
#include <cmath>

#include "apq/errors.hpp"

namespace apq {

Estimate mean_stderr(std::span<const double> xs) {
  if (xs.empty()) throw validation_error("mean_stderr: empty sample");
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / static_cast<double>(xs.size());
  if (xs.size() == 1) return {mean, 0.0, 1};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double var = ss / static_cast<double>(xs.size() - 1);
  return {mean, std::sqrt(var / static_cast<double>(xs.size())), xs.size()};
}

Estimate batch_mean_stderr(std::span<const double> xs, std::size_t max_batches) {
  if (xs.empty()) throw validation_error("batch_mean_stderr: empty sample");
  const std::size_t batches = std::min(max_batches, xs.size() / 16);
  if (batches < 8) return mean_stderr(xs);
  const std::size_t width = xs.size() / batches;
  std::vector<double> means;
  means.reserve(batches);
  double total = 0.0;
  std::size_t used = 0;
  for (std::size_t b = 0; b < batches; ++b) {
    double s = 0.0;
    for (std::size_t i = b * width; i < (b + 1) * width; ++i) s += xs[i];
    means.push_back(s / static_cast<double>(width));
    total += s;
    used += width;
  }
  const double grand = total / static_cast<double>(used);
  double ss = 0.0;
  for (double m : means) ss += (m - grand) * (m - grand);
  const double var_of_mean = ss / static_cast<double>(batches - 1) / static_cast<double>(batches);
  return {grand, std::sqrt(var_of_mean), used};
}

Estimate weighted_batch_ratio(std::span<const double> ys, std::span<const double> ws,
                              std::size_t max_batches) {
  if (ys.empty() || ys.size() != ws.size()) {
    throw validation_error("weighted_batch_ratio: empty or mismatched samples");
  }
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    num += ws[i] * ys[i];
    den += ws[i];
  }
  if (!(den > 0.0)) throw validation_error("weighted_batch_ratio: zero total weight");
  const double ratio = num / den;

  const std::size_t batches = std::min(max_batches, ys.size() / 16);
  if (batches < 8) {
    // delta-method stderr treating (w_i y_i, w_i) as iid pairs
    const double wbar = den / static_cast<double>(ys.size());
    double ss = 0.0;
    for (std::size_t i = 0; i < ys.size(); ++i) {
      const double r = ws[i] * (ys[i] - ratio);
      ss += r * r;
    }
    const double n = static_cast<double>(ys.size());
    const double var = ss / (n - 1.0) / n;
    return {ratio, std::sqrt(var) / wbar, ys.size()};
  }
  const std::size_t width = ys.size() / batches;
  std::vector<double> resid;
  resid.reserve(batches);
  double mean_wb = 0.0;
  for (std::size_t b = 0; b < batches; ++b) {
    double nb = 0.0, db = 0.0;
    for (std::size_t i = b * width; i < (b + 1) * width; ++i) {
      nb += ws[i] * ys[i];
      db += ws[i];
    }
    resid.push_back((nb - ratio * db) / static_cast<double>(width));
    mean_wb += db / static_cast<double>(width);
  }
  mean_wb /= static_cast<double>(batches);
  double ss = 0.0;
  for (double r : resid) ss += r * r;
  const double var_of_mean =
      ss / static_cast<double>(batches - 1) / static_cast<double>(batches);
  return {ratio, std::sqrt(var_of_mean) / mean_wb, width * batches};
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw validation_error("ks_statistic: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_critical_value(std::size_t n, std::size_t m, double level) {
  const double c = std::sqrt(-0.5 * std::log(level / 2.0));
  const double nn = static_cast<double>(n);
  const double mm = static_cast<double>(m);
  return c * std::sqrt((nn + mm) / (nn * mm));
}

double empirical_quantile(std::vector<double> xs, double p) {
  if (xs.empty()) throw validation_error("empirical_quantile: empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw validation_error("empirical_quantile: p outside [0,1]");
  std::sort(xs.begin(), xs.end());
  const double pos = p * static_cast<double>(xs.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= xs.size()) return xs.back();
  const double frac = pos - static_cast<double>(lo);
  return xs[lo] * (1.0 - frac) + xs[lo + 1] * frac;
}

}  // namespace apq
