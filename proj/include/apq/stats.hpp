#ifndef APQ_STATS_HPP
#define APQ_STATS_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace apq {

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t count = 0;
};

// Plain iid sample mean and standard error.
Estimate mean_stderr(std::span<const double> xs);

// Standard error by the method of nonoverlapping batch means, for serially
// correlated sequences (queue waits). Samples must be in time order. Uses up
// to max_batches sequential batches of equal size; falls back to the iid
// estimate when there are too few samples to batch.
Estimate batch_mean_stderr(std::span<const double> xs, std::size_t max_batches = 256);

// Ratio estimator sum(w_i y_i) / sum(w_i) with a batch-means standard error
// (delta method on batched numerator/denominator sums).
Estimate weighted_batch_ratio(std::span<const double> ys, std::span<const double> ws,
                              std::size_t max_batches = 256);

// Two-sample Kolmogorov-Smirnov statistic sup |F1 - F2|.
double ks_statistic(std::vector<double> a, std::vector<double> b);

// Asymptotic two-sample KS critical value at significance `level`:
// c(level) sqrt((n+m)/(n m)) with c = sqrt(-ln(level/2)/2).
double ks_critical_value(std::size_t n, std::size_t m, double level);

// p-quantile of a sample (linear interpolation between order statistics).
double empirical_quantile(std::vector<double> xs, double p);

}  // namespace apq

#endif  // APQ_STATS_HPP
