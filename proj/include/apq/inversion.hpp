#ifndef APQ_INVERSION_HPP
#define APQ_INVERSION_HPP

#include <functional>
#include <optional>
#include <vector>

namespace apq {

// Real-axis LST evaluator plus what is analytically known about the law.
// The evaluator must be pure and thread-safe; eval(0) = 1 and values lie in
// (0, 1].
struct LstFunction {
  std::function<double(double)> eval;
  std::optional<double> mean;
  std::optional<double> atom_at_zero;
};

// CDF value at t by Gaver-Stehfest inversion of f(alpha)/alpha (the transform
// of the CDF; the waiting-time laws carry atoms at zero, so densities are not
// inverted). The alternating weight sum cancels catastrophically in binary64
// from order ~14 on, so weights and accumulation use 50-digit floats. The
// returned value is clamped to [0, 1]; `raw` keeps the unclamped sum and
// `flagged` marks results outside [-1e-3, 1 + 1e-3] before clamping.
struct CdfValue {
  double value = 0.0;
  double raw = 0.0;
  bool flagged = false;
};

CdfValue invert_cdf_detail(const LstFunction& f, double t, int order = 16);
double invert_cdf(const LstFunction& f, double t, int order = 16);

// p-quantile by bisection on invert_cdf, to bracket width 1e-8. p must lie
// strictly between the atom at zero (when known) and 1; requests at or below
// the atom raise atom_error with the atom size.
double quantile(const LstFunction& f, double p, int order = 16);

// Quantiles of an ascending p sequence, walking the bracket upward so that
// consecutive quantiles reuse the previous bisection bound. Equivalent to
// mapping `quantile` but far cheaper for large batches.
std::vector<double> sorted_quantiles(const LstFunction& f, const std::vector<double>& ps,
                                     int order = 16);

}  // namespace apq

#endif  // APQ_INVERSION_HPP
