#ifndef APQ_ANALYTIC_HPP
#define APQ_ANALYTIC_HPP

#include <optional>

#include "apq/model.hpp"

namespace apq {

// One real LST evaluation together with its argument.
struct TransformValue {
  double alpha = 0.0;
  double value = 1.0;
};

// phi(alpha) = alpha - sum_i eta_i(alpha): the exponent of the net input,
// whose reflection is the stationary workload. phi(0) = 0, phi'(0) = 1 - rho,
// strictly convex. Requires a stable model.
double phi(const ApModel& model, double alpha);

// phi'(0) = 1 - rho.
double phi_derivative_at_zero(const ApModel& model);

// Generalized Pollaczek-Khinchine transform of the stationary total workload:
// E e^{-alpha W0} = phi'(0) alpha / phi(alpha), continuously extended to 1 at
// alpha = 0.
TransformValue w0_lst(const ApModel& model, double alpha);

// Exponent of the drained overtaking input in tagged time:
// phi_a(alpha) = alpha - sum_{i != tagged} a_i eta_i(alpha). Strictly
// increasing and convex with slope 1 - sum a_i rho_i at zero.
double phi_a(const ApModel& model, double alpha);

// d/dx phi_a(x); used for the Newton steps of the inverse.
double phi_a_derivative(const ApModel& model, double x);

// The unique x >= 0 with phi_a(x) = alpha. Safeguarded Newton on the bracket
// [alpha, alpha / (1 - sum a_i rho_i)], converged to
// |phi_a(x) - alpha| <= 1e-12 max(1, alpha).
double phi_a_inverse(const ApModel& model, double alpha);

// LST of the first-passage time T = inf{t >= 0 : v + J_a(t) - t = 0}:
// E e^{-alpha T} = exp(-phi_a^{-1}(alpha) v).
TransformValue fpt_lst(const ApModel& model, double v, double alpha);

// LST of the steady-state waiting time of tagged-class particles:
// phi'(0) eta_N(phi_a^{-1}(alpha)) / (rho_N phi(phi_a^{-1}(alpha))).
TransformValue wn_lst(const ApModel& model, double alpha);

// LST of the steady-state waiting time of a tagged-class customer (the first
// particle of its batch) in the M/G/1 case:
// (1 - rho) / (1 - rho E e^{-phi_a^{-1}(alpha) X_e}), where X_e is the
// stationary excess of the aggregate job-size mixture. Every class must be a
// pure compound Poisson input.
TransformValue w_customer_lst_mg1(const ApModel& model, double alpha);

// Joint transform E e^{-alpha W_N - beta (W0 + Ye)} =
// phi'(0) eta_N(phi_a^{-1}(alpha) + beta) / (rho_N phi(phi_a^{-1}(alpha) + beta)).
double joint_lst(const ApModel& model, double alpha, double beta);

struct MeanWaits {
  double w0 = 0.0;           // E W0 = sum_i m2_i / (2 (1 - rho))
  double ye = 0.0;           // E Ye = m2_tagged / (2 rho_tagged)
  double wn_particle = 0.0;  // (w0 + ye) / (1 - sum a_i rho_i)
  std::optional<double> w_customer;  // w0 / (1 - sum a_i rho_i), CP models only
};

MeanWaits mean_waits(const ApModel& model);

}  // namespace apq

#endif  // APQ_ANALYTIC_HPP
