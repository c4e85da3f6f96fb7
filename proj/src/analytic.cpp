#include "apq/analytic.hpp"

#include <cmath>
#include <sstream>

#include "apq/errors.hpp"

namespace apq {

namespace {

void require_nonnegative(double alpha, const char* what) {
  if (!(alpha >= 0.0)) {
    std::ostringstream os;
    os << what << ": alpha must be nonnegative, got " << alpha;
    throw validation_error(os.str());
  }
}

// eta_N(s) / phi(s) -> rho_N / (1 - rho) as s -> 0; both evaluate to zero at
// s = 0 exactly, so the ratio formulas extend continuously by hand.
double workload_excess_ratio(const ApModel& model, double s) {
  const auto& tagged = model.classes()[model.tagged_index()].input;
  if (s == 0.0) return 1.0;
  const double num = phi_derivative_at_zero(model) * tagged.laplace_exponent(s);
  const double den = model.class_rho(model.tagged_index()) * phi(model, s);
  return num / den;
}

}  // namespace

double phi(const ApModel& model, double alpha) {
  require_nonnegative(alpha, "phi");
  model.ensure_stable();
  double s = alpha;
  for (const auto& cls : model.classes()) s -= cls.input.laplace_exponent(alpha);
  return s;
}

double phi_derivative_at_zero(const ApModel& model) {
  model.ensure_stable();
  return 1.0 - model.rho();
}

TransformValue w0_lst(const ApModel& model, double alpha) {
  require_nonnegative(alpha, "w0_lst");
  model.ensure_stable();
  if (alpha == 0.0) return {0.0, 1.0};
  return {alpha, phi_derivative_at_zero(model) * alpha / phi(model, alpha)};
}

double phi_a(const ApModel& model, double alpha) {
  require_nonnegative(alpha, "phi_a");
  double s = alpha;
  for (std::size_t i = 0; i < model.num_classes(); ++i) {
    const double a_i = model.deceleration(i);
    if (a_i > 0.0) s -= a_i * model.classes()[i].input.laplace_exponent(alpha);
  }
  return s;
}

double phi_a_derivative(const ApModel& model, double x) {
  double d = 1.0;
  for (std::size_t i = 0; i < model.num_classes(); ++i) {
    const double a_i = model.deceleration(i);
    if (a_i > 0.0) d -= a_i * model.classes()[i].input.laplace_exponent_derivative(x);
  }
  return d;
}

double phi_a_inverse(const ApModel& model, double alpha) {
  require_nonnegative(alpha, "phi_a_inverse");
  if (alpha == 0.0) return 0.0;
  const double slope0 = 1.0 - model.decelerated_load();
  if (!(slope0 > 0.0)) {
    throw validation_error("phi_a_inverse: decelerated load sum a_i rho_i >= 1");
  }
  // phi_a(x) <= x and phi_a(x) >= x (1 - sum a_i rho_i) enclose the root.
  double lo = alpha;
  double hi = alpha / slope0;
  const double tol = 1e-12 * std::max(1.0, alpha);
  double x = hi;
  for (int iter = 0; iter < 200; ++iter) {
    const double f = phi_a(model, x) - alpha;
    if (std::abs(f) <= tol) return x;
    if (f > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    const double deriv = phi_a_derivative(model, x);
    double next = deriv > 0.0 ? x - f / deriv : x;
    if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
    x = next;
  }
  throw numeric_error("phi_a_inverse: no convergence after 200 iterations");
}

TransformValue fpt_lst(const ApModel& model, double v, double alpha) {
  if (!(v >= 0.0)) throw validation_error("fpt_lst: v must be nonnegative");
  require_nonnegative(alpha, "fpt_lst");
  return {alpha, std::exp(-phi_a_inverse(model, alpha) * v)};
}

TransformValue wn_lst(const ApModel& model, double alpha) {
  require_nonnegative(alpha, "wn_lst");
  model.ensure_stable();
  if (alpha == 0.0) return {0.0, 1.0};
  const double s = phi_a_inverse(model, alpha);
  return {alpha, workload_excess_ratio(model, s)};
}

TransformValue w_customer_lst_mg1(const ApModel& model, double alpha) {
  require_nonnegative(alpha, "w_customer_lst_mg1");
  model.ensure_stable();
  if (!model.all_compound_poisson()) {
    throw unsupported_model_error(
        "w_customer_lst_mg1: every class must be a pure compound Poisson input");
  }
  if (alpha == 0.0) return {0.0, 1.0};
  const double s = phi_a_inverse(model, alpha);
  // X_e is the stationary excess of the aggregate job-size mixture (weighted
  // by lambda_i E X_i); its LST equals sum_i eta_i(s) / (rho s).
  double eta_sum = 0.0;
  for (const auto& cls : model.classes()) eta_sum += cls.input.laplace_exponent(s);
  const double rho = model.rho();
  const double excess = eta_sum / (rho * s);
  return {alpha, (1.0 - rho) / (1.0 - rho * excess)};
}

double joint_lst(const ApModel& model, double alpha, double beta) {
  require_nonnegative(alpha, "joint_lst");
  if (!(beta >= 0.0)) throw validation_error("joint_lst: beta must be nonnegative");
  model.ensure_stable();
  const double s = phi_a_inverse(model, alpha) + beta;
  return workload_excess_ratio(model, s);
}

MeanWaits mean_waits(const ApModel& model) {
  model.ensure_stable();
  double m2_total = 0.0;
  for (const auto& cls : model.classes()) m2_total += cls.input.second_moment_measure();
  const double m2_tagged = model.classes()[model.tagged_index()].input.second_moment_measure();

  MeanWaits out;
  out.w0 = m2_total / (2.0 * (1.0 - model.rho()));
  out.ye = m2_tagged / (2.0 * model.class_rho(model.tagged_index()));
  out.wn_particle = (out.w0 + out.ye) / (1.0 - model.decelerated_load());
  if (model.all_compound_poisson()) {
    out.w_customer = out.w0 / (1.0 - model.decelerated_load());
  }
  return out;
}

}  // namespace apq
