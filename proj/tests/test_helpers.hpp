#ifndef APQ_TEST_HELPERS_HPP
#define APQ_TEST_HELPERS_HPP

#include <cmath>
#include <functional>
#include <vector>

#include "apq/model.hpp"

namespace apq::testing {

// Adaptive Simpson quadrature; independent oracle for the closed-form Levy
// functionals (never calls the library's evaluators).
inline double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                          double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48);
}

// Canonical two-class model M1: both classes CP(0.3, Exp(1)); b = (2, 1), so
// the tagged class is index 1, a_1 = 0.5, rho = 0.6, sum a_i rho_i = 0.15.
inline ApModel m1() {
  SubordinatorSpec cp(0.0, {CompoundPoisson{0.3, JumpDist::exponential(1.0)}});
  return ApModel({{cp, 2.0}, {cp, 1.0}});
}

// Gamma-input model M2: class 0 Gamma(0.4, 1) with b = 2, class 1 (tagged)
// CP(0.2, Exp(1)) with b = 1; rho = 0.6, a_0 = 0.5, sum a_i rho_i = 0.2.
inline ApModel m2() {
  SubordinatorSpec g(0.0, {GammaProcess{0.4, 1.0}});
  SubordinatorSpec cp(0.0, {CompoundPoisson{0.2, JumpDist::exponential(1.0)}});
  return ApModel({{g, 2.0}, {cp, 1.0}});
}

// Two-class model whose overtaking input is CP(lambda1, Exp(1)) decelerated
// by a_0 = 0.5; the tagged class's own input never enters the first passage.
inline ApModel overtaker(double lambda1) {
  SubordinatorSpec top(0.0, {CompoundPoisson{lambda1, JumpDist::exponential(1.0)}});
  SubordinatorSpec tagged(0.0, {CompoundPoisson{0.2, JumpDist::exponential(1.0)}});
  return ApModel({{top, 2.0}, {tagged, 1.0}});
}

// Single-class model: trivially "all b equal", i.e. the FIFO degeneracy.
inline ApModel fifo_cp(double lambda, double mean_size = 1.0) {
  SubordinatorSpec cp(0.0, {CompoundPoisson{lambda, JumpDist::exponential(mean_size)}});
  return ApModel({{cp, 1.0}});
}

// Composite spec exercising every component family at once.
inline SubordinatorSpec composite_spec() {
  return SubordinatorSpec(0.05, {CompoundPoisson{0.2, JumpDist::exponential(0.5)},
                                 GammaProcess{0.1, 2.0}, InverseGaussianProcess{0.05, 1.5}});
}

inline std::vector<double> log_grid(double lo, double hi, int points) {
  std::vector<double> g;
  const double ratio = std::log(hi / lo) / (points - 1);
  for (int i = 0; i < points; ++i) g.push_back(lo * std::exp(ratio * i));
  return g;
}

}  // namespace apq::testing

#endif  // APQ_TEST_HELPERS_HPP
