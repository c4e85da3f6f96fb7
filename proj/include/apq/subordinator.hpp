#ifndef APQ_SUBORDINATOR_HPP
#define APQ_SUBORDINATOR_HPP

#include <variant>
#include <vector>

#include "apq/jump_dist.hpp"
#include "apq/rng.hpp"

namespace apq {

// Compound Poisson component: jumps of law `jumps` at rate `rate` per unit
// time. Levy measure rate * P(X in dx).
struct CompoundPoisson {
  double rate;
  JumpDist jumps;
};

// Gamma subordinator with Levy density shape_rate * x^{-1} e^{-scale_rate x};
// increments over t are Gamma(shape_rate * t, scale_rate).
struct GammaProcess {
  double shape_rate;
  double scale_rate;
};

// Inverse Gaussian subordinator with exponent delta (sqrt(2a + gamma^2) - gamma);
// increments over t are IG(mean = t delta / gamma, shape = (t delta)^2).
struct InverseGaussianProcess {
  double delta;
  double gamma;
};

using Component = std::variant<CompoundPoisson, GammaProcess, InverseGaussianProcess>;

// Discretized sample path of a subordinator: cumulative input at grid times
// 0, h, 2h, ...; values[0] == 0 and the sequence is nondecreasing.
struct PathGrid {
  double step = 0.0;
  std::vector<double> values;
};

// Parametric nondecreasing Levy input process: deterministic drift plus a
// superposition of independent components. Evaluations of the Laplace
// exponent and the moment functionals are exact per family; increment
// sampling is exact in distribution.
class SubordinatorSpec {
 public:
  SubordinatorSpec() = default;
  SubordinatorSpec(double drift, std::vector<Component> components);

  double drift() const { return drift_; }
  const std::vector<Component>& components() const { return components_; }

  // eta(alpha) = c alpha + integral (1 - e^{-alpha x}) nu(dx); concave,
  // nondecreasing, eta(0) = 0. Evaluated in cancellation-free forms so that
  // the relative accuracy survives alpha down to ~1e-300.
  double laplace_exponent(double alpha) const;

  // eta'(alpha), closed form per family. eta'(0) = mean_rate().
  double laplace_exponent_derivative(double alpha) const;

  // rho = E J(1), from closed-form component moments (never differenced).
  double mean_rate() const;

  // integral x^2 nu(dx) over all components (the drift contributes nothing).
  double second_moment_measure() const;

  // LST of the stationary-excess law: eta(alpha) / (rho alpha) for alpha > 0,
  // with continuous extension 1 at alpha = 0. Requires rho > 0.
  double excess_lst(double alpha) const;

  // Exact-in-distribution draw of J(t).
  double sample_increment(double t, Rng& rng) const;

  // Cumulative sums of ceil(horizon/h) independent J(h) increments.
  PathGrid sample_path_grid(double horizon, double h, Rng& rng) const;

  // Law of factor * J; used to normalize models to unit service rate.
  SubordinatorSpec scaled(double factor) const;

  // True if any Gamma or IG component is present (infinitely many jumps in
  // every interval).
  bool has_infinite_activity() const;
  // True if the process is a pure compound Poisson superposition (no drift,
  // no infinite-activity component).
  bool is_compound_poisson() const;
  // Total jump arrival rate of the compound Poisson components.
  double cp_rate() const;

 private:
  double drift_ = 0.0;
  std::vector<Component> components_;
};

}  // namespace apq

#endif  // APQ_SUBORDINATOR_HPP
