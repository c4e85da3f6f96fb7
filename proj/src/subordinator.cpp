#include "apq/subordinator.hpp"

#include <cmath>
#include <string>

#include "apq/errors.hpp"

namespace apq {

namespace {

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw validation_error(std::string(what) + " must be strictly positive");
  }
}

}  // namespace

SubordinatorSpec::SubordinatorSpec(double drift, std::vector<Component> components)
    : drift_(drift), components_(std::move(components)) {
  if (!(drift >= 0.0) || !std::isfinite(drift)) {
    throw validation_error("drift must be nonnegative and finite");
  }
  for (const auto& comp : components_) {
    std::visit(
        [](const auto& c) {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, CompoundPoisson>) {
            require_positive(c.rate, "compound Poisson rate");
          } else if constexpr (std::is_same_v<T, GammaProcess>) {
            require_positive(c.shape_rate, "gamma shape_rate");
            require_positive(c.scale_rate, "gamma scale_rate");
          } else {
            require_positive(c.delta, "inverse Gaussian delta");
            require_positive(c.gamma, "inverse Gaussian gamma");
          }
        },
        comp);
  }
}

double SubordinatorSpec::laplace_exponent(double alpha) const {
  if (alpha < 0.0) throw validation_error("laplace_exponent: alpha must be nonnegative");
  double eta = drift_ * alpha;
  for (const auto& comp : components_) {
    eta += std::visit(
        [alpha](const auto& c) -> double {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, CompoundPoisson>) {
            // lambda (1 - E e^{-alpha X}); each jump family exposes the
            // one-complement in a cancellation-free form
            return std::visit(
                [alpha, &c](const auto& d) -> double {
                  using J = std::decay_t<decltype(d)>;
                  if constexpr (std::is_same_v<J, JumpDist::Exponential>) {
                    return c.rate * alpha * d.mean / (1.0 + alpha * d.mean);
                  } else if constexpr (std::is_same_v<J, JumpDist::Deterministic>) {
                    return c.rate * -std::expm1(-alpha * d.size);
                  } else if constexpr (std::is_same_v<J, JumpDist::Erlang>) {
                    return c.rate * -std::expm1(-d.shape * std::log1p(alpha * d.mean / d.shape));
                  } else {
                    double s = 0.0;
                    for (std::size_t i = 0; i < d.weights.size(); ++i) {
                      s += d.weights[i] * alpha * d.means[i] / (1.0 + alpha * d.means[i]);
                    }
                    return c.rate * s;
                  }
                },
                c.jumps.variant());
          } else if constexpr (std::is_same_v<T, GammaProcess>) {
            return c.shape_rate * std::log1p(alpha / c.scale_rate);
          } else {
            // delta (sqrt(2 alpha + gamma^2) - gamma), rationalized
            const double root = std::sqrt(2.0 * alpha + c.gamma * c.gamma);
            return c.delta * 2.0 * alpha / (root + c.gamma);
          }
        },
        comp);
  }
  return eta;
}

double SubordinatorSpec::laplace_exponent_derivative(double alpha) const {
  if (alpha < 0.0) throw validation_error("laplace_exponent_derivative: alpha must be nonnegative");
  double d_eta = drift_;
  for (const auto& comp : components_) {
    d_eta += std::visit(
        [alpha](const auto& c) -> double {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, CompoundPoisson>) {
            return -c.rate * c.jumps.lst_derivative(alpha);
          } else if constexpr (std::is_same_v<T, GammaProcess>) {
            return c.shape_rate / (c.scale_rate + alpha);
          } else {
            return c.delta / std::sqrt(2.0 * alpha + c.gamma * c.gamma);
          }
        },
        comp);
  }
  return d_eta;
}

double SubordinatorSpec::mean_rate() const {
  double rho = drift_;
  for (const auto& comp : components_) {
    rho += std::visit(
        [](const auto& c) -> double {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, CompoundPoisson>) {
            return c.rate * c.jumps.mean();
          } else if constexpr (std::is_same_v<T, GammaProcess>) {
            return c.shape_rate / c.scale_rate;
          } else {
            return c.delta / c.gamma;
          }
        },
        comp);
  }
  return rho;
}

double SubordinatorSpec::second_moment_measure() const {
  double m2 = 0.0;
  for (const auto& comp : components_) {
    m2 += std::visit(
        [](const auto& c) -> double {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, CompoundPoisson>) {
            return c.rate * c.jumps.second_moment();
          } else if constexpr (std::is_same_v<T, GammaProcess>) {
            return c.shape_rate / (c.scale_rate * c.scale_rate);
          } else {
            return c.delta / (c.gamma * c.gamma * c.gamma);
          }
        },
        comp);
  }
  return m2;
}

double SubordinatorSpec::excess_lst(double alpha) const {
  const double rho = mean_rate();
  if (!(rho > 0.0)) {
    throw validation_error("excess_lst: degenerate class with zero mean rate");
  }
  if (alpha < 0.0) throw validation_error("excess_lst: alpha must be nonnegative");
  if (alpha == 0.0) return 1.0;
  return laplace_exponent(alpha) / (rho * alpha);
}

double SubordinatorSpec::sample_increment(double t, Rng& rng) const {
  if (!(t > 0.0)) throw validation_error("sample_increment: t must be positive");
  double total = drift_ * t;
  for (const auto& comp : components_) {
    total += std::visit(
        [t, &rng](const auto& c) -> double {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, CompoundPoisson>) {
            std::poisson_distribution<long> pois(c.rate * t);
            const long n = pois(rng);
            double s = 0.0;
            for (long i = 0; i < n; ++i) s += c.jumps.sample(rng);
            return s;
          } else if constexpr (std::is_same_v<T, GammaProcess>) {
            return sample_gamma(c.shape_rate * t, c.scale_rate, rng);
          } else {
            const double mu = t * c.delta / c.gamma;
            const double shape = (t * c.delta) * (t * c.delta);
            return sample_inverse_gaussian(mu, shape, rng);
          }
        },
        comp);
  }
  return total;
}

PathGrid SubordinatorSpec::sample_path_grid(double horizon, double h, Rng& rng) const {
  if (!(h > 0.0) || !(h <= horizon)) {
    throw validation_error("sample_path_grid: require 0 < h <= horizon");
  }
  const auto steps = static_cast<std::size_t>(std::ceil(horizon / h));
  PathGrid grid;
  grid.step = h;
  grid.values.resize(steps + 1);
  grid.values[0] = 0.0;
  double cum = 0.0;
  for (std::size_t k = 1; k <= steps; ++k) {
    cum += sample_increment(h, rng);
    grid.values[k] = cum;
  }
  return grid;
}

SubordinatorSpec SubordinatorSpec::scaled(double factor) const {
  require_positive(factor, "scale factor");
  std::vector<Component> comps;
  comps.reserve(components_.size());
  for (const auto& comp : components_) {
    comps.push_back(std::visit(
        [factor](const auto& c) -> Component {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, CompoundPoisson>) {
            return CompoundPoisson{c.rate, c.jumps.scaled(factor)};
          } else if constexpr (std::is_same_v<T, GammaProcess>) {
            return GammaProcess{c.shape_rate, c.scale_rate / factor};
          } else {
            // factor * IG(delta, gamma) = IG(delta sqrt(factor), gamma / sqrt(factor))
            const double s = std::sqrt(factor);
            return InverseGaussianProcess{c.delta * s, c.gamma / s};
          }
        },
        comp));
  }
  return SubordinatorSpec(drift_ * factor, std::move(comps));
}

bool SubordinatorSpec::has_infinite_activity() const {
  for (const auto& comp : components_) {
    if (!std::holds_alternative<CompoundPoisson>(comp)) return true;
  }
  return false;
}

bool SubordinatorSpec::is_compound_poisson() const {
  return drift_ == 0.0 && !has_infinite_activity();
}

double SubordinatorSpec::cp_rate() const {
  double rate = 0.0;
  for (const auto& comp : components_) {
    if (const auto* cp = std::get_if<CompoundPoisson>(&comp)) rate += cp->rate;
  }
  return rate;
}

}  // namespace apq
