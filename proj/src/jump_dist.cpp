#include "apq/jump_dist.hpp"

#include <cmath>
#include <numeric>
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

JumpDist JumpDist::exponential(double mean) {
  require_positive(mean, "exponential mean");
  return JumpDist(Exponential{mean});
}

JumpDist JumpDist::deterministic(double size) {
  require_positive(size, "deterministic size");
  return JumpDist(Deterministic{size});
}

JumpDist JumpDist::erlang(int shape, double mean) {
  if (shape < 1) throw validation_error("erlang shape must be a positive integer");
  require_positive(mean, "erlang mean");
  return JumpDist(Erlang{shape, mean});
}

JumpDist JumpDist::hyperexponential(std::vector<double> weights, std::vector<double> means) {
  if (weights.empty() || weights.size() != means.size()) {
    throw validation_error("hyperexponential weights and means must be nonempty and equal-length");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw validation_error("hyperexponential weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw validation_error("hyperexponential weights must sum to 1 (within 1e-12)");
  }
  for (double m : means) require_positive(m, "hyperexponential mean");
  return JumpDist(Hyperexponential{std::move(weights), std::move(means)});
}

double JumpDist::mean() const {
  return std::visit(
      [](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Exponential>) {
          return d.mean;
        } else if constexpr (std::is_same_v<T, Deterministic>) {
          return d.size;
        } else if constexpr (std::is_same_v<T, Erlang>) {
          return d.mean;
        } else {
          double m = 0.0;
          for (std::size_t i = 0; i < d.weights.size(); ++i) m += d.weights[i] * d.means[i];
          return m;
        }
      },
      v_);
}

double JumpDist::second_moment() const {
  return std::visit(
      [](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Exponential>) {
          return 2.0 * d.mean * d.mean;
        } else if constexpr (std::is_same_v<T, Deterministic>) {
          return d.size * d.size;
        } else if constexpr (std::is_same_v<T, Erlang>) {
          // Var = mean^2 / shape
          return d.mean * d.mean * (1.0 + 1.0 / d.shape);
        } else {
          double m2 = 0.0;
          for (std::size_t i = 0; i < d.weights.size(); ++i)
            m2 += d.weights[i] * 2.0 * d.means[i] * d.means[i];
          return m2;
        }
      },
      v_);
}

double JumpDist::lst(double alpha) const {
  if (alpha < 0.0) throw validation_error("LST argument must be nonnegative");
  return std::visit(
      [alpha](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Exponential>) {
          return 1.0 / (1.0 + alpha * d.mean);
        } else if constexpr (std::is_same_v<T, Deterministic>) {
          return std::exp(-alpha * d.size);
        } else if constexpr (std::is_same_v<T, Erlang>) {
          // ((1 + alpha*mean/shape)^-shape), computed in log space
          return std::exp(-d.shape * std::log1p(alpha * d.mean / d.shape));
        } else {
          double s = 0.0;
          for (std::size_t i = 0; i < d.weights.size(); ++i)
            s += d.weights[i] / (1.0 + alpha * d.means[i]);
          return s;
        }
      },
      v_);
}

double JumpDist::lst_derivative(double alpha) const {
  return std::visit(
      [alpha](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Exponential>) {
          const double den = 1.0 + alpha * d.mean;
          return -d.mean / (den * den);
        } else if constexpr (std::is_same_v<T, Deterministic>) {
          return -d.size * std::exp(-alpha * d.size);
        } else if constexpr (std::is_same_v<T, Erlang>) {
          const double base = 1.0 + alpha * d.mean / d.shape;
          return -d.mean * std::exp(-(d.shape + 1.0) * std::log(base));
        } else {
          double s = 0.0;
          for (std::size_t i = 0; i < d.weights.size(); ++i) {
            const double den = 1.0 + alpha * d.means[i];
            s -= d.weights[i] * d.means[i] / (den * den);
          }
          return s;
        }
      },
      v_);
}

JumpDist JumpDist::scaled(double factor) const {
  require_positive(factor, "scale factor");
  return std::visit(
      [factor](const auto& d) -> JumpDist {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Exponential>) {
          return JumpDist::exponential(factor * d.mean);
        } else if constexpr (std::is_same_v<T, Deterministic>) {
          return JumpDist::deterministic(factor * d.size);
        } else if constexpr (std::is_same_v<T, Erlang>) {
          return JumpDist::erlang(d.shape, factor * d.mean);
        } else {
          std::vector<double> means = d.means;
          for (double& m : means) m *= factor;
          return JumpDist::hyperexponential(d.weights, std::move(means));
        }
      },
      v_);
}

double JumpDist::sample(Rng& rng) const {
  return std::visit(
      [&rng](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Exponential>) {
          std::exponential_distribution<double> e(1.0 / d.mean);
          return e(rng);
        } else if constexpr (std::is_same_v<T, Deterministic>) {
          return d.size;
        } else if constexpr (std::is_same_v<T, Erlang>) {
          std::exponential_distribution<double> e(d.shape / d.mean);
          double s = 0.0;
          for (int i = 0; i < d.shape; ++i) s += e(rng);
          return s;
        } else {
          std::uniform_real_distribution<double> u(0.0, 1.0);
          double pick = u(rng);
          std::size_t idx = d.weights.size() - 1;
          for (std::size_t i = 0; i < d.weights.size(); ++i) {
            if (pick < d.weights[i]) {
              idx = i;
              break;
            }
            pick -= d.weights[i];
          }
          std::exponential_distribution<double> e(1.0 / d.means[idx]);
          return e(rng);
        }
      },
      v_);
}

}  // namespace apq
