#ifndef APQ_JUMP_DIST_HPP
#define APQ_JUMP_DIST_HPP

#include <variant>
#include <vector>

#include "apq/rng.hpp"

namespace apq {

// Jump-size law of a compound Poisson component. Restricted to families with
// closed-form LST and first two moments, so the Laplace exponents downstream
// are exact (no inner numerical integration anywhere in the analytic path).
class JumpDist {
 public:
  struct Exponential {
    double mean;
  };
  struct Deterministic {
    double size;
  };
  struct Erlang {
    int shape;
    double mean;  // mean of the whole variate, not of one stage
  };
  struct Hyperexponential {
    std::vector<double> weights;  // sum to 1
    std::vector<double> means;
  };

  static JumpDist exponential(double mean);
  static JumpDist deterministic(double size);
  static JumpDist erlang(int shape, double mean);
  static JumpDist hyperexponential(std::vector<double> weights, std::vector<double> means);

  double mean() const;
  double second_moment() const;

  // E e^{-alpha X}, alpha >= 0.
  double lst(double alpha) const;
  // d/dalpha E e^{-alpha X} (negative), used for Newton steps on eta.
  double lst_derivative(double alpha) const;

  double sample(Rng& rng) const;

  // Law of factor * X; used when normalizing a model to unit service rate.
  JumpDist scaled(double factor) const;

  using Variant = std::variant<Exponential, Deterministic, Erlang, Hyperexponential>;
  const Variant& variant() const { return v_; }

 private:
  explicit JumpDist(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

}  // namespace apq

#endif  // APQ_JUMP_DIST_HPP
