#ifndef APQ_MODEL_HPP
#define APQ_MODEL_HPP

#include <cstddef>
#include <vector>

#include "apq/subordinator.hpp"

namespace apq {

struct ClassSpec {
  SubordinatorSpec input;
  double b = 1.0;  // accumulation rate, priority grows as b * waited time
};

// An N-class accumulating-priority queue: one subordinator input and one
// accumulation rate per class, single server. The class with the strictly
// smallest b is the tagged (lowest-priority) class; ties in the minimal rate
// are rejected because the theory's "lowest class" is then ill-defined.
//
// A service rate r != 1 is folded in at construction by rescaling every
// input by 1/r (work measured in time-to-drain units); all analysis and
// simulation run on the normalized model. The original classes are kept for
// serialization.
class ApModel {
 public:
  ApModel(std::vector<ClassSpec> classes, double service_rate = 1.0);

  // Normalized classes (unit service rate).
  const std::vector<ClassSpec>& classes() const { return normalized_; }
  // Classes exactly as given, plus the given rate; used for round-tripping.
  const std::vector<ClassSpec>& given_classes() const { return given_; }
  double service_rate() const { return service_rate_; }

  std::size_t num_classes() const { return normalized_.size(); }
  std::size_t tagged_index() const { return tagged_; }

  double rho() const { return rho_total_; }
  double class_rho(std::size_t i) const { return rho_[i]; }
  // a_i = 1 - b_tagged / b_i; zero for the tagged class, in (0,1) otherwise.
  double deceleration(std::size_t i) const { return decel_[i]; }
  // sum_i a_i rho_i, the mean rate of the overtaking input in tagged time.
  double decelerated_load() const { return decel_load_; }
  // sum_i a_i c_i, the drift of the overtaking input in tagged time.
  double decelerated_drift() const { return decel_drift_; }

  bool stable() const { return rho_total_ < 1.0; }
  // Throws stability_error when rho >= 1.
  void ensure_stable() const;

  // True if every class is a pure compound Poisson input (no drift, no
  // Gamma/IG component) -- the M/G/1 customer setting and the DES domain.
  bool all_compound_poisson() const;

 private:
  std::vector<ClassSpec> given_;
  std::vector<ClassSpec> normalized_;
  double service_rate_ = 1.0;
  std::size_t tagged_ = 0;
  std::vector<double> rho_;
  std::vector<double> decel_;
  double rho_total_ = 0.0;
  double decel_load_ = 0.0;
  double decel_drift_ = 0.0;
};

}  // namespace apq

#endif  // APQ_MODEL_HPP
