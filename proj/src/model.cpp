#include "apq/model.hpp"

#include <cmath>
#include <sstream>

#include "apq/errors.hpp"

namespace apq {

ApModel::ApModel(std::vector<ClassSpec> classes, double service_rate)
    : given_(std::move(classes)), service_rate_(service_rate) {
  if (given_.empty()) throw validation_error("model must have at least one class");
  if (!(service_rate > 0.0) || !std::isfinite(service_rate)) {
    throw validation_error("service_rate must be strictly positive");
  }
  for (const auto& cls : given_) {
    if (!(cls.b > 0.0) || !std::isfinite(cls.b)) {
      throw validation_error("accumulation rate b must be strictly positive");
    }
  }

  normalized_.reserve(given_.size());
  for (const auto& cls : given_) {
    normalized_.push_back(
        {service_rate == 1.0 ? cls.input : cls.input.scaled(1.0 / service_rate), cls.b});
  }

  tagged_ = 0;
  for (std::size_t i = 1; i < normalized_.size(); ++i) {
    if (normalized_[i].b < normalized_[tagged_].b) tagged_ = i;
  }
  for (std::size_t i = 0; i < normalized_.size(); ++i) {
    if (i != tagged_ && normalized_[i].b == normalized_[tagged_].b) {
      throw validation_error(
          "two classes share the minimal accumulation rate; the lowest-priority class is "
          "ill-defined");
    }
  }

  rho_.reserve(normalized_.size());
  decel_.reserve(normalized_.size());
  for (std::size_t i = 0; i < normalized_.size(); ++i) {
    const double rho_i = normalized_[i].input.mean_rate();
    rho_.push_back(rho_i);
    rho_total_ += rho_i;
    const double a_i = i == tagged_ ? 0.0 : 1.0 - normalized_[tagged_].b / normalized_[i].b;
    decel_.push_back(a_i);
    decel_load_ += a_i * rho_i;
    decel_drift_ += a_i * normalized_[i].input.drift();
  }
  if (!(rho_[tagged_] > 0.0)) {
    throw validation_error("tagged class has zero mean input rate");
  }
}

void ApModel::ensure_stable() const {
  if (!stable()) {
    std::ostringstream os;
    os << "model is unstable: rho = " << rho_total_ << " >= 1";
    throw stability_error(os.str());
  }
}

bool ApModel::all_compound_poisson() const {
  for (const auto& cls : normalized_) {
    if (!cls.input.is_compound_poisson()) return false;
  }
  return true;
}

}  // namespace apq
