#ifndef APQ_ERRORS_HPP
#define APQ_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace apq {

// Invalid inputs: schema violations, parameter domain errors, unstable or
// otherwise unsupported models. CLI exit code 2.
class validation_error : public std::runtime_error {
 public:
  explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// rho >= 1.
class stability_error : public validation_error {
 public:
  explicit stability_error(const std::string& msg) : validation_error(msg) {}
};

// Structurally valid model outside an operation's supported family
// (e.g. a non-compound-Poisson class passed to the M/G/1 customer formula).
class unsupported_model_error : public validation_error {
 public:
  explicit unsupported_model_error(const std::string& msg) : validation_error(msg) {}
};

// Quantile request at or below a distribution's atom at zero.
class atom_error : public validation_error {
 public:
  atom_error(const std::string& msg, double atom) : validation_error(msg), atom_size(atom) {}
  double atom_size;
};

// Iteration failed to converge, or a result left its admissible range.
// CLI exit code 3.
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace apq

#endif  // APQ_ERRORS_HPP
