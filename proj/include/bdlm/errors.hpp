#ifndef BDLM_ERRORS_HPP
#define BDLM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bdlm {

// Bad arguments, malformed files, dimension mismatches. CLI exit code 2.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// Filter divergence, non-finite draws, singular predictive covariances.
// CLI exit code 3.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace bdlm

#endif  // BDLM_ERRORS_HPP
