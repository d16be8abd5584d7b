#ifndef BDLM_RNG_HPP
#define BDLM_RNG_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "bdlm/errors.hpp"

namespace bdlm {

// Deterministic random stream. Every sampler and simulator takes one of
// these explicitly, so runs are reproducible given the seed and chains can
// use independent streams derived via derive_seed().
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return unit_(engine_); }

  double normal() { return normal01_(engine_); }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  // shape/rate parameterization (mean = shape/rate).
  double gamma(double shape, double rate) {
    if (!(shape > 0.0) || !(rate > 0.0))
      throw InputError("gamma draw requires positive shape and rate");
    std::gamma_distribution<double> g(shape, 1.0 / rate);
    return g(engine_);
  }

  double beta(double a, double b) {
    double x = gamma(a, 1.0);
    double y = gamma(b, 1.0);
    return x / (x + y);
  }

  std::vector<double> dirichlet(const std::vector<double>& alpha) {
    std::vector<double> out(alpha.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      out[i] = gamma(alpha[i], 1.0);
      sum += out[i];
    }
    for (double& v : out) v /= sum;
    return out;
  }

  // Index draw from unnormalized log weights.
  int categorical_from_log(const std::vector<double>& logw);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
  std::normal_distribution<double> normal01_{0.0, 1.0};
};

// splitmix64 step; spreads a base seed into well-separated per-chain seeds.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

}  // namespace bdlm

#endif  // BDLM_RNG_HPP
