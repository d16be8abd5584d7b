#include "bdlm/rng.hpp"

#include <algorithm>
#include <cmath>

namespace bdlm {

int RandomStream::categorical_from_log(const std::vector<double>& logw) {
  if (logw.empty()) throw InputError("categorical draw over empty support");
  double mx = *std::max_element(logw.begin(), logw.end());
  std::vector<double> w(logw.size());
  double total = 0.0;
  for (std::size_t i = 0; i < logw.size(); ++i) {
    w[i] = std::exp(logw[i] - mx);
    total += w[i];
  }
  double u = uniform() * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    acc += w[i];
    if (u <= acc) return static_cast<int>(i);
  }
  return static_cast<int>(w.size()) - 1;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace bdlm
