#ifndef BDLM_DRAWS_HPP
#define BDLM_DRAWS_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace bdlm {

// Tall table of posterior draws: one named column per scalar parameter, one
// row per retained iteration. "chain" and "iter" are ordinary columns so
// merged multi-chain stores stay flat. State and omega paths are not stored
// per draw; their running posterior means are accumulated instead.
struct DrawsStore {
  std::vector<std::string> names;
  std::vector<std::vector<double>> cols;

  Eigen::MatrixXd state_mean;  // (T+1) x p, mean over retained draws
  Eigen::MatrixXd omega_mean;  // T x m

  int pinv_fallbacks = 0;        // FFBS pseudo-inverse fallbacks
  int zero_regressor_flags = 0;  // connectivity updates with no regressor signal
  double seconds = 0.0;          // wall time of the producing chain(s)

  int n_rows() const { return names.empty() ? 0 : static_cast<int>(cols[0].size()); }
  int column_index(const std::string& name) const;
  // Throws InputError when the column does not exist.
  const std::vector<double>& column(const std::string& name) const;
  void add_row(const std::vector<double>& row);

  // Row-concatenates stores with identical schemas; accumulated means are
  // weighted by row counts.
  static DrawsStore merge(const std::vector<DrawsStore>& stores);
};

}  // namespace bdlm

#endif  // BDLM_DRAWS_HPP
