#ifndef BDLM_SIM_HPP
#define BDLM_SIM_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "bdlm/dlm.hpp"

namespace bdlm {

// Canonical double-gamma hemodynamic response. Shapes are delay/dispersion+1
// so the positive lobe peaks exactly at peak_delay.
struct HrfParams {
  double peak_delay = 6.0;
  double undershoot_delay = 16.0;
  double peak_dispersion = 1.0;
  double undershoot_dispersion = 1.0;
  double undershoot_ratio = 1.0 / 6.0;

  void validate() const;
};

// h(u) = g(u; peak) - undershoot_ratio * g(u; undershoot) with g a Gamma
// density. h(0) = 0 and the response peaks near peak_delay seconds.
double hrf(double u, const HrfParams& params = HrfParams());

// Boxcar stimulus train s(t): 1 inside a block, 0 elsewhere.
struct StimulusDesign {
  double total_time = 0.0;
  double microtime_dt = 0.1;
  std::vector<std::pair<double, double>> blocks;  // (onset, duration) seconds

  void validate() const;
  bool stimulus_on(double t) const;
};

// Alternating OFF/ON paradigm of 18 trials at 2 s per block (36 s blocks),
// repeated until total_time is covered.
StimulusDesign default_block_design(double total_time, double microtime_dt = 0.1);

// BOLD regressor x(t_k) = integral of h(u) s(t_k - u) du on the microtime
// grid (midpoint rule), evaluated at scan times t_k = k * scan_interval for
// k = 1..n_scans.
std::vector<double> convolve_stimulus(const StimulusDesign& design,
                                      const HrfParams& params, double scan_interval,
                                      int n_scans);

// Six-state connectivity DLM: states (alpha_1..3, theta_t1..3) with static
// trends and VAR(1) activations. F rows are [e_i | f_regressor(t) e_i];
// activation transitions are phi_ij * regressors(t-1, j) with the regressor
// taken as 0 at t=0. V = diag(v_diag), W = diag(0,0,0, w_act_diag).
DlmModel connectivity_model(const Eigen::Matrix3d& phi,
                            const Eigen::MatrixXd& regressors,
                            const Eigen::VectorXd& f_regressor,
                            const Eigen::Vector3d& v_diag,
                            const Eigen::Vector3d& w_act_diag,
                            const Eigen::VectorXd& m0, const Eigen::MatrixXd& C0);

// Sparse-signal AR(1) study: y_t = theta_t + v_t, theta_t = phi theta_{t-1}
// + w_t with w_t ~ pi_mix N(0, W) + (1 - pi_mix) N(0, kappa V), W =
// W_over_V * V. Times drawing the inflated component are recorded.
struct UnivariateSparseData {
  std::vector<double> y;       // length T
  std::vector<double> theta;   // theta_0..theta_T
  std::vector<int> outlier;    // length T, 1 when w_t drew the kappa component
  double V = 1.0;
  double W = 1.0;
  double kappa = 20.0;
  double phi = 0.5;
  double pi_mix = 0.9;
  // Exact Gaussian log-likelihood of y under the simulated model conditional
  // on the recorded outlier indicators.
  double loglik = 0.0;
};

UnivariateSparseData simulate_univariate_sparse(double V, double W_over_V,
                                                double kappa, double phi,
                                                double pi_mix, int T,
                                                std::uint64_t seed);

// DLM matching a univariate sparse draw conditional on its indicators.
DlmModel univariate_sparse_model(const UnivariateSparseData& data);

// Trivariate simulation recipe. signal_noise_ratio is
// lambda_theta^{-1}/lambda_y^{-1}; with the default lambda_theta_inv = 1 the
// observation variance is 1/ratio.
struct SimRecipe {
  int T = 285;
  Eigen::Matrix3d phi = Eigen::Matrix3d::Zero();
  double signal_noise_ratio = 1.0;
  double lambda_theta_inv = 1.0;
  Eigen::Vector3d alpha = Eigen::Vector3d::Ones();
  double scan_interval = 2.0;
  double microtime_dt = 0.1;
  bool normalize_regressor = true;  // scale the BOLD regressor to max 1
  std::uint64_t seed = 1;

  void validate() const;
};

// Connectivity truth used by the bundled demonstration configs.
Eigen::Matrix3d default_connectivity_truth();

struct TrivariateData {
  Eigen::MatrixXd y;               // T x 3
  std::vector<double> regressor;   // x_1..x_T (shared across regions)
  Eigen::MatrixXd states;          // (T+1) x 6 latent truth
  Eigen::Matrix3d phi;
  Eigen::Vector3d alpha;
  double lambda_y_inv = 1.0;       // per-series observation variance
  double lambda_theta_inv = 1.0;
  double loglik = 0.0;             // exact likelihood of y under the truth model
};

// Simulates the six-state model with a shared block-design BOLD regressor.
TrivariateData simulate_trivariate(const SimRecipe& recipe);

// Same, with a caller-supplied regressor (length T).
TrivariateData simulate_trivariate(const SimRecipe& recipe,
                                   const std::vector<double>& regressor);

}  // namespace bdlm

#endif  // BDLM_SIM_HPP
