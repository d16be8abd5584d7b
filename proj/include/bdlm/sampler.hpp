#ifndef BDLM_SAMPLER_HPP
#define BDLM_SAMPLER_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bdlm/dlm.hpp"
#include "bdlm/draws.hpp"
#include "bdlm/priors.hpp"
#include "bdlm/rng.hpp"

namespace bdlm {

struct McmcConfig {
  int n_iter = 5000;  // total sweeps, burn-in included
  int burn_in = 0;
  int thin = 1;
  std::uint64_t seed = 1;
  int n_chains = 1;
  // Coefficients (i, j), 0-based, forced to exactly zero and removed from
  // the inclusion-weight bookkeeping.
  std::vector<std::pair<int, int>> phi_mask;

  void validate() const;
  int n_retained() const { return (n_iter - burn_in) / thin; }
};

// Data plus priors for the connectivity sampler. The observation model is
//   y_{t,i} = trend_i + f_regressor(t) * theta_{t,i} + v_{t,i}
// (the trend states are dropped when has_trend is false) and the activations
// follow theta_{t,i} = sum_j phi_ij * x_{t-1,j} * theta_{t-1,j} + w_{t,i}
// with the lagged regressor values supplied in g_lag_regressors (row t-1
// holds x_{t-1,.}; row 0 is x_0). Precisions:
//   v_{t,i} ~ N(0, 1/lambda_y_i),  w_{t,i} ~ N(0, 1/(lambda_y_i
//   lambda_theta_i omega_{t,i})).
struct ModelSpec {
  Eigen::MatrixXd y;                 // T x m
  Eigen::MatrixXd g_lag_regressors;  // T x m
  Eigen::VectorXd f_regressor;       // length T
  bool has_trend = true;

  PointMassPrior point_mass;
  double a_y = 0.001;
  double b_y = 0.001;
  std::vector<double> nu_grid = default_nu_grid();
  double alpha0 = 1.0;
  double trend_prior_var = 100.0;  // prior variance of each trend state
  double act_prior_var = 1.0;      // prior variance of theta_0 activations

  // When set (length m), lambda_theta is held fixed, omega stays at 1 and
  // the variance hierarchy is not updated.
  std::optional<Eigen::VectorXd> known_lambda_theta;

  void validate() const;
  int horizon() const { return static_cast<int>(y.rows()); }
  int n_series() const { return static_cast<int>(y.cols()); }
  int state_dim() const { return (has_trend ? 2 : 1) * n_series(); }
};

// AR(1)-with-noise study: theta observed directly, no trend, unit
// regressors.
ModelSpec univariate_spec(const std::vector<double>& y);

// Six-state connectivity model with one shared BOLD regressor x_1..x_T
// (x_0 taken as 0).
ModelSpec trivariate_spec(const Eigen::MatrixXd& y,
                          const std::vector<double>& regressor);

// Full Gibbs-chain state. phi entries with indicator 0 are exactly zero.
struct GibbsState {
  Eigen::MatrixXd theta;  // (T+1) x p
  Eigen::VectorXd lambda_y;
  std::vector<StateVarianceHierarchy> hier;  // one per series
  Eigen::MatrixXd phi;    // m x m
  Eigen::MatrixXi incl;   // m x m, 0/1
  Eigen::MatrixXd tau;    // m x m slab precisions
  double pi = 0.5;
  double loglik = 0.0;    // marginal likelihood at the last state update
  int pinv_fallbacks = 0;
  int zero_regressor = 0;
};

// One full sweep applies the blocks in a fixed order: states, lambda_y,
// variance hierarchy, connectivity coefficients, inclusion weight, slab
// precisions. Update blocks are public so exact-conditional tests and the
// prior/posterior consistency harness can drive them directly.
class GibbsSampler {
 public:
  GibbsSampler(ModelSpec spec, McmcConfig cfg);

  const ModelSpec& spec() const { return spec_; }
  // Replaces the data (same shape); used when alternating data and
  // parameter draws.
  void set_data(const Eigen::MatrixXd& y);

  GibbsState initial_state() const;
  // Joint draw of all parameters and a state path from the prior.
  GibbsState prior_draw(RandomStream& rng) const;
  // y | theta, lambda_y.
  Eigen::MatrixXd sample_observations(const GibbsState& state,
                                      RandomStream& rng) const;
  DlmModel build_dlm(const GibbsState& state) const;

  void update_states(GibbsState& state, RandomStream& rng) const;
  void update_lambda_y(GibbsState& state, RandomStream& rng) const;
  void update_hierarchy(GibbsState& state, RandomStream& rng) const;
  void update_connectivity(GibbsState& state, RandomStream& rng) const;
  void update_pi(GibbsState& state, RandomStream& rng) const;
  void update_tau(GibbsState& state, RandomStream& rng) const;
  void sweep(GibbsState& state, RandomStream& rng) const;

  // Posterior moments of one coefficient given the rest: inclusion
  // probability and the included-slab Normal parameters.
  struct CoefficientConditional {
    double include_prob = 0.0;
    double mean = 0.0;
    double precision = 0.0;
    bool zero_regressor = false;
  };
  CoefficientConditional coefficient_conditional(const GibbsState& state, int i,
                                                 int j) const;

  bool masked(int i, int j) const { return mask_(i, j) != 0; }
  std::vector<std::string> column_names() const;
  std::vector<double> row_from_state(const GibbsState& state, int chain_id,
                                     int iter) const;

 private:
  double state_residual(const GibbsState& state, int t, int i,
                        int skip_j = -1) const;
  ModelSpec spec_;
  McmcConfig cfg_;
  Eigen::MatrixXi mask_;
};

// One chain, seeded with derive_seed(cfg.seed, chain_id - 1); deterministic
// given spec, cfg and chain_id.
DrawsStore run_chain(const ModelSpec& spec, const McmcConfig& cfg, int chain_id = 1);

// cfg.n_chains chains with independent streams; chains may run concurrently
// but the result is identical to running them one by one.
std::vector<DrawsStore> run_chains(const ModelSpec& spec, const McmcConfig& cfg);

}  // namespace bdlm

#endif  // BDLM_SAMPLER_HPP
