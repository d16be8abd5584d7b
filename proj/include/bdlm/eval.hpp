#ifndef BDLM_EVAL_HPP
#define BDLM_EVAL_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "bdlm/dlm.hpp"
#include "bdlm/draws.hpp"

namespace bdlm {

// Forecast-accuracy measures for residuals e_{t,i} = y_{t,i} - (alpha_i +
// f_t * theta_{t,i}). The headline mad/mse divide the 3T-term double sum by
// T only (kept for comparability with published tables); the per-observation
// variants divide by T*m.
struct AccuracyReport {
  double mad = 0.0;
  double mse = 0.0;
  double mad_per_obs = 0.0;
  double mse_per_obs = 0.0;
  Eigen::VectorXd mad_per_series;  // divisor T each
  Eigen::VectorXd mse_per_series;
};

// theta_act holds activation states at t = 1..T (T x m).
AccuracyReport mad_mse(const Eigen::MatrixXd& y, const Eigen::VectorXd& alpha,
                       const Eigen::MatrixXd& theta_act,
                       const Eigen::VectorXd& f_regressor);

// Convenience overload slicing the last m state components from a path.
AccuracyReport mad_mse(const Eigen::MatrixXd& y, const Eigen::VectorXd& alpha,
                       const StatePath& path, const Eigen::VectorXd& f_regressor);

struct ParameterSummary {
  std::string name;
  double mean = 0.0;
  double sd = 0.0;
  double q025 = 0.0;
  double q500 = 0.0;
  double q975 = 0.0;
  double p_zero = 0.0;  // fraction of draws exactly zero (the phi atom mass)
};

struct PosteriorSummary {
  std::vector<ParameterSummary> rows;
  int n_draws = 0;
};

// Column-wise posterior summaries. Accumulation runs over sorted copies, so
// the result is bit-identical under draw reordering.
PosteriorSummary summarize(const DrawsStore& draws);

// Lag-k autocorrelations (lag 0..max_lag), standard autocovariance ratio.
std::vector<double> acf(const std::vector<double>& x, int max_lag);

// Effective sample size by Geyer's initial-positive-sequence truncation.
// Returns 1 for a zero-variance stream.
double ess_geyer(const std::vector<double>& x);

// Linear-interpolation sample quantile of a sorted vector.
double sorted_quantile(const std::vector<double>& sorted, double prob);

// Running quantile estimates at ~n_checkpoints prefixes: each row is
// (n_used, q025, q500, q975).
Eigen::MatrixXd cumulative_quantiles(const std::vector<double>& x,
                                     int n_checkpoints = 100);

struct ParameterDiagnostics {
  std::string name;
  double ess = 0.0;
  std::vector<double> acf;
  Eigen::MatrixXd cumulative;  // cumulative_quantiles output
};

struct DiagnosticsReport {
  std::vector<ParameterDiagnostics> rows;
  int n_draws = 0;
};

// Requires >= 100 retained draws. Skips index columns ("chain", "iter").
DiagnosticsReport diagnostics(const DrawsStore& draws, int max_lag = 50);

}  // namespace bdlm

#endif  // BDLM_EVAL_HPP
