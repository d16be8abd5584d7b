#ifndef BDLM_DLM_HPP
#define BDLM_DLM_HPP

#include <functional>
#include <vector>

#include "bdlm/linalg.hpp"
#include "bdlm/rng.hpp"

namespace bdlm {

// Gaussian dynamic linear model with time-varying system matrices:
//
//   y_t     = F(t) theta_t + v_t,        v_t ~ N(0, V)
//   theta_t = G(t) theta_{t-1} + w_t,    w_t ~ N(0, W(t))
//   theta_0 ~ N(m0, C0)
//
// t runs 1..T. W(t) may have zero rows/columns (deterministic state
// components such as constant trends); V, W(t), C0 must be symmetric PSD.
struct DlmModel {
  int p = 0;  // state dimension
  int m = 0;  // observation dimension
  std::function<MatrixXd(int)> F;  // t -> m x p
  std::function<MatrixXd(int)> G;  // t -> p x p
  MatrixXd V;                      // m x m
  std::function<MatrixXd(int)> W;  // t -> p x p
  VectorXd m0;
  MatrixXd C0;
  int T = 0;

  // Throws InputError on dimension or PSD violations. System matrices are
  // only spot-checked at t = 1 (they are caller-supplied functions).
  void validate() const;
};

// Output of the forward pass. Index convention: m[t], C[t] for t = 0..T
// (t = 0 is the prior); f[t], Q[t], a[t], R[t] for t = 1..T stored at
// offset t-1.
struct FilterResult {
  std::vector<VectorXd> m;  // filtered means, size T+1
  std::vector<MatrixXd> C;  // filtered covariances, size T+1
  std::vector<VectorXd> f;  // one-step predictive means, size T
  std::vector<MatrixXd> Q;  // one-step predictive covariances, size T
  std::vector<VectorXd> a;  // predicted state means G(t) m_{t-1}, size T
  std::vector<MatrixXd> R;  // predicted state covariances, size T
  double loglik = 0.0;      // sum over t of log N(y_t; f_t, Q_t)
};

// One joint draw of theta_{0..T}.
struct StatePath {
  std::vector<VectorXd> theta;  // size T+1
  // Number of backward steps where R_t was numerically singular and the
  // conditioning fell back to a pseudo-inverse.
  int pinv_fallbacks = 0;
};

// Exact Gaussian forward filter (Joseph-form covariance update, covariances
// symmetrized after every step). y is T x m, one row per observation time.
// Throws NumericalError("filter divergence at t=...") if a predictive
// covariance fails to be positive definite.
FilterResult kalman_filter(const DlmModel& model, const MatrixXd& y);

// One draw from p(theta_{0:T} | y_{1:T}) by backward sampling through the
// filter output. Deterministic given the stream. Zero-variance state
// directions are propagated exactly (no noise along null eigenvectors).
StatePath ffbs_sample(const DlmModel& model, const FilterResult& filt,
                      RandomStream& rng);

// log N(y_t; f_t, Q_t) for 1 <= t <= T. Throws NumericalError when Q_t is
// singular, InputError when t is out of range.
double one_step_predictive_density(const DlmModel& model, const FilterResult& filt,
                                   int t, const VectorXd& y_t);

// Forward-simulates states and observations. states gets T+1 rows
// (theta_0..theta_T), y gets T rows.
void simulate_dlm(const DlmModel& model, RandomStream& rng, MatrixXd& states,
                  MatrixXd& y);

}  // namespace bdlm

#endif  // BDLM_DLM_HPP
