#ifndef BDLM_PRIORS_HPP
#define BDLM_PRIORS_HPP

#include <vector>

#include "bdlm/rng.hpp"

namespace bdlm {

struct GammaParams {
  double shape = 1.0;
  double rate = 1.0;
};

struct BetaParams {
  double a = 1.0;
  double b = 1.0;
  double mean = 0.5;
  double sd = 0.0;
};

// Spike-and-slab prior on a connectivity coefficient: with probability pi the
// coefficient is drawn from N(0, 1/tau), tau ~ Gamma(c, d); otherwise it is
// exactly zero. pi ~ Beta(a_pi, b_pi).
struct PointMassPrior {
  double a_pi = 6.0;
  double b_pi = 3.0;
  double c = 3.7846;
  double d = 1.53;

  void validate() const;
};

// Latent variables of the Beta-prime hierarchy for one state component:
//   W_t^{-1} = lambda_y * lambda_theta * omega[t]
//   omega[t] | nu ~ Gamma(nu/2, nu/2)
//   lambda_theta | nu, rho, beta ~ Gamma((nu-1)/2, rho*beta)
//   rho ~ Gamma(1, 1),  beta | xi ~ Gamma(1, xi),  xi ~ Gamma(1, 1)
//   nu drawn from a finite grid with weights varphi ~ Dirichlet(alpha)
// Marginally 1/(lambda_theta*omega[t]) is Beta-prime, giving Student-t state
// increments.
struct StateVarianceHierarchy {
  double lambda_theta = 1.0;
  std::vector<double> omega;  // length T, all > 0
  double rho = 1.0;
  double beta = 1.0;
  double xi = 1.0;
  double nu = 0.0;               // current grid value
  std::vector<double> nu_grid;   // values > 1
  std::vector<double> varphi;    // simplex weights over the grid
  std::vector<double> alpha;     // Dirichlet concentrations

  void validate() const;
};

std::vector<double> default_nu_grid();

// Fresh hierarchy state: unit latents, nu at the middle of the grid, varphi
// at the normalized concentrations.
StateVarianceHierarchy make_hierarchy(int T,
                                      std::vector<double> nu_grid = default_nu_grid(),
                                      double alpha0 = 1.0);

// Beta-prime density with shapes p, q and scale beta:
//   Gamma(p+q)/(Gamma(p)Gamma(q)) * (1/beta) * (x/beta)^{p-1} * (1+x/beta)^{-(p+q)}
double beta_prime_density(double x, double p, double q, double beta);

// Closed-form CDF for the p=1 case: 1 - (1 + x/beta)^{-q}.
double beta_prime_cdf_shape1(double x, double q, double beta);

// Draw from BetaPrime(1, q, beta) via the Gamma mixture
// rho ~ Gamma(q, 1), x | rho ~ Exponential(rate rho/beta).
double sample_beta_prime_mixture(double q, double beta, RandomStream& rng);

// Closed-form marginal prior of a state increment after integrating the
// Beta-prime variance out:
//   (nu-1) / ( 2*sqrt(sigma*nu*beta) * (1 + |theta-mean|/sqrt(sigma*nu*beta))^nu )
// Requires nu > 1 for normalizability.
double marginal_state_prior_density(double theta, double mean, double sigma,
                                    double nu, double beta);

// tau_0 from the sampling-distribution quantile relation: the slab scale that
// puts `prob` mass below `target_quantile` under N(0, 1/tau_0),
// tau_0 = (Phi^{-1}(prob) / target_quantile)^2.
double slab_tau0_from_quantile(double target_quantile, double prob);

// Gamma prior for the slab precision with mode tau0: shape c = tau0*d + 1.
GammaParams elicit_slab_precision(double tau0, double d);

GammaParams elicit_slab_precision_from_quantile(double target_quantile, double prob,
                                                double d);

// Published tau_0 giving Gamma(3.78, 1.53) at d = 1.53.
inline constexpr double kPublishedSlabTau0 = 1.82;

BetaParams elicit_inclusion_prior(double a, double b);

// Log prior of one coefficient under the point-mass mixture: log(1-pi) at the
// atom (phi exactly zero), otherwise log pi + log N(phi; 0, 1/tau).
double point_mass_log_prior(double phi, double pi, double tau);

}  // namespace bdlm

#endif  // BDLM_PRIORS_HPP
