#include "bdlm/priors.hpp"

#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <limits>
#include <string>

#include "bdlm/errors.hpp"

namespace bdlm {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw InputError(std::string(name) + " must be positive and finite");
  }
}

}  // namespace

void PointMassPrior::validate() const {
  require_positive(a_pi, "a_pi");
  require_positive(b_pi, "b_pi");
  require_positive(c, "c");
  require_positive(d, "d");
}

void StateVarianceHierarchy::validate() const {
  require_positive(lambda_theta, "lambda_theta");
  require_positive(rho, "rho");
  require_positive(beta, "beta");
  require_positive(xi, "xi");
  for (double w : omega) require_positive(w, "omega");
  if (nu_grid.empty()) throw InputError("nu grid must be non-empty");
  for (double g : nu_grid) {
    if (!(g > 1.0)) throw InputError("nu grid values must exceed 1");
  }
  if (varphi.size() != nu_grid.size() || alpha.size() != nu_grid.size()) {
    throw InputError("varphi/alpha must match the nu grid length");
  }
  double total = 0.0;
  for (double v : varphi) {
    if (!(v >= 0.0)) throw InputError("varphi entries must be non-negative");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-8) throw InputError("varphi must sum to 1");
  bool on_grid = false;
  for (double g : nu_grid) on_grid = on_grid || g == nu;
  if (!on_grid) throw InputError("nu must be a grid value");
}

std::vector<double> default_nu_grid() { return {2.0, 3.0, 5.0, 10.0, 20.0, 50.0}; }

StateVarianceHierarchy make_hierarchy(int T, std::vector<double> nu_grid,
                                      double alpha0) {
  if (T <= 0) throw InputError("hierarchy horizon must be positive");
  require_positive(alpha0, "alpha0");
  StateVarianceHierarchy h;
  h.omega.assign(static_cast<std::size_t>(T), 1.0);
  h.nu_grid = std::move(nu_grid);
  h.nu = h.nu_grid[h.nu_grid.size() / 2];
  h.alpha.assign(h.nu_grid.size(), alpha0);
  h.varphi.assign(h.nu_grid.size(), 1.0 / static_cast<double>(h.nu_grid.size()));
  h.validate();
  return h;
}

double beta_prime_density(double x, double p, double q, double beta) {
  require_positive(p, "p");
  require_positive(q, "q");
  require_positive(beta, "beta");
  if (!(x >= 0.0)) throw InputError("x must be non-negative");
  const double lognorm = std::lgamma(p + q) - std::lgamma(p) - std::lgamma(q);
  const double z = x / beta;
  if (z == 0.0) {
    // (x/beta)^{p-1} is 1 at p=1, 0 for p>1, +inf for p<1.
    if (p == 1.0) return std::exp(lognorm) / beta;
    return p > 1.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  const double logpdf =
      lognorm - std::log(beta) + (p - 1.0) * std::log(z) - (p + q) * std::log1p(z);
  return std::exp(logpdf);
}

double beta_prime_cdf_shape1(double x, double q, double beta) {
  require_positive(q, "q");
  require_positive(beta, "beta");
  if (x <= 0.0) return 0.0;
  return -std::expm1(-q * std::log1p(x / beta));
}

double sample_beta_prime_mixture(double q, double beta, RandomStream& rng) {
  require_positive(q, "q");
  require_positive(beta, "beta");
  const double rho = rng.gamma(q, 1.0);
  return rng.gamma(1.0, rho / beta);
}

double marginal_state_prior_density(double theta, double mean, double sigma,
                                    double nu, double beta) {
  require_positive(sigma, "sigma");
  require_positive(beta, "beta");
  if (!(nu > 1.0)) throw InputError("nu must exceed 1 for a normalizable density");
  const double scale = std::sqrt(sigma * nu * beta);
  const double z = std::abs(theta - mean) / scale;
  return (nu - 1.0) / (2.0 * scale * std::pow(1.0 + z, nu));
}

double slab_tau0_from_quantile(double target_quantile, double prob) {
  if (!(prob > 0.0 && prob < 1.0)) throw InputError("prob must lie in (0,1)");
  if (target_quantile == 0.0) throw InputError("target quantile must be non-zero");
  const boost::math::normal_distribution<double> std_normal(0.0, 1.0);
  const double z = boost::math::quantile(std_normal, prob);
  const double r = z / target_quantile;
  return r * r;
}

GammaParams elicit_slab_precision(double tau0, double d) {
  if (!(tau0 >= 0.0)) throw InputError("tau0 must be non-negative");
  require_positive(d, "d");
  return GammaParams{tau0 * d + 1.0, d};
}

GammaParams elicit_slab_precision_from_quantile(double target_quantile, double prob,
                                                double d) {
  return elicit_slab_precision(slab_tau0_from_quantile(target_quantile, prob), d);
}

BetaParams elicit_inclusion_prior(double a, double b) {
  require_positive(a, "a");
  require_positive(b, "b");
  BetaParams out;
  out.a = a;
  out.b = b;
  out.mean = a / (a + b);
  out.sd = std::sqrt(a * b / ((a + b) * (a + b) * (a + b + 1.0)));
  return out;
}

double point_mass_log_prior(double phi, double pi, double tau) {
  if (!(pi >= 0.0 && pi <= 1.0)) throw InputError("pi must lie in [0,1]");
  require_positive(tau, "tau");
  if (phi == 0.0) return std::log1p(-pi);
  return std::log(pi) - 0.5 * (kLog2Pi - std::log(tau)) - 0.5 * tau * phi * phi;
}

}  // namespace bdlm
