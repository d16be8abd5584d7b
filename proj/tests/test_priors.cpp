#include "bdlm/priors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "bdlm/errors.hpp"
#include "doctest.h"
#include "support/quadrature.hpp"
#include "support/stats.hpp"

using bdlm::RandomStream;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("beta-prime density at the origin equals q/beta when p=1") {
  CHECK(bdlm::beta_prime_density(0.0, 1.0, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(bdlm::beta_prime_density(0.0, 1.0, 2.5, 0.5) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(bdlm::beta_prime_density(0.0, 2.0, 1.0, 1.0) == 0.0);
}

TEST_CASE("beta-prime with p=1 decays as (1+x/beta)^{-(nu+1)/2}") {
  // Shapes p=1, q=(nu-1)/2 give exponent p+q = (nu+1)/2.
  const double nu = 5.0, beta = 2.0;
  const double q = (nu - 1.0) / 2.0;
  const double x1 = 0.7, x2 = 9.3;
  const double got = bdlm::beta_prime_density(x1, 1.0, q, beta) /
                     bdlm::beta_prime_density(x2, 1.0, q, beta);
  const double want =
      std::pow((1.0 + x2 / beta) / (1.0 + x1 / beta), (nu + 1.0) / 2.0);
  CHECK(got == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("beta-prime density integrates to 1") {
  const struct {
    double p, q, beta;
  } settings[] = {{1.0, 2.0, 3.0}, {1.0, 1.0, 1.0}, {2.0, 3.0, 0.5},
                  {1.5, 2.5, 1.3}, {3.0, 2.0, 4.0}, {1.0, 0.5, 2.0}};
  for (const auto& s : settings) {
    const double integral = testsupport::integrate(
        [&](double x) { return bdlm::beta_prime_density(x, s.p, s.q, s.beta); }, 0.0,
        kInf);
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-6));
  }
  // Spec'd finite-range variant.
  const double finite = testsupport::integrate(
      [](double x) { return bdlm::beta_prime_density(x, 1.0, 2.0, 3.0); }, 0.0, 1e6);
  CHECK(finite == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("beta-prime mixture sampler matches the closed-form CDF") {
  const double q = 1.0, beta = 1.0;
  RandomStream rng(123);
  std::vector<double> draws(100000);
  for (double& d : draws) d = bdlm::sample_beta_prime_mixture(q, beta, rng);

  // Cross-check the closed form against a quadrature CDF first.
  for (double x : {0.1, 0.5, 1.0, 3.0, 10.0}) {
    const double quad = testsupport::integrate(
        [&](double u) { return bdlm::beta_prime_density(u, 1.0, q, beta); }, 0.0, x);
    CHECK(bdlm::beta_prime_cdf_shape1(x, q, beta) == doctest::Approx(quad).epsilon(1e-8));
  }

  const double ks = testsupport::ks_statistic(
      draws, [&](double x) { return bdlm::beta_prime_cdf_shape1(x, q, beta); });
  CHECK(ks < 0.01);
}

TEST_CASE("beta-prime mixture sampler is reproducible") {
  RandomStream r1(42), r2(42);
  for (int i = 0; i < 10; ++i) {
    CHECK(bdlm::sample_beta_prime_mixture(2.0, 1.5, r1) ==
          bdlm::sample_beta_prime_mixture(2.0, 1.5, r2));
  }
}

TEST_CASE("beta is a scale parameter of the mixture draws") {
  const double q = 2.0;
  const int n = 100000;
  RandomStream r1(7), r2(8);
  std::vector<double> a(n), b(n);
  for (int i = 0; i < n; ++i) {
    a[i] = bdlm::sample_beta_prime_mixture(q, 1.0, r1);
    b[i] = bdlm::sample_beta_prime_mixture(q, 4.0, r2);
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  for (double frac : {0.25, 0.5, 0.75}) {
    const double qa = a[static_cast<std::size_t>(frac * n)];
    const double qb = b[static_cast<std::size_t>(frac * n)];
    CHECK(qb / qa == doctest::Approx(4.0).epsilon(0.05));
  }
}

TEST_CASE("marginal state prior at the center") {
  // sigma=1, nu=2, beta=1: (nu-1)/(2*sqrt(2)) = 0.353553...
  CHECK(bdlm::marginal_state_prior_density(0.0, 0.0, 1.0, 2.0, 1.0) ==
        doctest::Approx(1.0 / (2.0 * std::sqrt(2.0))).epsilon(1e-12));
}

TEST_CASE("marginal state prior is symmetric about the mean") {
  for (double z : {0.1, 1.0, 5.0, 42.0}) {
    CHECK(bdlm::marginal_state_prior_density(2.5 + z, 2.5, 1.3, 3.0, 0.7) ==
          bdlm::marginal_state_prior_density(2.5 - z, 2.5, 1.3, 3.0, 0.7));
  }
}

TEST_CASE("marginal state prior integrates to 1") {
  const struct {
    double sigma, nu, beta;
  } settings[] = {{1.0, 3.0, 2.0}, {1.0, 2.0, 1.0}, {2.0, 5.0, 0.5},
                  {0.5, 10.0, 4.0}, {3.0, 20.0, 2.0}};
  for (const auto& s : settings) {
    const double integral = testsupport::integrate(
        [&](double x) {
          return bdlm::marginal_state_prior_density(x, 0.0, s.sigma, s.nu, s.beta);
        },
        -kInf, kInf);
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("marginal state prior tail decays algebraically with exponent nu") {
  const double nu = 2.0;
  for (double z : {1e3, 1e4}) {
    const double ratio = bdlm::marginal_state_prior_density(2.0 * z, 0.0, 1.0, nu, 1.0) /
                         bdlm::marginal_state_prior_density(z, 0.0, 1.0, nu, 1.0);
    CHECK(ratio == doctest::Approx(std::pow(2.0, -nu)).epsilon(0.05));
  }
}

TEST_CASE("smaller nu gives heavier tails") {
  const double far = 10.0;
  CHECK(bdlm::marginal_state_prior_density(far, 0.0, 1.0, 2.0, 1.0) >
        bdlm::marginal_state_prior_density(far, 0.0, 1.0, 10.0, 1.0));
}

TEST_CASE("marginal state prior rejects nu <= 1") {
  CHECK_THROWS_AS(bdlm::marginal_state_prior_density(0.0, 0.0, 1.0, 1.0, 1.0),
                  bdlm::InputError);
  CHECK_THROWS_AS(bdlm::marginal_state_prior_density(0.0, 0.0, 1.0, 0.5, 1.0),
                  bdlm::InputError);
}

TEST_CASE("slab precision elicitation") {
  const bdlm::GammaParams published =
      bdlm::elicit_slab_precision(bdlm::kPublishedSlabTau0, 1.53);
  CHECK(published.shape == doctest::Approx(3.7846).epsilon(1e-12));
  CHECK(published.rate == 1.53);

  const bdlm::GammaParams flat = bdlm::elicit_slab_precision(0.0, 2.0);
  CHECK(flat.shape == 1.0);

  // Quantile relation: first percentile at -1.
  const double tau0 = bdlm::slab_tau0_from_quantile(-1.0, 0.01);
  CHECK(tau0 == doctest::Approx(5.4119).epsilon(1e-4));
  const bdlm::GammaParams formula =
      bdlm::elicit_slab_precision_from_quantile(-1.0, 0.01, 1.53);
  CHECK(formula.shape == doctest::Approx(tau0 * 1.53 + 1.0).epsilon(1e-12));
  CHECK(formula.shape == doctest::Approx(9.28).epsilon(1e-3));
}

TEST_CASE("inclusion prior moments") {
  const bdlm::BetaParams p = bdlm::elicit_inclusion_prior(6.0, 3.0);
  CHECK(p.mean == doctest::Approx(0.6667).epsilon(1e-4));
  CHECK(p.sd == doctest::Approx(0.1490).epsilon(1e-3));
  CHECK(p.sd == doctest::Approx(std::sqrt(18.0 / (81.0 * 10.0))).epsilon(1e-12));

  const bdlm::BetaParams u = bdlm::elicit_inclusion_prior(1.0, 1.0);
  CHECK(u.mean == 0.5);
  CHECK(u.sd == doctest::Approx(0.2887).epsilon(1e-4));
}

TEST_CASE("point-mass prior atom and slab") {
  CHECK(bdlm::point_mass_log_prior(0.0, 0.5, 1.0) ==
        doctest::Approx(std::log(0.5)).epsilon(1e-12));
  CHECK(bdlm::point_mass_log_prior(1.0, 1.0, 1.0) ==
        doctest::Approx(-0.5 * std::log(2.0 * M_PI) - 0.5).epsilon(1e-12));

  // Total mass: atom + pi * slab integral = 1.
  const double pi = 0.37, tau = 2.3;
  const double slab = testsupport::integrate(
      [&](double x) { return std::exp(bdlm::point_mass_log_prior(x, pi, tau)); },
      -kInf, kInf);
  CHECK(slab + (1.0 - pi) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("hierarchy construction and validation") {
  const bdlm::StateVarianceHierarchy h = bdlm::make_hierarchy(12);
  CHECK(h.omega.size() == 12);
  CHECK(h.nu == 10.0);  // middle of the default grid
  CHECK(h.lambda_theta == 1.0);
  double total = 0.0;
  for (double v : h.varphi) total += v;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(bdlm::make_hierarchy(5, {1.0, 3.0}), bdlm::InputError);
  bdlm::StateVarianceHierarchy bad = h;
  bad.lambda_theta = -1.0;
  CHECK_THROWS_AS(bad.validate(), bdlm::InputError);
  bad = h;
  bad.nu = 4.0;  // off the grid
  CHECK_THROWS_AS(bad.validate(), bdlm::InputError);
}

TEST_CASE("prior hyperparameter validation") {
  bdlm::PointMassPrior prior;
  prior.validate();
  prior.c = 0.0;
  CHECK_THROWS_AS(prior.validate(), bdlm::InputError);
  CHECK_THROWS_AS(bdlm::beta_prime_density(1.0, -1.0, 1.0, 1.0), bdlm::InputError);
  CHECK_THROWS_AS(bdlm::beta_prime_density(-0.5, 1.0, 1.0, 1.0), bdlm::InputError);
}
