#include "bdlm/eval.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "bdlm/errors.hpp"
#include "bdlm/rng.hpp"
#include "doctest.h"

using bdlm::DrawsStore;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

DrawsStore make_store(const std::vector<std::string>& names,
                      const std::vector<std::vector<double>>& cols) {
  DrawsStore store;
  store.names = names;
  store.cols = cols;
  return store;
}

}  // namespace

TEST_CASE("zero residuals give zero accuracy measures") {
  const int T = 50, m = 3;
  VectorXd alpha(m);
  alpha << 1.0, -2.0, 0.3;
  VectorXd f = VectorXd::LinSpaced(T, 0.0, 1.0);
  MatrixXd theta = MatrixXd::Random(T, m);
  MatrixXd y(T, m);
  for (int t = 0; t < T; ++t)
    for (int i = 0; i < m; ++i) y(t, i) = alpha(i) + f(t) * theta(t, i);

  const bdlm::AccuracyReport r = bdlm::mad_mse(y, alpha, theta, f);
  CHECK(r.mad == 0.0);
  CHECK(r.mse == 0.0);
  CHECK(r.mad_per_obs == 0.0);
}

TEST_CASE("unit residuals over 3 series use the T divisor") {
  const int T = 285, m = 3;
  VectorXd alpha = VectorXd::Zero(m);
  VectorXd f = VectorXd::Ones(T);
  MatrixXd theta = MatrixXd::Zero(T, m);
  MatrixXd y = MatrixXd::Ones(T, m);

  const bdlm::AccuracyReport r = bdlm::mad_mse(y, alpha, theta, f);
  CHECK(r.mad == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(r.mse == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(r.mad_per_obs == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.mse_per_obs == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("accuracy measures are invariant to series reordering") {
  bdlm::RandomStream rng(5);
  const int T = 40, m = 3;
  MatrixXd y(T, m), theta(T, m);
  VectorXd alpha(m), f(T);
  for (int t = 0; t < T; ++t) {
    f(t) = rng.normal();
    for (int i = 0; i < m; ++i) {
      y(t, i) = rng.normal();
      theta(t, i) = rng.normal();
    }
  }
  for (int i = 0; i < m; ++i) alpha(i) = rng.normal();

  const auto base = bdlm::mad_mse(y, alpha, theta, f);
  const std::vector<int> perm = {2, 0, 1};
  MatrixXd y2(T, m), theta2(T, m);
  VectorXd alpha2(m);
  for (int i = 0; i < m; ++i) {
    y2.col(i) = y.col(perm[i]);
    theta2.col(i) = theta.col(perm[i]);
    alpha2(i) = alpha(perm[i]);
  }
  const auto permuted = bdlm::mad_mse(y2, alpha2, theta2, f);
  CHECK(base.mad == doctest::Approx(permuted.mad).epsilon(1e-14));
  CHECK(base.mse == doctest::Approx(permuted.mse).epsilon(1e-14));

  // Cauchy-Schwarz under the per-observation normalization.
  CHECK(base.mse_per_obs >= base.mad_per_obs * base.mad_per_obs);
}

TEST_CASE("accuracy input validation") {
  MatrixXd y = MatrixXd::Zero(10, 2);
  CHECK_THROWS_AS(
      bdlm::mad_mse(y, VectorXd::Zero(3), MatrixXd::Zero(10, 2), VectorXd::Ones(10)),
      bdlm::InputError);
  CHECK_THROWS_AS(
      bdlm::mad_mse(y, VectorXd::Zero(2), MatrixXd::Zero(9, 2), VectorXd::Ones(10)),
      bdlm::InputError);
}

TEST_CASE("summarize reports the atom mass and matches the indicator mean") {
  DrawsStore store = make_store({"phi_1_1", "incl_1_1"},
                                {{0.0, 0.0, 0.0, -1.2, 0.0}, {0, 0, 0, 1, 0}});
  const bdlm::PosteriorSummary s = bdlm::summarize(store);
  CHECK(s.rows[0].p_zero == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(s.rows[0].p_zero == doctest::Approx(1.0 - s.rows[1].mean).epsilon(1e-15));

  DrawsStore zeros = make_store({"phi_1_1"}, {{0.0, 0.0, 0.0, 0.0}});
  const bdlm::PosteriorSummary sz = bdlm::summarize(zeros);
  CHECK(sz.rows[0].mean == 0.0);
  CHECK(sz.rows[0].sd == 0.0);
  CHECK(sz.rows[0].p_zero == 1.0);
}

TEST_CASE("summarize of constant draws has equal quantiles") {
  DrawsStore store = make_store({"lambda_y_1"}, {{2.5, 2.5, 2.5, 2.5}});
  const bdlm::PosteriorSummary s = bdlm::summarize(store);
  CHECK(s.rows[0].sd == 0.0);
  CHECK(s.rows[0].q025 == 2.5);
  CHECK(s.rows[0].q500 == 2.5);
  CHECK(s.rows[0].q975 == 2.5);
}

TEST_CASE("summarize is invariant under draw reordering") {
  bdlm::RandomStream rng(17);
  std::vector<double> a(501), b(501);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = rng.normal();
    b[i] = rng.gamma(2.0, 1.0);
  }
  DrawsStore store = make_store({"a", "b"}, {a, b});
  std::vector<double> a2 = a, b2 = b;
  std::mt19937 shuffler(99);
  // Same permutation for both columns (rows move together).
  std::vector<std::size_t> idx(a.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::shuffle(idx.begin(), idx.end(), shuffler);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    a2[i] = a[idx[i]];
    b2[i] = b[idx[i]];
  }
  DrawsStore shuffled = make_store({"a", "b"}, {a2, b2});

  const auto s1 = bdlm::summarize(store);
  const auto s2 = bdlm::summarize(shuffled);
  for (std::size_t r = 0; r < s1.rows.size(); ++r) {
    CHECK(s1.rows[r].mean == s2.rows[r].mean);
    CHECK(s1.rows[r].sd == s2.rows[r].sd);
    CHECK(s1.rows[r].q025 == s2.rows[r].q025);
    CHECK(s1.rows[r].q500 == s2.rows[r].q500);
    CHECK(s1.rows[r].q975 == s2.rows[r].q975);
  }
}

TEST_CASE("summarize rejects an empty store") {
  DrawsStore empty = make_store({"x"}, {{}});
  CHECK_THROWS_AS(bdlm::summarize(empty), bdlm::InputError);
}

TEST_CASE("white noise has near-nominal effective sample size") {
  bdlm::RandomStream rng(23);
  std::vector<double> x(5000);
  for (double& v : x) v = rng.normal();
  const double ess = bdlm::ess_geyer(x);
  CHECK(ess / x.size() > 0.8);
  CHECK(ess / x.size() < 1.2);

  const std::vector<double> rho = bdlm::acf(x, 10);
  CHECK(rho[0] == 1.0);
  for (int k = 1; k <= 10; ++k) CHECK(std::abs(rho[k]) < 0.05);
}

TEST_CASE("stuck chain reports an effective sample size of 1") {
  const std::vector<double> x(500, 3.14);
  CHECK(bdlm::ess_geyer(x) == 1.0);
}

TEST_CASE("AR(1) effective sample size matches the analytic ratio") {
  bdlm::RandomStream rng(31);
  const double rho = 0.5;
  std::vector<double> x(20000);
  x[0] = 0.0;
  for (std::size_t t = 1; t < x.size(); ++t) {
    x[t] = rho * x[t - 1] + rng.normal() * std::sqrt(1.0 - rho * rho);
  }
  const double ess = bdlm::ess_geyer(x);
  CHECK(ess / x.size() == doctest::Approx(1.0 / 3.0).epsilon(0.20));
}

TEST_CASE("cumulative quantiles end at the full-sample quantiles") {
  bdlm::RandomStream rng(41);
  std::vector<double> x(1000);
  for (double& v : x) v = rng.normal();
  const Eigen::MatrixXd cq = bdlm::cumulative_quantiles(x, 50);
  CHECK(cq.rows() == 50);
  CHECK(cq(49, 0) == 1000.0);

  std::vector<double> sorted = x;
  std::sort(sorted.begin(), sorted.end());
  CHECK(cq(49, 1) == doctest::Approx(bdlm::sorted_quantile(sorted, 0.025)).epsilon(1e-14));
  CHECK(cq(49, 2) == doctest::Approx(bdlm::sorted_quantile(sorted, 0.5)).epsilon(1e-14));
  CHECK(cq(49, 3) == doctest::Approx(bdlm::sorted_quantile(sorted, 0.975)).epsilon(1e-14));
}

TEST_CASE("diagnostics require enough draws and skip index columns") {
  bdlm::RandomStream rng(3);
  std::vector<double> x(150), chain(150, 0.0);
  for (double& v : x) v = rng.normal();
  DrawsStore store = make_store({"chain", "x"}, {chain, x});
  const bdlm::DiagnosticsReport rep = bdlm::diagnostics(store);
  CHECK(rep.rows.size() == 1);
  CHECK(rep.rows[0].name == "x");
  CHECK(rep.rows[0].acf[0] == 1.0);

  DrawsStore tiny = make_store({"x"}, {{1.0, 2.0, 3.0}});
  CHECK_THROWS_AS(bdlm::diagnostics(tiny), bdlm::InputError);
}

TEST_CASE("draw store merge concatenates rows and checks schemas") {
  DrawsStore a = make_store({"x"}, {{1.0, 2.0}});
  DrawsStore b = make_store({"x"}, {{3.0}});
  a.state_mean = Eigen::MatrixXd::Constant(2, 1, 1.0);
  a.omega_mean = Eigen::MatrixXd::Constant(1, 1, 1.0);
  b.state_mean = Eigen::MatrixXd::Constant(2, 1, 4.0);
  b.omega_mean = Eigen::MatrixXd::Constant(1, 1, 4.0);

  const DrawsStore merged = DrawsStore::merge({a, b});
  CHECK(merged.n_rows() == 3);
  CHECK(merged.column("x")[2] == 3.0);
  CHECK(merged.state_mean(0, 0) == doctest::Approx(2.0).epsilon(1e-14));

  DrawsStore c = make_store({"y"}, {{1.0}});
  CHECK_THROWS_AS(DrawsStore::merge({a, c}), bdlm::InputError);
}
