#include "bdlm/sampler.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <memory>
#include <stdexcept>

#include "bdlm/errors.hpp"
#include "bdlm/eval.hpp"

namespace bdlm {

namespace {

void check_finite(double x, const std::string& name) {
  if (!std::isfinite(x)) {
    throw NumericalError("non-finite draw for " + name);
  }
}

double log_gamma_pdf(double x, double shape, double rate) {
  return shape * std::log(rate) - std::lgamma(shape) +
         (shape - 1.0) * std::log(x) - rate * x;
}

}  // namespace

void McmcConfig::validate() const {
  if (n_iter < 1) throw InputError("n_iter must be positive");
  if (burn_in < 0 || burn_in >= n_iter) {
    throw InputError("burn_in must lie in [0, n_iter)");
  }
  if (thin < 1) throw InputError("thin must be positive");
  if (n_chains < 1) throw InputError("n_chains must be positive");
}

void ModelSpec::validate() const {
  const int T = horizon();
  const int m = n_series();
  if (T < 1 || m < 1) throw InputError("y must be a nonempty T x m matrix");
  if (!y.allFinite()) throw InputError("y contains non-finite values");
  if (g_lag_regressors.rows() != T || g_lag_regressors.cols() != m) {
    throw InputError("g_lag_regressors must match y in shape");
  }
  if (!g_lag_regressors.allFinite()) {
    throw InputError("g_lag_regressors contains non-finite values");
  }
  if (f_regressor.size() != T) {
    throw InputError("f_regressor must have one value per time point");
  }
  if (!f_regressor.allFinite()) {
    throw InputError("f_regressor contains non-finite values");
  }
  point_mass.validate();
  if (a_y <= 0.0 || b_y <= 0.0) {
    throw InputError("observation precision prior must be positive");
  }
  if (nu_grid.size() < 2) throw InputError("nu_grid needs at least two points");
  for (std::size_t g = 1; g < nu_grid.size(); ++g) {
    if (nu_grid[g] <= nu_grid[g - 1]) {
      throw InputError("nu_grid must be strictly increasing");
    }
  }
  if (nu_grid.front() <= 1.0) throw InputError("nu_grid values must exceed 1");
  if (alpha0 <= 0.0) throw InputError("alpha0 must be positive");
  if (trend_prior_var <= 0.0 || act_prior_var <= 0.0) {
    throw InputError("initial state prior variances must be positive");
  }
  if (known_lambda_theta) {
    if (known_lambda_theta->size() != m) {
      throw InputError("known_lambda_theta must have one value per series");
    }
    if (known_lambda_theta->minCoeff() <= 0.0 ||
        !known_lambda_theta->allFinite()) {
      throw InputError("known_lambda_theta values must be positive");
    }
  }
}

ModelSpec univariate_spec(const std::vector<double>& y) {
  ModelSpec spec;
  const int T = static_cast<int>(y.size());
  spec.y = Eigen::Map<const Eigen::VectorXd>(y.data(), T);
  spec.g_lag_regressors = Eigen::MatrixXd::Ones(T, 1);
  spec.f_regressor = Eigen::VectorXd::Ones(T);
  spec.has_trend = false;
  return spec;
}

ModelSpec trivariate_spec(const Eigen::MatrixXd& y,
                          const std::vector<double>& regressor) {
  ModelSpec spec;
  spec.y = y;
  const int T = static_cast<int>(y.rows());
  if (static_cast<int>(regressor.size()) != T) {
    throw InputError("regressor length must match the number of scans");
  }
  spec.g_lag_regressors = Eigen::MatrixXd::Zero(T, y.cols());
  spec.f_regressor = Eigen::VectorXd::Zero(T);
  for (int t = 0; t < T; ++t) {
    spec.f_regressor(t) = regressor[static_cast<std::size_t>(t)];
    if (t >= 1) {
      spec.g_lag_regressors.row(t).setConstant(
          regressor[static_cast<std::size_t>(t - 1)]);
    }
  }
  spec.has_trend = true;
  return spec;
}

GibbsSampler::GibbsSampler(ModelSpec spec, McmcConfig cfg)
    : spec_(std::move(spec)), cfg_(std::move(cfg)) {
  spec_.validate();
  cfg_.validate();
  const int m = spec_.n_series();
  mask_ = Eigen::MatrixXi::Zero(m, m);
  for (const auto& [i, j] : cfg_.phi_mask) {
    if (i < 0 || i >= m || j < 0 || j >= m) {
      throw InputError("phi_mask index out of range");
    }
    mask_(i, j) = 1;
  }
}

void GibbsSampler::set_data(const Eigen::MatrixXd& y) {
  if (y.rows() != spec_.y.rows() || y.cols() != spec_.y.cols()) {
    throw InputError("replacement data must match the original shape");
  }
  if (!y.allFinite()) throw InputError("y contains non-finite values");
  spec_.y = y;
}

GibbsState GibbsSampler::initial_state() const {
  const int T = spec_.horizon();
  const int m = spec_.n_series();
  GibbsState state;
  state.theta = Eigen::MatrixXd::Zero(T + 1, spec_.state_dim());
  state.lambda_y = Eigen::VectorXd::Ones(m);
  for (int i = 0; i < m; ++i) {
    const Eigen::VectorXd col = spec_.y.col(i);
    const double mean = col.mean();
    const double var =
        (col.array() - mean).square().sum() / std::max(1, T - 1);
    if (std::isfinite(var) && var > 0.0) state.lambda_y(i) = 1.0 / var;
  }
  state.hier.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    auto h = make_hierarchy(T, spec_.nu_grid, spec_.alpha0);
    if (spec_.known_lambda_theta) h.lambda_theta = (*spec_.known_lambda_theta)(i);
    state.hier.push_back(std::move(h));
  }
  state.phi = Eigen::MatrixXd::Zero(m, m);
  state.incl = Eigen::MatrixXi::Zero(m, m);
  state.tau = Eigen::MatrixXd::Constant(m, m, spec_.point_mass.c / spec_.point_mass.d);
  state.pi = spec_.point_mass.a_pi / (spec_.point_mass.a_pi + spec_.point_mass.b_pi);
  return state;
}

GibbsState GibbsSampler::prior_draw(RandomStream& rng) const {
  const int T = spec_.horizon();
  const int m = spec_.n_series();
  GibbsState state = initial_state();

  state.pi = rng.beta(spec_.point_mass.a_pi, spec_.point_mass.b_pi);
  for (int i = 0; i < m; ++i) {
    state.lambda_y(i) = rng.gamma(spec_.a_y, spec_.b_y);
    for (int j = 0; j < m; ++j) {
      if (masked(i, j)) continue;
      state.tau(i, j) = rng.gamma(spec_.point_mass.c, spec_.point_mass.d);
      state.incl(i, j) = rng.uniform() < state.pi ? 1 : 0;
      if (state.incl(i, j) == 1) {
        state.phi(i, j) = rng.normal(0.0, 1.0 / std::sqrt(state.tau(i, j)));
      }
    }
  }
  if (!spec_.known_lambda_theta) {
    for (int i = 0; i < m; ++i) {
      auto& h = state.hier[static_cast<std::size_t>(i)];
      h.varphi = rng.dirichlet(
          std::vector<double>(spec_.nu_grid.size(), spec_.alpha0));
      std::vector<double> logw(h.varphi.size());
      for (std::size_t g = 0; g < h.varphi.size(); ++g) {
        logw[g] = std::log(h.varphi[g]);
      }
      h.nu = spec_.nu_grid[static_cast<std::size_t>(
          rng.categorical_from_log(logw))];
      h.xi = rng.gamma(1.0, 1.0);
      h.beta = rng.gamma(1.0, h.xi);
      h.rho = rng.gamma(1.0, 1.0);
      h.lambda_theta = rng.gamma((h.nu - 1.0) / 2.0, h.rho * h.beta);
      for (int t = 0; t < T; ++t) {
        h.omega[static_cast<std::size_t>(t)] = rng.gamma(h.nu / 2.0, h.nu / 2.0);
      }
    }
  }

  // State path given the parameters.
  DlmModel model = build_dlm(state);
  state.theta.row(0) = sample_mvn(model.m0, model.C0, rng).transpose();
  for (int t = 1; t <= T; ++t) {
    const Eigen::VectorXd mean =
        model.G(t) * state.theta.row(t - 1).transpose();
    state.theta.row(t) =
        sample_mvn(mean, model.W(t), rng).transpose();
  }
  return state;
}

Eigen::MatrixXd GibbsSampler::sample_observations(const GibbsState& state,
                                                  RandomStream& rng) const {
  const int T = spec_.horizon();
  const int m = spec_.n_series();
  Eigen::MatrixXd y(T, m);
  for (int t = 1; t <= T; ++t) {
    for (int i = 0; i < m; ++i) {
      double mean = spec_.f_regressor(t - 1) *
                    state.theta(t, (spec_.has_trend ? m : 0) + i);
      if (spec_.has_trend) mean += state.theta(t, i);
      y(t - 1, i) = rng.normal(mean, 1.0 / std::sqrt(state.lambda_y(i)));
    }
  }
  return y;
}

DlmModel GibbsSampler::build_dlm(const GibbsState& state) const {
  const int T = spec_.horizon();
  const int m = spec_.n_series();
  const int p = spec_.state_dim();
  const int act0 = spec_.has_trend ? m : 0;

  DlmModel model;
  model.p = p;
  model.m = m;
  model.T = T;

  auto f_reg = std::make_shared<Eigen::VectorXd>(spec_.f_regressor);
  auto g_lag = std::make_shared<Eigen::MatrixXd>(spec_.g_lag_regressors);
  auto phi = std::make_shared<Eigen::MatrixXd>(state.phi);
  const bool has_trend = spec_.has_trend;

  model.F = [f_reg, m, p, act0, has_trend](int t) {
    Eigen::MatrixXd F = Eigen::MatrixXd::Zero(m, p);
    if (has_trend) F.leftCols(m) = Eigen::MatrixXd::Identity(m, m);
    F.block(0, act0, m, m) =
        (*f_reg)(t - 1) * Eigen::MatrixXd::Identity(m, m);
    return F;
  };
  model.G = [g_lag, phi, m, p, act0](int t) {
    Eigen::MatrixXd G = Eigen::MatrixXd::Identity(p, p);
    Eigen::MatrixXd block(m, m);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        block(i, j) = (*phi)(i, j) * (*g_lag)(t - 1, j);
      }
    }
    G.block(act0, act0, m, m) = block;
    return G;
  };

  Eigen::VectorXd w_act(m);
  Eigen::MatrixXd omega(T, m);
  for (int i = 0; i < m; ++i) {
    const auto& h = state.hier[static_cast<std::size_t>(i)];
    w_act(i) = 1.0 / (state.lambda_y(i) * h.lambda_theta);
    for (int t = 0; t < T; ++t) {
      omega(t, i) = h.omega[static_cast<std::size_t>(t)];
    }
  }
  auto w_base = std::make_shared<Eigen::VectorXd>(w_act);
  auto omega_ptr = std::make_shared<Eigen::MatrixXd>(omega);
  model.W = [w_base, omega_ptr, m, p, act0](int t) {
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(p, p);
    for (int i = 0; i < m; ++i) {
      W(act0 + i, act0 + i) = (*w_base)(i) / (*omega_ptr)(t - 1, i);
    }
    return W;
  };

  model.V = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) model.V(i, i) = 1.0 / state.lambda_y(i);

  model.m0 = Eigen::VectorXd::Zero(p);
  model.C0 = Eigen::MatrixXd::Zero(p, p);
  for (int i = 0; i < act0; ++i) model.C0(i, i) = spec_.trend_prior_var;
  for (int i = 0; i < m; ++i) {
    model.C0(act0 + i, act0 + i) = spec_.act_prior_var;
  }
  return model;
}

double GibbsSampler::state_residual(const GibbsState& state, int t, int i,
                                    int skip_j) const {
  const int m = spec_.n_series();
  const int act0 = spec_.has_trend ? m : 0;
  double pred = 0.0;
  for (int j = 0; j < m; ++j) {
    if (j == skip_j) continue;
    pred += state.phi(i, j) * spec_.g_lag_regressors(t - 1, j) *
            state.theta(t - 1, act0 + j);
  }
  return state.theta(t, act0 + i) - pred;
}

void GibbsSampler::update_states(GibbsState& state, RandomStream& rng) const {
  DlmModel model = build_dlm(state);
  FilterResult filt = kalman_filter(model, spec_.y);
  state.loglik = filt.loglik;
  StatePath path = ffbs_sample(model, filt, rng);
  state.pinv_fallbacks += path.pinv_fallbacks;
  const int T = spec_.horizon();
  for (int t = 0; t <= T; ++t) {
    state.theta.row(t) = path.theta[static_cast<std::size_t>(t)].transpose();
  }
}

void GibbsSampler::update_lambda_y(GibbsState& state, RandomStream& rng) const {
  const int T = spec_.horizon();
  const int m = spec_.n_series();
  const int act0 = spec_.has_trend ? m : 0;
  for (int i = 0; i < m; ++i) {
    const auto& h = state.hier[static_cast<std::size_t>(i)];
    double sse_obs = 0.0;
    double sse_state = 0.0;
    for (int t = 1; t <= T; ++t) {
      double mean = spec_.f_regressor(t - 1) * state.theta(t, act0 + i);
      if (spec_.has_trend) mean += state.theta(t, i);
      const double e = spec_.y(t - 1, i) - mean;
      sse_obs += e * e;
      const double r = state_residual(state, t, i);
      sse_state += h.omega[static_cast<std::size_t>(t - 1)] * r * r;
    }
    const double shape = spec_.a_y + T;
    const double rate =
        spec_.b_y + 0.5 * sse_obs + 0.5 * h.lambda_theta * sse_state;
    state.lambda_y(i) = rng.gamma(shape, rate);
    check_finite(state.lambda_y(i), "lambda_y");
    if (state.lambda_y(i) <= 0.0) {
      throw NumericalError("observation precision collapsed to zero");
    }
  }
}

void GibbsSampler::update_hierarchy(GibbsState& state, RandomStream& rng) const {
  if (spec_.known_lambda_theta) return;
  const int T = spec_.horizon();
  const int m = spec_.n_series();
  const int n_grid = static_cast<int>(spec_.nu_grid.size());
  for (int i = 0; i < m; ++i) {
    auto& h = state.hier[static_cast<std::size_t>(i)];
    const double ly = state.lambda_y(i);

    std::vector<double> r2(static_cast<std::size_t>(T));
    for (int t = 1; t <= T; ++t) {
      const double r = state_residual(state, t, i);
      r2[static_cast<std::size_t>(t - 1)] = r * r;
    }

    for (int t = 0; t < T; ++t) {
      const double rate =
          h.nu / 2.0 + 0.5 * ly * h.lambda_theta * r2[static_cast<std::size_t>(t)];
      h.omega[static_cast<std::size_t>(t)] = rng.gamma((h.nu + 1.0) / 2.0, rate);
      check_finite(h.omega[static_cast<std::size_t>(t)], "omega");
    }

    double weighted_sse = 0.0;
    for (int t = 0; t < T; ++t) {
      weighted_sse +=
          h.omega[static_cast<std::size_t>(t)] * r2[static_cast<std::size_t>(t)];
    }
    h.lambda_theta = rng.gamma((h.nu - 1.0) / 2.0 + T / 2.0,
                               h.rho * h.beta + 0.5 * ly * weighted_sse);
    check_finite(h.lambda_theta, "lambda_theta");
    if (h.lambda_theta <= 0.0) {
      throw NumericalError("state precision collapsed to zero");
    }

    h.rho = rng.gamma(1.0 + (h.nu - 1.0) / 2.0, 1.0 + h.beta * h.lambda_theta);
    check_finite(h.rho, "rho");
    h.beta = rng.gamma(1.0 + (h.nu - 1.0) / 2.0, h.xi + h.rho * h.lambda_theta);
    check_finite(h.beta, "beta");
    h.xi = rng.gamma(2.0, 1.0 + h.beta);
    check_finite(h.xi, "xi");

    std::vector<double> logw(static_cast<std::size_t>(n_grid));
    for (int g = 0; g < n_grid; ++g) {
      const double nu = spec_.nu_grid[static_cast<std::size_t>(g)];
      double lw = std::log(h.varphi[static_cast<std::size_t>(g)]);
      for (int t = 0; t < T; ++t) {
        lw += log_gamma_pdf(h.omega[static_cast<std::size_t>(t)], nu / 2.0,
                            nu / 2.0);
      }
      lw += log_gamma_pdf(h.lambda_theta, (nu - 1.0) / 2.0, h.rho * h.beta);
      logw[static_cast<std::size_t>(g)] = lw;
    }
    const int pick = rng.categorical_from_log(logw);
    h.nu = spec_.nu_grid[static_cast<std::size_t>(pick)];

    std::vector<double> alpha(static_cast<std::size_t>(n_grid), spec_.alpha0);
    alpha[static_cast<std::size_t>(pick)] += 1.0;
    h.varphi = rng.dirichlet(alpha);
  }
}

GibbsSampler::CoefficientConditional GibbsSampler::coefficient_conditional(
    const GibbsState& state, int i, int j) const {
  const int T = spec_.horizon();
  const int m = spec_.n_series();
  const int act0 = spec_.has_trend ? m : 0;
  const auto& h = state.hier[static_cast<std::size_t>(i)];
  const double base_prec = state.lambda_y(i) * h.lambda_theta;

  double P = state.tau(i, j);
  double S = 0.0;
  double signal = 0.0;
  for (int t = 1; t <= T; ++t) {
    const double z =
        spec_.g_lag_regressors(t - 1, j) * state.theta(t - 1, act0 + j);
    if (z == 0.0) continue;
    const double p_t = base_prec * h.omega[static_cast<std::size_t>(t - 1)];
    const double resid = state_residual(state, t, i, j);
    P += p_t * z * z;
    S += p_t * z * resid;
    signal += z * z;
  }

  CoefficientConditional out;
  out.zero_regressor = signal == 0.0;
  out.mean = S / P;
  out.precision = P;
  double log_bf = 0.0;
  if (!out.zero_regressor) {
    log_bf = 0.5 * (std::log(state.tau(i, j)) - std::log(P)) + S * S / (2.0 * P);
  }
  const double log_odds =
      std::log(state.pi) - std::log1p(-state.pi) + log_bf;
  out.include_prob = 1.0 / (1.0 + std::exp(-log_odds));
  return out;
}

void GibbsSampler::update_connectivity(GibbsState& state,
                                       RandomStream& rng) const {
  const int m = spec_.n_series();
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (masked(i, j)) continue;
      const CoefficientConditional cond = coefficient_conditional(state, i, j);
      if (cond.zero_regressor) ++state.zero_regressor;
      if (rng.uniform() < cond.include_prob) {
        state.incl(i, j) = 1;
        state.phi(i, j) =
            rng.normal(cond.mean, 1.0 / std::sqrt(cond.precision));
        check_finite(state.phi(i, j), "phi");
      } else {
        state.incl(i, j) = 0;
        state.phi(i, j) = 0.0;
      }
    }
  }
}

void GibbsSampler::update_pi(GibbsState& state, RandomStream& rng) const {
  const int m = spec_.n_series();
  int k = 0;
  int K = 0;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (masked(i, j)) continue;
      ++K;
      k += state.incl(i, j);
    }
  }
  state.pi = rng.beta(spec_.point_mass.a_pi + k,
                      spec_.point_mass.b_pi + (K - k));
  check_finite(state.pi, "pi");
}

void GibbsSampler::update_tau(GibbsState& state, RandomStream& rng) const {
  const int m = spec_.n_series();
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (masked(i, j)) continue;
      if (state.incl(i, j) == 1) {
        const double phi = state.phi(i, j);
        state.tau(i, j) = rng.gamma(spec_.point_mass.c + 0.5,
                                    spec_.point_mass.d + 0.5 * phi * phi);
      } else {
        state.tau(i, j) = rng.gamma(spec_.point_mass.c, spec_.point_mass.d);
      }
      check_finite(state.tau(i, j), "tau");
    }
  }
}

void GibbsSampler::sweep(GibbsState& state, RandomStream& rng) const {
  update_states(state, rng);
  update_lambda_y(state, rng);
  update_hierarchy(state, rng);
  update_connectivity(state, rng);
  update_pi(state, rng);
  update_tau(state, rng);
}

std::vector<std::string> GibbsSampler::column_names() const {
  const int m = spec_.n_series();
  std::vector<std::string> names{"chain", "iter"};
  for (int i = 0; i < m; ++i) names.push_back("lambda_y_" + std::to_string(i + 1));
  for (int i = 0; i < m; ++i) {
    names.push_back("lambda_theta_" + std::to_string(i + 1));
  }
  for (int i = 0; i < m; ++i) names.push_back("rho_" + std::to_string(i + 1));
  for (int i = 0; i < m; ++i) names.push_back("beta_" + std::to_string(i + 1));
  for (int i = 0; i < m; ++i) names.push_back("xi_" + std::to_string(i + 1));
  for (int i = 0; i < m; ++i) names.push_back("nu_" + std::to_string(i + 1));
  names.push_back("pi");
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const std::string suffix =
          "_" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
      names.push_back("phi" + suffix);
    }
  }
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      names.push_back("incl_" + std::to_string(i + 1) + "_" +
                      std::to_string(j + 1));
    }
  }
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      names.push_back("tau_" + std::to_string(i + 1) + "_" +
                      std::to_string(j + 1));
    }
  }
  names.push_back("loglik");
  names.push_back("mad");
  names.push_back("mse");
  return names;
}

std::vector<double> GibbsSampler::row_from_state(const GibbsState& state,
                                                 int chain_id, int iter) const {
  const int m = spec_.n_series();
  std::vector<double> row;
  row.push_back(static_cast<double>(chain_id));
  row.push_back(static_cast<double>(iter));
  for (int i = 0; i < m; ++i) row.push_back(state.lambda_y(i));
  for (int i = 0; i < m; ++i) {
    row.push_back(state.hier[static_cast<std::size_t>(i)].lambda_theta);
  }
  for (int i = 0; i < m; ++i) {
    row.push_back(state.hier[static_cast<std::size_t>(i)].rho);
  }
  for (int i = 0; i < m; ++i) {
    row.push_back(state.hier[static_cast<std::size_t>(i)].beta);
  }
  for (int i = 0; i < m; ++i) {
    row.push_back(state.hier[static_cast<std::size_t>(i)].xi);
  }
  for (int i = 0; i < m; ++i) {
    row.push_back(state.hier[static_cast<std::size_t>(i)].nu);
  }
  row.push_back(state.pi);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) row.push_back(state.phi(i, j));
  }
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      row.push_back(static_cast<double>(state.incl(i, j)));
    }
  }
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) row.push_back(state.tau(i, j));
  }
  row.push_back(state.loglik);
  // mad and mse are appended by the chain driver.
  return row;
}

DrawsStore run_chain(const ModelSpec& spec, const McmcConfig& cfg, int chain_id) {
  const auto start = std::chrono::steady_clock::now();
  GibbsSampler sampler(spec, cfg);
  RandomStream rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(chain_id - 1)));
  GibbsState state = sampler.initial_state();

  const int T = spec.horizon();
  const int m = spec.n_series();
  const int act0 = spec.has_trend ? m : 0;

  DrawsStore store;
  store.names = sampler.column_names();
  store.cols.resize(store.names.size());
  store.state_mean = Eigen::MatrixXd::Zero(T + 1, spec.state_dim());
  store.omega_mean = Eigen::MatrixXd::Zero(T, m);

  int retained = 0;
  for (int s = 1; s <= cfg.n_iter; ++s) {
    try {
      sampler.sweep(state, rng);
    } catch (const NumericalError& err) {
      throw NumericalError(std::string(err.what()) + " (chain " +
                           std::to_string(chain_id) + ", iteration " +
                           std::to_string(s) + ")");
    }
    if (s <= cfg.burn_in || (s - cfg.burn_in) % cfg.thin != 0) continue;

    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(m);
    if (spec.has_trend) alpha = state.theta.row(T).head(m).transpose();
    const Eigen::MatrixXd theta_act =
        state.theta.bottomRows(T).middleCols(act0, m);
    const AccuracyReport acc =
        mad_mse(spec.y, alpha, theta_act, spec.f_regressor);

    std::vector<double> row = sampler.row_from_state(state, chain_id, s);
    row.push_back(acc.mad);
    row.push_back(acc.mse);
    store.add_row(row);

    store.state_mean += state.theta;
    for (int i = 0; i < m; ++i) {
      for (int t = 0; t < T; ++t) {
        store.omega_mean(t, i) +=
            state.hier[static_cast<std::size_t>(i)].omega[static_cast<std::size_t>(t)];
      }
    }
    ++retained;
  }
  if (retained > 0) {
    store.state_mean /= static_cast<double>(retained);
    store.omega_mean /= static_cast<double>(retained);
  }
  store.pinv_fallbacks = state.pinv_fallbacks;
  store.zero_regressor_flags = state.zero_regressor;
  store.seconds = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
  return store;
}

std::vector<DrawsStore> run_chains(const ModelSpec& spec, const McmcConfig& cfg) {
  spec.validate();
  cfg.validate();
  std::vector<DrawsStore> out(static_cast<std::size_t>(cfg.n_chains));
  std::vector<std::exception_ptr> errors(
      static_cast<std::size_t>(cfg.n_chains));
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (int c = 0; c < cfg.n_chains; ++c) {
    try {
      out[static_cast<std::size_t>(c)] = run_chain(spec, cfg, c + 1);
    } catch (...) {
      errors[static_cast<std::size_t>(c)] = std::current_exception();
    }
  }
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
  return out;
}

}  // namespace bdlm
