#include "bdlm/sim.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "bdlm/errors.hpp"

namespace bdlm {

namespace {

double gamma_pdf(double u, double shape, double scale) {
  if (u <= 0.0) return 0.0;
  const double logpdf = (shape - 1.0) * std::log(u / scale) - u / scale -
                        std::lgamma(shape) - std::log(scale);
  return std::exp(logpdf);
}

// Beyond this lag the response is numerically zero.
double hrf_support(const HrfParams& params) {
  return params.undershoot_delay + 40.0 * params.undershoot_dispersion;
}

}  // namespace

void HrfParams::validate() const {
  for (double v : {peak_delay, undershoot_delay, peak_dispersion,
                   undershoot_dispersion, undershoot_ratio}) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw InputError("HRF parameters must be positive and finite");
    }
  }
}

double hrf(double u, const HrfParams& params) {
  params.validate();
  if (u < 0.0) throw InputError("HRF lag must be non-negative");
  const double peak_shape = params.peak_delay / params.peak_dispersion + 1.0;
  const double under_shape =
      params.undershoot_delay / params.undershoot_dispersion + 1.0;
  return gamma_pdf(u, peak_shape, params.peak_dispersion) -
         params.undershoot_ratio *
             gamma_pdf(u, under_shape, params.undershoot_dispersion);
}

void StimulusDesign::validate() const {
  if (!(total_time > 0.0)) throw InputError("stimulus total_time must be positive");
  if (!(microtime_dt > 0.0)) throw InputError("microtime_dt must be positive");
  double prev_end = 0.0;
  std::vector<std::pair<double, double>> sorted = blocks;
  std::sort(sorted.begin(), sorted.end());
  for (const auto& [onset, duration] : sorted) {
    if (onset < 0.0 || duration < 0.0 || onset + duration > total_time + 1e-9) {
      throw InputError("stimulus block outside [0, total_time]");
    }
    if (onset < prev_end - 1e-12) throw InputError("stimulus blocks overlap");
    prev_end = onset + duration;
  }
}

bool StimulusDesign::stimulus_on(double t) const {
  for (const auto& [onset, duration] : blocks) {
    if (t >= onset && t < onset + duration) return true;
  }
  return false;
}

StimulusDesign default_block_design(double total_time, double microtime_dt) {
  StimulusDesign design;
  design.total_time = total_time;
  design.microtime_dt = microtime_dt;
  const double block = 18.0 * 2.0;  // 18 trials at one per 2 s
  for (double onset = block; onset < total_time; onset += 2.0 * block) {
    design.blocks.emplace_back(onset, std::min(block, total_time - onset));
  }
  design.validate();
  return design;
}

std::vector<double> convolve_stimulus(const StimulusDesign& design,
                                      const HrfParams& params, double scan_interval,
                                      int n_scans) {
  design.validate();
  params.validate();
  if (!(scan_interval > 0.0)) throw InputError("scan interval must be positive");
  if (n_scans <= 0) throw InputError("number of scans must be positive");
  if (design.microtime_dt > scan_interval + 1e-12) {
    throw InputError("microtime grid is coarser than the scan spacing");
  }

  const double dt = design.microtime_dt;
  const double support = hrf_support(params);
  const int n_lags = static_cast<int>(support / dt);
  std::vector<double> h_mid(n_lags);
  for (int j = 0; j < n_lags; ++j) h_mid[j] = hrf((j + 0.5) * dt, params);

  std::vector<double> x(n_scans, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int k = 1; k <= n_scans; ++k) {
    const double tk = k * scan_interval;
    double acc = 0.0;
    for (int j = 0; j < n_lags; ++j) {
      const double u = (j + 0.5) * dt;
      if (u > tk) break;
      if (design.stimulus_on(tk - u)) acc += h_mid[j] * dt;
    }
    x[k - 1] = acc;
  }
  return x;
}

DlmModel connectivity_model(const Eigen::Matrix3d& phi,
                            const Eigen::MatrixXd& regressors,
                            const Eigen::VectorXd& f_regressor,
                            const Eigen::Vector3d& v_diag,
                            const Eigen::Vector3d& w_act_diag,
                            const Eigen::VectorXd& m0, const Eigen::MatrixXd& C0) {
  const int T = static_cast<int>(regressors.rows());
  if (regressors.cols() != 3) throw InputError("regressors must have 3 columns");
  if (f_regressor.size() != T) {
    throw InputError("observation regressor length must match the horizon");
  }

  auto X = std::make_shared<Eigen::MatrixXd>(regressors);
  auto fx = std::make_shared<Eigen::VectorXd>(f_regressor);
  auto Phi = std::make_shared<Eigen::Matrix3d>(phi);

  DlmModel model;
  model.p = 6;
  model.m = 3;
  model.T = T;
  model.F = [fx](int t) {
    Eigen::MatrixXd F = Eigen::MatrixXd::Zero(3, 6);
    F.leftCols(3).setIdentity();
    F.rightCols(3) = (*fx)(t - 1) * Eigen::Matrix3d::Identity();
    return F;
  };
  model.G = [X, Phi](int t) {
    Eigen::MatrixXd G = Eigen::MatrixXd::Identity(6, 6);
    Eigen::RowVector3d xprev = Eigen::RowVector3d::Zero();
    if (t >= 2) xprev = X->row(t - 2).head<3>();
    G.block<3, 3>(3, 3) = Phi->array().rowwise() * xprev.array();
    return G;
  };
  model.W = [w_act_diag](int) {
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(6, 6);
    W.diagonal().tail<3>() = w_act_diag;
    return W;
  };
  model.V = v_diag.asDiagonal();
  model.m0 = m0;
  model.C0 = C0;
  return model;
}

UnivariateSparseData simulate_univariate_sparse(double V, double W_over_V,
                                                double kappa, double phi,
                                                double pi_mix, int T,
                                                std::uint64_t seed) {
  if (!(V > 0.0) || !(W_over_V > 0.0) || !(kappa > 0.0)) {
    throw InputError("variance parameters must be positive");
  }
  if (!(pi_mix > 0.0 && pi_mix <= 1.0)) throw InputError("pi_mix must lie in (0,1]");
  if (T < 2) throw InputError("series length must be at least 2");

  UnivariateSparseData data;
  data.V = V;
  data.W = W_over_V * V;
  data.kappa = kappa;
  data.phi = phi;
  data.pi_mix = pi_mix;
  data.theta.assign(static_cast<std::size_t>(T) + 1, 0.0);
  data.outlier.assign(static_cast<std::size_t>(T), 0);
  data.y.assign(static_cast<std::size_t>(T), 0.0);

  RandomStream rng(seed);
  for (int t = 1; t <= T; ++t) {
    const bool inflated = rng.uniform() >= pi_mix;
    data.outlier[t - 1] = inflated ? 1 : 0;
    const double wvar = inflated ? kappa * V : data.W;
    data.theta[t] = phi * data.theta[t - 1] + rng.normal(0.0, std::sqrt(wvar));
    data.y[t - 1] = data.theta[t] + rng.normal(0.0, std::sqrt(V));
  }

  Eigen::MatrixXd y(T, 1);
  for (int t = 0; t < T; ++t) y(t, 0) = data.y[t];
  data.loglik = kalman_filter(univariate_sparse_model(data), y).loglik;
  return data;
}

DlmModel univariate_sparse_model(const UnivariateSparseData& data) {
  const int T = static_cast<int>(data.y.size());
  auto outlier = std::make_shared<std::vector<int>>(data.outlier);
  const double base_w = data.W;
  const double inflated_w = data.kappa * data.V;

  DlmModel model;
  model.p = 1;
  model.m = 1;
  model.T = T;
  model.F = [](int) { return Eigen::MatrixXd::Identity(1, 1); };
  model.G = [phi = data.phi](int) { return Eigen::MatrixXd::Constant(1, 1, phi); };
  model.W = [outlier, base_w, inflated_w](int t) {
    return Eigen::MatrixXd::Constant(1, 1, (*outlier)[t - 1] ? inflated_w : base_w);
  };
  model.V = Eigen::MatrixXd::Constant(1, 1, data.V);
  model.m0 = Eigen::VectorXd::Zero(1);
  model.C0 = Eigen::MatrixXd::Zero(1, 1);
  return model;
}

void SimRecipe::validate() const {
  if (T < 2) throw InputError("recipe horizon must be at least 2");
  if (!(signal_noise_ratio > 0.0)) throw InputError("signal/noise ratio must be positive");
  if (!(lambda_theta_inv > 0.0)) throw InputError("lambda_theta_inv must be positive");
  if (!(scan_interval > 0.0)) throw InputError("scan interval must be positive");
  if (!(microtime_dt > 0.0) || microtime_dt > scan_interval) {
    throw InputError("microtime_dt must be positive and at most the scan interval");
  }
  if (!phi.allFinite() || !alpha.allFinite()) {
    throw InputError("recipe truths must be finite");
  }
}

Eigen::Matrix3d default_connectivity_truth() {
  Eigen::Matrix3d phi;
  phi << 0.0, -0.1495, -3.0382,
         0.0, -0.8365, -0.2667,
         0.4179, 0.1365, 0.0;
  return phi;
}

TrivariateData simulate_trivariate(const SimRecipe& recipe) {
  recipe.validate();
  const StimulusDesign design =
      default_block_design(recipe.T * recipe.scan_interval, recipe.microtime_dt);
  std::vector<double> x =
      convolve_stimulus(design, HrfParams(), recipe.scan_interval, recipe.T);
  if (recipe.normalize_regressor) {
    double peak = 0.0;
    for (double v : x) peak = std::max(peak, std::abs(v));
    if (peak > 0.0) {
      for (double& v : x) v /= peak;
    }
  }
  return simulate_trivariate(recipe, x);
}

TrivariateData simulate_trivariate(const SimRecipe& recipe,
                                   const std::vector<double>& regressor) {
  recipe.validate();
  if (static_cast<int>(regressor.size()) != recipe.T) {
    throw InputError("regressor length must equal the horizon");
  }

  const double ly_inv = recipe.lambda_theta_inv / recipe.signal_noise_ratio;
  const double w_act = ly_inv * recipe.lambda_theta_inv;

  Eigen::MatrixXd X(recipe.T, 3);
  Eigen::VectorXd fx(recipe.T);
  for (int t = 0; t < recipe.T; ++t) {
    X.row(t).setConstant(regressor[t]);
    fx(t) = regressor[t];
  }
  Eigen::VectorXd m0(6);
  m0 << recipe.alpha, Eigen::Vector3d::Zero();

  const DlmModel model = connectivity_model(
      recipe.phi, X, fx, Eigen::Vector3d::Constant(ly_inv),
      Eigen::Vector3d::Constant(w_act), m0, Eigen::MatrixXd::Zero(6, 6));

  RandomStream rng(recipe.seed);
  TrivariateData out;
  simulate_dlm(model, rng, out.states, out.y);
  out.regressor = regressor;
  out.phi = recipe.phi;
  out.alpha = recipe.alpha;
  out.lambda_y_inv = ly_inv;
  out.lambda_theta_inv = recipe.lambda_theta_inv;
  out.loglik = kalman_filter(model, out.y).loglik;
  return out;
}

}  // namespace bdlm
