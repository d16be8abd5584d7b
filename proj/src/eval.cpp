#include "bdlm/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bdlm/errors.hpp"

namespace bdlm {

int DrawsStore::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return static_cast<int>(i);
  }
  return -1;
}

const std::vector<double>& DrawsStore::column(const std::string& name) const {
  const int idx = column_index(name);
  if (idx < 0) throw InputError("no draw column named '" + name + "'");
  return cols[static_cast<std::size_t>(idx)];
}

void DrawsStore::add_row(const std::vector<double>& row) {
  if (row.size() != names.size()) throw InputError("draw row width mismatch");
  for (std::size_t i = 0; i < row.size(); ++i) cols[i].push_back(row[i]);
}

DrawsStore DrawsStore::merge(const std::vector<DrawsStore>& stores) {
  if (stores.empty()) throw InputError("nothing to merge");
  DrawsStore out = stores.front();
  for (std::size_t s = 1; s < stores.size(); ++s) {
    const DrawsStore& st = stores[s];
    if (st.names != out.names) throw InputError("draw stores have different schemas");
    for (std::size_t c = 0; c < out.cols.size(); ++c) {
      out.cols[c].insert(out.cols[c].end(), st.cols[c].begin(), st.cols[c].end());
    }
    out.pinv_fallbacks += st.pinv_fallbacks;
    out.zero_regressor_flags += st.zero_regressor_flags;
    out.seconds += st.seconds;
  }
  // Row-weighted average of the accumulated means.
  double total = 0.0;
  for (const DrawsStore& st : stores) total += st.n_rows();
  if (total > 0.0 && stores.front().state_mean.size() > 0) {
    out.state_mean.setZero(stores.front().state_mean.rows(),
                           stores.front().state_mean.cols());
    out.omega_mean.setZero(stores.front().omega_mean.rows(),
                           stores.front().omega_mean.cols());
    for (const DrawsStore& st : stores) {
      const double w = st.n_rows() / total;
      out.state_mean += w * st.state_mean;
      out.omega_mean += w * st.omega_mean;
    }
  }
  return out;
}

AccuracyReport mad_mse(const Eigen::MatrixXd& y, const Eigen::VectorXd& alpha,
                       const Eigen::MatrixXd& theta_act,
                       const Eigen::VectorXd& f_regressor) {
  const int T = static_cast<int>(y.rows());
  const int m = static_cast<int>(y.cols());
  if (alpha.size() != m) throw InputError("alpha length must match series count");
  if (theta_act.rows() != T || theta_act.cols() != m) {
    throw InputError("state matrix must be T x m");
  }
  if (f_regressor.size() != T) throw InputError("regressor length must be T");

  AccuracyReport report;
  report.mad_per_series.setZero(m);
  report.mse_per_series.setZero(m);
  double abs_sum = 0.0, sq_sum = 0.0;
  for (int i = 0; i < m; ++i) {
    double a = 0.0, s = 0.0;
    for (int t = 0; t < T; ++t) {
      const double e = y(t, i) - (alpha(i) + f_regressor(t) * theta_act(t, i));
      a += std::abs(e);
      s += e * e;
    }
    report.mad_per_series(i) = a / T;
    report.mse_per_series(i) = s / T;
    abs_sum += a;
    sq_sum += s;
  }
  report.mad = abs_sum / T;
  report.mse = sq_sum / T;
  report.mad_per_obs = abs_sum / (static_cast<double>(T) * m);
  report.mse_per_obs = sq_sum / (static_cast<double>(T) * m);
  return report;
}

AccuracyReport mad_mse(const Eigen::MatrixXd& y, const Eigen::VectorXd& alpha,
                       const StatePath& path, const Eigen::VectorXd& f_regressor) {
  const int T = static_cast<int>(y.rows());
  const int m = static_cast<int>(y.cols());
  if (static_cast<int>(path.theta.size()) != T + 1) {
    throw InputError("state path length must be T+1");
  }
  Eigen::MatrixXd theta_act(T, m);
  for (int t = 1; t <= T; ++t) {
    const Eigen::VectorXd& th = path.theta[static_cast<std::size_t>(t)];
    if (th.size() < m) throw InputError("state dimension smaller than series count");
    theta_act.row(t - 1) = th.tail(m).transpose();
  }
  return mad_mse(y, alpha, theta_act, f_regressor);
}

double sorted_quantile(const std::vector<double>& sorted, double prob) {
  if (sorted.empty()) throw InputError("quantile of empty sample");
  if (!(prob >= 0.0 && prob <= 1.0)) throw InputError("quantile prob outside [0,1]");
  const double h = prob * (static_cast<double>(sorted.size()) - 1.0);
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

PosteriorSummary summarize(const DrawsStore& draws) {
  if (draws.n_rows() == 0) throw InputError("draw store is empty");
  PosteriorSummary out;
  out.n_draws = draws.n_rows();
  const double n = out.n_draws;
  for (std::size_t c = 0; c < draws.names.size(); ++c) {
    std::vector<double> sorted = draws.cols[c];
    std::sort(sorted.begin(), sorted.end());

    ParameterSummary row;
    row.name = draws.names[c];
    double sum = 0.0;
    for (double v : sorted) sum += v;
    row.mean = sum / n;
    double ss = 0.0;
    std::size_t zeros = 0;
    for (double v : sorted) {
      ss += (v - row.mean) * (v - row.mean);
      if (v == 0.0) ++zeros;
    }
    row.sd = n > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    row.q025 = sorted_quantile(sorted, 0.025);
    row.q500 = sorted_quantile(sorted, 0.5);
    row.q975 = sorted_quantile(sorted, 0.975);
    row.p_zero = static_cast<double>(zeros) / n;
    out.rows.push_back(std::move(row));
  }
  return out;
}

std::vector<double> acf(const std::vector<double>& x, int max_lag) {
  const int n = static_cast<int>(x.size());
  if (n < 2) throw InputError("ACF needs at least 2 values");
  if (max_lag < 0) throw InputError("max_lag must be non-negative");
  max_lag = std::min(max_lag, n - 1);

  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  std::vector<double> gamma(static_cast<std::size_t>(max_lag) + 1, 0.0);
  for (int k = 0; k <= max_lag; ++k) {
    double acc = 0.0;
    for (int t = 0; t + k < n; ++t) acc += (x[t] - mean) * (x[t + k] - mean);
    gamma[k] = acc / n;
  }
  std::vector<double> rho(gamma.size(), 0.0);
  if (gamma[0] > 0.0) {
    for (std::size_t k = 0; k < gamma.size(); ++k) rho[k] = gamma[k] / gamma[0];
  } else {
    rho[0] = 1.0;
  }
  return rho;
}

double ess_geyer(const std::vector<double>& x) {
  const int n = static_cast<int>(x.size());
  if (n < 2) throw InputError("ESS needs at least 2 values");

  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  auto gamma_at = [&](int k) {
    double acc = 0.0;
    for (int t = 0; t + k < n; ++t) acc += (x[t] - mean) * (x[t + k] - mean);
    return acc / n;
  };
  const double g0 = gamma_at(0);
  if (g0 <= 0.0) return 1.0;  // zero-variance (stuck) stream

  // Sum paired autocovariances while they stay positive.
  double tau = -g0;
  for (int j = 0;; ++j) {
    const int k1 = 2 * j, k2 = 2 * j + 1;
    if (k1 >= n) break;
    const double pair = gamma_at(k1) + (k2 < n ? gamma_at(k2) : 0.0);
    if (pair <= 0.0) break;
    tau += 2.0 * pair;
  }
  if (tau <= 0.0) return static_cast<double>(n);
  return n * g0 / tau;
}

Eigen::MatrixXd cumulative_quantiles(const std::vector<double>& x, int n_checkpoints) {
  const int n = static_cast<int>(x.size());
  if (n < 2) throw InputError("cumulative quantiles need at least 2 values");
  n_checkpoints = std::max(1, std::min(n_checkpoints, n));

  Eigen::MatrixXd out(n_checkpoints, 4);
  std::vector<double> prefix;
  prefix.reserve(x.size());
  int next = 0;
  for (int c = 0; c < n_checkpoints; ++c) {
    const int upto = static_cast<int>(
        std::round(static_cast<double>(n) * (c + 1) / n_checkpoints));
    while (next < upto) prefix.push_back(x[next++]);
    std::vector<double> sorted = prefix;
    std::sort(sorted.begin(), sorted.end());
    out(c, 0) = static_cast<double>(upto);
    out(c, 1) = sorted_quantile(sorted, 0.025);
    out(c, 2) = sorted_quantile(sorted, 0.5);
    out(c, 3) = sorted_quantile(sorted, 0.975);
  }
  return out;
}

DiagnosticsReport diagnostics(const DrawsStore& draws, int max_lag) {
  if (draws.n_rows() < 100) {
    throw InputError("diagnostics need at least 100 retained draws");
  }
  DiagnosticsReport out;
  out.n_draws = draws.n_rows();
  for (std::size_t c = 0; c < draws.names.size(); ++c) {
    const std::string& name = draws.names[c];
    if (name == "chain" || name == "iter") continue;
    ParameterDiagnostics row;
    row.name = name;
    row.ess = ess_geyer(draws.cols[c]);
    row.acf = acf(draws.cols[c], max_lag);
    row.cumulative = cumulative_quantiles(draws.cols[c]);
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace bdlm
