// Command-line front end: simulate synthetic sessions, elicit priors, fit
// the connectivity sampler and summarize draws. Exit codes: 0 success,
// 1 usage, 2 data error, 3 numerical failure.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "bdlm/draws.hpp"
#include "bdlm/errors.hpp"
#include "bdlm/eval.hpp"
#include "bdlm/io.hpp"
#include "bdlm/priors.hpp"
#include "bdlm/sampler.hpp"
#include "bdlm/sim.hpp"

namespace {

using bdlm::DrawsStore;
using bdlm::RunConfig;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string path_in(const RunConfig& config, const std::string& name) {
  if (config.out_dir.empty()) return name;
  return config.out_dir + "/" + name;
}

void write_resolved_config(const RunConfig& config) {
  bdlm::save_text(path_in(config, "resolved_config.txt"), config.serialize());
}

void cmd_simulate(const RunConfig& config) {
  const auto start = Clock::now();
  config.validate();
  if (config.alpha.size() != 3) {
    throw bdlm::InputError("simulation needs three alpha intercepts");
  }

  bdlm::SimRecipe recipe;
  recipe.T = config.T;
  recipe.phi = config.connectivity();
  recipe.signal_noise_ratio = config.signal_noise_ratio;
  recipe.lambda_theta_inv = config.lambda_theta_inv;
  recipe.alpha = Eigen::Vector3d(config.alpha[0], config.alpha[1], config.alpha[2]);
  recipe.scan_interval = config.scan_interval;
  recipe.microtime_dt = config.microtime_dt;
  recipe.normalize_regressor = config.normalize_regressor;
  recipe.seed = config.seed;
  const bdlm::TrivariateData sim = bdlm::simulate_trivariate(recipe);

  bdlm::Dataset dataset;
  dataset.series = sim.y;
  dataset.labels = {"y1", "y2", "y3"};
  dataset.sampling_interval = config.scan_interval;
  dataset.has_regressor = true;
  dataset.regressors.resize(config.T, 3);
  for (int t = 0; t < config.T; ++t) {
    dataset.regressors.row(t).setConstant(
        sim.regressor[static_cast<std::size_t>(t)]);
  }
  bdlm::save_csv(path_in(config, "data.csv"), bdlm::dataset_to_table(dataset));

  bdlm::Table truth;
  Eigen::VectorXd row(22);
  int k = 0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      truth.names.push_back("phi_" + std::to_string(i + 1) + "_" +
                            std::to_string(j + 1));
      row(k++) = sim.phi(i, j);
    }
  }
  for (int i = 0; i < 3; ++i) {
    truth.names.push_back("alpha_" + std::to_string(i + 1));
    row(k++) = sim.alpha(i);
  }
  for (int i = 0; i < 3; ++i) {
    truth.names.push_back("obs_variance_" + std::to_string(i + 1));
    row(k++) = sim.lambda_y_inv;
  }
  truth.names.insert(truth.names.end(),
                     {"lambda_theta_inv", "signal_noise_ratio", "loglik", "T",
                      "scan_interval", "seed", "generator_version"});
  row(k++) = sim.lambda_theta_inv;
  row(k++) = config.signal_noise_ratio;
  row(k++) = sim.loglik;
  row(k++) = static_cast<double>(config.T);
  row(k++) = config.scan_interval;
  row(k++) = static_cast<double>(config.seed);
  row(k++) = 1.0;
  truth.values = row.transpose();
  bdlm::save_csv(path_in(config, "truth.csv"), truth);

  bdlm::save_keyvalue(
      path_in(config, "metadata.txt"),
      {{"command", "simulate"},
       {"seed", std::to_string(config.seed)},
       {"config_hash", bdlm::config_hash(config)},
       {"T", std::to_string(config.T)},
       {"scan_interval", bdlm::format_double(config.scan_interval)},
       {"detrended", "false"},
       {"standardized", "false"},
       {"wall_seconds", bdlm::format_double(seconds_since(start))}});
  write_resolved_config(config);
  std::fprintf(stderr, "wrote %s (T=%d, m=3)\n",
               path_in(config, "data.csv").c_str(), config.T);
}

void cmd_elicit(const RunConfig& config) {
  config.validate();
  double tau0 = config.tau0;
  if (config.slab_quantile > 0.0) {
    tau0 = bdlm::slab_tau0_from_quantile(config.slab_quantile, config.slab_prob);
    std::printf("tau0 from quantile %.4f at prob %.4f: %.4f\n",
                config.slab_quantile, config.slab_prob, tau0);
  }
  const bdlm::GammaParams slab = bdlm::elicit_slab_precision(tau0, config.slab_d);
  const bdlm::BetaParams incl =
      bdlm::elicit_inclusion_prior(config.a_pi, config.b_pi);
  std::printf("slab precision: Gamma(%.4f, %.4f)\n", slab.shape, slab.rate);
  std::printf("inclusion weight: Beta(%.4f, %.4f)\n", incl.a, incl.b);
  std::printf("inclusion mean: %.4f\n", incl.mean);
  std::printf("inclusion sd: %.4f\n", incl.sd);
}

void cmd_fit(const RunConfig& config) {
  const auto start = Clock::now();
  config.validate();
  if (config.data.empty()) {
    throw bdlm::InputError("fit needs a 'data' path in the config");
  }

  const bdlm::Table table = bdlm::load_csv(config.data);
  bdlm::Dataset dataset =
      bdlm::dataset_from_table(table, config.scan_interval);

  if (config.detrend) {
    for (int j = 0; j < dataset.n_series(); ++j) {
      std::vector<double> col(static_cast<std::size_t>(dataset.horizon()));
      for (int t = 0; t < dataset.horizon(); ++t) col[static_cast<std::size_t>(t)] = dataset.series(t, j);
      const std::vector<double> out =
          bdlm::detrend_running_line(col, config.detrend_k);
      for (int t = 0; t < dataset.horizon(); ++t) dataset.series(t, j) = out[static_cast<std::size_t>(t)];
    }
    dataset.detrended = true;
  }
  if (config.standardize) {
    bdlm::standardize_columns(dataset.series);
    dataset.standardized = true;
  }

  bdlm::ModelSpec spec;
  if (dataset.has_regressor) {
    std::vector<double> reg(static_cast<std::size_t>(dataset.horizon()));
    for (int t = 0; t < dataset.horizon(); ++t) reg[static_cast<std::size_t>(t)] = dataset.regressors(t, 0);
    spec = bdlm::trivariate_spec(dataset.series, reg);
  } else {
    spec.y = dataset.series;
    spec.g_lag_regressors =
        Eigen::MatrixXd::Ones(dataset.horizon(), dataset.n_series());
    spec.f_regressor = Eigen::VectorXd::Ones(dataset.horizon());
    spec.has_trend = false;
  }
  spec.point_mass.a_pi = config.a_pi;
  spec.point_mass.b_pi = config.b_pi;
  spec.point_mass.c = config.slab_c;
  spec.point_mass.d = config.slab_d;
  spec.a_y = config.a_y;
  spec.b_y = config.b_y;
  spec.nu_grid = config.nu_grid;
  spec.alpha0 = config.alpha0;
  spec.trend_prior_var = config.trend_prior_var;
  spec.act_prior_var = config.act_prior_var;
  if (config.lambda_theta_fixed > 0.0) {
    spec.known_lambda_theta =
        Eigen::VectorXd::Constant(dataset.n_series(), config.lambda_theta_fixed);
  }

  bdlm::McmcConfig mcmc;
  mcmc.n_iter = config.iterations;
  mcmc.burn_in = config.burn_in;
  mcmc.thin = config.thin;
  mcmc.seed = config.seed;
  mcmc.n_chains = config.chains;
  mcmc.phi_mask = config.mask_pairs();

  const std::vector<DrawsStore> chains = bdlm::run_chains(spec, mcmc);
  const DrawsStore merged = DrawsStore::merge(chains);

  bdlm::Table draws;
  draws.names = merged.names;
  draws.values.resize(merged.n_rows(), static_cast<Eigen::Index>(merged.cols.size()));
  for (std::size_t c = 0; c < merged.cols.size(); ++c) {
    for (int r = 0; r < merged.n_rows(); ++r) {
      draws.values(r, static_cast<Eigen::Index>(c)) = merged.cols[c][static_cast<std::size_t>(r)];
    }
  }
  bdlm::save_csv(path_in(config, "draws.csv"), draws);

  const int m = dataset.n_series();
  bdlm::Table states;
  states.names.push_back("t");
  if (spec.has_trend) {
    for (int i = 0; i < m; ++i) states.names.push_back("trend_" + std::to_string(i + 1));
  }
  for (int i = 0; i < m; ++i) states.names.push_back("act_" + std::to_string(i + 1));
  states.values.resize(merged.state_mean.rows(), 1 + merged.state_mean.cols());
  for (Eigen::Index t = 0; t < merged.state_mean.rows(); ++t) {
    states.values(t, 0) = static_cast<double>(t);
  }
  states.values.rightCols(merged.state_mean.cols()) = merged.state_mean;
  bdlm::save_csv(path_in(config, "state_mean.csv"), states);

  bdlm::Table omega;
  omega.names.push_back("t");
  for (int i = 0; i < m; ++i) omega.names.push_back("omega_" + std::to_string(i + 1));
  omega.values.resize(merged.omega_mean.rows(), 1 + merged.omega_mean.cols());
  for (Eigen::Index t = 0; t < merged.omega_mean.rows(); ++t) {
    omega.values(t, 0) = static_cast<double>(t + 1);
  }
  omega.values.rightCols(merged.omega_mean.cols()) = merged.omega_mean;
  bdlm::save_csv(path_in(config, "omega_mean.csv"), omega);

  int pinv = 0;
  int zero_flags = 0;
  for (const DrawsStore& c : chains) {
    pinv += c.pinv_fallbacks;
    zero_flags += c.zero_regressor_flags;
  }
  bdlm::save_keyvalue(
      path_in(config, "manifest.txt"),
      {{"command", "fit"},
       {"data", config.data},
       {"seed", std::to_string(config.seed)},
       {"chains", std::to_string(config.chains)},
       {"iterations", std::to_string(config.iterations)},
       {"burn_in", std::to_string(config.burn_in)},
       {"thin", std::to_string(config.thin)},
       {"retained", std::to_string(merged.n_rows())},
       {"config_hash", bdlm::config_hash(config)},
       {"pinv_fallbacks", std::to_string(pinv)},
       {"zero_regressor_flags", std::to_string(zero_flags)},
       {"detrended", dataset.detrended ? "true" : "false"},
       {"standardized", dataset.standardized ? "true" : "false"},
       {"wall_seconds", bdlm::format_double(seconds_since(start))}});
  write_resolved_config(config);
  std::fprintf(stderr, "wrote %s (%d retained draws)\n",
               path_in(config, "draws.csv").c_str(), merged.n_rows());
}

void cmd_summarize(const RunConfig& config) {
  const auto start = Clock::now();
  config.validate();
  if (config.draws.empty()) {
    throw bdlm::InputError("summarize needs a 'draws' path in the config");
  }
  const bdlm::Table table = bdlm::load_csv(config.draws);
  DrawsStore store;
  store.names = table.names;
  store.cols.resize(table.names.size());
  for (std::size_t c = 0; c < table.names.size(); ++c) {
    store.cols[c].assign(table.values.col(static_cast<Eigen::Index>(c)).data(),
                         table.values.col(static_cast<Eigen::Index>(c)).data() +
                             table.rows());
  }

  const bdlm::PosteriorSummary summary = bdlm::summarize(store);
  std::vector<std::string> labels;
  bdlm::Table stats;
  stats.names = {"mean", "sd", "q025", "q500", "q975", "p_zero"};
  std::vector<Eigen::VectorXd> rows;
  for (const auto& row : summary.rows) {
    if (row.name == "chain" || row.name == "iter") continue;
    labels.push_back(row.name);
    Eigen::VectorXd r(6);
    r << row.mean, row.sd, row.q025, row.q500, row.q975, row.p_zero;
    rows.push_back(r);
  }
  stats.values.resize(static_cast<Eigen::Index>(rows.size()), 6);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    stats.values.row(static_cast<Eigen::Index>(r)) = rows[r].transpose();
  }
  bdlm::save_labeled_csv(path_in(config, "summary.csv"), "parameter", labels,
                         stats);

  // Plot-ready long format: parameter, draw, value.
  bdlm::Table long_table;
  long_table.names = {"draw", "value"};
  std::vector<std::string> long_labels;
  const int n = store.n_rows();
  long_table.values.resize(static_cast<Eigen::Index>(labels.size()) * n, 2);
  Eigen::Index pos = 0;
  for (const std::string& name : labels) {
    const std::vector<double> col = store.column(name);
    for (int r = 0; r < n; ++r) {
      long_labels.push_back(name);
      long_table.values(pos, 0) = static_cast<double>(r + 1);
      long_table.values(pos, 1) = col[static_cast<std::size_t>(r)];
      ++pos;
    }
  }
  bdlm::save_labeled_csv(path_in(config, "draws_long.csv"), "parameter",
                         long_labels, long_table);

  bool wrote_diagnostics = false;
  if (store.n_rows() >= 100) {
    const bdlm::DiagnosticsReport report = bdlm::diagnostics(store);
    bdlm::Table diag;
    diag.names = {"ess", "ess_per_draw", "acf_1", "acf_5", "acf_10", "acf_50"};
    std::vector<std::string> diag_labels;
    diag.values.resize(static_cast<Eigen::Index>(report.rows.size()), 6);
    for (std::size_t r = 0; r < report.rows.size(); ++r) {
      const auto& row = report.rows[r];
      diag_labels.push_back(row.name);
      auto lag = [&](int k) {
        return k < static_cast<int>(row.acf.size()) ? row.acf[static_cast<std::size_t>(k)] : 0.0;
      };
      diag.values.row(static_cast<Eigen::Index>(r)) << row.ess,
          row.ess / report.n_draws, lag(1), lag(5), lag(10), lag(50);
    }
    bdlm::save_labeled_csv(path_in(config, "diagnostics.csv"), "parameter",
                           diag_labels, diag);

    bdlm::Table traces;
    traces.names = {"n_used", "q025", "q500", "q975"};
    std::vector<std::string> trace_labels;
    std::vector<Eigen::Vector4d> trace_rows;
    for (const auto& row : report.rows) {
      for (Eigen::Index r = 0; r < row.cumulative.rows(); ++r) {
        trace_labels.push_back(row.name);
        trace_rows.push_back(row.cumulative.row(r).transpose());
      }
    }
    traces.values.resize(static_cast<Eigen::Index>(trace_rows.size()), 4);
    for (std::size_t r = 0; r < trace_rows.size(); ++r) {
      traces.values.row(static_cast<Eigen::Index>(r)) = trace_rows[r].transpose();
    }
    bdlm::save_labeled_csv(path_in(config, "quantile_traces.csv"), "parameter",
                           trace_labels, traces);
    wrote_diagnostics = true;
  } else {
    std::fprintf(stderr,
                 "only %d draws: diagnostics need at least 100, skipping\n",
                 store.n_rows());
  }

  bdlm::save_keyvalue(
      path_in(config, "summarize_manifest.txt"),
      {{"command", "summarize"},
       {"draws", config.draws},
       {"n_draws", std::to_string(store.n_rows())},
       {"diagnostics_written", wrote_diagnostics ? "true" : "false"},
       {"config_hash", bdlm::config_hash(config)},
       {"wall_seconds", bdlm::format_double(seconds_since(start))}});
  std::fprintf(stderr, "wrote %s (%zu parameters)\n",
               path_in(config, "summary.csv").c_str(), labels.size());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Bayesian dynamic linear models for sparse effective connectivity"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir_override;
  std::uint64_t seed_override = 0;
  int chains_override = 0;

  auto add_common = [&](CLI::App* sub, bool config_required) {
    CLI::Option* opt = sub->add_option("--config", config_path,
                                       "key = value configuration file");
    if (config_required) opt->required();
    sub->add_option("--seed", seed_override, "override the config seed");
    sub->add_option("--chains", chains_override, "override the chain count");
    sub->add_option("--out-dir", out_dir_override,
                    "override the output directory");
  };

  CLI::App* simulate =
      app.add_subcommand("simulate", "generate a synthetic session");
  add_common(simulate, true);
  CLI::App* elicit =
      app.add_subcommand("elicit", "print slab and inclusion priors");
  add_common(elicit, false);
  double tau0_flag = -1.0;
  double slab_d_flag = -1.0;
  double a_flag = -1.0;
  double b_flag = -1.0;
  elicit->add_option("--tau0", tau0_flag, "slab precision scale");
  elicit->add_option("--d", slab_d_flag, "slab precision prior rate");
  elicit->add_option("--a", a_flag, "inclusion Beta a");
  elicit->add_option("--b", b_flag, "inclusion Beta b");
  CLI::App* fit = app.add_subcommand("fit", "run the Gibbs sampler");
  add_common(fit, true);
  CLI::App* summarize =
      app.add_subcommand("summarize", "tabulate posterior draws");
  add_common(summarize, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    RunConfig config;
    if (!config_path.empty()) config = RunConfig::parse_file(config_path);
    if (seed_override != 0) config.seed = seed_override;
    if (chains_override != 0) config.chains = chains_override;
    if (!out_dir_override.empty()) config.out_dir = out_dir_override;

    if (simulate->parsed()) {
      cmd_simulate(config);
    } else if (elicit->parsed()) {
      if (tau0_flag >= 0.0) config.tau0 = tau0_flag;
      if (slab_d_flag > 0.0) config.slab_d = slab_d_flag;
      if (a_flag > 0.0) config.a_pi = a_flag;
      if (b_flag > 0.0) config.b_pi = b_flag;
      cmd_elicit(config);
    } else if (fit->parsed()) {
      cmd_fit(config);
    } else if (summarize->parsed()) {
      cmd_summarize(config);
    }
  } catch (const bdlm::InputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const bdlm::NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "unexpected failure: %s\n", e.what());
    return 3;
  }
  return 0;
}
