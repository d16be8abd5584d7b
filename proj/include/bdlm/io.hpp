#ifndef BDLM_IO_HPP
#define BDLM_IO_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bdlm/priors.hpp"

namespace bdlm {

// Numeric table mirroring a CSV file: header row plus double cells.
struct Table {
  std::vector<std::string> names;
  Eigen::MatrixXd values;

  int rows() const { return static_cast<int>(values.rows()); }
  int cols() const { return static_cast<int>(values.cols()); }
  int column_index(const std::string& name) const;
  Eigen::VectorXd column(const std::string& name) const;  // throws if absent
};

// Shortest decimal string that parses back to exactly x.
std::string format_double(double x);

// Comma-separated, '.' decimal, header row required. Rejects ragged rows,
// non-numeric cells and non-finite values with the row and column named.
Table load_csv(const std::string& path);

// Writes to a temporary file in the same directory, then renames, so a
// failed write never leaves a partial file behind.
void save_csv(const std::string& path, const Table& table);

// Same format with a leading string column (e.g. parameter names).
void save_labeled_csv(const std::string& path, const std::string& label_name,
                      const std::vector<std::string>& labels, const Table& table);

// key = value lines, atomically written; used for manifests and metadata.
void save_keyvalue(const std::string& path,
                   const std::vector<std::pair<std::string, std::string>>& items);

// Raw text, same temp-then-rename discipline.
void save_text(const std::string& path, const std::string& content);

// Running-line smoother residuals: at each index, ordinary least squares on
// the k nearest time indices, with the fitted value subtracted. 3 <= k <= T.
std::vector<double> detrend_running_line(const std::vector<double>& series, int k);

// In-place per-column centering and scaling to unit sample variance.
// Constant columns cannot be scaled and raise an input error.
void standardize_columns(Eigen::MatrixXd& m);

// Aligned series and BOLD regressors for one scanning session.
struct Dataset {
  Eigen::MatrixXd series;      // T x m
  Eigen::MatrixXd regressors;  // T x m, column j drives series j's transition
  std::vector<std::string> labels;
  double sampling_interval = 2.0;
  bool detrended = false;
  bool standardized = false;
  bool has_regressor = false;

  int horizon() const { return static_cast<int>(series.rows()); }
  int n_series() const { return static_cast<int>(series.cols()); }
  void validate() const;
};

// Column "x" (when present) is the shared regressor; every other column is
// one region's series, in file order.
Dataset dataset_from_table(const Table& table, double sampling_interval);
Table dataset_to_table(const Dataset& data);

// Flat key = value configuration covering all commands. '#' starts a
// comment; unknown and duplicate keys are rejected with their line number.
struct RunConfig {
  // run control
  std::uint64_t seed = 1;
  int chains = 1;
  int iterations = 5000;
  int burn_in = 1000;
  int thin = 1;
  std::string out_dir = "out";

  // fit inputs
  std::string data;
  std::string draws;
  bool detrend = false;
  int detrend_k = 30;
  bool standardize = false;

  // priors
  double a_y = 0.001;
  double b_y = 0.001;
  double a_pi = 6.0;
  double b_pi = 3.0;
  double slab_c = 3.7846;
  double slab_d = 1.53;
  double tau0 = 1.82;
  double slab_quantile = 0.0;  // > 0 switches tau0 to the quantile rule
  double slab_prob = 0.95;
  double alpha0 = 1.0;
  std::vector<double> nu_grid = default_nu_grid();
  double trend_prior_var = 100.0;
  double act_prior_var = 1.0;
  double lambda_theta_fixed = 0.0;  // 0 = estimate through the hierarchy
  std::string phi_mask;             // "i:j,i:j" pairs, 1-based

  // simulation recipe
  int T = 285;
  double scan_interval = 2.0;
  double microtime_dt = 0.1;
  double signal_noise_ratio = 1.0;
  double lambda_theta_inv = 1.0;
  std::vector<double> alpha{0.0, 0.0, 0.0};
  std::string phi = "default";
  bool normalize_regressor = true;

  bool operator==(const RunConfig&) const = default;

  std::string serialize() const;
  static RunConfig parse_text(const std::string& text);
  static RunConfig parse_file(const std::string& path);
  void validate() const;

  Eigen::Matrix3d connectivity() const;
  std::vector<std::pair<int, int>> mask_pairs() const;  // 0-based
};

// FNV-1a over the serialized form, as 16 hex digits; identical configs hash
// identically regardless of the source file's comments or key order.
std::string config_hash(const RunConfig& config);

}  // namespace bdlm

#endif  // BDLM_IO_HPP
