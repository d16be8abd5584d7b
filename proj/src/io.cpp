#include "bdlm/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "bdlm/errors.hpp"
#include "bdlm/sim.hpp"

namespace bdlm {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_cell(const std::string& cell, int row, const std::string& column) {
  const std::string t = trim(cell);
  const char* begin = t.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (t.empty() || end != begin + t.size()) {
    throw InputError("row " + std::to_string(row) + ", column '" + column +
                     "': cannot parse '" + t + "' as a number");
  }
  if (!std::isfinite(v)) {
    throw InputError("row " + std::to_string(row) + ", column '" + column +
                     "': non-finite value '" + t + "'");
  }
  return v;
}

void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.parent_path() /
                       (target.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot open '" + tmp.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) throw InputError("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw InputError("cannot replace '" + path + "': " + ec.message());
  }
}

std::string render_csv(const std::string* label_name,
                       const std::vector<std::string>* labels,
                       const Table& table) {
  if (table.values.cols() != static_cast<Eigen::Index>(table.names.size())) {
    throw InputError("table has " + std::to_string(table.values.cols()) +
                     " value columns but " + std::to_string(table.names.size()) +
                     " names");
  }
  if (labels && static_cast<Eigen::Index>(labels->size()) != table.values.rows()) {
    throw InputError("label column length does not match the table rows");
  }
  std::ostringstream out;
  if (label_name) out << *label_name << (table.names.empty() ? "" : ",");
  for (std::size_t c = 0; c < table.names.size(); ++c) {
    out << table.names[c] << (c + 1 < table.names.size() ? "," : "");
  }
  out << '\n';
  for (Eigen::Index r = 0; r < table.values.rows(); ++r) {
    if (labels) {
      out << (*labels)[static_cast<std::size_t>(r)]
          << (table.values.cols() > 0 ? "," : "");
    }
    for (Eigen::Index c = 0; c < table.values.cols(); ++c) {
      out << format_double(table.values(r, c))
          << (c + 1 < table.values.cols() ? "," : "");
    }
    out << '\n';
  }
  return out.str();
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

long long parse_int(const std::string& v) {
  std::size_t used = 0;
  const long long x = std::stoll(v, &used);
  if (used != v.size()) throw std::invalid_argument(v);
  return x;
}

double parse_num(const std::string& v) {
  std::size_t used = 0;
  const double x = std::stod(v, &used);
  if (used != v.size() || !std::isfinite(x)) throw std::invalid_argument(v);
  return x;
}

bool parse_bool(const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw std::invalid_argument(v);
}

std::vector<double> parse_list(const std::string& v) {
  std::vector<double> out;
  if (trim(v).empty()) return out;
  for (const std::string& part : split(v, ',')) out.push_back(parse_num(trim(part)));
  return out;
}

std::string render_list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out += format_double(v[i]);
    if (i + 1 < v.size()) out += ",";
  }
  return out;
}

const std::map<std::string, Setter>& config_setters() {
  static const std::map<std::string, Setter> table = {
      {"seed", [](RunConfig& c, const std::string& v) { c.seed = std::stoull(v); }},
      {"chains", [](RunConfig& c, const std::string& v) { c.chains = static_cast<int>(parse_int(v)); }},
      {"iterations", [](RunConfig& c, const std::string& v) { c.iterations = static_cast<int>(parse_int(v)); }},
      {"burn_in", [](RunConfig& c, const std::string& v) { c.burn_in = static_cast<int>(parse_int(v)); }},
      {"thin", [](RunConfig& c, const std::string& v) { c.thin = static_cast<int>(parse_int(v)); }},
      {"out_dir", [](RunConfig& c, const std::string& v) { c.out_dir = v; }},
      {"data", [](RunConfig& c, const std::string& v) { c.data = v; }},
      {"draws", [](RunConfig& c, const std::string& v) { c.draws = v; }},
      {"detrend", [](RunConfig& c, const std::string& v) { c.detrend = parse_bool(v); }},
      {"detrend_k", [](RunConfig& c, const std::string& v) { c.detrend_k = static_cast<int>(parse_int(v)); }},
      {"standardize", [](RunConfig& c, const std::string& v) { c.standardize = parse_bool(v); }},
      {"a_y", [](RunConfig& c, const std::string& v) { c.a_y = parse_num(v); }},
      {"b_y", [](RunConfig& c, const std::string& v) { c.b_y = parse_num(v); }},
      {"a_pi", [](RunConfig& c, const std::string& v) { c.a_pi = parse_num(v); }},
      {"b_pi", [](RunConfig& c, const std::string& v) { c.b_pi = parse_num(v); }},
      {"slab_c", [](RunConfig& c, const std::string& v) { c.slab_c = parse_num(v); }},
      {"slab_d", [](RunConfig& c, const std::string& v) { c.slab_d = parse_num(v); }},
      {"tau0", [](RunConfig& c, const std::string& v) { c.tau0 = parse_num(v); }},
      {"slab_quantile", [](RunConfig& c, const std::string& v) { c.slab_quantile = parse_num(v); }},
      {"slab_prob", [](RunConfig& c, const std::string& v) { c.slab_prob = parse_num(v); }},
      {"alpha0", [](RunConfig& c, const std::string& v) { c.alpha0 = parse_num(v); }},
      {"nu_grid", [](RunConfig& c, const std::string& v) { c.nu_grid = parse_list(v); }},
      {"trend_prior_var", [](RunConfig& c, const std::string& v) { c.trend_prior_var = parse_num(v); }},
      {"act_prior_var", [](RunConfig& c, const std::string& v) { c.act_prior_var = parse_num(v); }},
      {"lambda_theta_fixed", [](RunConfig& c, const std::string& v) { c.lambda_theta_fixed = parse_num(v); }},
      {"phi_mask", [](RunConfig& c, const std::string& v) { c.phi_mask = v; }},
      {"T", [](RunConfig& c, const std::string& v) { c.T = static_cast<int>(parse_int(v)); }},
      {"scan_interval", [](RunConfig& c, const std::string& v) { c.scan_interval = parse_num(v); }},
      {"microtime_dt", [](RunConfig& c, const std::string& v) { c.microtime_dt = parse_num(v); }},
      {"signal_noise_ratio", [](RunConfig& c, const std::string& v) { c.signal_noise_ratio = parse_num(v); }},
      {"lambda_theta_inv", [](RunConfig& c, const std::string& v) { c.lambda_theta_inv = parse_num(v); }},
      {"alpha", [](RunConfig& c, const std::string& v) { c.alpha = parse_list(v); }},
      {"phi", [](RunConfig& c, const std::string& v) { c.phi = v; }},
      {"normalize_regressor", [](RunConfig& c, const std::string& v) { c.normalize_regressor = parse_bool(v); }},
  };
  return table;
}

}  // namespace

int Table::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return static_cast<int>(i);
  }
  return -1;
}

Eigen::VectorXd Table::column(const std::string& name) const {
  const int idx = column_index(name);
  if (idx < 0) throw InputError("missing column '" + name + "'");
  return values.col(idx);
}

std::string format_double(double x) {
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) return buf;
  }
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Table load_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw InputError("'" + path + "' is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

  Table table;
  for (const std::string& name : split(line, ',')) {
    const std::string n = trim(name);
    if (n.empty()) throw InputError("'" + path + "': empty column name in header");
    if (table.column_index(n) >= 0) {
      throw InputError("'" + path + "': duplicate column '" + n + "'");
    }
    table.names.push_back(n);
  }

  std::vector<std::vector<double>> rows;
  int row_number = 1;  // header is row 1
  while (std::getline(in, line)) {
    ++row_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const std::vector<std::string> cells = split(line, ',');
    if (cells.size() != table.names.size()) {
      throw InputError("row " + std::to_string(row_number) + " has " +
                       std::to_string(cells.size()) + " cells, expected " +
                       std::to_string(table.names.size()));
    }
    std::vector<double> parsed(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      parsed[c] = parse_cell(cells[c], row_number, table.names[c]);
    }
    rows.push_back(std::move(parsed));
  }

  table.values.resize(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(table.names.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < table.names.size(); ++c) {
      table.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          rows[r][c];
    }
  }
  return table;
}

void save_csv(const std::string& path, const Table& table) {
  atomic_write(path, render_csv(nullptr, nullptr, table));
}

void save_labeled_csv(const std::string& path, const std::string& label_name,
                      const std::vector<std::string>& labels, const Table& table) {
  atomic_write(path, render_csv(&label_name, &labels, table));
}

void save_keyvalue(const std::string& path,
                   const std::vector<std::pair<std::string, std::string>>& items) {
  std::ostringstream out;
  for (const auto& [key, value] : items) out << key << " = " << value << '\n';
  atomic_write(path, out.str());
}

void save_text(const std::string& path, const std::string& content) {
  atomic_write(path, content);
}

std::vector<double> detrend_running_line(const std::vector<double>& series, int k) {
  const int T = static_cast<int>(series.size());
  if (k < 3) throw InputError("detrend neighborhood must be at least 3");
  if (k > T) throw InputError("detrend neighborhood exceeds the series length");
  for (double v : series) {
    if (!std::isfinite(v)) throw InputError("series contains non-finite values");
  }

  std::vector<double> out(series.size());
  for (int t = 0; t < T; ++t) {
    int lo = t - (k - 1) / 2;
    lo = std::clamp(lo, 0, T - k);
    // Least squares on offsets s - t keeps the normal equations small; the
    // fitted value at t is then just the intercept.
    double sx = 0.0, sxx = 0.0, sy = 0.0, sxy = 0.0;
    for (int s = lo; s < lo + k; ++s) {
      const double dx = static_cast<double>(s - t);
      const double y = series[static_cast<std::size_t>(s)];
      sx += dx;
      sxx += dx * dx;
      sy += y;
      sxy += dx * y;
    }
    const double denom = k * sxx - sx * sx;
    const double slope = denom > 0.0 ? (k * sxy - sx * sy) / denom : 0.0;
    const double intercept = (sy - slope * sx) / k;
    out[static_cast<std::size_t>(t)] = series[static_cast<std::size_t>(t)] - intercept;
  }
  return out;
}

void standardize_columns(Eigen::MatrixXd& m) {
  const Eigen::Index T = m.rows();
  if (T < 2) throw InputError("standardization needs at least two rows");
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    const double mean = m.col(c).mean();
    const double var =
        (m.col(c).array() - mean).square().sum() / static_cast<double>(T - 1);
    if (!(var > 0.0) || !std::isfinite(var)) {
      throw InputError("column " + std::to_string(c + 1) +
                       " is constant and cannot be standardized");
    }
    m.col(c) = (m.col(c).array() - mean) / std::sqrt(var);
  }
}

void Dataset::validate() const {
  if (series.rows() < 1 || series.cols() < 1) {
    throw InputError("dataset must contain at least one series");
  }
  if (!series.allFinite()) throw InputError("series contain non-finite values");
  if (regressors.rows() != series.rows() || regressors.cols() != series.cols()) {
    throw InputError("regressors must match the series in shape");
  }
  if (!regressors.allFinite()) {
    throw InputError("regressors contain non-finite values");
  }
  if (labels.size() != static_cast<std::size_t>(series.cols())) {
    throw InputError("one label per series required");
  }
  if (sampling_interval <= 0.0) {
    throw InputError("sampling interval must be positive");
  }
}

Dataset dataset_from_table(const Table& table, double sampling_interval) {
  Dataset out;
  out.sampling_interval = sampling_interval;
  const int x_col = table.column_index("x");
  std::vector<int> series_cols;
  for (std::size_t c = 0; c < table.names.size(); ++c) {
    if (static_cast<int>(c) != x_col) series_cols.push_back(static_cast<int>(c));
  }
  if (series_cols.empty()) throw InputError("no series columns found");
  if (table.rows() < 1) throw InputError("dataset has no rows");

  out.series.resize(table.rows(), static_cast<Eigen::Index>(series_cols.size()));
  for (std::size_t j = 0; j < series_cols.size(); ++j) {
    out.series.col(static_cast<Eigen::Index>(j)) = table.values.col(series_cols[j]);
    out.labels.push_back(table.names[static_cast<std::size_t>(series_cols[j])]);
  }
  out.has_regressor = x_col >= 0;
  if (out.has_regressor) {
    out.regressors = table.values.col(x_col).replicate(1, out.series.cols());
  } else {
    out.regressors = Eigen::MatrixXd::Ones(out.series.rows(), out.series.cols());
  }
  out.validate();
  return out;
}

Table dataset_to_table(const Dataset& data) {
  data.validate();
  Table table;
  table.names = data.labels;
  const Eigen::Index extra = data.has_regressor ? 1 : 0;
  table.values.resize(data.series.rows(), data.series.cols() + extra);
  table.values.leftCols(data.series.cols()) = data.series;
  if (data.has_regressor) {
    table.names.push_back("x");
    table.values.rightCols(1) = data.regressors.col(0);
  }
  return table;
}

std::string RunConfig::serialize() const {
  std::ostringstream out;
  out << "seed = " << seed << '\n';
  out << "chains = " << chains << '\n';
  out << "iterations = " << iterations << '\n';
  out << "burn_in = " << burn_in << '\n';
  out << "thin = " << thin << '\n';
  out << "out_dir = " << out_dir << '\n';
  out << "data = " << data << '\n';
  out << "draws = " << draws << '\n';
  out << "detrend = " << (detrend ? "true" : "false") << '\n';
  out << "detrend_k = " << detrend_k << '\n';
  out << "standardize = " << (standardize ? "true" : "false") << '\n';
  out << "a_y = " << format_double(a_y) << '\n';
  out << "b_y = " << format_double(b_y) << '\n';
  out << "a_pi = " << format_double(a_pi) << '\n';
  out << "b_pi = " << format_double(b_pi) << '\n';
  out << "slab_c = " << format_double(slab_c) << '\n';
  out << "slab_d = " << format_double(slab_d) << '\n';
  out << "tau0 = " << format_double(tau0) << '\n';
  out << "slab_quantile = " << format_double(slab_quantile) << '\n';
  out << "slab_prob = " << format_double(slab_prob) << '\n';
  out << "alpha0 = " << format_double(alpha0) << '\n';
  out << "nu_grid = " << render_list(nu_grid) << '\n';
  out << "trend_prior_var = " << format_double(trend_prior_var) << '\n';
  out << "act_prior_var = " << format_double(act_prior_var) << '\n';
  out << "lambda_theta_fixed = " << format_double(lambda_theta_fixed) << '\n';
  out << "phi_mask = " << phi_mask << '\n';
  out << "T = " << T << '\n';
  out << "scan_interval = " << format_double(scan_interval) << '\n';
  out << "microtime_dt = " << format_double(microtime_dt) << '\n';
  out << "signal_noise_ratio = " << format_double(signal_noise_ratio) << '\n';
  out << "lambda_theta_inv = " << format_double(lambda_theta_inv) << '\n';
  out << "alpha = " << render_list(alpha) << '\n';
  out << "phi = " << phi << '\n';
  out << "normalize_regressor = " << (normalize_regressor ? "true" : "false")
      << '\n';
  return out.str();
}

RunConfig RunConfig::parse_text(const std::string& text) {
  RunConfig config;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw InputError("config line " + std::to_string(line_number) +
                       ": expected 'key = value'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    const auto& setters = config_setters();
    const auto it = setters.find(key);
    if (it == setters.end()) {
      throw InputError("config line " + std::to_string(line_number) +
                       ": unknown key '" + key + "'");
    }
    if (!seen.insert(key).second) {
      throw InputError("config line " + std::to_string(line_number) +
                       ": duplicate key '" + key + "'");
    }
    try {
      it->second(config, value);
    } catch (const std::exception&) {
      throw InputError("config line " + std::to_string(line_number) +
                       ": invalid value '" + value + "' for key '" + key + "'");
    }
  }
  return config;
}

RunConfig RunConfig::parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_text(buffer.str());
}

void RunConfig::validate() const {
  if (chains < 1) throw InputError("chains must be positive");
  if (iterations < 1) throw InputError("iterations must be positive");
  if (burn_in < 0 || burn_in >= iterations) {
    throw InputError("burn_in must lie in [0, iterations)");
  }
  if (thin < 1) throw InputError("thin must be positive");
  if (detrend_k < 3) throw InputError("detrend_k must be at least 3");
  if (a_y <= 0 || b_y <= 0 || a_pi <= 0 || b_pi <= 0 || slab_c <= 0 ||
      slab_d <= 0 || alpha0 <= 0) {
    throw InputError("prior hyperparameters must be positive");
  }
  if (tau0 < 0 || slab_quantile < 0) {
    throw InputError("tau0 and slab_quantile cannot be negative");
  }
  if (slab_prob <= 0 || slab_prob >= 1) {
    throw InputError("slab_prob must lie in (0, 1)");
  }
  if (trend_prior_var <= 0 || act_prior_var <= 0) {
    throw InputError("initial state prior variances must be positive");
  }
  if (lambda_theta_fixed < 0) {
    throw InputError("lambda_theta_fixed cannot be negative");
  }
  if (T < 1) throw InputError("T must be positive");
  if (scan_interval <= 0 || microtime_dt <= 0) {
    throw InputError("scan_interval and microtime_dt must be positive");
  }
  if (signal_noise_ratio <= 0 || lambda_theta_inv <= 0) {
    throw InputError("variance ratios must be positive");
  }
  connectivity();
  mask_pairs();
}

Eigen::Matrix3d RunConfig::connectivity() const {
  if (trim(phi) == "default") return default_connectivity_truth();
  const std::vector<double> values = parse_list(phi);
  if (values.size() != 9) {
    throw InputError("phi must be 'default' or nine comma-separated values");
  }
  Eigen::Matrix3d out;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) out(i, j) = values[static_cast<std::size_t>(3 * i + j)];
  }
  return out;
}

std::vector<std::pair<int, int>> RunConfig::mask_pairs() const {
  std::vector<std::pair<int, int>> out;
  const std::string body = trim(phi_mask);
  if (body.empty()) return out;
  for (const std::string& item : split(body, ',')) {
    const std::vector<std::string> parts = split(trim(item), ':');
    if (parts.size() != 2) {
      throw InputError("phi_mask entries must look like 'i:j'");
    }
    try {
      const int i = static_cast<int>(parse_int(trim(parts[0])));
      const int j = static_cast<int>(parse_int(trim(parts[1])));
      if (i < 1 || j < 1) throw std::invalid_argument("index");
      out.emplace_back(i - 1, j - 1);
    } catch (const std::exception&) {
      throw InputError("phi_mask entry '" + item + "' is not a 1-based pair");
    }
  }
  return out;
}

std::string config_hash(const RunConfig& config) {
  const std::string text = config.serialize();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace bdlm
