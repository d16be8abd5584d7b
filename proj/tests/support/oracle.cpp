#include "support/oracle.hpp"

#include <Eigen/Dense>

#include "bdlm/linalg.hpp"

namespace testsupport {

using Eigen::MatrixXd;
using Eigen::VectorXd;

JointGaussian build_joint(const bdlm::DlmModel& model) {
  const int p = model.p;
  const int m = model.m;
  const int T = model.T;
  const int nbase = (T + 1) * p + T * m;  // theta_0, w_1..w_T, v_1..v_T
  const int nout = (T + 1) * p + T * m;   // theta_0..theta_T, y_1..y_T

  VectorXd base_mean = VectorXd::Zero(nbase);
  base_mean.head(p) = model.m0;
  MatrixXd base_cov = MatrixXd::Zero(nbase, nbase);
  base_cov.topLeftCorner(p, p) = model.C0;
  for (int t = 1; t <= T; ++t) {
    base_cov.block(p + (t - 1) * p, p + (t - 1) * p, p, p) = model.W(t);
  }
  for (int t = 1; t <= T; ++t) {
    const int off = (T + 1) * p + (t - 1) * m;
    base_cov.block(off, off, m, m) = model.V;
  }

  MatrixXd A = MatrixXd::Zero(nout, nbase);
  A.topLeftCorner(p, p).setIdentity();
  // theta_t = G_t theta_{t-1} + w_t, unrolled onto the base coordinates.
  MatrixXd cur = MatrixXd::Zero(p, nbase);
  cur.leftCols(p).setIdentity();
  for (int t = 1; t <= T; ++t) {
    cur = model.G(t) * cur;
    cur.block(0, p + (t - 1) * p, p, p) += MatrixXd::Identity(p, p);
    A.block(t * p, 0, p, nbase) = cur;
  }
  for (int t = 1; t <= T; ++t) {
    MatrixXd yrow = model.F(t) * A.block(t * p, 0, p, nbase);
    yrow.block(0, (T + 1) * p + (t - 1) * m, m, m) += MatrixXd::Identity(m, m);
    A.block((T + 1) * p + (t - 1) * m, 0, m, nbase) = yrow;
  }

  JointGaussian joint;
  joint.p = p;
  joint.m = m;
  joint.T = T;
  joint.mean = A * base_mean;
  joint.cov = A * base_cov * A.transpose();
  bdlm::symmetrize(joint.cov);
  return joint;
}

void condition_gaussian(const VectorXd& mean, const MatrixXd& cov,
                        const std::vector<int>& keep, const std::vector<int>& given,
                        const VectorXd& given_values,
                        VectorXd* mean_out, MatrixXd* cov_out) {
  const int nk = static_cast<int>(keep.size());
  const int ng = static_cast<int>(given.size());
  VectorXd mu_k(nk), mu_g(ng);
  MatrixXd S_kk(nk, nk), S_kg(nk, ng), S_gg(ng, ng);
  for (int i = 0; i < nk; ++i) {
    mu_k(i) = mean(keep[i]);
    for (int j = 0; j < nk; ++j) S_kk(i, j) = cov(keep[i], keep[j]);
    for (int j = 0; j < ng; ++j) S_kg(i, j) = cov(keep[i], given[j]);
  }
  for (int i = 0; i < ng; ++i) {
    mu_g(i) = mean(given[i]);
    for (int j = 0; j < ng; ++j) S_gg(i, j) = cov(given[i], given[j]);
  }

  if (ng == 0) {
    *mean_out = mu_k;
    *cov_out = S_kk;
    return;
  }

  Eigen::LDLT<MatrixXd> ldlt(S_gg);
  MatrixXd Sgg_inv_Sgk;  // ng x nk
  if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
    Sgg_inv_Sgk = ldlt.solve(S_kg.transpose());
  } else {
    Sgg_inv_Sgk = bdlm::psd_pinv(S_gg) * S_kg.transpose();
  }
  *mean_out = mu_k + Sgg_inv_Sgk.transpose() * (given_values - mu_g);
  MatrixXd cond = S_kk - S_kg * Sgg_inv_Sgk;
  bdlm::symmetrize(cond);
  *cov_out = cond;
}

void oracle_state_moments(const JointGaussian& joint, const MatrixXd& y, int t,
                          int upto, VectorXd* mean_out, MatrixXd* cov_out) {
  std::vector<int> keep(joint.p);
  for (int i = 0; i < joint.p; ++i) keep[i] = joint.state_offset(t) + i;
  std::vector<int> given;
  VectorXd given_values(upto * joint.m);
  for (int s = 1; s <= upto; ++s) {
    for (int j = 0; j < joint.m; ++j) {
      given.push_back(joint.obs_offset(s) + j);
      given_values((s - 1) * joint.m + j) = y(s - 1, j);
    }
  }
  condition_gaussian(joint.mean, joint.cov, keep, given, given_values, mean_out,
                     cov_out);
}

double oracle_loglik(const JointGaussian& joint, const MatrixXd& y) {
  const int n = joint.T * joint.m;
  const int off = joint.obs_offset(1);
  VectorXd yvec(n);
  for (int t = 1; t <= joint.T; ++t) {
    for (int j = 0; j < joint.m; ++j) yvec((t - 1) * joint.m + j) = y(t - 1, j);
  }
  return bdlm::mvn_logpdf(yvec, joint.mean.segment(off, n),
                          joint.cov.block(off, off, n, n), "oracle marginal");
}

}  // namespace testsupport
