#include "bdlm/linalg.hpp"

#include <cmath>
#include <string>

#include "bdlm/errors.hpp"

namespace bdlm {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;
}

void symmetrize(MatrixXd& a) {
  MatrixXd t = a.transpose();
  a = 0.5 * (a + t);
}

bool is_psd(const MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(a, Eigen::EigenvaluesOnly);
  const VectorXd& ev = es.eigenvalues();
  double mx = ev.cwiseAbs().maxCoeff();
  return ev.minCoeff() >= -kPsdTol * std::max(mx, 1.0);
}

MatrixXd psd_clip(const MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(a);
  VectorXd ev = es.eigenvalues();
  for (int i = 0; i < ev.size(); ++i) ev(i) = std::max(ev(i), 0.0);
  MatrixXd out = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
  symmetrize(out);
  return out;
}

MatrixXd psd_pinv(const MatrixXd& a, int* rank_out) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(a);
  const VectorXd& ev = es.eigenvalues();
  double mx = std::max(ev.cwiseAbs().maxCoeff(), 0.0);
  double cut = kPsdTol * std::max(mx, 1e-300);
  VectorXd inv = VectorXd::Zero(ev.size());
  int rank = 0;
  for (int i = 0; i < ev.size(); ++i) {
    if (ev(i) > cut) {
      inv(i) = 1.0 / ev(i);
      ++rank;
    }
  }
  if (rank_out) *rank_out = rank;
  MatrixXd out = es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
  symmetrize(out);
  return out;
}

VectorXd sample_mvn(const VectorXd& mean, const MatrixXd& cov, RandomStream& rng) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(cov);
  const VectorXd& ev = es.eigenvalues();
  double mx = std::max(ev.cwiseAbs().maxCoeff(), 0.0);
  double cut = kPsdTol * std::max(mx, 1e-300);
  VectorXd z = VectorXd::Zero(mean.size());
  for (int i = 0; i < ev.size(); ++i) {
    if (ev(i) > cut) z(i) = std::sqrt(ev(i)) * rng.normal();
  }
  return mean + es.eigenvectors() * z;
}

double mvn_logpdf(const VectorXd& x, const VectorXd& mean, const MatrixXd& cov,
                  const char* context) {
  Eigen::LDLT<MatrixXd> ldlt(cov);
  VectorXd d = ldlt.vectorD();
  if (ldlt.info() != Eigen::Success || d.minCoeff() <= 0.0)
    throw NumericalError(std::string(context) +
                         ": predictive covariance not positive definite");
  VectorXd e = x - mean;
  double quad = e.dot(ldlt.solve(e));
  double logdet = d.array().log().sum();
  return -0.5 * (x.size() * kLog2Pi + logdet + quad);
}

}  // namespace bdlm
