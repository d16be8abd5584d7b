#ifndef BDLM_LINALG_HPP
#define BDLM_LINALG_HPP

#include <Eigen/Dense>

#include "bdlm/rng.hpp"

namespace bdlm {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Relative eigenvalue tolerance for PSD checks and pseudo-inverses:
// eigenvalues below -kPsdTol * max|eig| are treated as a hard failure,
// anything in (-tol, tol) is clipped to zero.
inline constexpr double kPsdTol = 1e-10;

// In-place (A + A') / 2. Exact: the result is bitwise symmetric.
void symmetrize(MatrixXd& a);

// True if the symmetric matrix has min eigenvalue >= -kPsdTol * max|eig|.
bool is_psd(const MatrixXd& a);

// Clips small negative eigenvalues of a symmetric matrix to zero.
MatrixXd psd_clip(const MatrixXd& a);

// Moore-Penrose inverse of a symmetric PSD matrix via eigendecomposition.
// rank_out, when non-null, receives the numerical rank.
MatrixXd psd_pinv(const MatrixXd& a, int* rank_out = nullptr);

// Draw from N(mean, cov) where cov may be singular: no noise is injected
// along null directions.
VectorXd sample_mvn(const VectorXd& mean, const MatrixXd& cov, RandomStream& rng);

// log N(x; mean, cov); throws NumericalError when cov is not positive
// definite (context names the caller).
double mvn_logpdf(const VectorXd& x, const VectorXd& mean, const MatrixXd& cov,
                  const char* context);

}  // namespace bdlm

#endif  // BDLM_LINALG_HPP
