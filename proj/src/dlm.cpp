#include "bdlm/dlm.hpp"

#include <cmath>
#include <string>

#include "bdlm/errors.hpp"

namespace bdlm {

namespace {

void check_square(const MatrixXd& A, int n, const char* name) {
  if (A.rows() != n || A.cols() != n) {
    throw InputError(std::string(name) + " must be " + std::to_string(n) + "x" +
                     std::to_string(n) + ", got " + std::to_string(A.rows()) +
                     "x" + std::to_string(A.cols()));
  }
}

}  // namespace

void DlmModel::validate() const {
  if (p <= 0 || m <= 0) throw InputError("state and observation dimensions must be positive");
  if (T <= 0) throw InputError("series length T must be positive");
  if (!F || !G || !W) throw InputError("F, G, W must all be set");
  if (m0.size() != p) throw InputError("m0 has wrong length");
  check_square(C0, p, "C0");
  check_square(V, m, "V");
  if (!is_psd(C0)) throw InputError("C0 is not symmetric positive semidefinite");
  if (!is_psd(V)) throw InputError("V is not symmetric positive semidefinite");
  const MatrixXd F1 = F(1);
  if (F1.rows() != m || F1.cols() != p) throw InputError("F(1) has wrong shape");
  const MatrixXd G1 = G(1);
  check_square(G1, p, "G(1)");
  const MatrixXd W1 = W(1);
  check_square(W1, p, "W(1)");
  if (!is_psd(W1)) throw InputError("W(1) is not symmetric positive semidefinite");
}

FilterResult kalman_filter(const DlmModel& model, const MatrixXd& y) {
  model.validate();
  if (y.rows() != model.T || y.cols() != model.m) {
    throw InputError("observation matrix must be T x m = " + std::to_string(model.T) +
                     "x" + std::to_string(model.m) + ", got " +
                     std::to_string(y.rows()) + "x" + std::to_string(y.cols()));
  }

  const int T = model.T;
  FilterResult out;
  out.m.resize(T + 1);
  out.C.resize(T + 1);
  out.f.resize(T);
  out.Q.resize(T);
  out.a.resize(T);
  out.R.resize(T);
  out.m[0] = model.m0;
  out.C[0] = psd_clip(model.C0);
  out.loglik = 0.0;

  const MatrixXd I = MatrixXd::Identity(model.p, model.p);

  for (int t = 1; t <= T; ++t) {
    const MatrixXd Ft = model.F(t);
    const MatrixXd Gt = model.G(t);
    const MatrixXd Wt = model.W(t);

    // Predict.
    VectorXd a = Gt * out.m[t - 1];
    MatrixXd R = Gt * out.C[t - 1] * Gt.transpose() + Wt;
    symmetrize(R);
    VectorXd f = Ft * a;
    MatrixXd Q = Ft * R * Ft.transpose() + model.V;
    symmetrize(Q);

    // Update. Joseph form keeps C PSD even when K is inexact.
    Eigen::LDLT<MatrixXd> ldlt(Q);
    if (ldlt.info() != Eigen::Success || ldlt.vectorD().minCoeff() <= 0.0) {
      throw NumericalError("filter divergence at t=" + std::to_string(t) +
                           ": predictive covariance not positive definite");
    }
    const VectorXd e = y.row(t - 1).transpose() - f;
    const MatrixXd K = ldlt.solve(Ft * R).transpose();  // R F' Q^{-1}
    const MatrixXd J = I - K * Ft;
    MatrixXd C = J * R * J.transpose() + K * model.V * K.transpose();
    symmetrize(C);

    out.a[t - 1] = std::move(a);
    out.R[t - 1] = std::move(R);
    out.f[t - 1] = f;
    out.Q[t - 1] = Q;
    out.m[t] = out.a[t - 1] + K * e;
    out.C[t] = std::move(C);

    out.loglik += mvn_logpdf(y.row(t - 1).transpose(), f, Q,
                             ("predictive density at t=" + std::to_string(t)).c_str());
  }
  return out;
}

StatePath ffbs_sample(const DlmModel& model, const FilterResult& filt,
                      RandomStream& rng) {
  const int T = model.T;
  StatePath path;
  path.theta.resize(T + 1);

  path.theta[T] = sample_mvn(filt.m[T], filt.C[T], rng);

  for (int t = T - 1; t >= 0; --t) {
    const MatrixXd Gt1 = model.G(t + 1);
    const MatrixXd& R = filt.R[t];  // R_{t+1}
    const VectorXd& a = filt.a[t];  // a_{t+1}

    // B_t = C_t G_{t+1}' R_{t+1}^{-1}. R can be singular when W has zero
    // rows and the state is already pinned down; use the pseudo-inverse and
    // count the fallback.
    const MatrixXd CG = filt.C[t] * Gt1.transpose();
    MatrixXd B;
    Eigen::LDLT<MatrixXd> ldlt(R);
    bool used_pinv = false;
    if (ldlt.info() == Eigen::Success && ldlt.isPositive() &&
        R.diagonal().minCoeff() > kPsdTol * std::max(R.diagonal().maxCoeff(), 1.0)) {
      B = ldlt.solve(CG.transpose()).transpose();
    } else {
      B = CG * psd_pinv(R);
      used_pinv = true;
    }
    if (used_pinv) ++path.pinv_fallbacks;

    VectorXd h = filt.m[t] + B * (path.theta[t + 1] - a);
    MatrixXd H = filt.C[t] - B * R * B.transpose();
    symmetrize(H);
    H = psd_clip(H);
    path.theta[t] = sample_mvn(h, H, rng);
  }
  return path;
}

double one_step_predictive_density(const DlmModel& model, const FilterResult& filt,
                                   int t, const VectorXd& y_t) {
  if (t < 1 || t > model.T) {
    throw InputError("time index " + std::to_string(t) + " outside 1.." +
                     std::to_string(model.T));
  }
  if (y_t.size() != model.m) throw InputError("observation has wrong dimension");
  return mvn_logpdf(y_t, filt.f[t - 1], filt.Q[t - 1],
                    ("predictive density at t=" + std::to_string(t)).c_str());
}

void simulate_dlm(const DlmModel& model, RandomStream& rng, MatrixXd& states,
                  MatrixXd& y) {
  model.validate();
  const int T = model.T;
  states.resize(T + 1, model.p);
  y.resize(T, model.m);

  VectorXd theta = sample_mvn(model.m0, model.C0, rng);
  states.row(0) = theta.transpose();
  for (int t = 1; t <= T; ++t) {
    const VectorXd mean = model.G(t) * theta;
    theta = sample_mvn(mean, model.W(t), rng);
    states.row(t) = theta.transpose();
    const VectorXd f = model.F(t) * theta;
    y.row(t - 1) = sample_mvn(f, model.V, rng).transpose();
  }
}

}  // namespace bdlm
