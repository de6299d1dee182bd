#include "kronmle/core.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

namespace kronmle {

namespace {

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) {
  return 0.5 * (m + m.transpose());
}

// sum_i Y_i psi Y_i^T, the m1 x m1 inner sum of the profiled objective.
Eigen::MatrixXd inner_sum_rows(const DataSample& sample,
                               const Eigen::MatrixXd& psi) {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(sample.m1(), sample.m1());
  for (const auto& y : sample.matrices()) {
    s.noalias() += y * psi * y.transpose();
  }
  return symmetrized(s);
}

// Symmetric power via eigendecomposition with a tiny positive floor on the
// eigenvalues so boundary cases stay inside the cone.
Eigen::MatrixXd spd_power(const Eigen::MatrixXd& m, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrized(m));
  if (es.info() != Eigen::Success) {
    throw NotPositiveDefinite("spd_power: eigendecomposition failed");
  }
  Eigen::VectorXd lam = es.eigenvalues();
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    lam(i) = std::pow(std::max(lam(i), 1e-300), t);
  }
  return symmetrized(es.eigenvectors() * lam.asDiagonal() *
                     es.eigenvectors().transpose());
}

}  // namespace

double log_likelihood(const DataSample& sample, const PrecisionPair& pair) {
  if (pair.psi1.dim() != sample.m1() || pair.psi2.dim() != sample.m2()) {
    throw DimensionError("log_likelihood: precision dimensions mismatch");
  }
  const double n = sample.n();
  double trace_term = 0.0;
  for (const auto& y : sample.matrices()) {
    trace_term += (pair.psi1.matrix() * y * pair.psi2.matrix() * y.transpose())
                      .trace();
  }
  return n * sample.m2() * pair.psi1.log_det() +
         n * sample.m1() * pair.psi2.log_det() - trace_term;
}

double profile_objective(const DataSample& sample, const SpdMatrix& psi) {
  if (psi.dim() != sample.m2()) {
    throw DimensionError("profile_objective: psi dimension mismatch");
  }
  if (sample.m1() < sample.m2()) {
    throw DimensionError(
        "profile_objective: requires m1 >= m2 (transpose the sample)");
  }
  if (sample.n() * sample.m2() < sample.m1()) {
    throw DegenerateSample(
        "profile_objective: requires n*m2 >= m1 for a full-rank inner sum");
  }
  const Eigen::MatrixXd s = inner_sum_rows(sample, psi.matrix());
  Eigen::LLT<Eigen::MatrixXd> llt(s);
  if (llt.info() != Eigen::Success) {
    throw DegenerateSample("profile_objective: inner sum is not positive definite");
  }
  const double log_det_s =
      2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  return sample.m2() * log_det_s - sample.m1() * psi.log_det();
}

SpdMatrix profile_psi1(const DataSample& sample, const SpdMatrix& psi2) {
  if (psi2.dim() != sample.m2()) {
    throw DimensionError("profile_psi1: psi2 dimension mismatch");
  }
  const double scale = 1.0 / (static_cast<double>(sample.n()) * sample.m2());
  const Eigen::MatrixXd s = scale * inner_sum_rows(sample, psi2.matrix());
  Eigen::LLT<Eigen::MatrixXd> llt(s);
  if (llt.info() != Eigen::Success) {
    throw DegenerateSample("profile_psi1: inner sum is not positive definite");
  }
  const Eigen::MatrixXd inv =
      llt.solve(Eigen::MatrixXd::Identity(sample.m1(), sample.m1()));
  return SpdMatrix(symmetrized(inv));
}

SpdMatrix geodesic(const SpdMatrix& q0, const SpdMatrix& q1, double t) {
  if (q0.dim() != q1.dim()) {
    throw DimensionError("geodesic: endpoint dimensions differ");
  }
  if (!std::isfinite(t)) {
    throw InvalidArgument("geodesic: t must be finite");
  }
  const Eigen::MatrixXd root = spd_power(q0.matrix(), 0.5);
  const Eigen::MatrixXd inv_root = spd_power(q0.matrix(), -0.5);
  const Eigen::MatrixXd middle =
      spd_power(inv_root * q1.matrix() * inv_root, t);
  return SpdMatrix(symmetrized(root * middle * root));
}

DataSample group_transform(const DataSample& sample, const Eigen::MatrixXd& a,
                           const Eigen::MatrixXd& b, GroupTransformInfo* info) {
  if (a.rows() != sample.m1() || a.cols() != sample.m1() ||
      b.rows() != sample.m2() || b.cols() != sample.m2()) {
    throw DimensionError("group_transform: transform dimensions mismatch");
  }
  const auto condition = [](const Eigen::MatrixXd& m, const char* name) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(svd.singularValues().size() - 1);
    if (!(smin > smax * m.rows() * 1e-15)) {
      throw SingularInput(std::string("group_transform: ") + name +
                          " is numerically singular");
    }
    return smax / smin;
  };
  const double cond_a = condition(a, "A");
  const double cond_b = condition(b, "B");
  if (info != nullptr) {
    info->cond_a = cond_a;
    info->cond_b = cond_b;
    info->ill_conditioned = cond_a > 1e12 || cond_b > 1e12;
  }
  std::vector<Eigen::MatrixXd> out;
  out.reserve(sample.matrices().size());
  for (const auto& y : sample.matrices()) {
    out.push_back(a * y * b);
  }
  return DataSample(sample.m1(), sample.m2(), std::move(out));
}

SpdMatrix psi2_pullback(const Eigen::MatrixXd& b,
                        const SpdMatrix& psi2_transformed) {
  if (b.rows() != b.cols() || b.rows() != psi2_transformed.dim()) {
    throw DimensionError("psi2_pullback: dimension mismatch");
  }
  return SpdMatrix(symmetrized(b * psi2_transformed.matrix() * b.transpose()));
}

}  // namespace kronmle
