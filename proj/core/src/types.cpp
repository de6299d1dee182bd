#include "kronmle/types.hpp"

#include <Eigen/Cholesky>
#include <cmath>

namespace kronmle {

SpdMatrix::SpdMatrix(const Eigen::MatrixXd& entries) {
  if (entries.rows() != entries.cols() || entries.rows() == 0) {
    throw DimensionError("SpdMatrix: matrix must be square and non-empty");
  }
  for (Eigen::Index j = 0; j < entries.cols(); ++j) {
    for (Eigen::Index i = 0; i < entries.rows(); ++i) {
      if (!std::isfinite(entries(i, j))) {
        throw InvalidArgument("SpdMatrix: non-finite entry");
      }
    }
  }
  const double scale = std::max(1.0, entries.cwiseAbs().maxCoeff());
  const double asym = (entries - entries.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale) {
    throw NotPositiveDefinite("SpdMatrix: matrix is not symmetric");
  }
  m_ = 0.5 * (entries + entries.transpose());
  Eigen::LLT<Eigen::MatrixXd> llt(m_);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefinite("SpdMatrix: Cholesky factorization failed");
  }
  log_det_ = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  if (!std::isfinite(log_det_)) {
    throw NotPositiveDefinite("SpdMatrix: log-determinant is not finite");
  }
}

PrecisionPair PrecisionPair::make_normalized(const SpdMatrix& psi1,
                                             const SpdMatrix& psi2,
                                             Normalization norm) {
  if (norm == Normalization::None) {
    return PrecisionPair{psi1, psi2, norm};
  }
  double c = 0.0;
  if (norm == Normalization::TraceOne) {
    c = psi2.matrix().trace();
  } else {
    c = psi2.matrix()(0, 0);
  }
  if (!(c > 0.0)) {
    throw InvalidArgument("PrecisionPair: normalization scale must be positive");
  }
  return PrecisionPair{SpdMatrix(psi1.matrix() * c),
                       SpdMatrix(psi2.matrix() / c), norm};
}

DataSample::DataSample(int m1, int m2, std::vector<Eigen::MatrixXd> matrices)
    : m1_(m1), m2_(m2), matrices_(std::move(matrices)) {
  if (m1_ < 1 || m2_ < 1) {
    throw DimensionError("DataSample: dimensions must be positive");
  }
  if (matrices_.empty()) {
    throw DimensionError("DataSample: sample must contain at least one matrix");
  }
  for (const auto& y : matrices_) {
    if (y.rows() != m1_ || y.cols() != m2_) {
      throw DimensionError("DataSample: observation shape mismatch");
    }
    for (Eigen::Index j = 0; j < y.cols(); ++j) {
      for (Eigen::Index i = 0; i < y.rows(); ++i) {
        if (!std::isfinite(y(i, j))) {
          throw InvalidArgument("DataSample: non-finite entry");
        }
      }
    }
  }
}

DataSample DataSample::transposed() const {
  std::vector<Eigen::MatrixXd> out;
  out.reserve(matrices_.size());
  for (const auto& y : matrices_) {
    out.push_back(y.transpose());
  }
  return DataSample(m2_, m1_, std::move(out));
}

void FlipFlopConfig::validate() const {
  if (max_iterations < 1) {
    throw InvalidArgument("FlipFlopConfig: max_iterations must be >= 1");
  }
  if (!(rel_tol >= 0.0)) {
    throw InvalidArgument("FlipFlopConfig: rel_tol must be >= 0");
  }
  if (divergence_window < 2) {
    throw InvalidArgument("FlipFlopConfig: divergence_window must be >= 2");
  }
  if (!(divergence_slope > 0.0)) {
    throw InvalidArgument("FlipFlopConfig: divergence_slope must be > 0");
  }
  if (init == InitKind::Given && !init_value.has_value()) {
    throw InvalidArgument("FlipFlopConfig: init_value required for Given init");
  }
}

}  // namespace kronmle
