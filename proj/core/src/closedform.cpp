#include "kronmle/closedform.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "kronmle/core.hpp"
#include "kronmle/errors.hpp"
#include "kronmle/pencil.hpp"

namespace kronmle {

namespace {

// Exact for every value below 2^53.
double binom(int n, int k) {
  double v = 1.0;
  for (int i = 1; i <= k; ++i) v = v * (n - i + 1) / i;
  return v;
}

double sum_log_binom(int n) {
  double s = 0.0;
  for (int j = 0; j <= n; ++j) s += std::log(binom(n, j));
  return s;
}

}  // namespace

TwoByTwoReport classify_2x2(const Eigen::Matrix2d& y1,
                            const Eigen::Matrix2d& y2, double tol) {
  double det1 = y1.determinant();
  if (det1 == 0.0) throw SingularInput("first observation is singular");
  Eigen::Matrix2d w = y1.inverse() * y2;
  double tr = w.trace();
  double disc = tr * tr - 4.0 * w.determinant();
  double scale = std::max(1.0, w.squaredNorm());

  TwoByTwoReport rep;
  rep.discriminant = disc;
  if (disc < -tol * scale) {
    rep.kind = TwoByTwoCase::UniqueMax;
    double sign = w(0, 1) >= 0.0 ? 1.0 : -1.0;
    Eigen::Matrix2d psi;
    psi << w(0, 1), (w(1, 1) - w(0, 0)) / 2.0,
        (w(1, 1) - w(0, 0)) / 2.0, -w(1, 0);
    psi *= sign / (sign * psi.trace());
    rep.psi = SpdMatrix(psi);
    return rep;
  }
  if (disc > tol * scale) {
    rep.kind = TwoByTwoCase::NonUniqueMax;
    return rep;
  }
  Eigen::Matrix2d dev = w - 0.5 * tr * Eigen::Matrix2d::Identity();
  if (dev.norm() <= tol * std::max(1.0, w.norm())) {
    // Scalar pencil: the profile objective is constant.
    rep.kind = TwoByTwoCase::NonUniqueMax;
    return rep;
  }
  rep.kind = TwoByTwoCase::InfimumNotAttained;
  double a = tr / 2.0;
  rep.infimum = 4.0 * (std::log(std::abs(det1)) + std::log1p(a * a));
  return rep;
}

Eigen::VectorXd canonical_minimizer_diag(int m) {
  if (m < 1) throw DimensionError("minimizer needs m >= 1");
  Eigen::VectorXd diag(m);
  for (int j = 0; j < m; ++j) diag(j) = binom(m - 1, j);
  return diag;
}

double canonical_minimum_value(int m) {
  if (m < 2) throw DimensionError("value formula needs m >= 2");
  return m * sum_log_binom(m) - (m + 1) * sum_log_binom(m - 1);
}

double canonical_minimizer_inverse_value(int m) {
  if (m < 2) throw DimensionError("value formula needs m >= 2");
  double log_d = (m - 1) * std::log(static_cast<double>(m) / (m - 1)) -
                 sum_log_binom(m - 2);
  double log_e = -sum_log_binom(m - 1);
  return m * log_d - (m + 1) * log_e;
}

PrecisionPair mle_near_square(const DataSample& sample) {
  if (sample.n() != 2) throw DimensionError("closed form needs n = 2");
  if (sample.m1() != sample.m2() + 1)
    throw DimensionError("closed form needs m1 = m2 + 1");
  int m = sample.m2();
  PencilCanonicalization canon =
      canonicalize_pair(sample.matrices()[0], sample.matrices()[1]);
  Eigen::MatrixXd raw = canon.b * canonical_minimizer_diag(m).asDiagonal() *
                        canon.b.transpose();
  SpdMatrix psi2(0.5 * (raw + raw.transpose()));
  SpdMatrix psi1 = profile_psi1(sample, psi2);
  return PrecisionPair::make_normalized(psi1, psi2, Normalization::TraceOne);
}

Eigen::VectorXd nonunique_critical_diag(int m1, int m2,
                                        const Eigen::VectorXd& c) {
  int d = m1 - m2;
  if (!(d >= 2 && m2 >= d && m2 % d == 0))
    throw DimensionError("family needs (m1 - m2) | m2 and m1 - m2 >= 2");
  if (c.size() != d) throw InvalidArgument("one weight per chain required");
  if (c(0) != 1.0) throw InvalidArgument("leading weight must be 1");
  for (int j = 0; j < d; ++j)
    if (!(c(j) > 0.0)) throw InvalidArgument("weights must be positive");
  int l = m2 / d - 1;
  Eigen::VectorXd diag(m2);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k <= l; ++k) diag(j + k * d) = c(j) * binom(l, k);
  return diag;
}

}  // namespace kronmle
