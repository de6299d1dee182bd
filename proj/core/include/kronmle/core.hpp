#ifndef KRONMLE_CORE_HPP
#define KRONMLE_CORE_HPP

#include <Eigen/Dense>

#include "kronmle/types.hpp"

namespace kronmle {

/// Twice the log-likelihood of the sample under the precision pair, up to a
/// fixed additive constant:
///   n*m2*logdet(psi1) + n*m1*logdet(psi2) - tr(psi1 * sum_i Y_i psi2 Y_i^T).
/// Invariant under (c*psi1, psi2/c).
[[nodiscard]] double log_likelihood(const DataSample& sample,
                                    const PrecisionPair& pair);

/// Negated profiled objective
///   g(psi) = m2*logdet(sum_i Y_i psi Y_i^T) - m1*logdet(psi),
/// minimized exactly where the likelihood is maximized.  Requires
/// n*m2 >= m1 >= m2 and a full-rank inner sum.  Scale invariant.
[[nodiscard]] double profile_objective(const DataSample& sample,
                                       const SpdMatrix& psi);

/// Row precision maximizing the likelihood for a fixed column precision:
///   ((1/(n*m2)) * sum_i Y_i psi2 Y_i^T)^{-1}.
[[nodiscard]] SpdMatrix profile_psi1(const DataSample& sample,
                                     const SpdMatrix& psi2);

/// Point at parameter t on the geodesic from q0 to q1 in the positive
/// definite cone:  q0^(1/2) (q0^(-1/2) q1 q0^(-1/2))^t q0^(1/2).
/// t may lie outside [0, 1] (the geodesic extends to a line).
[[nodiscard]] SpdMatrix geodesic(const SpdMatrix& q0, const SpdMatrix& q1,
                                 double t);

/// Diagnostics filled by group_transform.
struct GroupTransformInfo {
  double cond_a = 0.0;
  double cond_b = 0.0;
  bool ill_conditioned = false;  // either condition number exceeds 1e12
};

/// Transforms every observation Y_i to A * Y_i * B.  A and B must be
/// invertible; ill conditioning beyond 1e12 is reported through info.
/// The likelihood surface translates: maxima map through the substitution
/// psi2 -> B psi2 B^T (and psi1 -> A^T psi1 A on the other factor).
[[nodiscard]] DataSample group_transform(const DataSample& sample,
                                         const Eigen::MatrixXd& a,
                                         const Eigen::MatrixXd& b,
                                         GroupTransformInfo* info = nullptr);

/// Maps a column-precision optimum for data transformed by (A, B) back to
/// an optimum for the original data: psi2 -> B psi2 B^T.
[[nodiscard]] SpdMatrix psi2_pullback(const Eigen::MatrixXd& b,
                                      const SpdMatrix& psi2_transformed);

}  // namespace kronmle

#endif
