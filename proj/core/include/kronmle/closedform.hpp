#ifndef KRONMLE_CLOSEDFORM_HPP
#define KRONMLE_CLOSEDFORM_HPP

#include <Eigen/Dense>
#include <optional>

#include "kronmle/types.hpp"

namespace kronmle {

enum class TwoByTwoCase {
  UniqueMax,           // complex eigenvalues of Y1^{-1} Y2
  NonUniqueMax,        // distinct real eigenvalues, or a scalar pencil
  InfimumNotAttained,  // defective: one real eigenvalue, non-diagonalizable
};

/// Outcome for two 2 x 2 observations.  For the complex case `psi` is the
/// unit-trace minimizer of the profile objective; for the defective case
/// `infimum` is the unattained infimum of the profile objective.
struct TwoByTwoReport {
  TwoByTwoCase kind;
  double discriminant;  // tr(W)^2 - 4 det(W) for W = Y1^{-1} Y2
  std::optional<SpdMatrix> psi;
  std::optional<double> infimum;
};

/// Classifies a 2 x 2 pair by the eigenvalue discriminant of W = Y1^{-1} Y2.
/// disc < 0 gives the unique minimizer, in closed form proportional to
///   sign(w12) * [ w12, (w22 - w11)/2 ; (w22 - w11)/2, -w21 ].
/// disc > 0 gives a bounded objective with a family of minimizers.  disc = 0
/// (within tol, relative) is defective unless W is a scalar multiple of the
/// identity, in which case the objective is constant.  Requires invertible Y1.
[[nodiscard]] TwoByTwoReport classify_2x2(const Eigen::Matrix2d& y1,
                                          const Eigen::Matrix2d& y2,
                                          double tol = 1e-9);

/// Diagonal of the profile minimizer for the canonical stacked pair of shape
/// (m+1, m): entries binomial(m-1, j-1) for j = 1..m.
[[nodiscard]] Eigen::VectorXd canonical_minimizer_diag(int m);

/// Profile objective value at that minimizer.
[[nodiscard]] double canonical_minimum_value(int m);

/// Profile objective value at the inverse of the canonical minimizer,
///   m * log d(m) - (m+1) * log e(m)
/// with d(m) = (m/(m-1))^(m-1) / prod_j binomial(m-2, j-1) and
/// e(m) = 1 / prod_j binomial(m-1, j-1).
[[nodiscard]] double canonical_minimizer_inverse_value(int m);

/// Closed-form unique MLE for shape (m+1, m) at n = 2: canonicalizes the
/// pencil, places the binomial diagonal there, and pulls it back to the data
/// coordinates.  Returns the unit-trace pair.
[[nodiscard]] PrecisionPair mle_near_square(const DataSample& sample);

/// Family of critical points of the profile objective for the canonical
/// stacked pair of shape (m1, m2) with (m1 - m2) | m2 and m1 - m2 >= 2,
/// where the minimum is attained but not unique.  `c` has one positive
/// weight per chain (size m1 - m2, first entry 1); the returned stacked
/// diagonal has entry c_j * binomial(l, k-1) at position j + (k-1)(m1 - m2)
/// for l = m2/(m1-m2) - 1.  The objective value is the same for every c.
[[nodiscard]] Eigen::VectorXd nonunique_critical_diag(int m1, int m2,
                                                      const Eigen::VectorXd& c);

}  // namespace kronmle

#endif
