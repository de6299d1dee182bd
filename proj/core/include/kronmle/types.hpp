#ifndef KRONMLE_TYPES_HPP
#define KRONMLE_TYPES_HPP

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "kronmle/errors.hpp"

namespace kronmle {

/// Symmetric positive definite matrix.  Construction validates symmetry
/// (1e-12 relative tolerance), averages the input with its transpose, and
/// requires a successful Cholesky factorization; the log-determinant is
/// taken from the factorization's pivots and cached.
class SpdMatrix {
public:
  explicit SpdMatrix(const Eigen::MatrixXd& entries);

  [[nodiscard]] int dim() const { return static_cast<int>(m_.rows()); }
  [[nodiscard]] const Eigen::MatrixXd& matrix() const { return m_; }
  [[nodiscard]] double log_det() const { return log_det_; }

private:
  Eigen::MatrixXd m_;
  double log_det_;
};

/// How a precision pair resolves the scaling indeterminacy
/// (c * psi1, psi2 / c) that leaves the likelihood unchanged.
enum class Normalization { TraceOne, LeadingEntryOne, None };

/// Pair of row- and column-precision matrices.
struct PrecisionPair {
  SpdMatrix psi1;
  SpdMatrix psi2;
  Normalization normalization = Normalization::None;

  /// Rescales (c * psi1, psi2 / c) so psi2 satisfies the requested
  /// convention; the Kronecker product is unchanged.
  [[nodiscard]] static PrecisionPair make_normalized(const SpdMatrix& psi1,
                                                     const SpdMatrix& psi2,
                                                     Normalization norm);
};

/// A sample of n observed m1 x m2 matrices.  All entries must be finite.
class DataSample {
public:
  DataSample(int m1, int m2, std::vector<Eigen::MatrixXd> matrices);

  [[nodiscard]] int m1() const { return m1_; }
  [[nodiscard]] int m2() const { return m2_; }
  [[nodiscard]] int n() const { return static_cast<int>(matrices_.size()); }
  [[nodiscard]] const std::vector<Eigen::MatrixXd>& matrices() const {
    return matrices_;
  }

  /// Same sample with every observation transposed (swaps the roles of the
  /// two covariance factors).
  [[nodiscard]] DataSample transposed() const;

private:
  int m1_;
  int m2_;
  std::vector<Eigen::MatrixXd> matrices_;
};

enum class FitStatus { UniqueMax, NonUniqueMax, Diverged, MaxIterations };

/// Result of an alternating-maximization fit.
struct FitReport {
  FitStatus status;
  std::optional<PrecisionPair> estimate;  // absent when status == Diverged
  std::vector<double> g_trace;      // objective value per iteration, g_trace[0] at init
  std::vector<double> delta_trace;  // g_trace[i+1] - g_trace[i]
  int iterations = 0;
};

enum class InitKind { Identity, RandomSpd, Given };

/// Configuration for the alternating-maximization fit.
struct FlipFlopConfig {
  int max_iterations = 500;
  double rel_tol = 1e-10;       // stop when |delta g| <= rel_tol * (1 + |g|)
  int divergence_window = 20;   // trailing iterations inspected for divergence
  double divergence_slope = 1e-6;  // every delta <= -slope over the window
  InitKind init = InitKind::Identity;
  std::uint64_t init_seed = 0;               // for InitKind::RandomSpd
  std::optional<Eigen::MatrixXd> init_value; // for InitKind::Given
  Normalization normalization = Normalization::TraceOne;

  void validate() const;
};

}  // namespace kronmle

#endif
