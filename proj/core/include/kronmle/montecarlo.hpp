#ifndef KRONMLE_MONTECARLO_HPP
#define KRONMLE_MONTECARLO_HPP

#include <Eigen/Dense>
#include <cstdint>

#include "kronmle/rng.hpp"
#include "kronmle/types.hpp"

namespace kronmle {

/// Matrix with independent standard normal entries.
[[nodiscard]] Eigen::MatrixXd standard_normal(int rows, int cols,
                                              Xoshiro256pp& rng);

/// Draws from the matrix normal law with row covariance sigma1 and column
/// covariance sigma2 as A Z B with symmetric square roots A, B and Z
/// standard normal.
class MatrixNormalSampler {
 public:
  MatrixNormalSampler(const SpdMatrix& sigma1, const SpdMatrix& sigma2);

  [[nodiscard]] Eigen::MatrixXd sample(Xoshiro256pp& rng) const;
  [[nodiscard]] DataSample sample_n(int n, Xoshiro256pp& rng) const;

 private:
  Eigen::MatrixXd root1_;
  Eigen::MatrixXd root2_;
};

/// Estimate of P(W has real eigenvalues) for W = Y1^{-1} Y2 with independent
/// standard normal 2 x 2 factors; the exact value is pi/4.  Draws with a
/// numerically singular Y1 are redrawn and counted.
struct RealEigsEstimate {
  long trials;
  long real_count;
  long redraws;
  double estimate;
  double std_error;  // binomial, sqrt(p(1-p)/trials)
};

[[nodiscard]] RealEigsEstimate prob_real_eigs_2x2(long trials,
                                                  std::uint64_t seed);

/// Outcome counts over repeated fits of fresh standard matrix normal
/// samples.  step_ill_defined counts shapes where the update does not exist
/// (n*m2 < m1 or n*m1 < m2); degenerate counts singular inner sums.
struct TrialTally {
  long unique_max = 0;
  long non_unique_max = 0;
  long diverged = 0;
  long max_iterations = 0;
  long step_ill_defined = 0;
  long degenerate = 0;
};

struct SimulationReport {
  int m1;
  int m2;
  int n;
  long trials;
  std::uint64_t seed;
  TrialTally tally;

  [[nodiscard]] double frac_unique() const;
  /// Fraction of trials where some maximum is attained.
  [[nodiscard]] double frac_attained() const;
};

/// Runs `trials` independent fits, trial i seeded by stream(seed, i), so the
/// tally is reproducible and independent of the number of worker threads.
[[nodiscard]] SimulationReport empirical_threshold(
    int m1, int m2, int n, long trials, std::uint64_t seed,
    const FlipFlopConfig& config = FlipFlopConfig{}, int jobs = 1);

}  // namespace kronmle

#endif
