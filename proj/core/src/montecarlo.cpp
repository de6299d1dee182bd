#include "kronmle/montecarlo.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <thread>
#include <vector>

#include "kronmle/errors.hpp"
#include "kronmle/flipflop.hpp"

namespace kronmle {

Eigen::MatrixXd standard_normal(int rows, int cols, Xoshiro256pp& rng) {
  if (rows < 1 || cols < 1)
    throw DimensionError("standard_normal needs positive dimensions");
  Eigen::MatrixXd g(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) g(i, j) = rng.gaussian();
  return g;
}

namespace {

Eigen::MatrixXd spd_sqrt(const SpdMatrix& s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s.matrix());
  Eigen::VectorXd roots = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * roots.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

MatrixNormalSampler::MatrixNormalSampler(const SpdMatrix& sigma1,
                                         const SpdMatrix& sigma2)
    : root1_(spd_sqrt(sigma1)), root2_(spd_sqrt(sigma2)) {}

Eigen::MatrixXd MatrixNormalSampler::sample(Xoshiro256pp& rng) const {
  Eigen::MatrixXd z = standard_normal(static_cast<int>(root1_.rows()),
                                      static_cast<int>(root2_.rows()), rng);
  return root1_ * z * root2_;
}

DataSample MatrixNormalSampler::sample_n(int n, Xoshiro256pp& rng) const {
  std::vector<Eigen::MatrixXd> mats;
  mats.reserve(n);
  for (int i = 0; i < n; ++i) mats.push_back(sample(rng));
  return DataSample(static_cast<int>(root1_.rows()),
                    static_cast<int>(root2_.rows()), std::move(mats));
}

RealEigsEstimate prob_real_eigs_2x2(long trials, std::uint64_t seed) {
  if (trials < 1) throw InvalidArgument("trials must be positive");
  long real_count = 0;
  long redraws = 0;
  for (long i = 0; i < trials; ++i) {
    Xoshiro256pp rng = trial_stream(seed, static_cast<std::uint64_t>(i));
    Eigen::Matrix2d y1;
    for (;;) {
      for (int j = 0; j < 2; ++j)
        for (int r = 0; r < 2; ++r) y1(r, j) = rng.gaussian();
      if (std::abs(y1.determinant()) >
          1e-12 * std::max(1.0, y1.squaredNorm()))
        break;
      ++redraws;
    }
    Eigen::Matrix2d y2;
    for (int j = 0; j < 2; ++j)
      for (int r = 0; r < 2; ++r) y2(r, j) = rng.gaussian();
    Eigen::Matrix2d w = y1.inverse() * y2;
    double tr = w.trace();
    if (tr * tr - 4.0 * w.determinant() >= 0.0) ++real_count;
  }
  RealEigsEstimate est;
  est.trials = trials;
  est.real_count = real_count;
  est.redraws = redraws;
  est.estimate = static_cast<double>(real_count) / trials;
  est.std_error = std::sqrt(est.estimate * (1.0 - est.estimate) / trials);
  return est;
}

double SimulationReport::frac_unique() const {
  return static_cast<double>(tally.unique_max) / trials;
}

double SimulationReport::frac_attained() const {
  return static_cast<double>(tally.unique_max + tally.non_unique_max) / trials;
}

SimulationReport empirical_threshold(int m1, int m2, int n, long trials,
                                     std::uint64_t seed,
                                     const FlipFlopConfig& config, int jobs) {
  if (m1 < 1 || m2 < 1) throw DimensionError("dimensions must be positive");
  if (n < 1) throw InvalidArgument("sample size must be positive");
  if (trials < 1) throw InvalidArgument("trials must be positive");
  if (jobs < 1) throw InvalidArgument("jobs must be positive");
  config.validate();

  auto run_range = [&](long lo, long hi, TrialTally& tally) {
    for (long i = lo; i < hi; ++i) {
      Xoshiro256pp rng = trial_stream(seed, static_cast<std::uint64_t>(i));
      std::vector<Eigen::MatrixXd> mats;
      mats.reserve(n);
      for (int s = 0; s < n; ++s)
        mats.push_back(standard_normal(m1, m2, rng));
      DataSample sample(m1, m2, std::move(mats));
      try {
        FitReport rep = fit(sample, config);
        switch (rep.status) {
          case FitStatus::UniqueMax: ++tally.unique_max; break;
          case FitStatus::NonUniqueMax: ++tally.non_unique_max; break;
          case FitStatus::Diverged: ++tally.diverged; break;
          case FitStatus::MaxIterations: ++tally.max_iterations; break;
        }
      } catch (const StepIllDefined&) {
        ++tally.step_ill_defined;
      } catch (const DegenerateSample&) {
        ++tally.degenerate;
      }
    }
  };

  SimulationReport report;
  report.m1 = m1;
  report.m2 = m2;
  report.n = n;
  report.trials = trials;
  report.seed = seed;
  int workers = static_cast<int>(std::min<long>(jobs, trials));
  if (workers <= 1) {
    run_range(0, trials, report.tally);
    return report;
  }
  std::vector<TrialTally> parts(workers);
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    long lo = trials * w / workers;
    long hi = trials * (w + 1) / workers;
    threads.emplace_back([&run_range, &parts, w, lo, hi] {
      run_range(lo, hi, parts[w]);
    });
  }
  for (auto& t : threads) t.join();
  for (const auto& p : parts) {
    report.tally.unique_max += p.unique_max;
    report.tally.non_unique_max += p.non_unique_max;
    report.tally.diverged += p.diverged;
    report.tally.max_iterations += p.max_iterations;
    report.tally.step_ill_defined += p.step_ill_defined;
    report.tally.degenerate += p.degenerate;
  }
  return report;
}

}  // namespace kronmle
