#include "kronmle/flipflop.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <optional>
#include <unsupported/Eigen/KroneckerProduct>
#include <vector>

#include "kronmle/core.hpp"
#include "kronmle/errors.hpp"
#include "kronmle/minrank.hpp"
#include "kronmle/rng.hpp"
#include "kronmle/thresholds.hpp"

namespace kronmle {

namespace {

SpdMatrix random_spd(int dim, Xoshiro256pp& rng) {
  Eigen::MatrixXd g(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i) g(i, j) = rng.gaussian();
  return SpdMatrix(g * g.transpose() + Eigen::MatrixXd::Identity(dim, dim));
}

SpdMatrix initial_psi2(const DataSample& sample, const FlipFlopConfig& config) {
  switch (config.init) {
    case InitKind::Identity:
      return SpdMatrix(Eigen::MatrixXd::Identity(sample.m2(), sample.m2()));
    case InitKind::RandomSpd: {
      Xoshiro256pp rng = trial_stream(config.init_seed, 0);
      return random_spd(sample.m2(), rng);
    }
    case InitKind::Given:
      return SpdMatrix(*config.init_value);
  }
  throw InvalidArgument("unknown initialization");
}

// Iteration only; status is Converged (recorded as UniqueMax for the
// moment), Diverged, or MaxIterations.  `pair` holds the last full update.
struct RawFit {
  FitStatus status = FitStatus::MaxIterations;
  std::optional<PrecisionPair> pair;
  std::vector<double> g_trace;
  std::vector<double> delta_trace;
  int iterations = 0;
};

RawFit run_iteration(const DataSample& sample, const FlipFlopConfig& config,
                     const SpdMatrix& start) {
  long n = sample.n();
  if (n * sample.m2() < sample.m1() || n * sample.m1() < sample.m2())
    throw StepIllDefined("flip-flop update needs n*m2 >= m1 and n*m1 >= m2");
  RawFit raw;
  SpdMatrix psi2 = start;
  double g_prev = profile_objective(sample, psi2);
  raw.g_trace.push_back(g_prev);
  for (int iter = 1; iter <= config.max_iterations; ++iter) {
    PrecisionPair pair = flip_flop_step(sample, psi2);
    psi2 = SpdMatrix(pair.psi2.matrix() / pair.psi2.matrix().trace());
    double g = profile_objective(sample, psi2);
    double delta = g - g_prev;
    raw.g_trace.push_back(g);
    raw.delta_trace.push_back(delta);
    raw.iterations = iter;
    raw.pair = std::move(pair);
    if (std::abs(delta) <= config.rel_tol * (1.0 + std::abs(g))) {
      raw.status = FitStatus::UniqueMax;
      return raw;
    }
    int w = config.divergence_window;
    if (static_cast<int>(raw.delta_trace.size()) >= w) {
      bool steady = true;
      for (int j = 0; j < w && steady; ++j)
        steady = raw.delta_trace[raw.delta_trace.size() - 1 - j] <=
                 -config.divergence_slope;
      if (steady) {
        raw.status = FitStatus::Diverged;
        raw.pair.reset();
        return raw;
      }
    }
    g_prev = g;
  }
  raw.status = FitStatus::MaxIterations;
  return raw;
}

// Relative Frobenius distance between unit-norm Kronecker products of the
// two pairs; the factored route avoids materializing large products and
// equals the direct formula on the factors' scales.
double kron_dispersion(const PrecisionPair& p, const PrecisionPair& q) {
  if (p.psi1.dim() * p.psi2.dim() <= 64) {
    Eigen::MatrixXd kp =
        Eigen::kroneckerProduct(p.psi2.matrix(), p.psi1.matrix()).eval();
    Eigen::MatrixXd kq =
        Eigen::kroneckerProduct(q.psi2.matrix(), q.psi1.matrix()).eval();
    kp /= kp.norm();
    kq /= kq.norm();
    return (kp - kq).norm();
  }
  double np = p.psi1.matrix().norm() * p.psi2.matrix().norm();
  double nq = q.psi1.matrix().norm() * q.psi2.matrix().norm();
  // |Kp - Kq|^2 = 2 - 2 <kron p, kron q> for unit-norm products, and the
  // inner product of Kronecker products factors.
  double cross = (p.psi1.matrix().cwiseProduct(q.psi1.matrix())).sum() *
                 (p.psi2.matrix().cwiseProduct(q.psi2.matrix())).sum() /
                 (np * nq);
  return std::sqrt(std::max(0.0, 2.0 - 2.0 * cross));
}

// UniqueMax/NonUniqueMax for a converged run, or Diverged when exact theory
// says no maximum exists for this shape and sample size.
FitStatus classify_converged(const DataSample& oriented,
                             const FlipFlopConfig& config,
                             const PrecisionPair& estimate) {
  int big = oriented.m1();
  int small = oriented.m2();
  int n = oriented.n();

  auto from_verdict = [](MleVerdict v) {
    switch (v) {
      case MleVerdict::UniqueMLE: return FitStatus::UniqueMax;
      case MleVerdict::NonUniqueMLE: return FitStatus::NonUniqueMax;
      case MleVerdict::NoMLE: return FitStatus::Diverged;
    }
    return FitStatus::Diverged;
  };

  // Exact data-conditional statistic.
  try {
    if (n == 2 && small >= 2 && big <= 2 * small) {
      SValueReport rep = s2(big, small);
      std::optional<EigenCase> ec;
      if (rep.conditional())
        ec = pencil_eigen_case(oriented.matrices()[0], oriented.matrices()[1]);
      return from_verdict(rep.verdict(ec));
    }
    if (small == 2 && 2 * n > big) {
      std::optional<EigenCase> ec;
      if (n == big) ec = stacked_columns_eigen_case(oriented);
      return from_verdict(sn_m2_equals_2(big, n, ec).verdict(ec));
    }
  } catch (const Error&) {
    // Degenerate data for the exact route; fall through.
  }

  // Exact thresholds, or their bracket when no exact value is known.
  ThresholdReport th = thresholds(big, small);
  if (th.exact()) {
    if (n >= *th.unique) return FitStatus::UniqueMax;
    if (n >= *th.exists) return FitStatus::NonUniqueMax;
    return FitStatus::Diverged;
  }
  if (n >= th.upper) return FitStatus::UniqueMax;
  if (n < th.lower) return FitStatus::Diverged;

  // No exact information: rerun from five random starts and compare limits.
  for (int j = 1; j <= 5; ++j) {
    Xoshiro256pp rng = trial_stream(config.init_seed, j);
    RawFit raw =
        run_iteration(oriented, config, random_spd(oriented.m2(), rng));
    if (raw.status != FitStatus::UniqueMax) continue;
    if (kron_dispersion(*raw.pair, estimate) > 1e-6)
      return FitStatus::NonUniqueMax;
  }
  return FitStatus::UniqueMax;
}

}  // namespace

PrecisionPair flip_flop_step(const DataSample& sample, const SpdMatrix& psi2) {
  if (psi2.dim() != sample.m2())
    throw DimensionError("flip_flop_step: psi2 dimension mismatch");
  long n = sample.n();
  if (n * sample.m2() < sample.m1() || n * sample.m1() < sample.m2())
    throw StepIllDefined(
        "flip-flop update needs n*m2 >= m1 and n*m1 >= m2");
  SpdMatrix psi1 = profile_psi1(sample, psi2);

  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(sample.m2(), sample.m2());
  for (const auto& y : sample.matrices())
    sum += y.transpose() * psi1.matrix() * y;
  Eigen::MatrixXd scaled = (0.5 / (static_cast<double>(n) * sample.m1())) *
                           (sum + sum.transpose());
  Eigen::LLT<Eigen::MatrixXd> llt(scaled);
  if (llt.info() != Eigen::Success)
    throw DegenerateSample("flip_flop_step: column sum is not positive definite");
  Eigen::MatrixXd inv =
      llt.solve(Eigen::MatrixXd::Identity(sample.m2(), sample.m2()));
  return PrecisionPair{psi1, SpdMatrix(0.5 * (inv + inv.transpose()))};
}

FitReport fit(const DataSample& sample, const FlipFlopConfig& config) {
  config.validate();
  bool flipped = sample.m1() < sample.m2();
  DataSample oriented = flipped ? sample.transposed() : sample;
  FlipFlopConfig oriented_config = config;
  if (flipped && config.init == InitKind::Given)
    throw InvalidArgument(
        "given start requires m1 >= m2; transpose the sample first");

  RawFit raw =
      run_iteration(oriented, oriented_config, initial_psi2(oriented, config));

  FitReport report;
  report.g_trace = std::move(raw.g_trace);
  report.delta_trace = std::move(raw.delta_trace);
  report.iterations = raw.iterations;
  report.status = raw.status;
  if (raw.status != FitStatus::UniqueMax) return report;

  report.status = classify_converged(oriented, config, *raw.pair);
  if (report.status == FitStatus::Diverged) return report;

  PrecisionPair pair = *raw.pair;
  if (flipped) std::swap(pair.psi1, pair.psi2);
  if (config.normalization != Normalization::None)
    pair = PrecisionPair::make_normalized(pair.psi1, pair.psi2,
                                          config.normalization);
  report.estimate = std::move(pair);
  return report;
}

}  // namespace kronmle
