#include "kronmle/minrank.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "kronmle/errors.hpp"
#include "kronmle/pencil.hpp"
#include "kronmle/rng.hpp"

namespace kronmle {

namespace {

struct Ext {
  int d, l, na, nb;
};

// Chain structure extended to the boundary m1 = 2*m2 (l = 0).
Ext ext_indices(int m1, int m2) {
  int d = m1 - m2;
  int l = (m2 + d - 1) / d - 1;
  return Ext{d, l, m2 - l * d, (l + 1) * d - m2};
}

int matrix_rank(const Eigen::MatrixXd& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const Eigen::VectorXd& sv = svd.singularValues();
  double cutoff = 1e-8 * sv(0);
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++rank;
  return rank;
}

// Rank of [Y_1 C, ..., Y_n C] for a selector C.
int selected_rank(const DataSample& sample, const Eigen::MatrixXd& c) {
  int m1 = sample.m1();
  int k = static_cast<int>(c.cols());
  Eigen::MatrixXd joined(m1, sample.n() * k);
  for (int i = 0; i < sample.n(); ++i)
    joined.middleCols(i * k, k) = sample.matrices()[i] * c;
  return matrix_rank(joined);
}

}  // namespace

MinRankCert r2(int m1, int m2, int k) {
  if (!(m2 < m1 && m1 <= 2 * m2))
    throw DimensionError("rank program needs m2 < m1 <= 2*m2");
  if (!(1 <= k && k <= m2))
    throw InvalidArgument("rank program needs 1 <= k <= m2");
  auto [d, l, na, nb] = ext_indices(m1, m2);

  // min a1 + b1 subject to k <= a1*(l+1) + b1*l, within box bounds; ties to
  // the smallest a1, then b1.
  int best_sum = -1, best_a1 = -1, best_b1 = -1;
  for (int a1 = 0; a1 <= na; ++a1)
    for (int b1 = 0; b1 <= nb; ++b1) {
      if (k > a1 * (l + 1) + b1 * l) continue;
      int sum = a1 + b1;
      if (best_sum < 0 || sum < best_sum ||
          (sum == best_sum && (a1 < best_a1 ||
                               (a1 == best_a1 && b1 < best_b1)))) {
        best_sum = sum;
        best_a1 = a1;
        best_b1 = b1;
      }
    }
  if (best_sum < 0) throw Error("rank program infeasible");

  // Fill the rest of the partition greedily under the leading parts; the
  // optimum always satisfies a1 + b1 <= k, and the remaining capacity
  // l*a1 + (l-1)*b1 covers what is left.
  std::vector<int> a(l + 1, 0), b(std::max(l, 0), 0);
  a[0] = best_a1;
  if (l >= 1 && nb > 0) b[0] = best_b1;
  int rem = k - best_a1 - best_b1;
  if (rem < 0) throw Error("rank program leading parts exceed k");
  for (int i = 1; i <= l && rem > 0; ++i) {
    a[i] = std::min(rem, a[0]);
    rem -= a[i];
  }
  for (int i = 1; i < l && rem > 0; ++i) {
    b[i] = std::min(rem, b[0]);
    rem -= b[i];
  }
  if (rem != 0) throw Error("rank program partition fill failed");

  // Witness blocks alternate widths na, nb, ..., na; block 2i-1 holds an
  // identity of size a_i, block 2i one of size b_i, rows stacked in order
  // (all a rows first).
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(k, m2);
  int row = 0;
  int col = 0;
  for (int i = 0; i <= l; ++i) {
    for (int j = 0; j < a[i]; ++j) x(row + j, col + j) = 1.0;
    row += a[i];
    col += na;
    if (i < l) col += nb;
  }
  col = na;
  for (int i = 0; i < l; ++i) {
    for (int j = 0; j < b[i]; ++j) x(row + j, col + j) = 1.0;
    row += b[i];
    col += na + nb;
  }

  MinRankCert cert;
  cert.m1 = m1;
  cert.m2 = m2;
  cert.k = k;
  cert.r = k + best_sum;
  cert.a1 = best_a1;
  cert.b1 = best_b1;
  cert.witness = x;
  return cert;
}

int r2_square(int m, int k, EigenCase eigen_case) {
  if (m < 2) throw DimensionError("square rank case needs m >= 2");
  if (!(1 <= k && k < m))
    throw InvalidArgument("square rank case needs 1 <= k < m");
  if (eigen_case == EigenCase::HasRealEigenvalue || k % 2 == 0) return k;
  return k + 1;
}

MleVerdict SValueReport::verdict(std::optional<EigenCase> eigen_case) const {
  int v;
  if (const int* plain = std::get_if<int>(&value)) {
    v = *plain;
  } else {
    if (!eigen_case)
      throw InvalidArgument(
          "value depends on the data's eigenvalue configuration");
    const auto& cond = std::get<ConditionalValue>(value);
    v = *eigen_case == EigenCase::HasRealEigenvalue ? cond.real_case
                                                    : cond.complex_case;
  }
  if (v > 0) return MleVerdict::UniqueMLE;
  if (v == 0) return MleVerdict::NonUniqueMLE;
  return MleVerdict::NoMLE;
}

SValueReport s2(int m1, int m2) {
  if (!(2 <= m2 && m2 <= m1 && m1 <= 2 * m2))
    throw DimensionError("two-sample statistic needs 2 <= m2 <= m1 <= 2*m2");
  SValueReport rep;
  rep.m1 = m1;
  rep.m2 = m2;
  rep.n = 2;

  if (m1 == m2) {
    if (m1 == 2) {
      rep.value = ConditionalValue{0, 2};
      rep.minimizing_k = {1};
      return rep;
    }
    // Even k always gives rank k, so the minimum m*k - m*k = 0 is hit in
    // both eigenvalue cases.
    rep.value = 0;
    for (int k = 2; k < m2; k += 2) rep.minimizing_k.push_back(k);
    return rep;
  }

  auto [d, l, na, nb] = ext_indices(m1, m2);
  if (m1 == m2 + 1) {
    rep.value = 1;
    rep.minimizing_k = {m2 - 1};
    return rep;
  }
  if (m2 % d == 0) {
    rep.value = 0;
    for (int k = m2 / d; k < m2; k += m2 / d) rep.minimizing_k.push_back(k);
    return rep;
  }
  rep.value = -na * nb;
  rep.minimizing_k = {(l + 1) * na};
  return rep;
}

SValueReport sn_m2_equals_2(int m1, int n, std::optional<EigenCase> eigen_case) {
  if (m1 < 2) throw DimensionError("two-column statistic needs m1 >= 2");
  if (!(2 * n > m1)) throw DimensionError("two-column statistic needs n > m1/2");
  SValueReport rep;
  rep.m1 = m1;
  rep.m2 = 2;
  rep.n = n;
  rep.minimizing_k = {1};
  if (n < m1) {
    rep.value = 2 * n - m1;
  } else if (n > m1) {
    rep.value = m1;
  } else if (eigen_case) {
    rep.value = *eigen_case == EigenCase::HasRealEigenvalue ? m1 - 2 : m1;
  } else {
    rep.value = ConditionalValue{m1 - 2, m1};
  }
  return rep;
}

EigenCase pencil_eigen_case(const Eigen::MatrixXd& y1,
                            const Eigen::MatrixXd& y2) {
  if (y1.rows() != y1.cols() || y1.rows() != y2.rows() ||
      y1.cols() != y2.cols())
    throw DimensionError("eigenvalue case needs a square pair");
  Eigen::FullPivLU<Eigen::MatrixXd> lu(y1);
  if (!lu.isInvertible()) throw SingularInput("first factor is singular");
  Eigen::EigenSolver<Eigen::MatrixXd> es(lu.solve(y2), false);
  if (es.info() != Eigen::Success)
    throw NonGenericPencil("eigenvalue iteration failed");
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i).imag() == 0.0) return EigenCase::HasRealEigenvalue;
  return EigenCase::AllComplex;
}

EigenCase stacked_columns_eigen_case(const DataSample& sample) {
  if (sample.m2() != 2)
    throw DimensionError("column stacking needs two-column observations");
  if (sample.n() != sample.m1())
    throw DimensionError("column stacking needs n = m1");
  int m = sample.m1();
  Eigen::MatrixXd c1(m, m), c2(m, m);
  for (int i = 0; i < m; ++i) {
    c1.col(i) = sample.matrices()[i].col(0);
    c2.col(i) = sample.matrices()[i].col(1);
  }
  return pencil_eigen_case(c1, c2);
}

int numeric_min_rank_search(const DataSample& sample, int k, int restarts,
                            std::uint64_t seed) {
  int m1 = sample.m1();
  int m2 = sample.m2();
  if (!(1 <= k && k <= m2))
    throw InvalidArgument("selector width must satisfy 1 <= k <= m2");
  int best = std::min(m1, sample.n() * k);

  // Structured candidate through the pencil reduction: for canonical data
  // the stacked rank of the 0-1 witness is met exactly, and a generic pair
  // reaches it with the selector pushed through the basis change.
  if (sample.n() == 2 && m2 < m1 && m1 <= 2 * m2 && k < m2) {
    try {
      PencilCanonicalization canon = canonicalize_pair(
          sample.matrices()[0], sample.matrices()[1]);
      MinRankCert cert = r2(m1, m2, k);
      Eigen::MatrixXd c = canon.b * cert.witness.transpose();
      best = std::min(best, selected_rank(sample, c));
    } catch (const NonGenericPencil&) {
    }
  }

  for (int trial = 0; trial < restarts; ++trial) {
    Xoshiro256pp rng = trial_stream(seed, static_cast<std::uint64_t>(trial));

    Eigen::MatrixXd gauss(m2, k);
    for (int j = 0; j < k; ++j)
      for (int i = 0; i < m2; ++i) gauss(i, j) = rng.gaussian();
    best = std::min(best, selected_rank(sample, gauss));

    // Coordinate selector: a k-subset of coordinates, improved by single
    // swaps until no swap lowers the rank.
    std::vector<int> order(m2);
    std::iota(order.begin(), order.end(), 0);
    for (int i = m2 - 1; i > 0; --i)
      std::swap(order[i], order[static_cast<int>(rng.uniform01() * (i + 1))]);
    std::vector<int> chosen(order.begin(), order.begin() + k);
    auto subset_rank = [&](const std::vector<int>& s) {
      Eigen::MatrixXd c = Eigen::MatrixXd::Zero(m2, k);
      for (int j = 0; j < k; ++j) c(s[j], j) = 1.0;
      return selected_rank(sample, c);
    };
    int current = subset_rank(chosen);
    bool improved = true;
    while (improved && current > 0) {
      improved = false;
      for (int j = 0; j < k && !improved; ++j)
        for (int cand = 0; cand < m2 && !improved; ++cand) {
          if (std::find(chosen.begin(), chosen.end(), cand) != chosen.end())
            continue;
          std::vector<int> next = chosen;
          next[j] = cand;
          int rank = subset_rank(next);
          if (rank < current) {
            chosen = next;
            current = rank;
            improved = true;
          }
        }
    }
    best = std::min(best, current);
  }
  return best;
}

std::string s2_table_csv(int max_m1) {
  if (max_m1 < 2) throw InvalidArgument("table needs max_m1 >= 2");
  std::ostringstream out;
  out << "m1";
  for (int m2 = 2; m2 <= max_m1; ++m2) out << ",m2=" << m2;
  out << "\n";
  for (int m1 = 2; m1 <= max_m1; ++m1) {
    out << m1;
    for (int m2 = 2; m2 <= max_m1; ++m2) {
      out << ",";
      if (m2 > m1 || m1 > 2 * m2) continue;
      SValueReport rep = s2(m1, m2);
      if (rep.conditional()) {
        const auto& cond = std::get<ConditionalValue>(rep.value);
        out << cond.real_case << "|" << cond.complex_case;
      } else {
        out << std::get<int>(rep.value);
      }
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace kronmle
