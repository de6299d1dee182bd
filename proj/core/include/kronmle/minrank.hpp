#ifndef KRONMLE_MINRANK_HPP
#define KRONMLE_MINRANK_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "kronmle/types.hpp"

namespace kronmle {

/// Certificate for the minimal stacked rank over rank-k column selectors at
/// n = 2 in the regime m2 < m1 < 2*m2:
///   r = min rank(Y1*X, Y2*X) over full-rank m2 x k selectors,
/// realized by an explicit 0-1 witness (stored as k x m2, acting on the
/// canonical stacked pair from the left).
struct MinRankCert {
  int m1;
  int m2;
  int k;
  int r;
  int a1;  // leading part sizes of the optimizing partition
  int b1;
  Eigen::MatrixXd witness;  // k x m2, entries 0/1
};

/// Solves the integer program
///   r = k + min{a1 + b1 : k <= a1*(l+1) + b1*l, 0 <= a1 <= n_a, 0 <= b1 <= n_b},
/// ties broken by smallest a1 then smallest b1, and builds the witness.
[[nodiscard]] MinRankCert r2(int m1, int m2, int k);

/// Whether the pencil's square-case behaviour depends on eigenvalues of
/// W = Y1^{-1} Y2 having a real member.
enum class EigenCase { HasRealEigenvalue, AllComplex };

/// Eigenvalue case of W = Y1^{-1} Y2 for a square pair.
[[nodiscard]] EigenCase pencil_eigen_case(const Eigen::MatrixXd& y1,
                                          const Eigen::MatrixXd& y2);

/// Eigenvalue case of W = C1^{-1} C2 where C_j collects column j of every
/// observation; needs m2 = 2 and n = m1.
[[nodiscard]] EigenCase stacked_columns_eigen_case(const DataSample& sample);

/// Minimal stacked rank in the square case m1 = m2 = m at n = 2:
/// k when W has a real eigenvalue or k is even, k + 1 otherwise.
[[nodiscard]] int r2_square(int m, int k, EigenCase eigen_case);

enum class MleVerdict { UniqueMLE, NonUniqueMLE, NoMLE };

/// Value that depends on the eigenvalue configuration of the data.
struct ConditionalValue {
  int real_case;
  int complex_case;
};

/// The sharp existence/uniqueness statistic
///   S = min over 1 <= k < m2 of { m2 * r - m1 * k }:
/// positive iff the MLE exists uniquely, zero iff maxima exist but are not
/// unique, negative iff the likelihood is unbounded.
struct SValueReport {
  int m1;
  int m2;
  int n;
  std::variant<int, ConditionalValue> value;
  std::vector<int> minimizing_k;

  [[nodiscard]] bool conditional() const {
    return std::holds_alternative<ConditionalValue>(value);
  }
  /// Verdict from the sign of the value; a conditional value needs the
  /// eigenvalue case of the data to pick a branch.
  [[nodiscard]] MleVerdict verdict(
      std::optional<EigenCase> eigen_case = std::nullopt) const;
};

/// S at n = 2 for 2*m2 >= m1 >= m2 >= 2.  Closed forms:
///   m1 = m2 + 1            -> 1 (minimum at k = m2 - 1),
///   (m1-m2) | m2, m1 > m2+1 -> 0 (minima at multiples of m2/(m1-m2)),
///   otherwise              -> -n_a * n_b (minimum at k = (l+1)*n_a);
/// square m1 = m2: 0 for m >= 3; for m = 2 conditionally 0 (real
/// eigenvalues) or 2 (complex).  Off the square/boundary cases the value is
/// also recomputed by enumeration and must agree.
[[nodiscard]] SValueReport s2(int m1, int m2);

/// S for two-column observations (m2 = 2) in the regime n > m1/2 >= 1:
/// 2n - m1 when n < m1, m1 when n > m1, and for m1 = n = m conditionally
/// m (no real eigenvalue) or m - 2.
[[nodiscard]] SValueReport sn_m2_equals_2(
    int m1, int n, std::optional<EigenCase> eigen_case = std::nullopt);

/// Randomized upper bound on min rank(Y1*X, ..., Yn*X) over full-rank
/// m2 x k selectors X for arbitrary data.  Combines structured 0-1
/// candidates (mapped through a pencil reduction when n = 2 and
/// m2 < m1 < 2*m2) with coordinate-descent restarts.  Deterministic for a
/// fixed seed.
[[nodiscard]] int numeric_min_rank_search(const DataSample& sample, int k,
                                          int restarts, std::uint64_t seed);

/// CSV table of s2 values for 2 <= m2 <= m1 <= max_m1.  Cells with
/// m1 > 2*m2 have no finite maximum at n = 2 and are left empty; the 2x2
/// conditional cell renders as "0|2".
[[nodiscard]] std::string s2_table_csv(int max_m1);

}  // namespace kronmle

#endif
