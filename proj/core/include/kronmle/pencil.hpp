#ifndef KRONMLE_PENCIL_HPP
#define KRONMLE_PENCIL_HPP

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "kronmle/errors.hpp"

namespace kronmle {

/// Combinatorial structure of a generic tall pencil with m2 < m1 < 2*m2:
/// l = ceil(m2/(m1-m2)) - 1, n_a = (l+1)*m2 - l*m1, n_b = (l+1)*m1 - (l+2)*m2.
/// Identities: (l+1)*n_a + l*n_b = m2 and (l+2)*n_a + (l+1)*n_b = m1.
struct StructureIndices {
  int l;
  int n_a;
  int n_b;
};

[[nodiscard]] StructureIndices structure_indices(int m1, int m2);

/// Invertible A (m1 x m1) and B (m2 x m2) reducing a generic pair to the
/// stacked identity form A*Y1*B = [I; 0], A*Y2*B = [0; I].
struct PencilCanonicalization {
  Eigen::MatrixXd a;
  Eigen::MatrixXd b;
  int l;
  int n_a;
  int n_b;
  double residual;  // max-norm error of the two reconstructed identities
};

[[nodiscard]] PencilCanonicalization canonicalize_pair(
    const Eigen::MatrixXd& y1, const Eigen::MatrixXd& y2, double tol = 1e-8);

/// One diagonal block of a real Jordan form: a real eigenvalue (1x1) or a
/// complex pair re +/- i*im realized as the 2x2 block [[re, im], [-im, re]].
struct RealJordanBlock {
  bool is_complex;
  double re;
  double im;  // 0 for real blocks, positive for complex blocks
};

/// Invertible A, B with A*Y1*B = I and A*Y2*B equal to the real Jordan form
/// of W = Y1^{-1} Y2 (requires distinct eigenvalues).
struct RealJordanPair {
  Eigen::MatrixXd a;
  Eigen::MatrixXd b;
  Eigen::MatrixXd jordan;
  std::vector<RealJordanBlock> blocks;
};

[[nodiscard]] RealJordanPair real_jordan_pair(const Eigen::MatrixXd& y1,
                                              const Eigen::MatrixXd& y2);

/// The stacked identity pair Y1 = [I_{m2}; 0], Y2 = [0; I_{m2}], both m1 x m2.
[[nodiscard]] std::pair<Eigen::MatrixXd, Eigen::MatrixXd> canonical_stacked_pair(
    int m1, int m2);

/// The block-diagonal form of the same pair: n_a bidiagonal blocks of column
/// size l+1 followed by n_b blocks of column size l.
[[nodiscard]] std::pair<Eigen::MatrixXd, Eigen::MatrixXd> canonical_block_pair(
    int m1, int m2);

/// Permutations relating the block form to the stacked form:
/// stacked(row_map[i], col_map[j]) == block(i, j).  Vectors are 0-based.
struct BlockPermutation {
  std::vector<int> row_map;
  std::vector<int> col_map;
};

[[nodiscard]] BlockPermutation canonical_block_permutation(int m1, int m2);

}  // namespace kronmle

#endif
