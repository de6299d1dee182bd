#include "kronmle/pencil.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "kronmle/errors.hpp"

namespace kronmle {

namespace {

// Allows the boundary m1 = 2*m2 (l = 0, no short chains) that the public
// structure_indices rejects.
StructureIndices indices_ext(int m1, int m2) {
  int d = m1 - m2;
  int l = (m2 + d - 1) / d - 1;
  return StructureIndices{l, m2 - l * d, (l + 1) * d - m2};
}

void check_pair_shape(const Eigen::MatrixXd& y1, const Eigen::MatrixXd& y2) {
  if (y1.rows() != y2.rows() || y1.cols() != y2.cols())
    throw DimensionError("pencil factors must have equal shape");
  if (y1.rows() < 1 || y1.cols() < 1)
    throw DimensionError("pencil factors must be non-empty");
}

// Orthonormal basis of the right null space, which must have exactly
// expected_dim dimensions at the relative cutoff.
Eigen::MatrixXd null_space(const Eigen::MatrixXd& m, int expected_dim,
                           double rel_tol, const char* what) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  double cutoff = sv.size() > 0 ? rel_tol * sv(0) : 0.0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++rank;
  int dim = static_cast<int>(m.cols()) - rank;
  if (dim != expected_dim)
    throw NonGenericPencil(std::string(what) + ": null space dimension " +
                           std::to_string(dim) + ", expected " +
                           std::to_string(expected_dim));
  return svd.matrixV().rightCols(dim);
}

}  // namespace

StructureIndices structure_indices(int m1, int m2) {
  if (!(2 * m2 > m1 && m1 > m2))
    throw DimensionError("structure indices need 2*m2 > m1 > m2");
  return indices_ext(m1, m2);
}

PencilCanonicalization canonicalize_pair(const Eigen::MatrixXd& y1,
                                         const Eigen::MatrixXd& y2,
                                         double tol) {
  check_pair_shape(y1, y2);
  int m1 = static_cast<int>(y1.rows());
  int m2 = static_cast<int>(y1.cols());
  if (!(m2 < m1 && m1 <= 2 * m2))
    throw DimensionError("canonicalization needs m2 < m1 <= 2*m2");
  int d = m1 - m2;
  auto [l, na, nb] = indices_ext(m1, m2);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      y1, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  if (sv(m2 - 1) <= tol * sv(0))
    throw NonGenericPencil("first factor is rank deficient");
  Eigen::MatrixXd phi = svd.matrixV() *
                        sv.cwiseInverse().asDiagonal() *
                        (svd.matrixU().leftCols(m2).transpose() * y2);

  // Nested subspaces V_0 > V_1 > ... > V_l with dim V_t = m2 - t*d:
  // V_1 = {x : y2 x in col(y1)}, V_t = {x in V_{t-1} : phi x in V_{t-1}}.
  std::vector<Eigen::MatrixXd> bases;
  bases.push_back(Eigen::MatrixXd::Identity(m2, m2));
  if (l >= 1) {
    Eigen::MatrixXd nt_y2 = svd.matrixU().rightCols(d).transpose() * y2;
    bases.push_back(null_space(nt_y2, m2 - d, tol, "first subspace"));
  }
  for (int t = 2; t <= l; ++t) {
    const Eigen::MatrixXd& p = bases[t - 1];
    Eigen::MatrixXd q =
        phi * p - p * (p.transpose() * (phi * p));
    Eigen::MatrixXd c = null_space(q, m2 - t * d, tol, "nested subspace");
    bases.push_back(bases[t - 1] * c);
  }

  // Chain starts: long chains from V_l, short chains from the part of
  // V_{l-1} orthogonal to V_l + phi(V_l).
  Eigen::MatrixXd long_starts = bases[l];
  Eigen::MatrixXd short_starts(m2, nb);
  if (nb > 0) {
    const Eigen::MatrixXd& prev = bases[l - 1];
    Eigen::MatrixXd span(m2, 2 * na);
    span.leftCols(na) = long_starts;
    span.rightCols(na) = phi * long_starts;
    Eigen::MatrixXd mt = (prev.transpose() * span).transpose();
    Eigen::MatrixXd c = null_space(mt, nb, tol, "short chain complement");
    short_starts = prev * c;
  }

  // Column s + t*d holds phi^t applied to start s; long starts come first.
  Eigen::MatrixXd b(m2, m2);
  for (int s = 0; s < d; ++s) {
    int len = s < na ? l + 1 : l;
    Eigen::VectorXd v = s < na ? long_starts.col(s) : short_starts.col(s - na);
    for (int t = 0; t < len; ++t) {
      b.col(s + t * d) = v;
      if (t + 1 < len) v = phi * v;
    }
  }

  // Frame: images of the basis under y1, plus y2 images of chain tails.
  Eigen::MatrixXd frame(m1, m1);
  frame.leftCols(m2) = y1 * b;
  for (int c = m2 - d; c < m2; ++c) frame.col(c + d) = y2 * b.col(c);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(frame);
  if (!lu.isInvertible())
    throw NonGenericPencil("canonical frame is singular");

  PencilCanonicalization out;
  out.a = lu.inverse();
  out.b = b;
  out.l = l;
  out.n_a = na;
  out.n_b = nb;
  auto [s1, s2] = canonical_stacked_pair(m1, m2);
  out.residual = std::max((out.a * y1 * b - s1).cwiseAbs().maxCoeff(),
                          (out.a * y2 * b - s2).cwiseAbs().maxCoeff());
  return out;
}

RealJordanPair real_jordan_pair(const Eigen::MatrixXd& y1,
                                const Eigen::MatrixXd& y2) {
  check_pair_shape(y1, y2);
  if (y1.rows() != y1.cols())
    throw DimensionError("real block diagonalization needs square factors");
  int m = static_cast<int>(y1.rows());

  Eigen::FullPivLU<Eigen::MatrixXd> lu1(y1);
  if (!lu1.isInvertible()) throw SingularInput("first factor is singular");
  Eigen::MatrixXd w = lu1.solve(y2);

  Eigen::EigenSolver<Eigen::MatrixXd> es(w);
  if (es.info() != Eigen::Success)
    throw NonGenericPencil("eigenvalue iteration failed");
  Eigen::VectorXcd ev = es.eigenvalues();
  double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      if (std::abs(ev(i) - ev(j)) < 1e-8 * scale)
        throw RepeatedEigenvalues("eigenvalues closer than tolerance");

  // Real eigenvalues ascending, then conjugate pairs by real part.
  std::vector<int> real_idx;
  std::vector<int> complex_idx;
  for (int i = 0; i < m; ++i) {
    if (ev(i).imag() == 0.0)
      real_idx.push_back(i);
    else if (ev(i).imag() > 0.0)
      complex_idx.push_back(i);
  }
  std::sort(real_idx.begin(), real_idx.end(),
            [&](int a, int b) { return ev(a).real() < ev(b).real(); });
  std::sort(complex_idx.begin(), complex_idx.end(), [&](int a, int b) {
    if (ev(a).real() != ev(b).real()) return ev(a).real() < ev(b).real();
    return ev(a).imag() < ev(b).imag();
  });

  // Phase-fix each eigenvector so its largest entry is real positive; for a
  // pair mu + i*nu with vector y + i*z the columns (y, z) satisfy
  // W [y z] = [y z] [mu, nu; -nu, mu].
  auto fixed_vector = [&](int i) {
    Eigen::VectorXcd v = es.eigenvectors().col(i);
    int k = 0;
    double best = -1.0;
    for (int r = 0; r < m; ++r)
      if (std::abs(v(r)) > best) {
        best = std::abs(v(r));
        k = r;
      }
    v *= std::conj(v(k)) / std::abs(v(k));
    return v;
  };

  RealJordanPair out;
  out.b.resize(m, m);
  out.jordan = Eigen::MatrixXd::Zero(m, m);
  int col = 0;
  for (int i : real_idx) {
    Eigen::VectorXcd v = fixed_vector(i);
    Eigen::VectorXd re = v.real();
    out.b.col(col) = re / re.norm();
    out.jordan(col, col) = ev(i).real();
    out.blocks.push_back(RealJordanBlock{false, ev(i).real(), 0.0});
    ++col;
  }
  for (int i : complex_idx) {
    Eigen::VectorXcd v = fixed_vector(i);
    out.b.col(col) = v.real();
    out.b.col(col + 1) = v.imag();
    double mu = ev(i).real();
    double nu = ev(i).imag();
    out.jordan(col, col) = mu;
    out.jordan(col, col + 1) = nu;
    out.jordan(col + 1, col) = -nu;
    out.jordan(col + 1, col + 1) = mu;
    out.blocks.push_back(RealJordanBlock{true, mu, nu});
    col += 2;
  }

  Eigen::FullPivLU<Eigen::MatrixXd> lub(y1 * out.b);
  if (!lub.isInvertible())
    throw NonGenericPencil("eigenvector frame is singular");
  out.a = lub.inverse();
  return out;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> canonical_stacked_pair(int m1,
                                                                   int m2) {
  if (!(m2 < m1 && m1 <= 2 * m2))
    throw DimensionError("stacked pair needs m2 < m1 <= 2*m2");
  Eigen::MatrixXd s1 = Eigen::MatrixXd::Zero(m1, m2);
  Eigen::MatrixXd s2 = Eigen::MatrixXd::Zero(m1, m2);
  s1.topRows(m2) = Eigen::MatrixXd::Identity(m2, m2);
  s2.bottomRows(m2) = Eigen::MatrixXd::Identity(m2, m2);
  return {s1, s2};
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> canonical_block_pair(int m1,
                                                                 int m2) {
  if (!(m2 < m1 && m1 <= 2 * m2))
    throw DimensionError("block pair needs m2 < m1 <= 2*m2");
  auto [l, na, nb] = indices_ext(m1, m2);
  Eigen::MatrixXd b1 = Eigen::MatrixXd::Zero(m1, m2);
  Eigen::MatrixXd b2 = Eigen::MatrixXd::Zero(m1, m2);
  int row = 0;
  int colb = 0;
  for (int s = 0; s < na + nb; ++s) {
    int len = s < na ? l + 1 : l;
    b1.block(row, colb, len, len).setIdentity();
    b2.block(row + 1, colb, len, len).setIdentity();
    row += len + 1;
    colb += len;
  }
  return {b1, b2};
}

BlockPermutation canonical_block_permutation(int m1, int m2) {
  if (!(m2 < m1 && m1 <= 2 * m2))
    throw DimensionError("block permutation needs m2 < m1 <= 2*m2");
  auto [l, na, nb] = indices_ext(m1, m2);
  int d = m1 - m2;
  BlockPermutation perm;
  perm.row_map.resize(m1);
  perm.col_map.resize(m2);
  int row = 0;
  int colb = 0;
  for (int s = 0; s < na + nb; ++s) {
    int len = s < na ? l + 1 : l;
    for (int r = 0; r <= len; ++r) perm.row_map[row + r] = s + r * d;
    for (int t = 0; t < len; ++t) perm.col_map[colb + t] = s + t * d;
    row += len + 1;
    colb += len;
  }
  return perm;
}

}  // namespace kronmle
