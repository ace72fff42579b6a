#pragma once

// Deterministic eigendecomposition of recurrent weight matrices.
//
// Ordering: descending real part, then descending imaginary part.
// Phase: the first component whose modulus equals the column maximum is
// made real and positive. Degenerate eigenspaces of normal matrices get a
// canonical orthonormal basis (projections of the standard basis vectors),
// so the result depends only on the matrix, not on solver internals.

#include "organics/core.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <numeric>
#include <vector>

namespace organics {

class DefectiveMatrixError : public Error {
 public:
  using Error::Error;
};

struct EigenPairs {
  CVec values;
  CMat vectors;  // unit-norm columns, one per eigenvalue
  bool normal = false;
};

namespace detail {

inline bool is_hermitian(const CMat& w) {
  const double scale = std::max(1.0, w.norm());
  return (w - w.adjoint()).norm() <= 1e-12 * scale;
}

inline bool is_normal(const CMat& w) {
  const double scale = std::max(1.0, w.squaredNorm());
  return (w * w.adjoint() - w.adjoint() * w).norm() <= 1e-10 * scale;
}

inline bool eig_less_tol(cplx lhs, cplx rhs) {
  constexpr double tol = 1e-10;
  if (std::abs(lhs.real() - rhs.real()) > tol) return lhs.real() > rhs.real();
  if (std::abs(lhs.imag() - rhs.imag()) > tol) return lhs.imag() > rhs.imag();
  return false;
}

inline void apply_phase_convention(CMat& v) {
  for (Eigen::Index c = 0; c < v.cols(); ++c) {
    const double nrm = v.col(c).norm();
    if (nrm == 0.0) continue;
    v.col(c) /= nrm;
    const double peak = v.col(c).cwiseAbs().maxCoeff();
    Eigen::Index pick = 0;
    for (Eigen::Index r = 0; r < v.rows(); ++r) {
      if (std::abs(v(r, c)) >= peak * (1.0 - 1e-8)) {
        pick = r;
        break;
      }
    }
    const cplx ref = v(pick, c);
    v.col(c) *= std::conj(ref) / std::abs(ref);
    v(pick, c) = cplx(std::abs(v(pick, c)), 0.0);
  }
}

inline void require_independent(const CMat& cols) {
  if (cols.cols() == 0) return;
  Eigen::JacobiSVD<CMat> svd(cols);
  const auto& s = svd.singularValues();
  if (s[s.size() - 1] < 1e-8 * std::max(1.0, s[0]))
    throw DefectiveMatrixError("eigenvectors are not linearly independent (defective matrix)");
}

// Replaces an orthonormal basis of a subspace with the Gram-Schmidt
// orthonormalisation of projected standard basis vectors.
inline CMat canonical_subspace_basis(const CMat& basis) {
  const Eigen::Index n = basis.rows();
  const Eigen::Index m = basis.cols();
  CMat out(n, m);
  Eigen::Index found = 0;
  while (found < m) {
    std::vector<double> norms(static_cast<std::size_t>(n));
    std::vector<CVec> cands(static_cast<std::size_t>(n));
    double best = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      CVec v = basis * basis.row(i).adjoint();  // projection of e_i
      for (Eigen::Index f = 0; f < found; ++f) v -= out.col(f) * out.col(f).dot(v);
      norms[static_cast<std::size_t>(i)] = v.norm();
      cands[static_cast<std::size_t>(i)] = std::move(v);
      best = std::max(best, norms[static_cast<std::size_t>(i)]);
    }
    if (best < 1e-12) break;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (norms[static_cast<std::size_t>(i)] >= 0.5 * best) {
        out.col(found) = cands[static_cast<std::size_t>(i)] / norms[static_cast<std::size_t>(i)];
        break;
      }
    }
    ++found;
  }
  return out.leftCols(found);
}

}  // namespace detail

// Eigenvalues only, in the canonical order.
inline CVec sorted_eigenvalues(const CMat& w) {
  detail::require_dims(w.rows() == w.cols(), "eigenvalues: matrix must be square");
  CVec vals;
  if (detail::is_hermitian(w)) {
    Eigen::SelfAdjointEigenSolver<CMat> es(w, Eigen::EigenvaluesOnly);
    vals = es.eigenvalues().cast<cplx>();
  } else {
    Eigen::ComplexEigenSolver<CMat> es(w, false);
    vals = es.eigenvalues();
  }
  std::vector<cplx> v(vals.data(), vals.data() + vals.size());
  std::stable_sort(v.begin(), v.end(), detail::eig_less_tol);
  return Eigen::Map<CVec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline CVec sorted_eigenvalues(const RMat& w) { return sorted_eigenvalues(CMat(w.cast<cplx>())); }

inline EigenPairs eigen_decompose(const CMat& w) {
  detail::require_dims(w.rows() == w.cols(), "eigen_decompose: matrix must be square");
  const Eigen::Index n = w.rows();
  CVec vals(n);
  CMat vecs(n, n);
  bool normal = false;
  if (detail::is_hermitian(w)) {
    Eigen::SelfAdjointEigenSolver<CMat> es(w);
    vals = es.eigenvalues().cast<cplx>();
    vecs = es.eigenvectors();
    normal = true;
  } else if (detail::is_normal(w)) {
    // The Schur vectors of a normal matrix are orthonormal eigenvectors.
    Eigen::ComplexSchur<CMat> schur(w);
    vals = schur.matrixT().diagonal();
    vecs = schur.matrixU();
    normal = true;
  } else {
    Eigen::ComplexEigenSolver<CMat> es(w);
    vals = es.eigenvalues();
    vecs = es.eigenvectors();
    detail::require_independent(vecs);
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index l, Eigen::Index r) { return detail::eig_less_tol(vals[l], vals[r]); });

  EigenPairs out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  out.normal = normal;
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values[i] = vals[order[static_cast<std::size_t>(i)]];
    out.vectors.col(i) = vecs.col(order[static_cast<std::size_t>(i)]);
  }

  if (normal) {
    Eigen::Index start = 0;
    while (start < n) {
      Eigen::Index end = start + 1;
      const double scale = std::max(1.0, std::abs(out.values[start]));
      while (end < n && std::abs(out.values[end] - out.values[start]) <= 1e-8 * scale) ++end;
      if (end - start > 1) {
        CMat canon = detail::canonical_subspace_basis(out.vectors.middleCols(start, end - start));
        if (canon.cols() == end - start) out.vectors.middleCols(start, end - start) = canon;
      }
      start = end;
    }
  }
  detail::apply_phase_convention(out.vectors);
  return out;
}

inline EigenPairs eigen_decompose(const RMat& w) { return eigen_decompose(CMat(w.cast<cplx>())); }

}  // namespace organics
