#pragma once

// Dense operators on one or several copies of C^d.
// Index convention: replica 1 is the slow index, |ij> sits at row i*d + j.

#include "cens/core.hpp"

#include <Eigen/Eigenvalues>

#include <numeric>

namespace cens {

class HermitianOperator {
 public:
  HermitianOperator() = default;
  // Implicit on purpose: plain matrices are validated at the call boundary.
  HermitianOperator(Mat m, double tol = 1e-10) : m_(std::move(m)), tol_(tol) {
    require(m_.rows() == m_.cols(), ErrorCode::invalid_argument, "operator is not square");
    require(m_.allFinite(), ErrorCode::invalid_argument, "operator has non-finite entries");
    double dev = max_abs(m_ - m_.adjoint());
    require(dev <= tol_, ErrorCode::invalid_argument,
            "operator is not Hermitian (deviation " + std::to_string(dev) + ")");
  }

  const Mat& matrix() const { return m_; }
  long dim() const { return m_.rows(); }
  double tol() const { return tol_; }
  operator const Mat&() const { return m_; }

 private:
  Mat m_;
  double tol_ = 1e-10;
};

struct EigenSystem {
  RVec values;            // ascending
  Mat vectors;            // columns are eigenvectors
  double mean_spacing = 0.0;
  std::vector<double> spacings;  // normalized by mean_spacing
  std::vector<bool> degenerate;  // one flag per gap

  long dim() const { return values.size(); }
  bool any_degenerate() const {
    return std::any_of(degenerate.begin(), degenerate.end(), [](bool b) { return b; });
  }
  void require_nondegenerate(const std::string& who) const {
    require(!any_degenerate(), ErrorCode::degenerate,
            who + ": degenerate spectrum refused (intra-block rotations are not fixed)");
  }
};

inline constexpr double kDegeneracyTol = 1e-9;

inline void fill_spectral_stats(EigenSystem& es, double degeneracy_tol = kDegeneracyTol) {
  long d = es.values.size();
  es.spacings.clear();
  es.degenerate.clear();
  es.mean_spacing = d > 1 ? (es.values(d - 1) - es.values(0)) / (d - 1) : 0.0;
  for (long l = 0; l + 1 < d; ++l) {
    double gap = es.values(l + 1) - es.values(l);
    es.spacings.push_back(es.mean_spacing > 0 ? gap / es.mean_spacing : 0.0);
    es.degenerate.push_back(!(gap >= degeneracy_tol * es.mean_spacing) || es.mean_spacing <= 0);
  }
}

// First component above the noise floor made real and positive.
inline void fix_phases(Mat& vecs) {
  for (long c = 0; c < vecs.cols(); ++c) {
    double scale = vecs.col(c).cwiseAbs().maxCoeff();
    for (long r = 0; r < vecs.rows(); ++r) {
      double a = std::abs(vecs(r, c));
      if (a > 1e-8 * scale) {
        vecs.col(c) *= std::conj(vecs(r, c)) / a;
        break;
      }
    }
  }
}

inline EigenSystem eigh(const HermitianOperator& H, double tol = 1e-10,
                        double degeneracy_tol = kDegeneracyTol) {
  const Mat& h = H.matrix();
  require(h.rows() <= kMaxSingleDim, ErrorCode::cap_exceeded, "eigh: dimension cap exceeded");
  require(max_abs(h - h.adjoint()) <= tol, ErrorCode::invalid_argument, "eigh: input not Hermitian");
  Mat hs = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> solver(hs);
  require(solver.info() == Eigen::Success, ErrorCode::not_converged, "eigh: solver failed");
  EigenSystem es;
  es.values = solver.eigenvalues();
  es.vectors = solver.eigenvectors();
  fix_phases(es.vectors);
  long d = h.rows();
  double scale = std::max(1.0, max_abs(h));
  double rec = max_abs(es.vectors * es.values.cast<cplx>().asDiagonal() * es.vectors.adjoint() - h);
  double uni = max_abs(es.vectors.adjoint() * es.vectors - identity(d));
  require(rec <= 10 * tol * scale && uni <= 10 * tol, ErrorCode::not_converged,
          "eigh: residual above contract");
  fill_spectral_stats(es, degeneracy_tol);
  return es;
}

// Eigen system of diag(values); for synthetic spectra that never need a matrix.
inline EigenSystem spectrum_system(std::vector<double> values, double degeneracy_tol = kDegeneracyTol) {
  std::sort(values.begin(), values.end());
  EigenSystem es;
  long d = static_cast<long>(values.size());
  es.values = Eigen::Map<RVec>(values.data(), d);
  es.vectors = identity(d);
  fill_spectral_stats(es, degeneracy_tol);
  return es;
}

inline Mat kron(const Mat& a, const Mat& b, long cap = kMaxFoldDim) {
  require(a.rows() * b.rows() <= cap && a.cols() * b.cols() <= cap, ErrorCode::cap_exceeded,
          "kron: dimension cap exceeded");
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (long i = 0; i < a.rows(); ++i)
    for (long j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline long exact_sqrt(long n) {
  long r = static_cast<long>(std::llround(std::sqrt(static_cast<double>(n))));
  require(r * r == n, ErrorCode::invalid_argument, "dimension is not a perfect square");
  return r;
}

enum class Side { first, second };

inline Mat partial_trace(const Mat& m, Side side) {
  require(m.rows() == m.cols(), ErrorCode::invalid_argument, "partial_trace: not square");
  long d = exact_sqrt(m.rows());
  Mat out = Mat::Zero(d, d);
  for (long a = 0; a < d; ++a)
    for (long b = 0; b < d; ++b)
      for (long x = 0; x < d; ++x) {
        if (side == Side::first)
          out(a, b) += m(x * d + a, x * d + b);
        else
          out(a, b) += m(a * d + x, b * d + x);
      }
  return out;
}

enum class Structure { swap, copy, s_tensor, sym_proj, antisym_proj, permutation };

inline Mat swap_op(long d) {
  Mat s = Mat::Zero(d * d, d * d);
  for (long i = 0; i < d; ++i)
    for (long j = 0; j < d; ++j) s(j * d + i, i * d + j) = 1.0;
  return s;
}

inline Mat copy_op(long d) {
  Mat c = Mat::Zero(d * d, d);
  for (long l = 0; l < d; ++l) c(l * d + l, l) = 1.0;
  return c;
}

inline Mat s_tensor(long d) {
  Mat s = Mat::Zero(d * d, d * d);
  for (long l = 0; l < d; ++l) s(l * d + l, l * d + l) = 1.0;
  return s;
}

inline bool is_permutation(const std::vector<int>& p) {
  std::vector<int> q = p;
  std::sort(q.begin(), q.end());
  for (std::size_t i = 0; i < q.size(); ++i)
    if (q[i] != static_cast<int>(i)) return false;
  return true;
}

// P|l> = |p[l]>
inline Mat permutation_op(const std::vector<int>& p) {
  require(is_permutation(p), ErrorCode::invalid_argument, "invalid permutation");
  long d = static_cast<long>(p.size());
  Mat m = Mat::Zero(d, d);
  for (long l = 0; l < d; ++l) m(p[l], l) = 1.0;
  return m;
}

inline Mat structure_operator(Structure kind, long d, const std::vector<int>& perm = {}) {
  require(d >= 1, ErrorCode::invalid_argument, "structure_operator: d must be positive");
  if (kind != Structure::permutation && kind != Structure::copy)
    require(d * d <= kMaxFoldDim, ErrorCode::cap_exceeded, "structure_operator: cap exceeded");
  switch (kind) {
    case Structure::swap: return swap_op(d);
    case Structure::copy: return copy_op(d);
    case Structure::s_tensor: return s_tensor(d);
    case Structure::sym_proj: return 0.5 * (identity(d * d) + swap_op(d));
    case Structure::antisym_proj: return 0.5 * (identity(d * d) - swap_op(d));
    case Structure::permutation:
      require(static_cast<long>(perm.size()) == d, ErrorCode::invalid_argument, "permutation size mismatch");
      return permutation_op(perm);
  }
  fail(ErrorCode::invalid_argument, "unknown structure kind");
}

// Columns: orthonormal basis of the symmetric (|ii>, (|ij>+|ji>)/sqrt2 for i<j) or
// antisymmetric ((|ij>-|ji>)/sqrt2 for i<j) subspace, pairs in lexicographic order.
inline Mat subspace_isometry(long d, bool symmetric) {
  long D = symmetric ? d * (d + 1) / 2 : d * (d - 1) / 2;
  Mat b = Mat::Zero(d * d, D);
  long c = 0;
  const double r = 1.0 / std::sqrt(2.0);
  for (long i = 0; i < d; ++i)
    for (long j = i; j < d; ++j) {
      if (i == j) {
        if (!symmetric) continue;
        b(i * d + i, c++) = 1.0;
      } else {
        b(i * d + j, c) = r;
        b(j * d + i, c) = symmetric ? r : -r;
        ++c;
      }
    }
  return b;
}

inline long numerical_rank(const Mat& m, double tol = 1e-9) {
  Eigen::SelfAdjointEigenSolver<Mat> s(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  long r = 0;
  for (long i = 0; i < s.eigenvalues().size(); ++i)
    if (std::abs(s.eigenvalues()(i)) > tol) ++r;
  return r;
}

inline double min_eigenvalue(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> s(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  return s.eigenvalues()(0);
}

// Diagonal elements of X in the eigenbasis: <E_l|X|E_l>.
inline RVec eigen_diagonal(const Mat& x, const EigenSystem& es) {
  Mat y = es.vectors.adjoint() * x * es.vectors;
  return y.diagonal().real();
}

}  // namespace cens
