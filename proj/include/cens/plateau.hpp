#pragma once

// Bootstrap form of the plateau operator in terms of a single centred function
// Delta-phi(H), the plateau equation, and its numerical solution.

#include "cens/censemble.hpp"

#include <Eigen/SVD>

namespace cens {

struct PhiOperator {
  Mat matrix;
  bool traceless = true;
};

namespace detail {
inline double trace_floor(const Mat& m) { return 1e-10 * std::max(1.0, max_abs(m)); }

inline Mat centered(const Mat& m) { return m - (m.trace() / static_cast<double>(m.rows())) * identity(m.rows()); }

inline void require_traceless(const Mat& m, const char* who) {
  require(std::abs(m.trace()) <= trace_floor(m) * m.rows(), ErrorCode::invalid_argument,
          std::string(who) + ": traceless operator expected");
}
}  // namespace detail

// G = a (I + S) + (dphi (x) dphi)(I + S) - ((dphi^2 (x) I + I (x) dphi^2)/(d+2)) (I + S),
// a = 1/(d+1) + Tr(dphi^2)/((d+1)(d+2)).
inline PlateauOperator bootstrap_form(const PhiOperator& dphi, long d) {
  const Mat& f = dphi.matrix;
  require(f.rows() == d && f.cols() == d, ErrorCode::invalid_argument, "bootstrap_form: dimension mismatch");
  require(d * d <= kMaxFoldDim, ErrorCode::cap_exceeded, "bootstrap_form: cap exceeded");
  detail::require_traceless(f, "bootstrap_form");
  double dd = static_cast<double>(d);
  Mat f2 = f * f;
  double a = 1 / (dd + 1) + f2.trace().real() / ((dd + 1) * (dd + 2));
  Mat one = identity(d * d) + swap_op(d);
  Mat id = identity(d);
  Mat g = (a * identity(d * d) + kron(f, f) - (kron(f2, id) + kron(id, f2)) / (dd + 2)) * one;
  return {g, d};
}

// The uncentred variant, with first powers of Tr(phi) in the scalar
// coefficient and in the one-body term. For comparison only.
inline PlateauOperator bootstrap_form_uncentered(const Mat& phi, long d) {
  require(phi.rows() == d && phi.cols() == d, ErrorCode::invalid_argument, "bootstrap_form_uncentered: dimension mismatch");
  double dd = static_cast<double>(d);
  cplx tr = phi.trace();
  Mat one = identity(d * d) + swap_op(d);
  Mat id = identity(d);
  Mat one_body = (phi * phi + tr * phi) / (dd + 2);
  cplx a = 1 / (dd + 1) + (tr + tr * tr) / ((dd + 1) * (dd + 2));
  Mat g = (a * identity(d * d) + kron(phi, phi) - kron(one_body, id) - kron(id, one_body)) * one;
  return {g, d};
}

inline Mat plateau_equation_lhs(const Mat& f, const Mat& dh) {
  long d = f.rows();
  double dd = static_cast<double>(d);
  Mat f2 = f * f;
  Mat id = identity(d);
  Mat bracket = dd / (dd + 2) * f2 + (f2.trace().real() / ((dd + 2) * (dd + 1)) - dd / (dd + 1)) * id;
  return dh * bracket + (f * (f * dh).trace() - (f2 * dh).trace() / (dd + 2) * id);
}

inline double plateau_residual(const PhiOperator& dphi, const HermitianOperator& dH) {
  require(dphi.matrix.rows() == dH.dim(), ErrorCode::invalid_argument, "plateau_residual: dimension mismatch");
  detail::require_traceless(dphi.matrix, "plateau_residual (dphi)");
  detail::require_traceless(dH.matrix(), "plateau_residual (dH)");
  return max_abs(plateau_equation_lhs(dphi.matrix, dH.matrix()));
}

inline PhiOperator solve_qubit(const HermitianOperator& H) {
  require(H.dim() == 2, ErrorCode::invalid_argument, "solve_qubit: d = 2 required");
  Mat dh = detail::centered(H.matrix());
  double n2 = (dh * dh).trace().real();
  require(n2 > 1e-24, ErrorCode::invalid_argument, "solve_qubit: H proportional to identity");
  return {dh / std::sqrt(2 * n2), true};
}

// ---------------------------------------------------------------------------
// Power-ansatz solver: dphi = sum_{l=1}^{d-1} alpha_l (dH^l - Tr(dH^l)/d).

struct PlateauSolveReport {
  PhiOperator phi;
  std::vector<double> alpha;  // in units of the normalised dH (see below)
  double dh_scale = 1.0;      // dH = dh_scale * dH_n with Tr(dH_n^2) = d
  int iterations = 0;
  int restarts = 0;
  std::vector<double> residual_history;
  double residual = INFINITY;
  double init_residual = INFINITY;
  bool converged = false;
};

struct PowerBasis {
  Mat dh;                   // original centred H
  double scale = 1.0;
  std::vector<Mat> powers;  // centred dH_n^l, l = 1..d-1
  std::vector<Mat> gram;    // orthonormal span of {dH_n^k, k = 0..d-1}

  long dim() const { return dh.rows(); }

  Mat phi(const RVec& alpha) const {
    Mat f = Mat::Zero(dim(), dim());
    for (long l = 0; l < alpha.size(); ++l) f += alpha(l) * powers[l];
    return f;
  }
  // Residual in Gram coordinates, computed for dH_n (homogeneous of degree one in dH).
  RVec coords(const RVec& alpha) const {
    Mat r = plateau_equation_lhs(phi(alpha), dh / scale);
    RVec out(gram.size());
    for (std::size_t k = 0; k < gram.size(); ++k) out(k) = (gram[k].adjoint() * r).trace().real();
    return out;
  }
};

inline PowerBasis make_power_basis(const HermitianOperator& H) {
  long d = H.dim();
  PowerBasis b;
  b.dh = detail::centered(H.matrix());
  double n2 = (b.dh * b.dh).trace().real();
  require(n2 > 1e-24, ErrorCode::invalid_argument, "solve_newton: H proportional to identity");
  b.scale = std::sqrt(n2 / d);
  Mat hn = b.dh / b.scale;
  Mat p = identity(d);
  for (long k = 0; k < d; ++k) {
    Mat q = p;
    for (const auto& e : b.gram) q -= (e.adjoint() * q).trace() * e;
    double nq = std::sqrt(q.cwiseAbs2().sum());
    if (nq > 1e-10) b.gram.push_back(q / nq);
    if (k >= 1) b.powers.push_back(detail::centered(p));
    p = p * hn;
  }
  return b;
}

namespace detail {
// Damped Gauss-Newton with forward-difference Jacobian. `f` maps alpha to a real vector.
template <class F>
RVec gauss_newton(F f, RVec x, int max_iter, double tol, std::function<double(const RVec&)> objective,
                  std::vector<double>* history, int* iters) {
  RVec r = f(x);
  double obj = objective(x);
  for (int it = 0; it < max_iter && obj > tol; ++it) {
    Eigen::MatrixXd J(r.size(), x.size());
    for (long k = 0; k < x.size(); ++k) {
      RVec xp = x;
      double h = 1e-6 * (1 + std::abs(x(k)));
      xp(k) += h;
      J.col(k) = (f(xp) - r) / h;
    }
    RVec step = J.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(-r);
    double lam = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 40; ++ls, lam *= 0.5) {
      RVec xn = x + lam * step;
      RVec rn = f(xn);
      if (rn.allFinite() && rn.norm() < r.norm()) {
        x = xn;
        r = rn;
        moved = true;
        break;
      }
    }
    if (iters) ++*iters;
    obj = objective(x);
    if (history) history->push_back(obj);
    if (!moved) break;
  }
  return x;
}

inline RVec stack_real(const Mat& m) {
  RVec v(2 * m.size());
  for (long i = 0; i < m.size(); ++i) {
    v(2 * i) = m.data()[i].real();
    v(2 * i + 1) = m.data()[i].imag();
  }
  return v;
}
}  // namespace detail

struct ExtractionResult {
  RVec alpha;
  double mismatch = INFINITY;  // max |bootstrap - exact|
  double residual = INFINITY;  // plateau_residual at alpha
};

// Least-squares fit of bootstrap_form(dphi(alpha)) to plateau_exact(H). Uses the exact
// eigen-decomposition, so it serves as an oracle and as the solver's starting point.
inline ExtractionResult extract_alpha_from_plateau(const HermitianOperator& H, const EigenSystem& es, int restarts = 16,
                                                   std::uint64_t seed = 1) {
  es.require_nondegenerate("extract_alpha_from_plateau");
  PowerBasis b = make_power_basis(H);
  long d = b.dim();
  Mat gx = plateau_exact(es).matrix;
  auto f = [&](const RVec& a) { return detail::stack_real(bootstrap_form({b.phi(a), true}, d).matrix - gx); };
  auto obj = [&](const RVec& a) { return f(a).norm(); };
  auto g = make_engine(seed, 0xe7a);
  ExtractionResult best;
  for (int s = 0; s <= restarts; ++s) {
    RVec a0 = RVec::Zero(d - 1);
    if (s == 0) {
      a0(0) = 1 / std::sqrt(2.0 * d);
    } else {
      for (long k = 0; k < a0.size(); ++k) a0(k) = 0.5 * std_normal(g);
    }
    RVec a = detail::gauss_newton(f, a0, 200, 1e-13, obj, nullptr, nullptr);
    double mm = max_abs(bootstrap_form({b.phi(a), true}, d).matrix - gx);
    if (mm < best.mismatch) {
      best.alpha = a;
      best.mismatch = mm;
    }
  }
  best.residual = max_abs(plateau_equation_lhs(b.phi(best.alpha), b.dh));
  return best;
}

inline PlateauSolveReport solve_newton(const HermitianOperator& H, int max_iter = 100, double tol = 1e-10,
                                       int restarts = 32, std::uint64_t seed = 1) {
  long d = H.dim();
  require(d >= 2, ErrorCode::invalid_argument, "solve_newton: d >= 2 required");
  require(d * d <= kMaxFoldDim, ErrorCode::cap_exceeded, "solve_newton: cap exceeded");
  EigenSystem es = eigh(H);
  es.require_nondegenerate("solve_newton");
  PowerBasis b = make_power_basis(H);
  auto f = [&](const RVec& a) { return b.coords(a); };
  auto obj = [&](const RVec& a) { return max_abs(plateau_equation_lhs(b.phi(a), b.dh)); };

  PlateauSolveReport rep;
  rep.dh_scale = b.scale;
  ExtractionResult ex = extract_alpha_from_plateau(H, es);
  rep.init_residual = ex.residual;

  auto g = make_engine(seed, 0x5e7);
  RVec best = ex.alpha;
  double best_res = ex.residual;
  for (int s = 0; s <= restarts && best_res > tol; ++s) {
    RVec a0;
    if (s == 0) {
      a0 = ex.alpha;
    } else {
      a0 = RVec::Zero(d - 1);
      for (long k = 0; k < a0.size(); ++k) a0(k) = 0.5 * std_normal(g);
      ++rep.restarts;
    }
    RVec a = detail::gauss_newton(f, a0, max_iter, tol, obj, &rep.residual_history, &rep.iterations);
    double res = obj(a);
    if (res < best_res) {
      best = a;
      best_res = res;
    }
  }
  std::vector<double> alpha(best.data(), best.data() + best.size());
  rep.alpha = alpha;
  rep.phi = {b.phi(best), true};
  rep.residual = best_res;
  rep.converged = best_res <= tol;
  return rep;
}

}  // namespace cens
