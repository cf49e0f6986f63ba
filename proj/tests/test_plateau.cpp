#include "helpers.hpp"

using namespace cens;
using namespace th;

namespace {
Mat centered_hermitian(long d, std::uint64_t seed) {
  Mat h = random_hermitian(d, seed);
  return h - (h.trace() / static_cast<double>(d)) * identity(d);
}
double reconstruction_error(const PlateauSolveReport& rep, const HermitianOperator& h) {
  return max_diff(bootstrap_form(rep.phi, h.dim()).matrix, plateau_exact(eigh(h)).matrix);
}
}  // namespace

TEST(Bootstrap, ZeroPhiIsHaarPlateau) {
  for (long d : {2, 3, 5}) EXPECT_LE(max_diff(bootstrap_form({Mat::Zero(d, d), true}, d).matrix, haar_plateau(d)), 1e-15);
}

TEST(Bootstrap, QubitHalfZIsSTensor) {
  EXPECT_LE(max_diff(bootstrap_form({0.5 * pauli_z(), true}, 2).matrix, s_tensor(2)), 1e-15);
}

TEST(Bootstrap, TraceAndSwapInvariance) {
  for (long d : {2, 3, 4, 6}) {
    Mat f = centered_hermitian(d, 10 + d);
    Mat g = bootstrap_form({f, true}, d).matrix;
    EXPECT_NEAR(g.trace().real(), static_cast<double>(d), 1e-10);
    EXPECT_LE(max_diff(swap_op(d) * g, g), 1e-12);
    EXPECT_LE(max_diff(g * swap_op(d), g), 1e-12);
    EXPECT_LE(max_abs(g - g.adjoint()), 1e-12);
  }
}

TEST(Bootstrap, EvenInPhi) {
  Mat f = centered_hermitian(3, 20);
  EXPECT_LE(max_diff(bootstrap_form({f, true}, 3).matrix, bootstrap_form({-f, true}, 3).matrix), 1e-14);
}

TEST(Bootstrap, UncenteredVariantMissesSquaredTrace) {
  // on traceless input the uncentred scalar coefficient lacks Tr(phi^2)/((d+1)(d+2))
  long d = 4;
  double dd = 4;
  Mat f = centered_hermitian(d, 21);
  Mat gap = (f * f).trace().real() / ((dd + 1) * (dd + 2)) * (identity(d * d) + swap_op(d));
  EXPECT_LE(max_diff(bootstrap_form_uncentered(f, d).matrix + gap, bootstrap_form({f, true}, d).matrix), 1e-12);
  EXPECT_GT(std::abs(bootstrap_form_uncentered(f, d).matrix.trace().real() - dd), 1e-3);
  Mat g = bootstrap_form_uncentered(f + 0.3 * identity(d), d).matrix;
  RecordProperty("uncentered_trace", std::to_string(g.trace().real()));
}

TEST(Bootstrap, Validation) {
  EXPECT_THROW(bootstrap_form({identity(2), true}, 2), Error);
  EXPECT_THROW(bootstrap_form({Mat::Zero(2, 2), true}, 3), Error);
}

TEST(PlateauEquation, QubitSolutionAndSignFreedom) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    Mat dh = centered_hermitian(2, 30 + s);
    PhiOperator p = solve_qubit(dh);
    EXPECT_LE(plateau_residual(p, dh), 1e-12);
    EXPECT_LE(plateau_residual({-p.matrix, true}, dh), 1e-12);
    EXPECT_GT(plateau_residual({0.7 * p.matrix, true}, dh), 1e-3);
  }
}

TEST(PlateauEquation, LinearInDeltaH) {
  Mat f = centered_hermitian(3, 40), dh = centered_hermitian(3, 41);
  EXPECT_LE(max_diff(plateau_equation_lhs(f, 2.5 * dh), 2.5 * plateau_equation_lhs(f, dh)), 1e-12);
}

TEST(PlateauEquation, UnitaryCovariance) {
  long d = 4;
  Mat f = centered_hermitian(d, 42), dh = centered_hermitian(d, 43);
  Mat u = haar_sample(d, std::uint64_t{44});
  Mat lhs = plateau_equation_lhs(u * f * u.adjoint(), u * dh * u.adjoint());
  EXPECT_LE(max_diff(lhs, u * plateau_equation_lhs(f, dh) * u.adjoint()), 1e-12);
}

TEST(PlateauEquation, RequiresTraceless) {
  Mat dh = centered_hermitian(2, 45);
  EXPECT_THROW(plateau_residual({identity(2), true}, dh), Error);
  EXPECT_THROW(plateau_residual({dh, true}, HermitianOperator(dh + identity(2))), Error);
}

TEST(SolveQubit, Examples) {
  EXPECT_LE(max_diff(solve_qubit(pauli_z()).matrix, 0.5 * pauli_z()), 1e-15);
  EXPECT_LE(max_diff(solve_qubit(pauli_x()).matrix, 0.5 * pauli_x()), 1e-15);
  EXPECT_LE(max_diff(solve_qubit(HermitianOperator(3.0 * pauli_z() + 5.0 * identity(2))).matrix, 0.5 * pauli_z()), 1e-15);
  EXPECT_LE(max_diff(bootstrap_form(solve_qubit(pauli_x()), 2).matrix, plateau_exact(eigh(pauli_x())).matrix), 1e-12);
  EXPECT_THROW(solve_qubit(identity(2)), Error);
  EXPECT_THROW(solve_qubit(identity(3)), Error);
}

TEST(SolveQubit, ReconstructsPlateauForRandomQubits) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    Mat h = random_hermitian(2, 100 + s);
    PhiOperator p = solve_qubit(h);
    Mat dh = h - (h.trace() / 2.0) * identity(2);
    EXPECT_LE(max_diff(p.matrix, dh / std::sqrt(2 * (dh * dh).trace().real())), 1e-14);
    EXPECT_LE(max_diff(bootstrap_form(p, 2).matrix, plateau_exact(eigh(h)).matrix), 1e-10);
  }
}

TEST(SolveNewton, QubitConvergesAndReconstructs) {
  HermitianOperator h = random_hermitian(2, 200);
  PlateauSolveReport rep = solve_newton(h);
  EXPECT_TRUE(rep.converged);
  EXPECT_LE(rep.residual, 1e-8);
  EXPECT_LE(reconstruction_error(rep, h), 1e-6);
}

TEST(SolveNewton, ResidualBelowToleranceD3D4) {
  for (long d : {3, 4}) {
    HermitianOperator h = random_hermitian(d, 210 + d);
    PlateauSolveReport rep = solve_newton(h);
    EXPECT_LE(rep.residual, 1e-8) << d;
    Mat dh = h.matrix() - (h.matrix().trace() / static_cast<double>(d)) * identity(d);
    EXPECT_LE(max_abs(plateau_equation_lhs(rep.phi.matrix, dh)), 1e-8);
  }
}

TEST(SolveNewton, ReconstructsPlateauD3) {
  HermitianOperator h = random_hermitian(3, 213);
  PlateauSolveReport rep = solve_newton(h);
  double err = reconstruction_error(rep, h);
  RecordProperty("reconstruction_error", std::to_string(err));
  EXPECT_LE(err, 1e-6);
}

TEST(SolveNewton, ReconstructsPlateauD4) {
  HermitianOperator h = random_hermitian(4, 214);
  PlateauSolveReport rep = solve_newton(h);
  double err = reconstruction_error(rep, h);
  RecordProperty("reconstruction_error", std::to_string(err));
  EXPECT_LE(err, 1e-6);
}

TEST(Extraction, InitialResidualSmallUpToD6) {
  for (long d = 2; d <= 6; ++d) {
    HermitianOperator h = random_hermitian(d, 220 + d);
    ExtractionResult ex = extract_alpha_from_plateau(h, eigh(h));
    EXPECT_LE(ex.residual, 1e-4) << "d=" << d << " mismatch " << ex.mismatch;
  }
}

TEST(Extraction, ExactForQubit) {
  HermitianOperator h = random_hermitian(2, 230);
  ExtractionResult ex = extract_alpha_from_plateau(h, eigh(h));
  EXPECT_LE(ex.mismatch, 1e-10);
}

TEST(SolveNewton, Deterministic) {
  HermitianOperator h = random_hermitian(3, 240);
  PlateauSolveReport a = solve_newton(h, 50, 1e-10, 4, 7), b = solve_newton(h, 50, 1e-10, 4, 7);
  EXPECT_EQ(a.alpha, b.alpha);
  EXPECT_EQ(a.residual, b.residual);
}
