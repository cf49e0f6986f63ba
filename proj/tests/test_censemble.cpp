#include "helpers.hpp"

using namespace cens;
using namespace th;

namespace {
Diagonalizer gue_dz(long d, std::uint64_t seed) { return build_diagonalizer(eigh(gue_sample(d, seed))); }
}  // namespace

TEST(Diagonalizer, RowsAreConjugatedEigenvectors) {
  Diagonalizer dz = build_diagonalizer(eigh(pauli_x()));
  // eigenvectors (1,-1)/sqrt2 and (1,1)/sqrt2
  Mat expect(2, 2);
  expect << 1, -1, 1, 1;
  EXPECT_LE(max_diff(dz.C, expect / std::sqrt(2.0)), 1e-15);
  HermitianOperator h = gue_sample(5, 3);
  Diagonalizer dg = build_diagonalizer(eigh(h));
  Mat x = dg.C * h.matrix() * dg.C.adjoint();
  EXPECT_LE(max_diff(x, diag(std::vector<double>(dg.es.values.data(), dg.es.values.data() + 5))), 1e-12);
}

TEST(Diagonalizer, RefusesDegenerate) {
  try {
    build_diagonalizer(eigh(diag({0, 1, 1})));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::degenerate);
  }
}

TEST(SampleC, UnitaryAndDiagonalizes) {
  HermitianOperator h = gue_sample(6, 4);
  Diagonalizer dz = build_diagonalizer(eigh(h));
  auto g = make_engine(9, 0);
  for (int i = 0; i < 20; ++i) {
    CEnsembleSample s = sample_C(dz, g);
    EXPECT_LE(max_diff(s.C * s.C.adjoint(), identity(6)), 1e-12);
    EXPECT_LE(orbit_membership_residual(s.C, h), 1e-12);
    // C H C^dag diagonal holds the permuted spectrum
    Mat x = s.C * h.matrix() * s.C.adjoint();
    for (int l = 0; l < 6; ++l) EXPECT_NEAR(x(s.permutation[l], s.permutation[l]).real(), dz.es.values(l), 1e-12);
  }
}

TEST(SampleC, DeterministicPerSeed) {
  Diagonalizer dz = gue_dz(4, 1);
  EXPECT_EQ(max_abs(sample_C(dz, std::uint64_t{5}).C - sample_C(dz, std::uint64_t{5}).C), 0.0);
  EXPECT_GT(max_abs(sample_C(dz, std::uint64_t{5}).C - sample_C(dz, std::uint64_t{6}).C), 0.0);
}

TEST(SampleC, NonDiagonalizerHasResidual) {
  HermitianOperator h = gue_sample(4, 2);
  EXPECT_GT(orbit_membership_residual(haar_sample(4, std::uint64_t{1}), h), 1e-3);
}

TEST(PhaseRule, MultisetBalance) {
  EXPECT_TRUE(phase_balanced({1, 2}, {2, 1}));
  EXPECT_FALSE(phase_balanced({1, 1}, {1, 2}));
  EXPECT_TRUE(phase_balanced({0, 0, 3}, {3, 0, 0}));
}

TEST(Enumeration, TwoMomentIsSwapOverD) {
  for (long d = 2; d <= 6; ++d) {
    Mat m = enumerate_two_moment(gue_dz(d, 40 + d));
    EXPECT_LE(max_diff(m, swap_op(d) / static_cast<double>(d)), 1e-12) << d;
  }
}

TEST(Enumeration, OrbitCap) {
  EXPECT_THROW(enumerate_orbit(gue_dz(9, 1)), Error);
}

TEST(Enumeration, McTwoMomentAgrees) {
  Diagonalizer dz = gue_dz(3, 7);
  MatrixStats st = mc_two_moment(dz, 20000, 3);
  EXPECT_LE(st.max_z(swap_op(3) / 3.0), 5.0);
}

TEST(Enumeration, TwofoldAverageOfSTensorIsPlateau) {
  for (long d = 2; d <= 6; ++d) {
    EigenSystem es = eigh(gue_sample(d, 60 + d));
    Mat avg = enumerate_twofold_average(build_diagonalizer(es), s_tensor(d));
    EXPECT_LE(max_diff(avg, plateau_exact(es).matrix), 1e-12) << d;
  }
}

TEST(Enumeration, FourMomentContractsToTwofoldAverage) {
  long d = 3;
  Diagonalizer dz = gue_dz(d, 70);
  Mat m4 = enumerate_four_moment(dz);
  Mat a = random_matrix(d * d, d * d, 71);
  // exact phase average: independent cube roots of unity kill every unbalanced
  // product of two phases against two conjugates
  Mat fwd = Mat::Zero(d * d, d * d), back = Mat::Zero(d * d, d * d);
  long n = 0;
  for (const auto& p : enumerate_orbit(dz))
    for (long code = 0; code < 27; ++code) {
      Mat ph = Mat::Zero(d, d);
      for (long l = 0, c = code; l < d; ++l, c /= 3) ph(l, l) = std::polar(1.0, 2 * kPi * static_cast<double>(c % 3) / 3);
      Mat u = ph * detail::permuted_rows(dz.C, p);
      Mat uu = kron(u, u);
      fwd += uu * a * uu.adjoint();
      back += uu.adjoint() * a * uu;
      ++n;
    }
  fwd /= static_cast<double>(n);
  back /= static_cast<double>(n);
  EXPECT_LE(max_diff(contract_twofold(m4, a, d), fwd), 1e-12);
  EXPECT_LE(max_diff(enumerate_twofold_average(dz, a), back), 1e-12);
}

TEST(U1SdReference, MatchesEnumerationWithIdentityDiagonalizer) {
  for (long d : {2, 3}) {
    Diagonalizer dz{identity(d), eigh(diag([&] {
                                   std::vector<double> e(d);
                                   for (long l = 0; l < d; ++l) e[l] = l;
                                   return e;
                                 }()))};
    EXPECT_LE(max_diff(u1sd_moment(1, d).matrix, enumerate_two_moment(dz)), 1e-14);
    EXPECT_LE(max_diff(u1sd_moment(2, d).matrix, enumerate_four_moment(dz)), 1e-14);
  }
}

TEST(Plateau, DephasingInvariants) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    long d = 2 + static_cast<long>(s % 7);
    HermitianOperator h = random_hermitian(d, 80 + s);
    EigenSystem es = eigh(h);
    PlateauOperator g = plateau_exact(es);
    PlateauChecks c = check_plateau(g.matrix, d, &h.matrix());
    EXPECT_LE(c.hermiticity, 1e-10);
    EXPECT_GE(c.min_eigenvalue, -1e-10);
    EXPECT_LE(c.trace_error, 1e-10);
    EXPECT_LE(c.swap_left, 1e-10);
    EXPECT_LE(c.swap_right, 1e-10);
    EXPECT_LE(c.partial_trace_asymmetry, 1e-10);
    EXPECT_LE(c.dephasing, 1e-10);
  }
}

TEST(Plateau, DiagonalHamiltonianGivesSTensor) {
  EXPECT_LE(max_diff(plateau_exact(eigh(diag({0, 1, 3}))).matrix, s_tensor(3)), 1e-15);
}

TEST(Plateau, ScaleAndShiftInvariant) {
  HermitianOperator h = random_hermitian(4, 90);
  Mat g1 = plateau_exact(eigh(h)).matrix;
  Mat g2 = plateau_exact(eigh(HermitianOperator(2.5 * h.matrix() + 3.0 * identity(4)))).matrix;
  EXPECT_LE(max_diff(g1, g2), 1e-10);
}

TEST(Plateau, SplitIntoHaarAndRemainder) {
  EigenSystem es = eigh(gue_sample(4, 91));
  PlateauOperator g = plateau_exact(es);
  PlateauSplit sp = plateau_split(g);
  EXPECT_LE(max_diff(sp.haar_part + sp.non_universal, g.matrix), 1e-15);
  EXPECT_LE(max_diff(sp.haar_part, haar_plateau(4)), 0.0);
  EXPECT_NEAR(sp.non_universal.trace().real(), 0.0, 1e-12);
}

TEST(Ipr, Examples) {
  EXPECT_NEAR(ipr_bar(build_diagonalizer(eigh(pauli_z()))), 1.0, 1e-15);
  EXPECT_NEAR(ipr_bar(build_diagonalizer(eigh(pauli_x()))), 0.5, 1e-15);
  // critical value 2/(d+1) makes the closed form exactly 2
  EXPECT_DOUBLE_EQ(frame_potential2_from_ipr(2.0 / 5, 4), 2.0);
}

TEST(FramePotential, QubitZBruteForce) {
  Diagonalizer dz = build_diagonalizer(eigh(pauli_z()));
  EXPECT_NEAR(frame_potential2_enumerated(dz), 3.0, 1e-14);
  EXPECT_NEAR(frame_potential2(dz), 3.0, 1e-14);
}

TEST(FramePotential, EnumerationAgreesWithPairSampling) {
  Diagonalizer dz = gue_dz(4, 95);
  double exact = frame_potential2_enumerated(dz);
  EnsembleEstimate mc = frame_potential2_mc(dz, 20000, 4);
  EXPECT_LE(mc.z(exact), 5.0);
}

TEST(FramePotential, ClosedFormAgainstPairSamplingGue) {
  Diagonalizer dz = gue_dz(6, 96);
  double closed = frame_potential2(dz);
  EnsembleEstimate mc = frame_potential2_mc(dz, 10000, 5);
  RecordProperty("closed", std::to_string(closed));
  RecordProperty("mc", std::to_string(mc.mean));
  EXPECT_LE(mc.z(closed), 5.0);
}

TEST(FramePotential, McIndependentOfThreads) {
  Diagonalizer dz = gue_dz(3, 97);
  EnsembleEstimate a = frame_potential2_mc(dz, 3000, 8, 1), b = frame_potential2_mc(dz, 3000, 8, 4);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.stderr_, b.stderr_);
}
