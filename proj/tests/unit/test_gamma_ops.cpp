#include <gtest/gtest.h>

#include <numbers>

#include "sympick/gamma_ops.hpp"
#include "sympick/hermitian.hpp"
#include "sympick/random.hpp"

using namespace sympick;

namespace {

Matrix diag(std::initializer_list<Complex> v) {
  Vector d(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (Complex z : v) d(i++) = z;
  return d.asDiagonal();
}

AtomicMeasure random_measure(Rng& rng, int m) {
  AtomicMeasure mu;
  std::uniform_real_distribution<double> u(0.1, 1.0);
  for (int k = 0; k < m; ++k) {
    const Complex z1 = random_unimodular(rng), z2 = random_unimodular(rng);
    mu.atoms.push_back(BGammaPoint::checked(z1 + z2, z1 * z2));
    mu.weights.push_back(u(rng));
  }
  return mu;
}

}  // namespace

TEST(GammaUnitary, DiagonalExample) {
  const Matrix u1 = diag({1.0, Complex(0, 1)}), u2 = diag({-1.0, 1.0});
  const OperatorPair pair = symmetrized_pair(u1, u2);
  EXPECT_LE((pair.first - diag({0.0, Complex(1, 1)})).norm(), 1e-15);
  EXPECT_LE((pair.second - diag({-1.0, Complex(0, 1)})).norm(), 1e-15);
  const GammaCheck c = gamma_unitary_check(pair);
  EXPECT_TRUE(c.passed);
  EXPECT_NEAR(c.norm, std::sqrt(2.0), 1e-12);
}

TEST(GammaUnitary, ZeroAndIdentity) {
  EXPECT_TRUE(gamma_unitary_check({Matrix::Zero(3, 3), Matrix::Identity(3, 3)}).passed);
}

TEST(GammaUnitary, NormTooLarge) {
  const GammaCheck c = gamma_unitary_check({3.0 * Matrix::Identity(2, 2), Matrix::Identity(2, 2)});
  EXPECT_FALSE(c.passed);
  EXPECT_NEAR(c.norm, 3.0, 1e-12);
}

TEST(GammaUnitary, RejectsNonCommuting) {
  Matrix a(2, 2), b(2, 2);
  a << 0, 1, 0, 0;
  b << 0, 0, 1, 0;
  EXPECT_THROW(gamma_unitary_check({a, b}), InputError);
}

TEST(GammaIsometry, UnitaryImpliesIsometry) {
  Rng rng(1);
  for (int t = 0; t < 20; ++t) {
    const Matrix q = random_unitary(rng, 4);
    const Matrix d1 = diag({random_unimodular(rng), random_unimodular(rng), random_unimodular(rng), random_unimodular(rng)});
    const Matrix d2 = diag({random_unimodular(rng), random_unimodular(rng), random_unimodular(rng), random_unimodular(rng)});
    const OperatorPair pair = symmetrized_pair(q * d1 * q.adjoint(), q * d2 * q.adjoint());
    ASSERT_TRUE(gamma_unitary_check(pair).passed);
    EXPECT_TRUE(gamma_isometry_check(pair).passed);
  }
}

TEST(GammaIsometry, HalfIdentityFails) {
  EXPECT_FALSE(gamma_isometry_check({Matrix::Identity(2, 2), 0.5 * Matrix::Identity(2, 2)}).passed);
}

TEST(GammaIsometry, AtomicModelPasses) {
  Rng rng(2);
  const AtomicModel m = atomic_h2_model(random_measure(rng, 5));
  EXPECT_TRUE(gamma_isometry_check(m.pair).passed);
}

TEST(SymmetrizedPair, Identity) {
  const OperatorPair p = symmetrized_pair(Matrix::Identity(2, 2), Matrix::Identity(2, 2));
  EXPECT_LE((p.first - 2.0 * Matrix::Identity(2, 2)).norm(), 1e-15);
  EXPECT_LE((p.second - Matrix::Identity(2, 2)).norm(), 1e-15);
}

TEST(SymmetrizedPair, RandomDiagonal) {
  Rng rng(3);
  Vector a(8), b(8);
  for (int i = 0; i < 8; ++i) {
    a(i) = random_unimodular(rng);
    b(i) = random_unimodular(rng);
  }
  EXPECT_TRUE(gamma_unitary_check(symmetrized_pair(a.asDiagonal(), b.asDiagonal())).passed);
}

TEST(SymmetrizedPair, ConjugatePhases) {
  const double th = 0.7;
  const OperatorPair p = symmetrized_pair(std::polar(1.0, th) * Matrix::Identity(3, 3),
                                          std::polar(1.0, -th) * Matrix::Identity(3, 3));
  EXPECT_LE((p.first - 2.0 * std::cos(th) * Matrix::Identity(3, 3)).norm(), 1e-15);
  EXPECT_LE((p.second - Matrix::Identity(3, 3)).norm(), 1e-15);
}

TEST(FactorGammaUnitary, RoundTrip) {
  Rng rng(4);
  for (int t = 0; t < 10; ++t) {
    const Matrix q = random_unitary(rng, 3);
    Vector a(3), b(3);
    for (int i = 0; i < 3; ++i) {
      a(i) = random_unimodular(rng);
      b(i) = random_unimodular(rng);
    }
    const OperatorPair pair = symmetrized_pair(q * a.asDiagonal() * q.adjoint(), q * b.asDiagonal() * q.adjoint());
    const auto [u1, u2] = factor_gamma_unitary(pair);
    EXPECT_LE((u1 + u2 - pair.first).norm(), 1e-8);
    EXPECT_LE((u1 * u2 - pair.second).norm(), 1e-8);
    EXPECT_LE((u1.adjoint() * u1 - Matrix::Identity(3, 3)).norm(), 1e-8);
    EXPECT_LE((u1 * u2 - u2 * u1).norm(), 1e-8);
  }
}

TEST(FactorGammaUnitary, TieBreakPutsUpperRootFirst) {
  const auto [u1, u2] = factor_gamma_unitary(symmetrized_pair(diag({Complex(0, 1)}), diag({Complex(0, -1)})));
  EXPECT_NEAR(std::abs(u1(0, 0) - Complex(0, 1)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(u2(0, 0) - Complex(0, -1)), 0.0, 1e-12);
}

TEST(AtomicModel, SingleAtom) {
  AtomicMeasure mu;
  mu.atoms = {BGammaPoint::checked(2.0, 1.0)};
  mu.weights = {0.7};
  const AtomicModel m = atomic_h2_model(mu);
  EXPECT_NEAR(std::abs(m.pair.first(0, 0) - 2.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(m.pair.second(0, 0) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(m.cyclic_vector.norm(), std::sqrt(0.7), 1e-15);
}

TEST(AtomicModel, RandomDrawsPassAndAreCyclic) {
  Rng rng(5);
  for (int t = 0; t < 16; ++t) {
    const AtomicMeasure mu = random_measure(rng, 4);
    const AtomicModel m = atomic_h2_model(mu);
    EXPECT_TRUE(gamma_isometry_check(m.pair).passed);
    EXPECT_EQ(m.krylov_rank, 4);
    EXPECT_LE((m.pair.first - m.pair.first.adjoint() * m.pair.second).norm(), 1e-12);
    EXPECT_LE(spectral_norm(m.pair.first), 2.0 + 1e-12);
  }
}

TEST(AtomicModel, RejectsDuplicateAtoms) {
  AtomicMeasure mu;
  mu.atoms = {BGammaPoint::from_angles(0.1, 0.2), BGammaPoint::from_angles(0.1, 0.2)};
  mu.weights = {1.0, 1.0};
  EXPECT_THROW(atomic_h2_model(mu), InputError);
}

TEST(Krylov, RankOfIdentityPairIsOne) {
  EXPECT_EQ(krylov_rank({Matrix::Identity(3, 3), Matrix::Identity(3, 3)}, Vector::Ones(3), 4), 1);
}

TEST(Toeplitz, ConstantSymbol) {
  Rng rng(6);
  const AtomicMeasure mu = random_measure(rng, 3);
  const Complex c(0.6, 0.3);
  const std::vector<Matrix> vals(3, Matrix::Constant(1, 1, c));
  for (double delta : {0.1, 0.45, 0.9}) {
    const PositivityResult r = toeplitz_positivity(vals, mu, delta, 0.5);
    EXPECT_NEAR(r.min_eig, std::norm(c) - delta, 1e-12);
    EXPECT_EQ(r.positive, std::norm(c) - delta >= -1e-12);
  }
}

TEST(Toeplitz, MonotoneInDeltaAndDiagonalBound) {
  Rng rng(7);
  const AtomicMeasure mu = random_measure(rng, 4);
  const auto fn = [](const GPoint& x) {
    Matrix m(1, 2);
    m << phi(0.0, x), 0.5;
    return m;
  };
  double prev = std::numeric_limits<double>::infinity();
  for (double delta : {0.0, 0.1, 0.2, 0.5, 1.0}) {
    const PositivityResult r = toeplitz_positivity(fn, mu, delta, 0.9);
    EXPECT_LE(r.min_eig, prev + 1e-15);
    prev = r.min_eig;
  }
  double mx = 0.0;
  for (const BGammaPoint& a : mu.atoms) mx = std::max(mx, spectral_norm(fn(scale_point(GPoint{a.s, a.p}, 0.9))));
  EXPECT_FALSE(toeplitz_positivity(fn, mu, mx * mx + 0.01, 0.9).positive);
}

TEST(SpectralProbe, AtomicModelConsistent) {
  Rng rng(8);
  const AtomicModel m = atomic_h2_model(random_measure(rng, 4));
  const SpectralProbeReport r = spectral_set_probe(m.pair, 4, 100, 9, 1e-9, 2000);
  EXPECT_EQ(r.polynomials, 100);
  EXPECT_LE(r.max_ratio, 1.0 + 1e-6);
  EXPECT_FALSE(r.not_gamma_contraction);
}

TEST(SpectralProbe, ThreeIdentityViolatesForS) {
  Matrix c = Matrix::Zero(2, 1);
  c(1, 0) = 1.0;
  const SpectralProbeReport r =
      spectral_set_probe({3.0 * Matrix::Identity(2, 2), Matrix::Identity(2, 2)}, c);
  EXPECT_GT(r.max_ratio, 1.0);
  EXPECT_TRUE(r.not_gamma_contraction);
}

TEST(SpectralProbe, ConstantPolynomialRatioOne) {
  Rng rng(10);
  const AtomicModel m = atomic_h2_model(random_measure(rng, 3));
  const SpectralProbeReport r = spectral_set_probe(m.pair, Matrix::Constant(1, 1, Complex(0.4, -0.2)));
  EXPECT_NEAR(r.max_ratio, 1.0, 1e-12);
}

TEST(SupOverGamma, BracketsTheTrueValue) {
  Matrix c = Matrix::Zero(2, 2);
  c(0, 1) = 1.0;  // xi = p, sup = 1
  const SupEstimate e = sup_over_gamma(c, 1000, 1);
  EXPECT_LE(e.lower, 1.0 + 1e-12);
  EXPECT_GE(e.upper, 1.0 - 1e-12);
  EXPECT_GT(e.lower, 0.99);
}
