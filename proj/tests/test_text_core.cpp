#include <cmath>
#include <functional>

#include <gtest/gtest.h>

#include "enscribe/random.hpp"
#include "enscribe/screen.hpp"

using namespace enscribe;

namespace {

QuantumText qubit_pair(double z) {
  const double ap = std::sqrt((1.0 + z) / 2.0), am = std::sqrt((1.0 - z) / 2.0);
  return make_text(2, {{ap, am}, {ap, -am}});
}

QuantumText one_zero_overlap() {
  const double s = 1.0 / std::sqrt(3.0);
  return make_text(3, {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {s, s, s}});
}

void expect_error(ErrorKind kind, const std::function<void()>& f) {
  try {
    f();
    FAIL() << "expected " << to_string(kind);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), kind) << e.what();
  }
}

}  // namespace

TEST(MakeText, OrthonormalPairIsValid) {
  const QuantumText t = make_text(2, {{1.0, 0.0}, {0.0, 1.0}});
  EXPECT_EQ(t.size(), 2);
  EXPECT_EQ(t.dimension(), 2);
}

TEST(MakeText, ColinearPairRejected) {
  const Complex ph = std::polar(1.0, 0.7);
  expect_error(ErrorKind::ColinearPair, [&] { make_text(2, {{1.0, 0.0}, {ph, 0.0}}); });
}

TEST(MakeText, QubitExampleOverlap) {
  const QuantumText t = qubit_pair(std::sqrt(3.0) - 2.0);
  EXPECT_NEAR(std::abs(t.state(0).dot(t.state(1)) - (std::sqrt(3.0) - 2.0)), 0.0, 1e-15);
}

TEST(MakeText, ErrorPaths) {
  expect_error(ErrorKind::NonUnitState, [] { make_text(2, {{1.0, 1.0}}); });
  expect_error(ErrorKind::DimensionMismatch, [] { make_text(2, {{1.0, 0.0, 0.0}}); });
  expect_error(ErrorKind::DimensionMismatch, [] { make_text(2, {}); });
  expect_error(ErrorKind::DimensionMismatch, [] { make_text(0, {{}}); });
}

TEST(MakeText, RenormalizesWithinTolerance) {
  const QuantumText t = make_text(2, {{1.0 + 1e-11, 0.0}});
  EXPECT_DOUBLE_EQ(t.state(0).norm(), 1.0);
}

TEST(Gram, OrthonormalTripleIsIdentity) {
  const QuantumText t = make_text(Matrix::Identity(3, 3));
  EXPECT_LT(max_abs_diff(gram(t), Matrix::Identity(3, 3)), 1e-15);
}

TEST(Gram, MatchesPairwiseInnerProducts) {
  random::Engine rng(11);
  const QuantumText t = random::random_text(4, 4, rng);
  const Matrix g = gram(t);
  for (Eigen::Index i = 0; i < 4; ++i) {
    for (Eigen::Index j = 0; j < 4; ++j) {
      Complex acc = 0.0;
      for (Eigen::Index a = 0; a < 4; ++a) acc += std::conj(t.state(i)(a)) * t.state(j)(a);
      EXPECT_LT(std::abs(g(i, j) - acc), 1e-14);
    }
  }
}

TEST(Gram, PropertyHermitianUnitDiagonalPsdAndTripleInequality) {
  random::Engine rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index n = 3 + trial % 4, d = 2 + trial % 5;
    const QuantumText t = random::random_text(n, d, rng);
    const Matrix g = gram(t);
    EXPECT_LT(max_abs_diff(g, g.adjoint()), 1e-14);
    for (Eigen::Index i = 0; i < n; ++i) EXPECT_NEAR(g(i, i).real(), 1.0, 1e-12);
    EXPECT_TRUE(is_psd(g));
    for (Eigen::Index a = 0; a < n; ++a)
      for (Eigen::Index b = a + 1; b < n; ++b)
        for (Eigen::Index c = b + 1; c < n; ++c) EXPECT_GE(triple_inequality_margin(g, a, b, c), -1e-12);
  }
}

TEST(Classify, OrthonormalBasis) {
  const TextClassification c = classify(make_text(Matrix::Identity(3, 3)));
  EXPECT_TRUE(c.classical);
  EXPECT_TRUE(c.efficient);
  EXPECT_TRUE(c.thick);
  EXPECT_FALSE(c.fully_quantum);
}

TEST(Classify, OneZeroOverlapIsNeither) {
  const TextClassification c = classify(one_zero_overlap());
  EXPECT_FALSE(c.classical);
  EXPECT_FALSE(c.fully_quantum);
  EXPECT_TRUE(c.efficient);
}

TEST(Classify, DegenerateUniformTexts) {
  EXPECT_FALSE(classify(make_real_uniform(3, -0.5)).efficient);
  const QuantumText t = make_real_uniform(4, -1.0 / 3.0);
  EXPECT_EQ(hermitian_rank(gram(t)), 3);
  EXPECT_FALSE(classify(t).efficient);
}

TEST(Classify, StructuralImplications) {
  random::Engine rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index d = 2 + trial % 4;
    const QuantumText t = trial % 2 ? random::random_classical_text(1 + trial % d, d, rng)
                                    : random::random_text(2 + trial % 5, d, rng);
    const TextClassification c = classify(t);
    if (c.classical) EXPECT_TRUE(c.efficient);
    if (t.size() == 2) EXPECT_TRUE(c.efficient);
    EXPECT_EQ(c.thick, c.dialect_dimension == d);
  }
}

TEST(Classify, InvariantUnderEquivalence) {
  random::Engine rng(14);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index n = 2 + trial % 4, d = 2 + trial % 3;
    const QuantumText t = trial % 3 == 0 ? random::random_classical_text(std::min(n, d), d, rng)
                                         : random::random_text(n, d, rng);
    const QuantumText moved = apply_equivalence(t, random::random_equivalence(t.size(), d, rng));
    const TextClassification a = classify(t), b = classify(moved);
    EXPECT_EQ(a.classical, b.classical);
    EXPECT_EQ(a.fully_quantum, b.fully_quantum);
    EXPECT_EQ(a.efficient, b.efficient);
    EXPECT_EQ(a.thick, b.thick);
    EXPECT_EQ(a.dialect_dimension, b.dialect_dimension);
  }
}

TEST(RealUniform, Examples) {
  EXPECT_LT(max_abs_diff(gram(make_real_uniform(3, 0.0)), Matrix::Identity(3, 3)), 1e-15);
  const Matrix g = gram(make_real_uniform(3, 0.5));
  for (Eigen::Index i = 0; i < 3; ++i)
    for (Eigen::Index j = 0; j < 3; ++j)
      if (i != j) EXPECT_NEAR(std::abs(g(i, j) - 0.5), 0.0, 1e-12);
  EXPECT_THROW(make_real_uniform(3, -0.6), Error);
  EXPECT_THROW(make_real_uniform(3, 1.0), Error);
}

TEST(RealUniform, EfficientAndFullyQuantumExactlyAwayFromSpecialPoints) {
  for (int n : {3, 4, 5}) {
    for (int k = -4; k <= 18; ++k) {
      const double z = 0.05 * k;
      if (z < -1.0 / (n - 1.0)) continue;
      const TextClassification c = classify(make_real_uniform(n, z));
      EXPECT_EQ(c.efficient, std::abs(z + 1.0 / (n - 1.0)) > 1e-12) << n << " " << z;
      EXPECT_EQ(c.fully_quantum, z != 0.0) << n << " " << z;
    }
    EXPECT_FALSE(classify(make_real_uniform(n, -1.0 / (n - 1.0))).efficient);
  }
}

TEST(RealUniform, GaugeRecoversZAndPhases) {
  random::Engine rng(15);
  for (double z : {-0.3, -0.1, 0.2, 0.6}) {
    const QuantumText t = apply_equivalence(make_real_uniform(4, z), random::random_equivalence(4, 4, rng));
    const auto gauge = as_real_uniform(gram(t));
    ASSERT_TRUE(gauge);
    EXPECT_NEAR(gauge->z, z, 1e-12);
  }
  random::Engine rng2(16);
  EXPECT_FALSE(as_real_uniform(gram(random::random_text(3, 3, rng2))));
}

TEST(Equivalence, ReflexiveIdentityWitness) {
  random::Engine rng(17);
  const QuantumText t = random::random_text(3, 3, rng);
  const auto w = equivalent(t, t);
  ASSERT_TRUE(w);
  EXPECT_LT(witness_error(t, t, *w), 1e-9);
}

TEST(Equivalence, RecoversTransformAndIsSymmetric) {
  random::Engine rng(18);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = 2 + trial % 4, d = 2 + trial % 3;
    const QuantumText a = random::random_text(n, d, rng);
    const QuantumText b = apply_equivalence(a, random::random_equivalence(n, d, rng));
    const auto ab = equivalent(b, a);
    const auto ba = equivalent(a, b);
    ASSERT_TRUE(ab);
    ASSERT_TRUE(ba);
    EXPECT_LT(witness_error(b, a, *ab), 1e-9);
    EXPECT_LT(witness_error(a, b, *ba), 1e-9);
  }
}

TEST(Equivalence, TwoTextsWithDifferentOverlapsAreNot) {
  EXPECT_FALSE(equivalent(qubit_pair(0.3), qubit_pair(0.4)));
  EXPECT_TRUE(equivalent(qubit_pair(0.3), qubit_pair(-0.3)));
}

TEST(Equivalence, SizeMismatchThrows) {
  EXPECT_THROW(equivalent(qubit_pair(0.3), make_real_uniform(3, 0.1)), Error);
  random::Engine rng(20);
  EXPECT_THROW(apply_equivalence(qubit_pair(0.3), random::random_equivalence(2, 3, rng)), Error);
  EXPECT_THROW(apply_equivalence(qubit_pair(0.3), random::random_equivalence(3, 2, rng)), Error);
}

TEST(DirectSum, ClassicalTextWithStateTablet) {
  const QuantumText t = make_text(Matrix::Identity(3, 3));
  const DirectSumReport r = direct_sum_decompose(t, t.state(0));
  EXPECT_EQ(r.classical_indices, (std::vector<Eigen::Index>{1, 2}));
  EXPECT_EQ(r.fully_quantum_indices, (std::vector<Eigen::Index>{0}));
  EXPECT_TRUE(r.consistent);
}

TEST(DirectSum, OneZeroOverlapNeverConsistent) {
  const QuantumText t = one_zero_overlap();
  for (int a = 0; a < 6; ++a) {
    for (int b = 0; b < 6; ++b) {
      Vector tab(3);
      tab << std::cos(0.5 * a), std::polar(std::sin(0.5 * a), 1.0 * b), 0.3 * b;
      if (tab.norm() < 1e-6) continue;
      EXPECT_FALSE(direct_sum_decompose(t, tab.normalized()).consistent);
    }
  }
  // Tablets orthogonal to some states as well.
  Vector e2 = Vector::Zero(3);
  e2(2) = 1.0;
  EXPECT_FALSE(direct_sum_decompose(t, e2).consistent);
}

TEST(DirectSum, FullyQuantumGenericTablet) {
  const QuantumText t = make_real_uniform(3, 0.4);
  const Vector tab = (t.state(0) + t.state(1) + t.state(2)).normalized();
  const DirectSumReport r = direct_sum_decompose(t, tab);
  EXPECT_TRUE(r.classical_indices.empty());
  EXPECT_TRUE(r.consistent);
}

TEST(Dialect, ProjectorOfThinText) {
  Matrix s = Matrix::Zero(3, 2);
  s(0, 0) = 1.0;
  s(0, 1) = 0.6;
  s(1, 1) = 0.8;
  const Matrix p = dialect_projector(make_text(s));
  EXPECT_LT(max_abs_diff(p * p, p), 1e-14);
  EXPECT_NEAR(p.trace().real(), 2.0, 1e-14);
  EXPECT_NEAR(std::abs(p(2, 2)), 0.0, 1e-14);
}

TEST(Screen, Examples) {
  EXPECT_EQ(illegibility_screen(one_zero_overlap()).reason, IllegibleReason::OverlapPattern);
  EXPECT_EQ(illegibility_screen(one_zero_overlap()).verdict(), "illegible(overlap_pattern)");

  Matrix dep(2, 3);
  dep << 1.0, 0.0, std::sqrt(0.5), 0.0, 1.0, std::sqrt(0.5);
  EXPECT_EQ(illegibility_screen(make_text(dep)).reason, IllegibleReason::Inefficient);

  const IllegibilityReport u = illegibility_screen(make_real_uniform(3, 0.4));
  EXPECT_TRUE(u.possibly_enscribable());
  ASSERT_TRUE(u.eigen_sign);
  EXPECT_EQ(*u.eigen_sign, -1);
  const RealVector ev = reciprocal_overlap_spectrum(gram(make_real_uniform(3, 0.4)));
  EXPECT_EQ((ev.array() < 0.0).count(), 2);

  EXPECT_EQ(illegibility_screen(make_real_uniform(3, -0.3)).reason, IllegibleReason::UniformThreshold);
  EXPECT_TRUE(illegibility_screen(make_real_uniform(3, -0.15)).possibly_enscribable());
}

TEST(Screen, ClassicalTextsPass) {
  random::Engine rng(19);
  for (int trial = 0; trial < 10; ++trial) {
    EXPECT_TRUE(illegibility_screen(random::random_classical_text(3, 4, rng)).possibly_enscribable());
  }
}
