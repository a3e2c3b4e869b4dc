#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "jspec/spectral.hpp"
#include "test_support.hpp"

using namespace jspec;
using fixtures::max_abs;

namespace {

Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  std::copy(xs.begin(), xs.end(), v.data());
  return v;
}

Element diag(const Algebra& a, const Vec& d) {
  return from_real_matrix(a, RealMatrix(d.asDiagonal()));
}

}  // namespace

TEST(EigenMap, Examples) {
  const Algebra s2 = Algebra::real_symmetric(2);
  EXPECT_EQ(eigen_map(diag(s2, vec({1, 0}))).values(), vec({1, 0}));
  EXPECT_EQ(eigen_map(Element(Algebra::spin(3), vec({1, 1, 0}))).values(), vec({2, 0}));
  // R^3 as a product of scalars: lambda(q) = q sorted.
  EXPECT_EQ(eigen_map(Element(Algebra::euclidean(3), vec({0, 1, 0}))).values(), vec({1, 0, 0}));
}

TEST(EigenMap, ProductConcatenatesThenSorts) {
  const auto p = Algebra::product({Algebra::spin(3), Algebra::real_symmetric(1)});
  const Element x(p, vec({0, 3, 0, 1}));  // spin part has eigenvalues (3, -3)
  EXPECT_EQ(eigen_map(x).values(), vec({3, 1, -3}));
  EXPECT_EQ(factor_blocks(x), vec({3, -3, 1}));
}

// Independent oracle: Eigen's self-adjoint solver.
TEST(EigenMap, AgreesWithReferenceSolver) {
  for (int n = 1; n <= 6; ++n) {
    const Algebra a = Algebra::real_symmetric(n);
    for (std::uint64_t s = 0; s < 20; ++s) {
      const Element x = random_element(a, s);
      Eigen::SelfAdjointEigenSolver<RealMatrix> ref(to_real_matrix(x));
      const Vec expected = ref.eigenvalues().reverse();
      EXPECT_LE(max_abs(eigen_map(x).values() - expected), 1e-12 * std::max(1.0, max_abs(expected)));
    }
  }
  for (int n = 1; n <= 4; ++n) {
    const Algebra a = Algebra::complex_hermitian(n);
    for (std::uint64_t s = 0; s < 20; ++s) {
      const Element x = random_element(a, s);
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> ref(to_complex_matrix(x));
      const Vec expected = ref.eigenvalues().reverse();
      EXPECT_LE(max_abs(eigen_map(x).values() - expected), 1e-12 * std::max(1.0, max_abs(expected)));
    }
  }
}

TEST(EigenMap, SweepCapRaisesNumericFailure) {
  const RealMatrix m = to_real_matrix(random_element(Algebra::real_symmetric(4), 1));
  try {
    jacobi_eigen<double>(m, 0);
    FAIL() << "expected a numeric failure";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NumericFailure);
  }
  // Diagonal input converges without a sweep.
  EXPECT_EQ(jacobi_eigen<double>(RealMatrix(vec({3, 1}).asDiagonal()), 0).sweeps, 0);
}

TEST(SpectralDecompose, DiagonalMatrix) {
  const Algebra s2 = Algebra::real_symmetric(2);
  const auto d = spectral_decompose(diag(s2, vec({3, 1})));
  EXPECT_EQ(d.values.values(), vec({3, 1}));
  EXPECT_LE(distance(d.frame[0], diag(s2, vec({1, 0}))), 1e-15);
  EXPECT_LE(distance(d.frame[1], diag(s2, vec({0, 1}))), 1e-15);
}

TEST(SpectralDecompose, SpinIdempotents) {
  const Algebra sp = Algebra::spin(3);
  const auto d = spectral_decompose(Element(sp, vec({0, 2, 0})));
  EXPECT_EQ(d.values.values(), vec({2, -2}));
  EXPECT_EQ(d.frame[0].coords(), vec({0.5, 0.5, 0}));
  EXPECT_EQ(d.frame[1].coords(), vec({0.5, -0.5, 0}));
}

TEST(SpectralDecompose, SpinZeroVectorPartUsesFirstAxis) {
  const auto d = spectral_decompose(Element(Algebra::spin(4), vec({1.5, 0, 0, 0})));
  EXPECT_EQ(d.values.values(), vec({1.5, 1.5}));
  EXPECT_EQ(d.frame[0].coords(), vec({0.5, 0.5, 0, 0}));
  EXPECT_FALSE(d.frame.violation().has_value());
}

TEST(SpectralDecompose, RandomS4RoundTrip) {
  const Element x = random_element(Algebra::real_symmetric(4), 2024);
  const auto d = spectral_decompose(x);
  EXPECT_LE(distance(compose_theta(d.values.values(), d.frame), x), 1e-8 * norm(x));
  EXPECT_FALSE(d.frame.violation().has_value());
}

TEST(ComposeTheta, Examples) {
  const Algebra s2 = Algebra::real_symmetric(2);
  const JordanFrame f = canonical_frame(s2);
  EXPECT_EQ(compose_theta(vec({2, 1}), f).coords(), diag(s2, vec({2, 1})).coords());
  EXPECT_EQ(eigen_map(compose_theta(vec({1, 3}), fixtures::random_frame(s2, 9))).size(), 2);
  EXPECT_LE(max_abs(eigen_map(compose_theta(vec({1, 3}), fixtures::random_frame(s2, 9))).values() - vec({3, 1})),
            1e-14);
  EXPECT_EQ(norm(compose_theta(Vec::Zero(2), f)), 0.0);
  EXPECT_THROW(compose_theta(vec({1, 2, 3}), f), Error);
}

TEST(Sorting, Examples) {
  EXPECT_EQ(sort_desc(vec({1, 3, 2})).values(), vec({3, 2, 1}));
  EXPECT_EQ(sort_desc(vec({2, 2, 2})).values(), vec({2, 2, 2}));
  const Vec q = vec({0.5, -1, 4, 4, 0});
  EXPECT_EQ(sort_asc(q), sort_desc(q).values().reverse());
  EXPECT_THROW(EigenvalueVector(vec({1, 2})), Error);
}

TEST(Sorting, StableUnderTies) {
  const auto order = descending_order(vec({1, 2, 1, 2}));
  EXPECT_EQ(order, (std::vector<int>{1, 3, 0, 2}));
}

TEST(JordanFrameValidation, CanonicalFramesAreValid) {
  for (const auto& a : fixtures::all_algebras()) EXPECT_FALSE(canonical_frame(a).violation().has_value()) << a.name();
}

TEST(JordanFrameValidation, RejectsBrokenFrames) {
  const Algebra s2 = Algebra::real_symmetric(2);
  EXPECT_THROW(JordanFrame::validated(s2, {diag(s2, vec({1, 0}))}), Error);
  EXPECT_THROW(JordanFrame::validated(s2, {diag(s2, vec({1, 0})), diag(s2, vec({1, 0}))}), Error);
  EXPECT_THROW(JordanFrame::validated(s2, {diag(s2, vec({2, 0})), diag(s2, vec({0, 1}))}), Error);
  try {
    JordanFrame::validated(s2, {diag(s2, vec({1, 0})), diag(s2, vec({0, 0}))});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::FrameInvariant);
  }
  EXPECT_NO_THROW(JordanFrame::validated(s2, {diag(s2, vec({0, 1})), diag(s2, vec({1, 0}))}));
}

TEST(SpectralProperties, RoundTripPerKind) {
  for (const auto& a : fixtures::all_algebras()) {
    double worst = 0.0;
    for (std::uint64_t s = 0; s < 1000; ++s) {
      const Element x = random_element(a, s, 1.0 + static_cast<double>(s % 7));
      const auto d = spectral_decompose(x);
      worst = std::max(worst, distance(compose_theta(d.values.values(), d.frame), x) / std::max(norm(x), 1e-300));
    }
    EXPECT_LE(worst, 1e-8) << a.name();
  }
}

TEST(SpectralProperties, LambdaOfThetaIsSortedQ) {
  for (const auto& a : fixtures::all_algebras()) {
    for (std::uint64_t s = 0; s < 100; ++s) {
      Rng rng(s);
      const Vec q = rng.normal_vector(a.rank());
      const Element x = compose_theta(q, fixtures::random_frame(a, s + 1000));
      EXPECT_LE(max_abs(eigen_map(x).values() - sort_desc(q).values()), 1e-9) << a.name();
    }
  }
}

TEST(SpectralProperties, FrameListingIndependence) {
  for (const auto& a : fixtures::all_algebras()) {
    Rng rng(77);
    const Vec q = rng.normal_vector(a.rank());
    const JordanFrame f = fixtures::random_frame(a, 78);
    std::vector<int> perm(static_cast<std::size_t>(a.rank()));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng.engine());
    Vec pq(a.rank());
    for (int i = 0; i < a.rank(); ++i) pq[i] = q[perm[static_cast<std::size_t>(i)]];
    EXPECT_LE(distance(compose_theta(pq, f.permuted(perm)), compose_theta(q, f)), 1e-14) << a.name();
  }
}

// ||lambda(x) - lambda(y)||_2 <= ||x - y|| (trace-form norm).
TEST(SpectralProperties, EigenvalueMapIsLipschitz) {
  for (const auto& a : fixtures::all_algebras()) {
    for (std::uint64_t s = 0; s < 200; ++s) {
      const Element x = random_element(a, 2 * s);
      const Element y = x + random_element(a, 2 * s + 1, s % 2 ? 1e-3 : 1.0);
      EXPECT_LE((eigen_map(x).values() - eigen_map(y).values()).norm(), distance(x, y) * (1 + 1e-12)) << a.name();
    }
  }
}
