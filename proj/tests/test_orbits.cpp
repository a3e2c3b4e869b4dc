#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "jspec/orbits.hpp"
#include "test_support.hpp"

using namespace jspec;
using fixtures::max_abs;

namespace {

Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  std::copy(xs.begin(), xs.end(), v.data());
  return v;
}

RealMatrix rotation2(double angle) {
  RealMatrix r(2, 2);
  r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return r;
}

Element sym(const RealMatrix& m) { return from_real_matrix(Algebra::real_symmetric(static_cast<int>(m.rows())), m); }

template <class M>
double frobenius_gap(const M& a, const M& b) {
  return (a - b).norm();
}

double representation_gap(const Automorphism& a, const Automorphism& b) { return representation_distance(a, b); }

}  // namespace

TEST(Automorphism, IdentityAndMembershipInG) {
  for (const auto& a : fixtures::all_algebras()) {
    const Automorphism id = Automorphism::identity(a);
    EXPECT_TRUE(id.in_identity_component());
    const Element x = random_element(a, 1);
    EXPECT_EQ(id.apply(x).coords(), x.coords()) << a.name();
  }
  RealMatrix reflect = RealMatrix::Identity(2, 2);
  reflect(1, 1) = -1;
  EXPECT_FALSE(Automorphism::real_symmetric(Algebra::real_symmetric(2), reflect).in_identity_component());
  RealMatrix reflect3 = RealMatrix::Identity(3, 3);
  reflect3(2, 2) = -1;
  // -U acts like U, so odd sizes always land in G.
  EXPECT_TRUE(Automorphism::real_symmetric(Algebra::real_symmetric(3), reflect3).in_identity_component());
  EXPECT_FALSE(Automorphism::spin(Algebra::spin(3), reflect).in_identity_component());
  EXPECT_THROW(Automorphism::real_symmetric(Algebra::real_symmetric(2), 2.0 * reflect), Error);
}

TEST(Automorphism, NotInGRejectedByGPath) {
  RealMatrix reflect = RealMatrix::Identity(2, 2);
  reflect(0, 0) = -1;
  try {
    g_path(Automorphism::real_symmetric(Algebra::real_symmetric(2), reflect));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotInIdentityComponent);
  }
}

TEST(Automorphism, PreservesProductInnerProductAndEigenvalues) {
  for (const auto& a : fixtures::all_algebras()) {
    for (std::uint64_t s = 0; s < 100; ++s) {
      const Automorphism phi = random_g_element(a, s);
      EXPECT_TRUE(phi.in_identity_component());
      const Element x = random_element(a, 2 * s + 100);
      const Element y = random_element(a, 2 * s + 101);
      const Element lhs = phi(jordan_product(x, y));
      const Element rhs = jordan_product(phi(x), phi(y));
      EXPECT_LE(distance(lhs, rhs), 1e-8 * std::max(1.0, norm(lhs))) << a.name();
      const double ip = inner_product(x, y);
      EXPECT_LE(std::abs(inner_product(phi(x), phi(y)) - ip), 1e-8 * std::max(1.0, std::abs(ip))) << a.name();
      EXPECT_LE(max_abs(eigen_map(phi(x)).values() - eigen_map(x).values()), 1e-8) << a.name();
    }
  }
}

TEST(Automorphism, RandomElementsAreDeterministicAndUnitary) {
  const Algebra h = Algebra::complex_hermitian(3);
  EXPECT_EQ(random_g_element(h, 5).complex_matrix(), random_g_element(h, 5).complex_matrix());
  const ComplexMatrix u = random_g_element(h, 5).complex_matrix();
  EXPECT_LE((u.adjoint() * u - ComplexMatrix::Identity(3, 3)).norm(), 1e-12);
  const RealMatrix r = random_g_element(Algebra::real_symmetric(4), 6).real_matrix();
  EXPECT_NEAR(r.determinant(), 1.0, 1e-12);
}

TEST(FrameTransport, IdentityWhenFramesAgree) {
  const Algebra s3 = Algebra::real_symmetric(3);
  const JordanFrame f = canonical_frame(s3);
  const Automorphism phi = frame_transport(f, f);
  EXPECT_LE(frobenius_gap(phi.real_matrix(), RealMatrix(RealMatrix::Identity(3, 3))), 1e-15);
}

TEST(FrameTransport, QuarterPiRotationInS2) {
  const Algebra s2 = Algebra::real_symmetric(2);
  RealMatrix swap(2, 2);
  swap << 0, 1, 1, 0;
  const auto target = spectral_decompose(sym(swap)).frame;
  const Automorphism phi = frame_transport(canonical_frame(s2), target);
  // Oracle by direct multiplication: R(pi/4) diag(1,0) R(pi/4)^T.
  const RealMatrix r = rotation2(std::numbers::pi / 4);
  RealMatrix e1 = RealMatrix::Zero(2, 2);
  e1(0, 0) = 1;
  const RealMatrix expected = r * e1 * r.transpose();
  RealMatrix half(2, 2);
  half << 0.5, 0.5, 0.5, 0.5;
  EXPECT_LE(frobenius_gap(expected, half), 1e-15);
  EXPECT_LE(frobenius_gap(to_real_matrix(phi.apply(sym(e1))), half), 1e-12);
  EXPECT_LE(frobenius_gap(phi.real_matrix(), r), 1e-12);
}

TEST(FrameTransport, MapsFramesAndHasUnitDeterminant) {
  for (const auto& a : fixtures::simple_algebras()) {
    for (std::uint64_t s = 0; s < 50; ++s) {
      const JordanFrame e = fixtures::random_frame(a, 2 * s);
      const JordanFrame f = fixtures::random_frame(a, 2 * s + 1);
      const Automorphism phi = frame_transport(e, f);
      EXPECT_TRUE(phi.in_identity_component());
      for (std::size_t i = 0; i < e.size(); ++i) EXPECT_LE(distance(phi(e[i]), f[i]), 1e-8) << a.name();
      if (a.kind() == Kind::RealSymmetric) EXPECT_NEAR(phi.real_matrix().determinant(), 1.0, 1e-10);
    }
  }
}

TEST(FrameTransport, RejectsProducts) {
  const Algebra p = Algebra::euclidean(2);
  try {
    frame_transport(canonical_frame(p), canonical_frame(p));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnsupportedKind);
  }
}

TEST(GPath, IdentityIsConstant) {
  const Algebra h = Algebra::complex_hermitian(3);
  const GPath p = g_path(Automorphism::identity(h));
  for (double t : {0.0, 0.3, 1.0})
    EXPECT_LE(representation_gap(p.sample(t), Automorphism::identity(h)), 1e-15);
}

TEST(GPath, HalfwayRotationHalvesTheAngle) {
  const Algebra s2 = Algebra::real_symmetric(2);
  const GPath p = g_path(Automorphism::real_symmetric(s2, rotation2(std::numbers::pi / 4)));
  EXPECT_LE(frobenius_gap(p.sample(0.5).real_matrix(), rotation2(std::numbers::pi / 8)), 1e-15);
}

TEST(GPath, EndpointFidelity) {
  for (const auto& a : fixtures::all_algebras()) {
    for (std::uint64_t s = 0; s < 50; ++s) {
      const Automorphism phi = random_g_element(a, s);
      const GPath p = g_path(phi);
      EXPECT_LE(representation_gap(p.sample(1.0), phi), 1e-9) << a.name();
      EXPECT_LE(representation_gap(p.sample(0.0), Automorphism::identity(a)), 1e-12) << a.name();
      EXPECT_TRUE(p.sample(0.37).in_identity_component());
    }
  }
}

TEST(GPath, IncrementsScaleWithStep) {
  const Automorphism phi = random_g_element(Algebra::complex_hermitian(4), 3);
  const GPath p = g_path(phi);
  double worst_ratio = 0.0;
  for (double dt : {1e-2, 1e-3}) {
    double worst = 0.0;
    for (double t = 0.0; t + dt <= 1.0; t += dt) worst = std::max(worst, representation_gap(p.sample(t), p.sample(t + dt)));
    worst_ratio = std::max(worst_ratio, worst / dt);
  }
  EXPECT_LT(worst_ratio, 50.0);
}

TEST(OrbitPath, ConstantWhenEndpointsAgree) {
  const Element x = random_element(Algebra::real_symmetric(3), 4);
  const PathPolyline p = orbit_path(x, x, 10);
  for (const auto& s : p.samples) EXPECT_LE(distance(s, x), 1e-12);
}

TEST(OrbitPath, RankOneProjectionsStayOnTheSphere) {
  const Algebra s3 = Algebra::real_symmetric(3);
  RealMatrix c1 = RealMatrix::Zero(3, 3);
  c1(0, 0) = 1;
  Rng rng(9);
  const Vec v = rng.normal_vector(3).normalized();
  const Element x = sym(c1);
  const Element y = sym(v * v.transpose());
  const PathPolyline p = orbit_path(x, y, 100);
  EXPECT_LE(distance(p.back(), y), 1e-10);
  for (const auto& s : p.samples) {
    EXPECT_LE(max_abs(eigen_map(s).values() - vec({1, 0, 0})), 1e-8);
    EXPECT_LE(distance(jordan_product(s, s), s), 1e-10);
  }
}

TEST(OrbitPath, PrimitiveIdempotentCircle) {
  const Element x = sym(RealMatrix(vec({1, 0}).asDiagonal()));
  RealMatrix half(2, 2);
  half << 0.5, 0.5, 0.5, 0.5;
  const PathPolyline p = orbit_path(x, sym(half), 50);
  double last = -1.0;
  for (const auto& s : p.samples) {
    const RealMatrix m = to_real_matrix(s);
    const double theta = std::atan2(m(1, 0) + m(1, 0), m(0, 0) - m(1, 1)) / 2;  // tan 2θ = 2 m01 / (m00 - m11)
    RealMatrix expected(2, 2);
    const double c = std::cos(theta), sn = std::sin(theta);
    expected << c * c, c * sn, c * sn, sn * sn;
    EXPECT_LE(frobenius_gap(m, expected), 1e-8);
    EXPECT_GE(theta, last - 1e-15);
    last = theta;
  }
  EXPECT_NEAR(last, std::numbers::pi / 4, 1e-10);
}

TEST(OrbitPath, EigenvalueDriftAndEndpoints) {
  Rng rng(123);
  for (int run = 0; run < 40; ++run) {
    const Algebra a = fixtures::random_algebra(rng, true);
    const Element x = random_element(a, derive_seed(5, run));
    const Element y = random_g_element(a, derive_seed(6, run)).apply(x);
    const PathPolyline p = orbit_path(x, y, 200);
    EXPECT_LE(fixtures::eigenvalue_drift(p, eigen_map(x).values()), 1e-8) << a.name();
    EXPECT_LE(distance(p.front(), x), 1e-10);
    EXPECT_LE(distance(p.back(), y), 1e-10) << a.name();
  }
}

TEST(OrbitPath, Errors) {
  const Algebra s2 = Algebra::real_symmetric(2);
  try {
    orbit_path(unit_element(s2), Element::zero(s2), 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EigenvalueMismatch);
  }
  const Algebra r3 = Algebra::euclidean(3);
  EXPECT_THROW(orbit_path(unit_element(r3), unit_element(r3), 5), Error);
  EXPECT_THROW(orbit_path(unit_element(s2), unit_element(s2), 1), Error);
}

TEST(RestrictedOrbitPath, CoordinateVectors) {
  const Algebra r3 = Algebra::euclidean(3);
  const Element c1(r3, Vec::Unit(3, 0));
  const PathPolyline p = restricted_orbit_path(c1, c1, 5);
  for (const auto& s : p.samples) EXPECT_EQ(s.coords(), c1.coords());
  try {
    restricted_orbit_path(c1, Element(r3, Vec::Unit(3, 1)), 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotInRestrictedOrbit);
  }
}

TEST(RestrictedOrbitPath, MixedProductStaysInRestrictedOrbit) {
  const Algebra p = Algebra::product({Algebra::real_symmetric(2), Algebra::spin(3)});
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Element x = random_element(p, s);
    const Element y = random_g_element(p, s + 50).apply(x);
    const PathPolyline path = restricted_orbit_path(x, y, 30);
    EXPECT_LE(distance(path.back(), y), 1e-10);
    for (const auto& smp : path.samples)
      for (std::size_t i = 0; i < p.factor_count(); ++i)
        EXPECT_LE(max_abs(eigen_map(smp.factor(i)).values() - eigen_map(x.factor(i)).values()), 1e-8);
  }
}

TEST(OrbitSample, UnitIsFixed) {
  for (const auto& a : fixtures::simple_algebras())
    for (const auto& y : orbit_sample(unit_element(a), 20, 1)) EXPECT_LE(distance(y, unit_element(a)), 1e-12);
}

TEST(OrbitSample, RankOneProjections) {
  const Element x = sym(RealMatrix(vec({1, 0, 0}).asDiagonal()));
  for (const auto& y : orbit_sample(x, 100, 2)) {
    const RealMatrix m = to_real_matrix(y);
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(m);
    const Vec u = es.eigenvectors().col(2);
    EXPECT_NEAR(u.norm(), 1.0, 1e-12);
    EXPECT_LE((m - u * u.transpose()).norm(), 1e-10);
  }
}

TEST(OrbitSample, SpinSphere) {
  const Element x(Algebra::spin(4), vec({0, 1, 0, 0}));
  for (const auto& y : orbit_sample(x, 100, 3)) {
    EXPECT_NEAR(y.coords()[0], 0.0, 1e-15);
    EXPECT_NEAR(y.coords().tail(3).norm(), 1.0, 1e-12);
  }
}

TEST(OrbitSample, DeterministicPerIndexAndRejectsProducts) {
  const Element x = random_element(Algebra::complex_hermitian(3), 8);
  const auto a = orbit_sample(x, 5, 11);
  const auto b = orbit_sample(x, 10, 11);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].coords(), b[i].coords());
  EXPECT_THROW(orbit_sample(unit_element(Algebra::euclidean(2)), 3, 0), Error);
}
