#pragma once

// Automorphisms, transport between Jordan frames, paths inside the identity
// component G of Aut(V), and eigenvalue-orbit paths/samples.
//
// Representations:
//   S^n      X -> U X U^T, U orthogonal. For odd n, U and -U act identically,
//            so U is normalized to det U = +1 and every automorphism is in G.
//   H^n      X -> U X U^*, U unitary; Aut(H^n) is connected.
//   Spin(d)  (x0, xbar) -> (x0, R xbar), R orthogonal; G is det R = +1.
//   Product  factor-wise; factor-permuting automorphisms are not represented.

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "jspec/path.hpp"
#include "jspec/random.hpp"
#include "jspec/spectral.hpp"

namespace jspec {

inline constexpr double kUnitaryTolerance = 1e-10;
inline constexpr double kOrbitTolerance = 1e-8;

class Automorphism {
 public:
  static Automorphism identity(const Algebra& a) {
    switch (a.kind()) {
      case Kind::RealSymmetric: return real_symmetric(a, RealMatrix::Identity(a.order(), a.order()));
      case Kind::ComplexHermitian: return complex_hermitian(a, ComplexMatrix::Identity(a.order(), a.order()));
      case Kind::Spin: return spin(a, RealMatrix::Identity(a.dim() - 1, a.dim() - 1));
      case Kind::Product: {
        std::vector<Automorphism> fs;
        for (const auto& f : a.factors()) fs.push_back(identity(f));
        return product(a, std::move(fs));
      }
    }
    throw Error(ErrorKind::UnsupportedKind, a.name());
  }

  static Automorphism real_symmetric(const Algebra& a, RealMatrix u) {
    require(a.kind() == Kind::RealSymmetric, ErrorKind::DescriptorMismatch, "expected S^n, got " + a.name());
    check_unitary(u, a.order());
    double det = u.determinant();
    if (det < 0.0 && a.order() % 2 == 1) {
      u = -u;
      det = -det;
    }
    return Automorphism(a, std::move(u), {}, {}, det > 0.0);
  }

  static Automorphism complex_hermitian(const Algebra& a, ComplexMatrix u) {
    require(a.kind() == Kind::ComplexHermitian, ErrorKind::DescriptorMismatch, "expected H^n, got " + a.name());
    check_unitary(u, a.order());
    return Automorphism(a, {}, std::move(u), {}, true);
  }

  static Automorphism spin(const Algebra& a, RealMatrix r) {
    require(a.kind() == Kind::Spin, ErrorKind::DescriptorMismatch, "expected a spin algebra, got " + a.name());
    check_unitary(r, a.dim() - 1);
    const bool in_g = r.determinant() > 0.0;
    return Automorphism(a, std::move(r), {}, {}, in_g);
  }

  static Automorphism product(const Algebra& a, std::vector<Automorphism> factors) {
    require(a.kind() == Kind::Product && factors.size() == a.factor_count(), ErrorKind::DescriptorMismatch,
            "factor automorphisms do not match " + a.name());
    bool in_g = true;
    for (std::size_t i = 0; i < factors.size(); ++i) {
      require(factors[i].algebra() == a.factors()[i], ErrorKind::DescriptorMismatch,
              "factor " + std::to_string(i) + " automorphism acts on " + factors[i].algebra().name());
      in_g = in_g && factors[i].in_identity_component();
    }
    return Automorphism(a, {}, {}, std::move(factors), in_g);
  }

  const Algebra& algebra() const noexcept { return algebra_; }
  bool in_identity_component() const noexcept { return in_g_; }
  /// U for S^n, R for Spin(d).
  const RealMatrix& real_matrix() const noexcept { return real_; }
  /// U for H^n.
  const ComplexMatrix& complex_matrix() const noexcept { return complex_; }
  const std::vector<Automorphism>& factors() const noexcept { return factors_; }

  Element apply(const Element& x) const {
    require(x.algebra() == algebra_, ErrorKind::DescriptorMismatch,
            "automorphism of " + algebra_.name() + " applied to " + x.algebra().name());
    switch (algebra_.kind()) {
      case Kind::RealSymmetric:
        return from_real_matrix(algebra_, real_ * to_real_matrix(x) * real_.transpose());
      case Kind::ComplexHermitian:
        return from_complex_matrix(algebra_, complex_ * to_complex_matrix(x) * complex_.adjoint());
      case Kind::Spin: {
        Vec c = x.coords();
        c.tail(algebra_.dim() - 1) = real_ * x.coords().tail(algebra_.dim() - 1);
        return Element(algebra_, std::move(c));
      }
      case Kind::Product: {
        std::vector<Element> parts;
        for (std::size_t i = 0; i < factors_.size(); ++i) parts.push_back(factors_[i].apply(x.factor(i)));
        return from_factors(algebra_, parts);
      }
    }
    throw Error(ErrorKind::UnsupportedKind, algebra_.name());
  }

  Element operator()(const Element& x) const { return apply(x); }

 private:
  Automorphism(Algebra a, RealMatrix r, ComplexMatrix c, std::vector<Automorphism> f, bool in_g)
      : algebra_(std::move(a)), real_(std::move(r)), complex_(std::move(c)), factors_(std::move(f)), in_g_(in_g) {}

  template <class M>
  static void check_unitary(const M& u, int n) {
    require(u.rows() == n && u.cols() == n, ErrorKind::Precondition,
            "representation must be " + std::to_string(n) + "x" + std::to_string(n));
    const double err = (u.adjoint() * u - M::Identity(n, n)).cwiseAbs().maxCoeff();
    require(err <= kUnitaryTolerance, ErrorKind::Precondition,
            "representation is not orthogonal/unitary (error " + std::to_string(err) + ")");
  }

  Algebra algebra_;
  RealMatrix real_;
  ComplexMatrix complex_;
  std::vector<Automorphism> factors_;
  bool in_g_ = true;
};

/// Frobenius distance between representation matrices, summed over factors.
inline double representation_distance(const Automorphism& a, const Automorphism& b) {
  require(a.algebra() == b.algebra(), ErrorKind::DescriptorMismatch, "automorphisms of different algebras");
  switch (a.algebra().kind()) {
    case Kind::RealSymmetric:
    case Kind::Spin: return (a.real_matrix() - b.real_matrix()).norm();
    case Kind::ComplexHermitian: return (a.complex_matrix() - b.complex_matrix()).norm();
    case Kind::Product: {
      double s = 0.0;
      for (std::size_t i = 0; i < a.factors().size(); ++i)
        s += representation_distance(a.factors()[i], b.factors()[i]);
      return s;
    }
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Random elements of G.

namespace detail {

inline RealMatrix random_special_orthogonal(int n, Rng& rng) {
  RealMatrix g(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) g(i, j) = rng.normal();
  Eigen::HouseholderQR<RealMatrix> qr(g);
  RealMatrix q = qr.householderQ();
  const RealMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j)
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  if (q.determinant() < 0.0) q.col(0) *= -1.0;
  return q;
}

inline ComplexMatrix random_unitary(int n, Rng& rng) {
  ComplexMatrix g(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) g(i, j) = Complex(rng.normal(), rng.normal());
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const double m = std::abs(r(j, j));
    if (m > 0.0) q.col(j) *= r(j, j) / m;
  }
  return q;
}

}  // namespace detail

inline Automorphism random_g_element(const Algebra& a, Rng& rng) {
  switch (a.kind()) {
    case Kind::RealSymmetric: return Automorphism::real_symmetric(a, detail::random_special_orthogonal(a.order(), rng));
    case Kind::ComplexHermitian: return Automorphism::complex_hermitian(a, detail::random_unitary(a.order(), rng));
    case Kind::Spin: return Automorphism::spin(a, detail::random_special_orthogonal(a.dim() - 1, rng));
    case Kind::Product: {
      std::vector<Automorphism> fs;
      for (const auto& f : a.factors()) fs.push_back(random_g_element(f, rng));
      return Automorphism::product(a, std::move(fs));
    }
  }
  throw Error(ErrorKind::UnsupportedKind, a.name());
}

inline Automorphism random_g_element(const Algebra& a, std::uint64_t seed) {
  Rng rng(seed);
  return random_g_element(a, rng);
}

// ---------------------------------------------------------------------------
// Frame transport.

namespace detail {

/// Unit vector v with p = v v^* (up to a phase), taken from the column of p
/// with the largest diagonal entry.
template <class M>
Eigen::Matrix<typename M::Scalar, Eigen::Dynamic, 1> rank_one_vector(const M& p) {
  Eigen::Index k = 0;
  p.diagonal().real().maxCoeff(&k);
  const double d = std::real(p(k, k));
  require(d > 0.0, ErrorKind::FrameInvariant, "idempotent has no positive diagonal entry");
  return p.col(k) / std::sqrt(d);
}

/// Modified Gram-Schmidt on columns, in order.
template <class M>
M orthonormalize_columns(M u) {
  for (Eigen::Index j = 0; j < u.cols(); ++j) {
    for (Eigen::Index i = 0; i < j; ++i) u.col(j) -= u.col(i).dot(u.col(j)) * u.col(i);
    const double n = u.col(j).norm();
    require(n > 0.0, ErrorKind::FrameInvariant, "frame idempotents are linearly dependent");
    u.col(j) /= n;
  }
  return u;
}

inline RealMatrix frame_basis_real(const JordanFrame& f) {
  const int n = f.algebra().order();
  RealMatrix u(n, n);
  for (int i = 0; i < n; ++i) u.col(i) = rank_one_vector(to_real_matrix(f[static_cast<std::size_t>(i)]));
  return orthonormalize_columns(u);
}

inline ComplexMatrix frame_basis_complex(const JordanFrame& f) {
  const int n = f.algebra().order();
  ComplexMatrix u(n, n);
  for (int i = 0; i < n; ++i) u.col(i) = rank_one_vector(to_complex_matrix(f[static_cast<std::size_t>(i)]));
  return orthonormalize_columns(u);
}

/// Axis u of the spin idempotent 1/2 (1, u).
inline Vec spin_frame_axis(const JordanFrame& f) {
  const Vec bar = f[0].coords().tail(f.algebra().dim() - 1);
  const double n = bar.norm();
  require(n > 0.0, ErrorKind::FrameInvariant, "spin idempotent with zero vector part");
  return bar / n;
}

inline RealMatrix householder(const Vec& w) {
  return RealMatrix::Identity(w.size(), w.size()) - 2.0 * w * w.transpose() / w.squaredNorm();
}

/// Rotation in SO(m) taking unit u to unit v: the product of a reflection
/// swapping u and v with a reflection that fixes v.
inline RealMatrix rotation_taking(const Vec& u, const Vec& v) {
  const auto m = u.size();
  if ((u - v).norm() == 0.0) return RealMatrix::Identity(m, m);
  const RealMatrix h1 = householder(u - v);
  // Any unit w orthogonal to v: project the coordinate axis least aligned with v.
  Eigen::Index k = 0;
  v.cwiseAbs().minCoeff(&k);
  Vec w = Vec::Unit(m, k) - v[k] * v;
  return householder(w) * h1;
}

}  // namespace detail

/// An automorphism in G mapping E_i to F_i for every i (simple algebras).
inline Automorphism frame_transport(const JordanFrame& from, const JordanFrame& to) {
  const Algebra& a = from.algebra();
  require(a == to.algebra(), ErrorKind::DescriptorMismatch, a.name() + " vs " + to.algebra().name());
  require(a.is_simple(), ErrorKind::UnsupportedKind, "frame transport is defined for simple algebras only");
  if (auto why = from.violation()) throw Error(ErrorKind::FrameInvariant, "source frame: " + *why);
  if (auto why = to.violation()) throw Error(ErrorKind::FrameInvariant, "target frame: " + *why);

  switch (a.kind()) {
    case Kind::RealSymmetric: {
      const RealMatrix ue = detail::frame_basis_real(from);
      RealMatrix uf = detail::frame_basis_real(to);
      RealMatrix w = uf * ue.transpose();
      if (w.determinant() < 0.0) {
        // v v^T is unchanged by v -> -v.
        uf.col(a.order() - 1) *= -1.0;
        w = uf * ue.transpose();
      }
      return Automorphism::real_symmetric(a, w);
    }
    case Kind::ComplexHermitian: {
      const ComplexMatrix ue = detail::frame_basis_complex(from);
      const ComplexMatrix uf = detail::frame_basis_complex(to);
      return Automorphism::complex_hermitian(a, uf * ue.adjoint());
    }
    case Kind::Spin:
      return Automorphism::spin(a, detail::rotation_taking(detail::spin_frame_axis(from), detail::spin_frame_axis(to)));
    case Kind::Product: break;
  }
  throw Error(ErrorKind::UnsupportedKind, a.name());
}

// ---------------------------------------------------------------------------
// Paths in G.

/// Plane rotation in coordinates (p, q):
///   M(p,p) = M(q,q) = cos(angle), M(p,q) = -e^{i phase} sin(angle),
///   M(q,p) = e^{-i phase} sin(angle).
/// With phase = 0 this is the ordinary rotation by `angle`.
struct PlaneRotation {
  int p = 0;
  int q = 0;
  double angle = 0.0;
  double phase = 0.0;
};

class GPath {
 public:
  struct FactorPath {
    Kind kind = Kind::RealSymmetric;
    int size = 0;                          // matrix size of the representation
    std::vector<PlaneRotation> rotations;  // U = M_1 ... M_K diag(e^{i phases})
    Vec phases;                            // complex case only
  };

  GPath(Automorphism target, std::vector<FactorPath> factors)
      : target_(std::move(target)), factors_(std::move(factors)) {}

  const Automorphism& target() const noexcept { return target_; }
  const std::vector<FactorPath>& factors() const noexcept { return factors_; }

  /// All angles and phases scaled by t; sample(0) is the identity.
  Automorphism sample(double t) const {
    const Algebra& a = target_.algebra();
    if (a.kind() == Kind::Product) {
      std::vector<Automorphism> fs;
      for (std::size_t i = 0; i < factors_.size(); ++i) fs.push_back(sample_simple(a.factors()[i], factors_[i], t));
      return Automorphism::product(a, std::move(fs));
    }
    return sample_simple(a, factors_.front(), t);
  }

 private:
  template <class M>
  static M assemble(const FactorPath& f, double t) {
    M u = M::Identity(f.size, f.size);
    for (const auto& r : f.rotations) {
      const double c = std::cos(t * r.angle);
      const double s = std::sin(t * r.angle);
      typename M::Scalar e_pq, e_qp;
      if constexpr (std::is_same_v<typename M::Scalar, double>) {
        e_pq = -s;
        e_qp = s;
      } else {
        e_pq = -std::polar(1.0, r.phase) * s;
        e_qp = std::polar(1.0, -r.phase) * s;
      }
      // u <- u * M, touching columns p and q only.
      for (int k = 0; k < f.size; ++k) {
        const auto ukp = u(k, r.p);
        const auto ukq = u(k, r.q);
        u(k, r.p) = ukp * c + ukq * e_qp;
        u(k, r.q) = ukp * e_pq + ukq * c;
      }
    }
    if constexpr (!std::is_same_v<typename M::Scalar, double>) {
      for (int j = 0; j < f.size; ++j) u.col(j) *= std::polar(1.0, t * f.phases[j]);
    }
    return u;
  }

  static Automorphism sample_simple(const Algebra& a, const FactorPath& f, double t) {
    switch (a.kind()) {
      case Kind::RealSymmetric: return Automorphism::real_symmetric(a, assemble<RealMatrix>(f, t));
      case Kind::ComplexHermitian: return Automorphism::complex_hermitian(a, assemble<ComplexMatrix>(f, t));
      case Kind::Spin: return Automorphism::spin(a, assemble<RealMatrix>(f, t));
      case Kind::Product: break;
    }
    throw Error(ErrorKind::UnsupportedKind, a.name());
  }

  Automorphism target_;
  std::vector<FactorPath> factors_;
};

namespace detail {

/// Givens factorization U = M_1 ... M_K D, column by column, zeroing the
/// subdiagonal against the diagonal entry. For U in SO(n) the remainder D is
/// the identity; for unitary U it is a diagonal of phases.
template <class M>
GPath::FactorPath factor_rotations(M u, Kind kind) {
  constexpr bool is_complex = !std::is_same_v<typename M::Scalar, double>;
  const int n = static_cast<int>(u.rows());
  GPath::FactorPath out;
  out.kind = kind;
  out.size = n;
  for (int j = 0; j + 1 < n; ++j) {
    for (int i = j + 1; i < n; ++i) {
      const auto a = u(j, j);
      const auto b = u(i, j);
      PlaneRotation r{j, i, 0.0, 0.0};
      if constexpr (is_complex) {
        if (std::abs(b) == 0.0) continue;
        r.angle = std::atan2(std::abs(b), std::abs(a));
        r.phase = (std::abs(a) == 0.0 ? 0.0 : std::arg(a)) - std::arg(b);
      } else {
        if (b == 0.0 && a >= 0.0) continue;
        r.angle = std::atan2(b, a);
      }
      const double c = std::cos(r.angle);
      const double s = std::sin(r.angle);
      // Rows (j, i) <- M^H rows.
      for (int k = 0; k < n; ++k) {
        const auto ujk = u(j, k);
        const auto uik = u(i, k);
        if constexpr (is_complex) {
          u(j, k) = c * ujk + std::polar(1.0, r.phase) * s * uik;
          u(i, k) = -std::polar(1.0, -r.phase) * s * ujk + c * uik;
        } else {
          u(j, k) = c * ujk + s * uik;
          u(i, k) = -s * ujk + c * uik;
        }
      }
      out.rotations.push_back(r);
    }
  }
  if constexpr (is_complex) {
    out.phases.resize(n);
    for (int j = 0; j < n; ++j) out.phases[j] = std::arg(u(j, j));
  }
  return out;
}

inline GPath::FactorPath factor_path(const Automorphism& phi) {
  switch (phi.algebra().kind()) {
    case Kind::RealSymmetric:
    case Kind::Spin: return factor_rotations(phi.real_matrix(), phi.algebra().kind());
    case Kind::ComplexHermitian: return factor_rotations(phi.complex_matrix(), Kind::ComplexHermitian);
    case Kind::Product: break;
  }
  throw Error(ErrorKind::UnsupportedKind, phi.algebra().name());
}

}  // namespace detail

/// Continuous path t -> sample(t) in G from the identity to phi.
inline GPath g_path(const Automorphism& phi) {
  require(phi.in_identity_component(), ErrorKind::NotInIdentityComponent,
          "automorphism is not in the identity component G");
  std::vector<GPath::FactorPath> fs;
  if (phi.algebra().kind() == Kind::Product) {
    for (const auto& f : phi.factors()) fs.push_back(detail::factor_path(f));
  } else {
    fs.push_back(detail::factor_path(phi));
  }
  return GPath(phi, std::move(fs));
}

// ---------------------------------------------------------------------------
// Orbits.

inline bool same_eigenvalues(const Vec& a, const Vec& b, double tol = kOrbitTolerance) {
  if (a.size() != b.size()) return false;
  const double scale = std::max({1.0, a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff()});
  return (a - b).cwiseAbs().maxCoeff() <= tol * scale;
}

inline std::vector<double> uniform_grid(int steps) {
  require(steps >= 2, ErrorKind::Precondition, "steps must be >= 2");
  std::vector<double> ts(static_cast<std::size_t>(steps));
  for (int k = 0; k < steps; ++k) ts[static_cast<std::size_t>(k)] = static_cast<double>(k) / (steps - 1);
  ts.back() = 1.0;
  return ts;
}

/// Path from x to y inside the eigenvalue orbit [x] of a simple algebra.
inline PathPolyline orbit_path(const Element& x, const Element& y, int steps) {
  x.check_same(y);
  require(x.algebra().is_simple(), ErrorKind::UnsupportedKind,
          "orbit_path needs a simple algebra; use restricted_orbit_path for products");
  const auto ts = uniform_grid(steps);
  const auto dx = spectral_decompose(x);
  const auto dy = spectral_decompose(y);
  require(same_eigenvalues(dx.values.values(), dy.values.values()), ErrorKind::EigenvalueMismatch,
          "x and y have different eigenvalues");
  // Both frames are listed in non-increasing eigenvalue order, so position i
  // pairs matching eigenvalue blocks.
  const GPath path = g_path(frame_transport(dx.frame, dy.frame));
  std::vector<Element> samples;
  samples.reserve(ts.size());
  for (double t : ts) samples.push_back(path.sample(t).apply(x));
  return PathPolyline::from_samples(std::move(samples));
}

/// Factor-wise orbit paths in a product; every sample stays in [x]_r.
inline PathPolyline restricted_orbit_path(const Element& x, const Element& y, int steps) {
  x.check_same(y);
  const Algebra& a = x.algebra();
  require(a.kind() == Kind::Product, ErrorKind::UnsupportedKind, "restricted_orbit_path needs a product algebra");
  const auto ts = uniform_grid(steps);
  std::vector<PathPolyline> legs;
  for (std::size_t i = 0; i < a.factor_count(); ++i) {
    const Element xi = x.factor(i);
    const Element yi = y.factor(i);
    require(same_eigenvalues(eigen_map(xi).values(), eigen_map(yi).values()), ErrorKind::NotInRestrictedOrbit,
            "factor " + std::to_string(i) + " eigenvalues differ; y is not in the restricted orbit of x");
    legs.push_back(orbit_path(xi, yi, steps));
  }
  std::vector<Element> samples;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    std::vector<Element> parts;
    for (const auto& leg : legs) parts.push_back(leg.samples[k]);
    samples.push_back(from_factors(a, parts));
  }
  return PathPolyline::from_samples(std::move(samples));
}

/// phi_i(x) for phi_i drawn from G; sample i depends only on (seed, i).
inline std::vector<Element> orbit_sample(const Element& x, std::size_t count, std::uint64_t seed) {
  require(x.algebra().is_simple(), ErrorKind::UnsupportedKind, "orbit_sample needs a simple algebra");
  std::vector<Element> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(seed, i);
    out.push_back(random_g_element(x.algebra(), rng).apply(x));
  }
  return out;
}

}  // namespace jspec
