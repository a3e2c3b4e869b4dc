#pragma once

// Euclidean Jordan algebra arithmetic for real symmetric matrices S^n,
// complex Hermitian matrices H^n, the Jordan spin algebra and Cartesian
// products of these.
//
// Coordinates (the "canonical basis" of each kind):
//   S^n     row-major lower triangle including the diagonal, X(i,j) for j <= i.
//   H^n     row-major lower triangle; each off-diagonal entry is stored as the
//           pair (re, im) of X(i,j), each diagonal entry as a single real.
//   Spin(d) (x0, xbar) with xbar in R^{d-1}.
//   Product concatenation of the factor coordinates in factor order.

#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "jspec/errors.hpp"
#include "jspec/random.hpp"

namespace jspec {

using Vec = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;

enum class Kind { RealSymmetric, ComplexHermitian, Spin, Product };

/// Immutable algebra descriptor. Copies share the underlying node.
class Algebra {
 public:
  static Algebra real_symmetric(int n) {
    require(n >= 1, ErrorKind::Precondition, "real symmetric order must be >= 1");
    return Algebra(Kind::RealSymmetric, n, {}, n, n * (n + 1) / 2);
  }

  static Algebra complex_hermitian(int n) {
    require(n >= 1, ErrorKind::Precondition, "complex Hermitian order must be >= 1");
    return Algebra(Kind::ComplexHermitian, n, {}, n, n * n);
  }

  static Algebra spin(int d) {
    require(d >= 3, ErrorKind::Precondition, "spin algebra needs ambient dimension d >= 3");
    return Algebra(Kind::Spin, d, {}, 2, d);
  }

  static Algebra product(std::vector<Algebra> factors) {
    require(!factors.empty(), ErrorKind::Precondition, "product algebra needs at least one factor");
    int rank = 0;
    int dim = 0;
    for (const auto& f : factors) {
      require(f.is_simple(), ErrorKind::Precondition, "product factors must be simple algebras");
      rank += f.rank();
      dim += f.dim();
    }
    return Algebra(Kind::Product, 0, std::move(factors), rank, dim);
  }

  /// R^n as the n-fold product of the scalar algebra S^1.
  static Algebra euclidean(int n) {
    require(n >= 1, ErrorKind::Precondition, "euclidean dimension must be >= 1");
    return product(std::vector<Algebra>(static_cast<std::size_t>(n), real_symmetric(1)));
  }

  Kind kind() const noexcept { return node_->kind; }
  /// Matrix order n for S^n / H^n, ambient dimension d for Spin(d), 0 for products.
  int order() const noexcept { return node_->order; }
  int rank() const noexcept { return node_->rank; }
  int dim() const noexcept { return node_->dim; }
  bool is_simple() const noexcept { return node_->kind != Kind::Product; }

  std::span<const Algebra> factors() const noexcept { return node_->factors; }
  std::size_t factor_count() const noexcept { return node_->factors.size(); }
  /// Coordinate offset of factor i inside a product element.
  int coord_offset(std::size_t i) const { return node_->coord_offsets.at(i); }
  /// Offset of factor i's eigenvalue block inside the concatenated block vector.
  int rank_offset(std::size_t i) const { return node_->rank_offsets.at(i); }

  std::string name() const {
    switch (kind()) {
      case Kind::RealSymmetric: return "S^" + std::to_string(order());
      case Kind::ComplexHermitian: return "H^" + std::to_string(order());
      case Kind::Spin: return "Spin(" + std::to_string(order()) + ")";
      case Kind::Product: {
        std::string s;
        for (std::size_t i = 0; i < factor_count(); ++i) {
          if (i) s += " x ";
          s += node_->factors[i].name();
        }
        return s;
      }
    }
    return {};
  }

  friend bool operator==(const Algebra& a, const Algebra& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind() || a.order() != b.order() || a.factor_count() != b.factor_count())
      return false;
    for (std::size_t i = 0; i < a.factor_count(); ++i)
      if (!(a.node_->factors[i] == b.node_->factors[i])) return false;
    return true;
  }

 private:
  struct Node {
    Kind kind;
    int order;
    std::vector<Algebra> factors;
    int rank;
    int dim;
    std::vector<int> coord_offsets;
    std::vector<int> rank_offsets;
  };

  Algebra(Kind kind, int order, std::vector<Algebra> factors, int rank, int dim) {
    auto node = std::make_shared<Node>();
    node->kind = kind;
    node->order = order;
    node->rank = rank;
    node->dim = dim;
    int c = 0;
    int r = 0;
    for (const auto& f : factors) {
      node->coord_offsets.push_back(c);
      node->rank_offsets.push_back(r);
      c += f.dim();
      r += f.rank();
    }
    node->factors = std::move(factors);
    node_ = std::move(node);
  }

  std::shared_ptr<const Node> node_;
};

/// A point of the algebra: descriptor plus canonical coordinates.
class Element {
 public:
  Element(Algebra algebra, Vec coords) : algebra_(std::move(algebra)), coords_(std::move(coords)) {
    require(coords_.size() == algebra_.dim(), ErrorKind::Precondition,
            "coordinate count " + std::to_string(coords_.size()) + " does not match dim " +
                std::to_string(algebra_.dim()) + " of " + algebra_.name());
  }

  static Element zero(const Algebra& a) { return Element(a, Vec::Zero(a.dim())); }

  const Algebra& algebra() const noexcept { return algebra_; }
  const Vec& coords() const noexcept { return coords_; }

  Element factor(std::size_t i) const {
    require(algebra_.kind() == Kind::Product, ErrorKind::UnsupportedKind, "factor() needs a product");
    const auto& f = algebra_.factors()[i];
    return Element(f, coords_.segment(algebra_.coord_offset(i), f.dim()));
  }

  Element& operator+=(const Element& o) {
    check_same(o);
    coords_ += o.coords_;
    return *this;
  }
  Element& operator-=(const Element& o) {
    check_same(o);
    coords_ -= o.coords_;
    return *this;
  }
  Element& operator*=(double s) {
    coords_ *= s;
    return *this;
  }

  friend Element operator+(Element a, const Element& b) { return a += b; }
  friend Element operator-(Element a, const Element& b) { return a -= b; }
  friend Element operator*(double s, Element a) { return a *= s; }
  friend Element operator*(Element a, double s) { return a *= s; }
  friend Element operator-(Element a) { return a *= -1.0; }

  void check_same(const Element& o) const {
    require(algebra_ == o.algebra_, ErrorKind::DescriptorMismatch,
            algebra_.name() + " vs " + o.algebra_.name());
  }

 private:
  Algebra algebra_;
  Vec coords_;
};

inline Element from_factors(const Algebra& product, std::span<const Element> parts) {
  require(product.kind() == Kind::Product, ErrorKind::UnsupportedKind, "from_factors needs a product");
  require(parts.size() == product.factor_count(), ErrorKind::Precondition, "wrong factor count");
  Vec c(product.dim());
  for (std::size_t i = 0; i < parts.size(); ++i) {
    require(parts[i].algebra() == product.factors()[i], ErrorKind::DescriptorMismatch,
            "factor " + std::to_string(i) + " has algebra " + parts[i].algebra().name());
    c.segment(product.coord_offset(i), parts[i].algebra().dim()) = parts[i].coords();
  }
  return Element(product, std::move(c));
}

// ---------------------------------------------------------------------------
// Matrix views of S^n and H^n elements.

inline RealMatrix to_real_matrix(const Element& x) {
  require(x.algebra().kind() == Kind::RealSymmetric, ErrorKind::UnsupportedKind,
          "real matrix view needs S^n, got " + x.algebra().name());
  const int n = x.algebra().order();
  RealMatrix m(n, n);
  int k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      m(i, j) = x.coords()[k];
      m(j, i) = x.coords()[k];
      ++k;
    }
  return m;
}

/// Reads the lower triangle; the caller guarantees symmetry.
inline Element from_real_matrix(const Algebra& a, const RealMatrix& m) {
  require(a.kind() == Kind::RealSymmetric && m.rows() == a.order() && m.cols() == a.order(),
          ErrorKind::DescriptorMismatch, "matrix shape does not match " + a.name());
  const int n = a.order();
  Vec c(a.dim());
  int k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) c[k++] = (j == i) ? m(i, i) : 0.5 * (m(i, j) + m(j, i));
  return Element(a, std::move(c));
}

inline ComplexMatrix to_complex_matrix(const Element& x) {
  require(x.algebra().kind() == Kind::ComplexHermitian, ErrorKind::UnsupportedKind,
          "complex matrix view needs H^n, got " + x.algebra().name());
  const int n = x.algebra().order();
  ComplexMatrix m(n, n);
  int k = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      const Complex z(x.coords()[k], x.coords()[k + 1]);
      m(i, j) = z;
      m(j, i) = std::conj(z);
      k += 2;
    }
    m(i, i) = x.coords()[k++];
  }
  return m;
}

/// Hermitian part of m is stored; the diagonal keeps its real part.
inline Element from_complex_matrix(const Algebra& a, const ComplexMatrix& m) {
  require(a.kind() == Kind::ComplexHermitian && m.rows() == a.order() && m.cols() == a.order(),
          ErrorKind::DescriptorMismatch, "matrix shape does not match " + a.name());
  const int n = a.order();
  Vec c(a.dim());
  int k = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      const Complex z = 0.5 * (m(i, j) + std::conj(m(j, i)));
      c[k++] = z.real();
      c[k++] = z.imag();
    }
    c[k++] = m(i, i).real();
  }
  return Element(a, std::move(c));
}

// ---------------------------------------------------------------------------
// Algebra operations.

inline Element jordan_product(const Element& x, const Element& y) {
  x.check_same(y);
  const Algebra& a = x.algebra();
  switch (a.kind()) {
    case Kind::RealSymmetric: {
      const RealMatrix X = to_real_matrix(x);
      const RealMatrix Y = to_real_matrix(y);
      return from_real_matrix(a, 0.5 * (X * Y + Y * X));
    }
    case Kind::ComplexHermitian: {
      const ComplexMatrix X = to_complex_matrix(x);
      const ComplexMatrix Y = to_complex_matrix(y);
      return from_complex_matrix(a, 0.5 * (X * Y + Y * X));
    }
    case Kind::Spin: {
      const Vec& u = x.coords();
      const Vec& v = y.coords();
      const int m = a.dim() - 1;
      Vec c(a.dim());
      c[0] = u.dot(v);
      c.tail(m) = u[0] * v.tail(m) + v[0] * u.tail(m);
      return Element(a, std::move(c));
    }
    case Kind::Product: {
      std::vector<Element> parts;
      for (std::size_t i = 0; i < a.factor_count(); ++i)
        parts.push_back(jordan_product(x.factor(i), y.factor(i)));
      return from_factors(a, parts);
    }
  }
  throw Error(ErrorKind::UnsupportedKind, a.name());
}

/// Trace form tr(x o y); primitive idempotents have unit norm in every kind.
inline double inner_product(const Element& x, const Element& y) {
  x.check_same(y);
  const Algebra& a = x.algebra();
  switch (a.kind()) {
    case Kind::RealSymmetric: {
      const int n = a.order();
      double s = 0.0;
      int k = 0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j, ++k)
          s += (i == j ? 1.0 : 2.0) * x.coords()[k] * y.coords()[k];
      return s;
    }
    case Kind::ComplexHermitian: {
      const int n = a.order();
      double s = 0.0;
      int k = 0;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < i; ++j, k += 2)
          s += 2.0 * (x.coords()[k] * y.coords()[k] + x.coords()[k + 1] * y.coords()[k + 1]);
        s += x.coords()[k] * y.coords()[k];
        ++k;
      }
      return s;
    }
    case Kind::Spin:
      return 2.0 * x.coords().dot(y.coords());
    case Kind::Product: {
      double s = 0.0;
      for (std::size_t i = 0; i < a.factor_count(); ++i) s += inner_product(x.factor(i), y.factor(i));
      return s;
    }
  }
  throw Error(ErrorKind::UnsupportedKind, a.name());
}

inline double norm(const Element& x) { return std::sqrt(std::max(0.0, inner_product(x, x))); }

inline double distance(const Element& x, const Element& y) { return norm(x - y); }

inline double trace(const Element& x) {
  const Algebra& a = x.algebra();
  switch (a.kind()) {
    case Kind::RealSymmetric:
    case Kind::ComplexHermitian: {
      const int n = a.order();
      double s = 0.0;
      int k = 0;
      for (int i = 0; i < n; ++i) {
        k += (a.kind() == Kind::RealSymmetric) ? i : 2 * i;
        s += x.coords()[k++];
      }
      return s;
    }
    case Kind::Spin:
      return 2.0 * x.coords()[0];
    case Kind::Product: {
      double s = 0.0;
      for (std::size_t i = 0; i < a.factor_count(); ++i) s += trace(x.factor(i));
      return s;
    }
  }
  throw Error(ErrorKind::UnsupportedKind, a.name());
}

inline Element unit_element(const Algebra& a) {
  switch (a.kind()) {
    case Kind::RealSymmetric:
      return from_real_matrix(a, RealMatrix::Identity(a.order(), a.order()));
    case Kind::ComplexHermitian:
      return from_complex_matrix(a, ComplexMatrix::Identity(a.order(), a.order()));
    case Kind::Spin: {
      Vec c = Vec::Zero(a.dim());
      c[0] = 1.0;
      return Element(a, std::move(c));
    }
    case Kind::Product: {
      std::vector<Element> parts;
      for (const auto& f : a.factors()) parts.push_back(unit_element(f));
      return from_factors(a, parts);
    }
  }
  throw Error(ErrorKind::UnsupportedKind, a.name());
}

/// Coordinates i.i.d. N(0, scale^2); deterministic in seed.
inline Element random_element(const Algebra& a, std::uint64_t seed, double scale = 1.0) {
  require(scale > 0.0 && std::isfinite(scale), ErrorKind::Precondition, "scale must be positive");
  Rng rng(seed);
  return Element(a, scale * rng.normal_vector(a.dim()));
}

/// Coordinates in which the trace inner product is the Euclidean dot product.
inline Vec isometric_coords(const Element& x) {
  const Algebra& a = x.algebra();
  switch (a.kind()) {
    case Kind::RealSymmetric: {
      Vec v = x.coords();
      int k = 0;
      for (int i = 0; i < a.order(); ++i)
        for (int j = 0; j <= i; ++j, ++k)
          if (i != j) v[k] *= std::sqrt(2.0);
      return v;
    }
    case Kind::ComplexHermitian: {
      Vec v = x.coords();
      int k = 0;
      for (int i = 0; i < a.order(); ++i) {
        for (int j = 0; j < i; ++j, k += 2) {
          v[k] *= std::sqrt(2.0);
          v[k + 1] *= std::sqrt(2.0);
        }
        ++k;
      }
      return v;
    }
    case Kind::Spin:
      return std::sqrt(2.0) * x.coords();
    case Kind::Product: {
      Vec v(a.dim());
      for (std::size_t i = 0; i < a.factor_count(); ++i)
        v.segment(a.coord_offset(i), a.factors()[i].dim()) = isometric_coords(x.factor(i));
      return v;
    }
  }
  throw Error(ErrorKind::UnsupportedKind, a.name());
}

}  // namespace jspec
