#pragma once

// Eigenvalue map, spectral decomposition into Jordan frames and the
// composition map q -> q * F = sum_i q_i f_i for a fixed frame F.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "jspec/algebra.hpp"
#include "jspec/jacobi.hpp"

namespace jspec {

/// Tolerance used wherever a caller-supplied JordanFrame is accepted.
inline constexpr double kFrameTolerance = 1e-9;

// ---------------------------------------------------------------------------
// Rearrangements.

/// Permutation that sorts q non-increasing; ties keep their input order.
inline std::vector<int> descending_order(const Vec& q) {
  std::vector<int> idx(static_cast<std::size_t>(q.size()));
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return q[a] > q[b]; });
  return idx;
}

class EigenvalueVector {
 public:
  EigenvalueVector() = default;
  explicit EigenvalueVector(Vec values) : values_(std::move(values)) {
    for (Eigen::Index i = 0; i + 1 < values_.size(); ++i)
      require(values_[i] >= values_[i + 1], ErrorKind::Precondition,
              "eigenvalue vector must be sorted non-increasing");
  }

  const Vec& values() const noexcept { return values_; }
  Eigen::Index size() const noexcept { return values_.size(); }
  double operator[](Eigen::Index i) const { return values_[i]; }

  /// Increasing rearrangement.
  Vec ascending() const { return values_.reverse(); }

 private:
  Vec values_;
};

inline EigenvalueVector sort_desc(const Vec& q) {
  const auto idx = descending_order(q);
  Vec out(q.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out[static_cast<Eigen::Index>(i)] = q[idx[i]];
  return EigenvalueVector(std::move(out));
}

inline Vec sort_asc(const Vec& q) { return sort_desc(q).ascending(); }

// ---------------------------------------------------------------------------
// Jordan frames.

class JordanFrame {
 public:
  /// Checks idempotency, primitivity (unit trace), orthogonality and
  /// completeness to kFrameTolerance; throws FrameInvariant otherwise.
  static JordanFrame validated(const Algebra& a, std::vector<Element> idempotents) {
    JordanFrame f(a, std::move(idempotents));
    if (auto why = f.violation()) throw Error(ErrorKind::FrameInvariant, *why);
    return f;
  }

  /// For frames produced by the library's own constructions.
  static JordanFrame trusted(const Algebra& a, std::vector<Element> idempotents) {
    return JordanFrame(a, std::move(idempotents));
  }

  const Algebra& algebra() const noexcept { return algebra_; }
  const std::vector<Element>& idempotents() const noexcept { return idempotents_; }
  std::size_t size() const noexcept { return idempotents_.size(); }
  const Element& operator[](std::size_t i) const { return idempotents_[i]; }

  /// Frame listed as (f_{perm[0]}, f_{perm[1]}, ...).
  JordanFrame permuted(const std::vector<int>& perm) const {
    require(perm.size() == size(), ErrorKind::Precondition, "permutation length mismatch");
    std::vector<Element> out;
    out.reserve(size());
    for (int p : perm) out.push_back(idempotents_.at(static_cast<std::size_t>(p)));
    return JordanFrame(algebra_, std::move(out));
  }

  std::optional<std::string> violation(double tol = kFrameTolerance) const {
    const auto n = static_cast<std::size_t>(algebra_.rank());
    if (idempotents_.size() != n)
      return "frame has " + std::to_string(idempotents_.size()) + " idempotents, rank is " +
             std::to_string(n);
    Element total = Element::zero(algebra_);
    for (std::size_t i = 0; i < n; ++i) {
      const Element& e = idempotents_[i];
      if (!(e.algebra() == algebra_)) return "idempotent " + std::to_string(i) + " has wrong algebra";
      if (norm(jordan_product(e, e) - e) > tol) return "element " + std::to_string(i) + " is not idempotent";
      if (std::abs(trace(e) - 1.0) > tol) return "element " + std::to_string(i) + " is not primitive";
      for (std::size_t j = i + 1; j < n; ++j)
        if (norm(jordan_product(e, idempotents_[j])) > tol)
          return "elements " + std::to_string(i) + " and " + std::to_string(j) + " are not orthogonal";
      total += e;
    }
    if (norm(total - unit_element(algebra_)) > tol) return "idempotents do not sum to the unit";
    return std::nullopt;
  }

 private:
  JordanFrame(Algebra a, std::vector<Element> idempotents)
      : algebra_(std::move(a)), idempotents_(std::move(idempotents)) {}

  Algebra algebra_;
  std::vector<Element> idempotents_;
};

struct SpectralDecomposition {
  JordanFrame frame;
  EigenvalueVector values;
};

/// Product element that is `part` in factor i and zero elsewhere.
inline Element embed_factor(const Algebra& product, std::size_t i, const Element& part) {
  require(product.kind() == Kind::Product && part.algebra() == product.factors()[i],
          ErrorKind::DescriptorMismatch, "cannot embed " + part.algebra().name());
  Vec c = Vec::Zero(product.dim());
  c.segment(product.coord_offset(i), part.algebra().dim()) = part.coords();
  return Element(product, std::move(c));
}

namespace detail {

inline Element spin_idempotent(const Algebra& a, const Vec& direction, double sign) {
  Vec c(a.dim());
  c[0] = 0.5;
  c.tail(a.dim() - 1) = 0.5 * sign * direction;
  return Element(a, std::move(c));
}

inline Vec spin_axis(const Element& x) {
  const Vec bar = x.coords().tail(x.algebra().dim() - 1);
  const double r = bar.norm();
  if (r == 0.0) {
    Vec axis = Vec::Zero(bar.size());
    axis[0] = 1.0;
    return axis;
  }
  return bar / r;
}

}  // namespace detail

/// Diagonal matrix units for S^n / H^n, 1/2(1, +-e_1) for spin, factor frames
/// concatenated in factor order for products.
inline JordanFrame canonical_frame(const Algebra& a) {
  std::vector<Element> es;
  switch (a.kind()) {
    case Kind::RealSymmetric:
      for (int i = 0; i < a.order(); ++i) {
        RealMatrix m = RealMatrix::Zero(a.order(), a.order());
        m(i, i) = 1.0;
        es.push_back(from_real_matrix(a, m));
      }
      break;
    case Kind::ComplexHermitian:
      for (int i = 0; i < a.order(); ++i) {
        ComplexMatrix m = ComplexMatrix::Zero(a.order(), a.order());
        m(i, i) = 1.0;
        es.push_back(from_complex_matrix(a, m));
      }
      break;
    case Kind::Spin: {
      Vec axis = Vec::Zero(a.dim() - 1);
      axis[0] = 1.0;
      es.push_back(detail::spin_idempotent(a, axis, 1.0));
      es.push_back(detail::spin_idempotent(a, axis, -1.0));
      break;
    }
    case Kind::Product:
      for (std::size_t i = 0; i < a.factor_count(); ++i) {
        const JordanFrame sub = canonical_frame(a.factors()[i]);
        for (const auto& e : sub.idempotents()) es.push_back(embed_factor(a, i, e));
      }
      break;
  }
  return JordanFrame::trusted(a, std::move(es));
}

/// Spectral decomposition with the frame listed to match the non-increasing
/// eigenvalues. Degenerate eigenvalues get whatever orthonormal basis the
/// solver produced.
inline SpectralDecomposition spectral_decompose(const Element& x) {
  const Algebra& a = x.algebra();
  switch (a.kind()) {
    case Kind::RealSymmetric: {
      const auto eig = jacobi_eigen<double>(to_real_matrix(x));
      const auto order = descending_order(eig.values);
      std::vector<Element> es;
      Vec values(a.rank());
      for (std::size_t k = 0; k < order.size(); ++k) {
        const Vec v = eig.vectors.col(order[k]);
        values[static_cast<Eigen::Index>(k)] = eig.values[order[k]];
        es.push_back(from_real_matrix(a, v * v.transpose()));
      }
      return {JordanFrame::trusted(a, std::move(es)), EigenvalueVector(std::move(values))};
    }
    case Kind::ComplexHermitian: {
      const auto eig = jacobi_eigen<Complex>(to_complex_matrix(x));
      const auto order = descending_order(eig.values);
      std::vector<Element> es;
      Vec values(a.rank());
      for (std::size_t k = 0; k < order.size(); ++k) {
        const Eigen::VectorXcd v = eig.vectors.col(order[k]);
        values[static_cast<Eigen::Index>(k)] = eig.values[order[k]];
        es.push_back(from_complex_matrix(a, v * v.adjoint()));
      }
      return {JordanFrame::trusted(a, std::move(es)), EigenvalueVector(std::move(values))};
    }
    case Kind::Spin: {
      const double x0 = x.coords()[0];
      const double r = x.coords().tail(a.dim() - 1).norm();
      const Vec axis = detail::spin_axis(x);
      Vec values(2);
      values << x0 + r, x0 - r;
      std::vector<Element> es{detail::spin_idempotent(a, axis, 1.0), detail::spin_idempotent(a, axis, -1.0)};
      return {JordanFrame::trusted(a, std::move(es)), EigenvalueVector(std::move(values))};
    }
    case Kind::Product: {
      Vec all(a.rank());
      std::vector<Element> es;
      for (std::size_t i = 0; i < a.factor_count(); ++i) {
        auto part = spectral_decompose(x.factor(i));
        all.segment(a.rank_offset(i), a.factors()[i].rank()) = part.values.values();
        for (const auto& e : part.frame.idempotents()) es.push_back(embed_factor(a, i, e));
      }
      const auto order = descending_order(all);
      Vec values(a.rank());
      std::vector<Element> sorted;
      for (std::size_t k = 0; k < order.size(); ++k) {
        values[static_cast<Eigen::Index>(k)] = all[order[k]];
        sorted.push_back(es[static_cast<std::size_t>(order[k])]);
      }
      return {JordanFrame::trusted(a, std::move(sorted)), EigenvalueVector(std::move(values))};
    }
  }
  throw Error(ErrorKind::UnsupportedKind, a.name());
}

inline EigenvalueVector eigen_map(const Element& x) {
  const Algebra& a = x.algebra();
  switch (a.kind()) {
    case Kind::RealSymmetric:
      return sort_desc(jacobi_eigen<double>(to_real_matrix(x)).values);
    case Kind::ComplexHermitian:
      return sort_desc(jacobi_eigen<Complex>(to_complex_matrix(x)).values);
    case Kind::Spin: {
      const double r = x.coords().tail(a.dim() - 1).norm();
      Vec v(2);
      v << x.coords()[0] + r, x.coords()[0] - r;
      return EigenvalueVector(std::move(v));
    }
    case Kind::Product: {
      Vec all(a.rank());
      for (std::size_t i = 0; i < a.factor_count(); ++i)
        all.segment(a.rank_offset(i), a.factors()[i].rank()) = eigen_map(x.factor(i)).values();
      return sort_desc(all);
    }
  }
  throw Error(ErrorKind::UnsupportedKind, a.name());
}

/// Per-factor eigenvalue vectors laid out in factor order (each block
/// non-increasing). For a simple algebra this is just eigen_map(x).
inline Vec factor_blocks(const Element& x) {
  const Algebra& a = x.algebra();
  if (a.is_simple()) return eigen_map(x).values();
  Vec out(a.rank());
  for (std::size_t i = 0; i < a.factor_count(); ++i)
    out.segment(a.rank_offset(i), a.factors()[i].rank()) = eigen_map(x.factor(i)).values();
  return out;
}

/// q * F = sum_i q_i f_i.
inline Element compose_theta(const Vec& q, const JordanFrame& frame) {
  require(q.size() == static_cast<Eigen::Index>(frame.size()), ErrorKind::Precondition,
          "q has length " + std::to_string(q.size()) + ", frame has " + std::to_string(frame.size()) +
              " idempotents");
  Vec c = Vec::Zero(frame.algebra().dim());
  for (std::size_t i = 0; i < frame.size(); ++i) c += q[static_cast<Eigen::Index>(i)] * frame[i].coords();
  return Element(frame.algebra(), std::move(c));
}

}  // namespace jspec
