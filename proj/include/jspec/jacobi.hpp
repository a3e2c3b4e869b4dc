#pragma once

// Cyclic Jacobi eigensolver for real symmetric and complex Hermitian matrices.
// Complex pivots are first made real by a diagonal phase, then annihilated by
// an ordinary plane rotation, so the accumulated eigenvector matrix is
// orthogonal/unitary by construction.

#include <atomic>
#include <cmath>
#include <complex>
#include <string>
#include <type_traits>

#include <Eigen/Dense>

#include "jspec/errors.hpp"

namespace jspec {

inline constexpr int kDefaultMaxSweeps = 40;
inline constexpr double kJacobiRelativeOffTolerance = 1e-13;

/// Process-wide sweep cap. The CLI overrides it from JSPEC_MAX_SWEEPS.
inline std::atomic<int>& jacobi_max_sweeps() {
  static std::atomic<int> cap{kDefaultMaxSweeps};
  return cap;
}

template <class Scalar>
struct JacobiResult {
  Eigen::VectorXd values;  // solver order, not sorted
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> vectors;  // columns
  int sweeps = 0;
};

namespace detail {

template <class Scalar>
double off_diagonal_norm(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& a) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace detail

template <class Scalar>
JacobiResult<Scalar> jacobi_eigen(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a,
                                  int max_sweeps = jacobi_max_sweeps().load()) {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  constexpr bool is_complex = !std::is_floating_point_v<Scalar>;

  const Eigen::Index n = a.rows();
  require(a.cols() == n, ErrorKind::Precondition, "jacobi_eigen needs a square matrix");
  require(a.allFinite(), ErrorKind::NumericFailure, "matrix has non-finite entries");

  JacobiResult<Scalar> out;
  out.vectors = Matrix::Identity(n, n);
  const double scale = a.norm();
  const double target = kJacobiRelativeOffTolerance * scale;

  int sweep = 0;
  for (;; ++sweep) {
    if (detail::off_diagonal_norm(a) <= target) break;
    if (sweep >= max_sweeps)
      throw Error(ErrorKind::NumericFailure,
                  "Jacobi did not converge in " + std::to_string(max_sweeps) + " sweeps");

    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Scalar apq = a(p, q);
        const double r = std::abs(apq);
        if (r == 0.0) continue;

        // Unit factor u with apq = r * u (real case: u = sign(apq)).
        const Scalar u = apq / r;
        const double app = std::real(a(p, p));
        const double aqq = std::real(a(q, q));
        const double theta = (aqq - app) / (2.0 * r);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        // J = diag(1, conj(u)) * [[c, s], [-s, c]] restricted to (p, q).
        Scalar jpp = c, jpq = s, jqp, jqq;
        if constexpr (is_complex) {
          jqp = -s * std::conj(u);
          jqq = c * std::conj(u);
        } else {
          jqp = -s * u;
          jqq = c * u;
        }

        for (Eigen::Index k = 0; k < n; ++k) {  // a <- a J
          const Scalar akp = a(k, p);
          const Scalar akq = a(k, q);
          a(k, p) = akp * jpp + akq * jqp;
          a(k, q) = akp * jpq + akq * jqq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {  // a <- J^H a
          const Scalar apk = a(p, k);
          const Scalar aqk = a(q, k);
          if constexpr (is_complex) {
            a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
            a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
          } else {
            a(p, k) = jpp * apk + jqp * aqk;
            a(q, k) = jpq * apk + jqq * aqk;
          }
        }
        a(p, q) = Scalar(0);
        a(q, p) = Scalar(0);
        a(p, p) = Scalar(app - t * r);
        a(q, q) = Scalar(aqq + t * r);

        for (Eigen::Index k = 0; k < n; ++k) {  // v <- v J
          const Scalar vkp = out.vectors(k, p);
          const Scalar vkq = out.vectors(k, q);
          out.vectors(k, p) = vkp * jpp + vkq * jqp;
          out.vectors(k, q) = vkp * jpq + vkq * jqq;
        }
      }
    }
  }

  out.sweeps = sweep;
  out.values.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) out.values[i] = std::real(a(i, i));
  return out;
}

}  // namespace jspec
