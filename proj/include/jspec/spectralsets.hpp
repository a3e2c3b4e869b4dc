#pragma once

// Spectral sets lambda^{-1}(Q): membership, connecting paths built from orbit
// paths and a path through Q, finite component enumeration, splitting along
// Minkowski sums, Fan intervals of <c, .> over an orbit, and verification of
// direct-sum certificates for cones.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/SVD>

#include "jspec/orbits.hpp"
#include "jspec/path.hpp"
#include "jspec/permsets.hpp"
#include "jspec/spectral.hpp"

namespace jspec {

class SpectralSet {
 public:
  SpectralSet(Algebra algebra, PermSet q) : algebra_(std::move(algebra)), q_(std::move(q)) {
    require(q_.n() == algebra_.rank(), ErrorKind::Precondition,
            "set lives in R^" + std::to_string(q_.n()) + " but " + algebra_.name() + " has rank " +
                std::to_string(algebra_.rank()));
  }

  const Algebra& algebra() const noexcept { return algebra_; }
  const PermSet& q() const noexcept { return q_; }

 private:
  Algebra algebra_;
  PermSet q_;
};

inline std::string format_vector(const Vec& v) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << ')';
  return os.str();
}

/// x in lambda^{-1}(Q) iff lambda(x) in Q.
inline bool ss_member(const SpectralSet& s, const Element& x, double slack = 0.0) {
  require(x.algebra() == s.algebra(), ErrorKind::DescriptorMismatch,
          "element of " + x.algebra().name() + " tested against a set in " + s.algebra().name());
  return s.q().member(eigen_map(x).values(), slack);
}

// ---------------------------------------------------------------------------
// Connecting paths.

struct ConnectOptions {
  int steps = 50;                          // samples per leg / per q-path edge
  std::optional<std::vector<Vec>> q_path;  // vertices of a polyline in R^n
  double tolerance = kPathTolerance;       // membership slack for the audit
};

namespace detail {

inline std::vector<Vec> discretize_polyline(const std::vector<Vec>& vertices, int steps) {
  std::vector<Vec> out{vertices.front()};
  for (std::size_t e = 1; e < vertices.size(); ++e) {
    const Vec& a = vertices[e - 1];
    const Vec& b = vertices[e];
    if ((a - b).cwiseAbs().maxCoeff() == 0.0) continue;
    for (int k = 1; k < steps; ++k) {
      const double t = static_cast<double>(k) / (steps - 1);
      out.push_back((1.0 - t) * a + t * b);
    }
    out.back() = b;
  }
  return out;
}

/// Per-factor non-increasing rearrangement of a block vector.
inline Vec sort_blocks(const Algebra& a, const Vec& q) {
  if (a.is_simple()) return sort_desc(q).values();
  Vec out(q.size());
  for (std::size_t i = 0; i < a.factor_count(); ++i) {
    const int r = a.factors()[i].rank();
    out.segment(a.rank_offset(i), r) = sort_desc(q.segment(a.rank_offset(i), r)).values();
  }
  return out;
}

inline PathPolyline orbit_leg(const Element& from, const Element& to, int steps) {
  return from.algebra().is_simple() ? orbit_path(from, to, steps) : restricted_orbit_path(from, to, steps);
}

}  // namespace detail

/// Path from x to y inside lambda^{-1}(Q):
///   leg 1  orbit path from x to q_0 * F (F the canonical frame),
///   leg 2  t -> q(t) * F along the q-path,
///   leg 3  orbit path from q_end * F to y.
/// Simple algebras: the q-path runs through Q-down; when absent, the segment
/// [lambda(x), lambda(y)] is used for convex Q. Products: the q-path runs
/// through Q between the per-factor eigenvalue blocks of x and y, and legs 1
/// and 3 stay in the restricted orbits. For finite Q with no q-path, x and y
/// are connected iff they share a component (constant q-path).
/// Every emitted sample is audited against Q with `tolerance` slack.
inline PathPolyline connect(const SpectralSet& s, const Element& x, const Element& y,
                            const ConnectOptions& options = {}) {
  const Algebra& a = s.algebra();
  x.check_same(y);
  require(x.algebra() == a, ErrorKind::DescriptorMismatch, "endpoints live in " + x.algebra().name());
  require(options.steps >= 2, ErrorKind::Precondition, "steps must be >= 2");
  const double tol = options.tolerance;
  require(ss_member(s, x, tol), ErrorKind::NotMember, "start point is not in the spectral set");
  require(ss_member(s, y, tol), ErrorKind::NotMember, "end point is not in the spectral set");
  if (distance(x, y) == 0.0) return PathPolyline::from_samples({x, y}, tol);

  const bool simple = a.is_simple();
  const Vec bx = factor_blocks(x);
  const Vec by = factor_blocks(y);

  std::vector<Vec> vertices;
  if (options.q_path) {
    vertices = *options.q_path;
    require(!vertices.empty(), ErrorKind::Precondition, "q-path has no vertices");
    for (std::size_t k = 0; k < vertices.size(); ++k) {
      const Vec& v = vertices[k];
      require(v.size() == a.rank(), ErrorKind::Precondition, "q-path vertex has wrong length");
      const bool ok = simple ? down_member(s.q(), v, tol) : s.q().member(v, tol);
      require(ok, ErrorKind::HypothesisViolation,
              "q-path vertex " + std::to_string(k) + " " + format_vector(v) + " is not in " +
                  (simple ? "Q-down" : "Q"));
    }
    require(same_eigenvalues(detail::sort_blocks(a, vertices.front()), bx), ErrorKind::Precondition,
            "q-path does not start at the eigenvalue blocks of x " + format_vector(bx));
    require(same_eigenvalues(detail::sort_blocks(a, vertices.back()), by), ErrorKind::Precondition,
            "q-path does not end at the eigenvalue blocks of y " + format_vector(by));
  } else if (same_eigenvalues(bx, by)) {
    vertices = {bx};
  } else if (s.q().is_finite()) {
    throw Error(ErrorKind::HypothesisViolation,
                "x and y lie in different components of a finite spectral set: blocks " + format_vector(bx) +
                    " vs " + format_vector(by));
  } else if (simple && s.q().flags().convex) {
    vertices = {bx, by};
  } else {
    throw Error(ErrorKind::Precondition,
                simple ? "a q-path is required when Q is not convex" : "product mode requires a q-path through Q");
  }

  const JordanFrame frame = canonical_frame(a);
  std::vector<Element> leg2;
  for (const Vec& q : detail::discretize_polyline(vertices, options.steps)) leg2.push_back(compose_theta(q, frame));

  const PathPolyline path = concatenate(
      {detail::orbit_leg(x, leg2.front(), options.steps), PathPolyline::from_samples(leg2, tol),
       detail::orbit_leg(leg2.back(), y, options.steps)},
      tol);

  for (std::size_t k = 0; k < path.samples.size(); ++k)
    require(ss_member(s, path.samples[k], tol), ErrorKind::HypothesisViolation,
            "path sample " + std::to_string(k) + " leaves the spectral set; lambda = " +
                format_vector(eigen_map(path.samples[k]).values()));
  return path;
}

// ---------------------------------------------------------------------------
// Components for finite Q.

struct FiniteComponent {
  Vec representative;  // lambda value (simple) or per-factor blocks (product)
  std::string description;
};

inline std::vector<FiniteComponent> components_finite(const SpectralSet& s) {
  require(s.q().is_finite(), ErrorKind::UnsupportedKind, "components are only enumerated for finite Q");
  const Algebra& a = s.algebra();
  std::vector<FiniteComponent> out;
  if (a.is_simple()) {
    for (const auto& d : s.q().down_points())
      out.push_back({d, "eigenvalue orbit {x : lambda(x) = " + format_vector(d) + "}"});
    return out;
  }
  for (const auto& p : s.q().finite_points()) {
    const Vec b = detail::sort_blocks(a, p);
    const bool seen = std::any_of(out.begin(), out.end(), [&](const FiniteComponent& c) {
      return (c.representative - b).cwiseAbs().maxCoeff() <= kFiniteTolerance;
    });
    if (!seen) out.push_back({b, "restricted orbit with factor eigenvalue blocks " + format_vector(b)});
  }
  return out;
}

/// Index into components_finite(s) of the component containing x.
inline std::optional<std::size_t> component_index(const SpectralSet& s, const Element& x, double tol = kOrbitTolerance) {
  const auto comps = components_finite(s);
  const Vec b = factor_blocks(x);
  for (std::size_t i = 0; i < comps.size(); ++i)
    if (same_eigenvalues(comps[i].representative, b, tol)) return i;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Sum splitting.

/// z = q1 * F + q2 * F with F the frame of z; q1 + q2 must equal lambda(z).
inline std::pair<Element, Element> sum_split(const Element& z, const PermSet& q1_set, const PermSet& q2_set,
                                             const Vec& q1, const Vec& q2, double slack = 0.0) {
  const auto dz = spectral_decompose(z);
  const Vec& lz = dz.values.values();
  require(q1.size() == lz.size() && q2.size() == lz.size(), ErrorKind::Precondition, "split vectors have wrong length");
  const double scale = std::max(1.0, lz.cwiseAbs().maxCoeff());
  require((q1 + q2 - lz).cwiseAbs().maxCoeff() <= 1e-9 * scale, ErrorKind::Precondition,
          "q1 + q2 differs from lambda(z) = " + format_vector(lz));
  require(q1_set.member(q1, slack), ErrorKind::NotMember, "q1 is not in Q1");
  require(q2_set.member(q2, slack), ErrorKind::NotMember, "q2 is not in Q2");
  return {compose_theta(q1, dz.frame), compose_theta(q2, dz.frame)};
}

/// Searches the one-parameter family q1 = t lambda, q2 = (1-t) lambda, then
/// coordinate-wise splits q1_i = t_i lambda_i, for memberships in Q1 and Q2.
inline std::optional<std::pair<Vec, Vec>> find_split(const Vec& lambda, const PermSet& q1_set, const PermSet& q2_set,
                                                     int grid = 64) {
  for (int k = 0; k <= grid; ++k) {
    const double t = static_cast<double>(k) / grid;
    const Vec q1 = t * lambda;
    const Vec q2 = lambda - q1;
    if (q1_set.member(q1) && q2_set.member(q2)) return std::make_pair(q1, q2);
  }
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    for (int side = 0; side < 2; ++side) {
      Vec q1 = (side == 0) ? Vec(lambda) : Vec(Vec::Zero(lambda.size()));
      q1[i] = (side == 0) ? 0.0 : lambda[i];
      const Vec q2 = lambda - q1;
      if (q1_set.member(q1) && q2_set.member(q2)) return std::make_pair(q1, q2);
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Fan intervals.

struct FanInterval {
  double delta = 0.0;
  double Delta = 0.0;
  Element minimizer;
  Element maximizer;
};

/// Range [delta, Delta] of <c, x> over the orbit [a]:
///   Delta = <lambda(c), lambda(a)>, delta = <lambda_up(c), lambda(a)>,
/// attained at lambda(a) * F_c and reverse(lambda(a)) * F_c.
inline FanInterval fan_interval(const Element& c, const Element& a) {
  c.check_same(a);
  require(c.algebra().is_simple(), ErrorKind::UnsupportedKind, "Fan interval is implemented for simple algebras");
  const auto dc = spectral_decompose(c);
  const Vec la = eigen_map(a).values();
  const Vec& lc = dc.values.values();
  const Vec la_rev = la.reverse();
  return FanInterval{dc.values.ascending().dot(la), lc.dot(la), compose_theta(la_rev, dc.frame),
                     compose_theta(la, dc.frame)};
}

inline std::vector<double> fan_sample(const Element& c, const Element& a, std::size_t count, std::uint64_t seed) {
  c.check_same(a);
  std::vector<double> out;
  out.reserve(count);
  for (const auto& y : orbit_sample(a, count, seed)) out.push_back(inner_product(c, y));
  return out;
}

// ---------------------------------------------------------------------------
// Direct-sum certificates.

inline constexpr double kRankRelativeTolerance = 1e-9;
inline constexpr double kReconstructionTolerance = 1e-6;
inline constexpr int kNnlsMaxIterations = 10000;

using ElementPredicate = std::function<bool(const Element&)>;

/// K = K_1 + ... + K_r with each K_i generated by finitely many elements.
struct DecompositionCertificate {
  std::vector<std::vector<Element>> parts;
};

enum class CertificateClause { None, SpanIndependence, GeneratorMembership, Reconstruction };

inline const char* to_string(CertificateClause c) {
  switch (c) {
    case CertificateClause::None: return "none";
    case CertificateClause::SpanIndependence: return "span-independence";
    case CertificateClause::GeneratorMembership: return "generator-membership";
    case CertificateClause::Reconstruction: return "reconstruction";
  }
  return "unknown";
}

struct CertificateVerdict {
  bool accepted = false;
  CertificateClause failed = CertificateClause::None;
  std::string reason;
  int stacked_rank = 0;
  int rank_sum = 0;
  std::size_t samples_checked = 0;
  double worst_residual = 0.0;
};

/// Numerical rank of the column space; singular values below
/// kRankRelativeTolerance * sigma_max count as zero.
inline int numerical_rank(const RealMatrix& m) {
  if (m.cols() == 0 || m.rows() == 0) return 0;
  Eigen::JacobiSVD<RealMatrix> svd(m);
  const Vec& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] >= kRankRelativeTolerance * sv[0]) ++r;
  return r;
}

struct NnlsResult {
  Vec coefficients;
  double residual = 0.0;
  int iterations = 0;
};

/// min ||G c - v|| over c >= 0 by accelerated projected gradient with
/// adaptive restart; stops once the residual drops below `target`.
inline NnlsResult nnls_projected_gradient(const RealMatrix& g, const Vec& v, double target,
                                          int max_iterations = kNnlsMaxIterations) {
  const RealMatrix gram = g.transpose() * g;
  const Vec gv = g.transpose() * v;
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(gram, Eigen::EigenvaluesOnly);
  const double lipschitz = es.eigenvalues().maxCoeff();
  NnlsResult out;
  out.coefficients = Vec::Zero(g.cols());
  out.residual = v.norm();
  if (lipschitz <= 0.0 || out.residual <= target) return out;

  Vec c = out.coefficients;
  Vec z = c;
  double momentum = 1.0;
  for (int it = 1; it <= max_iterations; ++it) {
    const Vec grad = gram * z - gv;
    const Vec next = (z - grad / lipschitz).cwiseMax(0.0);
    const double m_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    if ((next - c).dot(grad) > 0.0) {  // restart when the step goes uphill
      z = next;
      momentum = 1.0;
    } else {
      z = next + ((momentum - 1.0) / m_next) * (next - c);
      momentum = m_next;
    }
    c = next;
    out.iterations = it;
    const double r = (g * c - v).norm();
    if (r < out.residual) {
      out.residual = r;
      out.coefficients = c;
    }
    if (out.residual <= target) break;
  }
  return out;
}

/// Verifies a decomposition certificate for the cone K given by `member`:
///  (i)   the stacked generators have rank equal to the sum of part ranks,
///  (ii)  every generator lies in K,
///  (iii) `samples` sampled members of K (normalized) are nonnegative
///        combinations of the generators with residual <= 1e-6.
/// Members are sampled from random elements and their squares.
inline CertificateVerdict certificate_check(const ElementPredicate& member, const DecompositionCertificate& cert,
                                            std::size_t samples, std::uint64_t seed) {
  require(!cert.parts.empty(), ErrorKind::Precondition, "certificate has no parts");
  for (const auto& part : cert.parts) require(!part.empty(), ErrorKind::Precondition, "certificate has an empty part");
  const Algebra& a = cert.parts.front().front().algebra();

  CertificateVerdict v;
  std::vector<Vec> columns;
  for (std::size_t p = 0; p < cert.parts.size(); ++p) {
    RealMatrix part(a.dim(), static_cast<Eigen::Index>(cert.parts[p].size()));
    for (std::size_t k = 0; k < cert.parts[p].size(); ++k) {
      const Element& g = cert.parts[p][k];
      require(g.algebra() == a, ErrorKind::DescriptorMismatch, "generators live in different algebras");
      require(norm(g) > 0.0, ErrorKind::Precondition, "generators must be nonzero");
      part.col(static_cast<Eigen::Index>(k)) = isometric_coords(g);
      columns.push_back(part.col(static_cast<Eigen::Index>(k)));
    }
    v.rank_sum += numerical_rank(part);
  }
  RealMatrix stacked(a.dim(), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t k = 0; k < columns.size(); ++k) stacked.col(static_cast<Eigen::Index>(k)) = columns[k];
  v.stacked_rank = numerical_rank(stacked);

  if (v.stacked_rank != v.rank_sum) {
    v.failed = CertificateClause::SpanIndependence;
    v.reason = "spans of the parts overlap: stacked rank " + std::to_string(v.stacked_rank) +
               " < sum of part ranks " + std::to_string(v.rank_sum);
    return v;
  }

  for (std::size_t p = 0; p < cert.parts.size(); ++p)
    for (std::size_t k = 0; k < cert.parts[p].size(); ++k)
      if (!member(cert.parts[p][k])) {
        v.failed = CertificateClause::GeneratorMembership;
        v.reason = "generator " + std::to_string(k) + " of part " + std::to_string(p) + " is not in K";
        return v;
      }

  const std::size_t max_attempts = 100 * std::max<std::size_t>(samples, 1);
  for (std::size_t i = 0; i < max_attempts && v.samples_checked < samples; ++i) {
    const Element r = random_element(a, derive_seed(seed, i));
    std::optional<Element> x;
    if (member(r)) {
      x = r;
    } else if (const Element sq = jordan_product(r, r); member(sq)) {
      x = sq;
    }
    if (!x || norm(*x) == 0.0) continue;
    const Vec target = isometric_coords(*x) / norm(*x);
    const auto fit = nnls_projected_gradient(stacked, target, 0.1 * kReconstructionTolerance);
    ++v.samples_checked;
    v.worst_residual = std::max(v.worst_residual, fit.residual);
    if (fit.residual > kReconstructionTolerance) {
      v.failed = CertificateClause::Reconstruction;
      v.reason = "sampled member " + std::to_string(v.samples_checked - 1) +
                 " is not a nonnegative combination of the generators (residual " + std::to_string(fit.residual) +
                 ")";
      return v;
    }
  }
  if (samples > 0 && v.samples_checked == 0) {
    v.failed = CertificateClause::Reconstruction;
    v.reason = "no members of K were found to test reconstruction";
    return v;
  }
  v.accepted = true;
  return v;
}

}  // namespace jspec
