#pragma once

// Permutation-invariant subsets Q of R^n given as membership predicates.
//
// Predicates take a slack argument: inequality constraints g(q) >= 0 are
// evaluated as g(q) >= -slack, finite sets accept points within
// max(slack, kFiniteTolerance) of the orbit in the max norm.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "jspec/random.hpp"
#include "jspec/spectral.hpp"

namespace jspec {

inline constexpr double kFiniteTolerance = 1e-12;
/// Orbits larger than this are not materialized.
inline constexpr std::size_t kMaxFiniteOrbit = 200000;

enum class PermSetTag { Rearrangement, TraceNorm, Finite, HalfspaceTrace, Custom };

struct PermSetFlags {
  bool convex = false;
  bool cone = false;
  bool closed = false;
  bool pointed = false;
};

using Predicate = std::function<bool(const Vec& q, double slack)>;

class PermSet {
 public:
  /// Caller-supplied predicate. Permutation invariance and flag honesty are
  /// the caller's contract; audit with `permutation_invariance_violation`.
  static PermSet custom(int n, Predicate predicate, PermSetFlags flags) {
    require(n >= 1, ErrorKind::Precondition, "dimension must be >= 1");
    return PermSet(n, std::move(predicate), flags, PermSetTag::Custom);
  }

  int n() const noexcept { return n_; }
  PermSetTag tag() const noexcept { return tag_; }
  const PermSetFlags& flags() const noexcept { return flags_; }
  bool is_finite() const noexcept { return orbit_.has_value(); }
  /// Rearrangement-cone parameter m; 0 for other kinds.
  int m() const noexcept { return m_; }

  bool member(const Vec& q, double slack = 0.0) const {
    require(q.size() == n_, ErrorKind::Precondition,
            "vector of length " + std::to_string(q.size()) + " tested against a set in R^" + std::to_string(n_));
    return predicate_(q, slack);
  }

  /// Deduplicated orbit Sigma_n(points); empty unless finite.
  const std::vector<Vec>& finite_points() const {
    require(orbit_.has_value(), ErrorKind::UnsupportedKind, "set is not finite");
    return *orbit_;
  }

  /// Q-down: the distinct non-increasing representatives of a finite set.
  const std::vector<Vec>& down_points() const {
    require(orbit_.has_value(), ErrorKind::UnsupportedKind, "set is not finite");
    return down_;
  }

  std::string describe() const {
    switch (tag_) {
      case PermSetTag::Rearrangement:
        return "rearrangement cone Q^" + std::to_string(n_) + "_" + std::to_string(m_);
      case PermSetTag::TraceNorm: return "trace-norm cone in R^" + std::to_string(n_);
      case PermSetTag::Finite: return "finite orbit set with " + std::to_string(orbit_->size()) + " points";
      case PermSetTag::HalfspaceTrace: return "trace half-space in R^" + std::to_string(n_);
      case PermSetTag::Custom: return "custom set in R^" + std::to_string(n_);
    }
    return {};
  }

 private:
  PermSet(int n, Predicate p, PermSetFlags flags, PermSetTag tag)
      : n_(n), predicate_(std::move(p)), flags_(flags), tag_(tag) {}

  friend PermSet make_rearrangement_cone(int n, int m);
  friend PermSet make_trace_norm_cone(int n);
  friend PermSet make_finite_orbit(const std::vector<Vec>& points);
  friend PermSet make_halfspace_trace(int n);

  int n_;
  Predicate predicate_;
  PermSetFlags flags_;
  PermSetTag tag_;
  int m_ = 0;
  std::optional<std::vector<Vec>> orbit_;
  std::vector<Vec> down_;
};

/// s_m(q): sum of the m smallest entries.
inline double smallest_sum(const Vec& q, int m) {
  require(m >= 0 && m <= q.size(), ErrorKind::Precondition, "m out of range");
  const Vec asc = sort_asc(q);
  return asc.head(m).sum();
}

inline PermSet make_rearrangement_cone(int n, int m) {
  require(n >= 2, ErrorKind::Precondition, "rearrangement cone needs n >= 2");
  require(m >= 1 && m <= n - 1, ErrorKind::Precondition,
          "rearrangement cone needs 1 <= m <= n-1, got m=" + std::to_string(m));
  PermSet s(
      n, [m](const Vec& q, double slack) { return smallest_sum(q, m) >= -slack; },
      PermSetFlags{.convex = true, .cone = true, .closed = true, .pointed = true}, PermSetTag::Rearrangement);
  s.m_ = m;
  return s;
}

inline PermSet make_trace_norm_cone(int n) {
  require(n >= 3, ErrorKind::Precondition, "trace-norm cone needs n >= 3");
  const double factor = std::sqrt(n / 2.0);
  return PermSet(
      n,
      [factor](const Vec& q, double slack) {
        // Sorting first makes the floating-point result permutation invariant.
        const Vec s = sort_desc(q).values();
        return s.sum() - factor * s.norm() >= -slack;
      },
      PermSetFlags{.convex = true, .cone = true, .closed = true, .pointed = true}, PermSetTag::TraceNorm);
}

inline PermSet make_halfspace_trace(int n) {
  require(n >= 1, ErrorKind::Precondition, "dimension must be >= 1");
  return PermSet(
      n, [](const Vec& q, double slack) { return sort_desc(q).values().sum() >= -slack; },
      PermSetFlags{.convex = true, .cone = true, .closed = true, .pointed = false}, PermSetTag::HalfspaceTrace);
}

namespace detail {

inline bool near(const Vec& a, const Vec& b, double tol) { return (a - b).cwiseAbs().maxCoeff() <= tol; }

}  // namespace detail

/// Q = Sigma_n(points), materialized as a deduplicated orbit.
inline PermSet make_finite_orbit(const std::vector<Vec>& points) {
  require(!points.empty(), ErrorKind::Precondition, "finite set needs at least one point");
  const auto n = points.front().size();
  require(n >= 1, ErrorKind::Precondition, "points must be nonempty vectors");

  std::vector<Vec> down;
  for (const auto& p : points) {
    require(p.size() == n, ErrorKind::Precondition, "points must have equal lengths");
    require(p.allFinite(), ErrorKind::Precondition, "points must be finite");
    Vec s = sort_desc(p).values();
    const bool seen = std::any_of(down.begin(), down.end(),
                                  [&](const Vec& d) { return detail::near(d, s, kFiniteTolerance); });
    if (!seen) down.push_back(std::move(s));
  }

  std::vector<Vec> orbit;
  for (const auto& d : down) {
    std::vector<double> perm(d.data(), d.data() + d.size());
    std::sort(perm.begin(), perm.end());
    do {
      require(orbit.size() < kMaxFiniteOrbit, ErrorKind::Precondition, "finite orbit too large to materialize");
      orbit.push_back(Eigen::Map<const Vec>(perm.data(), n));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }

  const bool all_zero = std::all_of(down.begin(), down.end(), [](const Vec& d) { return d.isZero(0.0); });
  const bool single_point = orbit.size() == 1;
  PermSetFlags flags{.convex = single_point, .cone = all_zero, .closed = true, .pointed = all_zero};

  PermSet s(
      static_cast<int>(n),
      [down](const Vec& q, double slack) {
        const Vec s = sort_desc(q).values();
        const double tol = std::max(slack, kFiniteTolerance);
        return std::any_of(down.begin(), down.end(), [&](const Vec& d) { return detail::near(d, s, tol); });
      },
      flags, PermSetTag::Finite);
  s.orbit_ = std::move(orbit);
  s.down_ = std::move(down);
  return s;
}

/// Membership in Q-down: q sorted non-increasing and q in Q.
inline bool down_member(const PermSet& set, const Vec& q, double slack = 0.0) {
  for (Eigen::Index i = 0; i + 1 < q.size(); ++i)
    if (q[i] < q[i + 1]) return false;
  return set.member(q, slack);
}

struct PointednessVerdict {
  std::optional<Vec> witness;  // q != 0 with q and -q both in Q
  std::size_t samples_checked = 0;

  bool violation_found() const noexcept { return witness.has_value(); }
};

/// Candidate generator for pointedness probing. The lineality space of a
/// permutation-invariant convex cone is itself permutation invariant, hence
/// one of {0}, span(1), the zero-sum hyperplane or R^n; the generator mixes
/// Gaussian vectors with exact multiples of 1 and exact zero-sum integer
/// vectors so each case has positive hit probability.
inline Vec pointedness_candidate(int n, std::uint64_t seed, std::uint64_t index) {
  Rng rng(seed, index);
  Vec q(n);
  switch (index % 4) {
    case 0:
      q = rng.normal_vector(n);
      break;
    case 1: {
      double sum = 0.0;
      for (int i = 0; i + 1 < n; ++i) {
        q[i] = static_cast<double>(static_cast<int>(rng.index(5)) - 2);
        sum += q[i];
      }
      q[n - 1] = -sum;
      break;
    }
    case 2:
      q = Vec::Constant(n, rng.normal());
      break;
    default:
      for (int i = 0; i < n; ++i) q[i] = static_cast<double>(static_cast<int>(rng.index(5)) - 2);
      break;
  }
  return q;
}

/// Searches for q != 0 with q, -q in Q. A clean verdict is evidence, not proof.
inline PointednessVerdict pointed_sample_check(const PermSet& set, std::size_t samples, std::uint64_t seed) {
  require(set.flags().cone, ErrorKind::Precondition, "pointedness check needs a set flagged as a cone");
  PointednessVerdict v;
  for (std::size_t i = 0; i < samples; ++i) {
    const Vec q = pointedness_candidate(set.n(), seed, i);
    ++v.samples_checked;
    if (q.isZero(0.0)) continue;
    if (set.member(q) && set.member(-q)) {
      v.witness = q;
      return v;
    }
  }
  return v;
}

/// Randomized audit of member(q) == member(sigma q); returns an offending q.
inline std::optional<Vec> permutation_invariance_violation(const PermSet& set, std::size_t samples,
                                                           std::uint64_t seed, double scale = 1.0) {
  for (std::size_t i = 0; i < samples; ++i) {
    Rng rng(seed, i);
    const Vec q = scale * rng.normal_vector(set.n());
    std::vector<int> perm(static_cast<std::size_t>(set.n()));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng.engine());
    Vec p(set.n());
    for (int k = 0; k < set.n(); ++k) p[k] = q[perm[static_cast<std::size_t>(k)]];
    if (set.member(q) != set.member(p)) return q;
  }
  return std::nullopt;
}

}  // namespace jspec
