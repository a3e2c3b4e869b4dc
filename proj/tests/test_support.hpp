#pragma once

// Generators shared by the unit and acceptance suites.

#include <cstdint>
#include <vector>

#include "jspec/jspec.hpp"

namespace jspec::fixtures {

/// The simple algebras exercised by property tests.
inline std::vector<Algebra> simple_algebras() {
  return {Algebra::real_symmetric(1), Algebra::real_symmetric(2), Algebra::real_symmetric(3),
          Algebra::real_symmetric(4), Algebra::complex_hermitian(2), Algebra::complex_hermitian(3),
          Algebra::spin(3),           Algebra::spin(5)};
}

inline std::vector<Algebra> all_algebras() {
  auto out = simple_algebras();
  out.push_back(Algebra::euclidean(3));
  out.push_back(Algebra::product({Algebra::real_symmetric(2), Algebra::spin(3)}));
  out.push_back(Algebra::product({Algebra::complex_hermitian(2), Algebra::real_symmetric(1), Algebra::spin(4)}));
  return out;
}

/// S^n (n <= 6), H^n (n <= 4), Spin(d) (d <= 8) and two mixed products.
inline Algebra random_algebra(Rng& rng, bool simple_only = false) {
  const std::size_t kinds = simple_only ? 3 : 5;
  switch (rng.index(kinds)) {
    case 0: return Algebra::real_symmetric(1 + static_cast<int>(rng.index(6)));
    case 1: return Algebra::complex_hermitian(1 + static_cast<int>(rng.index(4)));
    case 2: return Algebra::spin(3 + static_cast<int>(rng.index(6)));
    case 3: return Algebra::product({Algebra::real_symmetric(3), Algebra::spin(4)});
    default: return Algebra::product({Algebra::complex_hermitian(2), Algebra::real_symmetric(1), Algebra::spin(3)});
  }
}

/// A random Jordan frame: the canonical frame moved by a random element of G.
inline JordanFrame random_frame(const Algebra& a, std::uint64_t seed) {
  const Automorphism phi = random_g_element(a, seed);
  std::vector<Element> es;
  const JordanFrame base = canonical_frame(a);
  for (const auto& e : base.idempotents()) es.push_back(phi.apply(e));
  return JordanFrame::trusted(a, std::move(es));
}

inline double max_abs(const Vec& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

/// max over samples of ||lambda(p) - lambda_ref||_inf.
inline double eigenvalue_drift(const PathPolyline& p, const Vec& reference) {
  double d = 0.0;
  for (const auto& s : p.samples) d = std::max(d, max_abs(eigen_map(s).values() - reference));
  return d;
}

/// Element x = q * F for a random frame, where q is drawn until member(q).
inline Element random_member(const SpectralSet& s, std::uint64_t seed) {
  Rng rng(seed);
  const int n = s.algebra().rank();
  for (int attempt = 0; attempt < 10000; ++attempt) {
    Vec q;
    if (s.q().is_finite()) {
      const auto& pts = s.q().finite_points();
      q = pts[rng.index(pts.size())];
    } else {
      q = rng.normal_vector(n);
      if (rng.uniform() < 0.5) q.array() += 2.0 * std::abs(rng.normal());
    }
    if (s.q().member(q, -1e-6)) return compose_theta(q, random_frame(s.algebra(), derive_seed(seed, 7 + attempt)));
  }
  throw Error(ErrorKind::Precondition, "could not sample a member");
}

}  // namespace jspec::fixtures
