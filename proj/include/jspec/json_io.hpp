#pragma once

// JSON documents for algebras, elements and permutation-invariant sets.
//
//   algebra   {"kind":"sym","n":3} | {"kind":"herm","n":2} | {"kind":"spin","d":4}
//             | {"kind":"product","factors":[algebra...]} | {"kind":"rn","n":3}
//   element   {"alg": algebra, "data": payload}
//             sym      full n x n row-major matrix, symmetric within 1e-12
//             herm     {"re": matrix, "im": matrix}, re symmetric, im antisymmetric
//             spin     {"x0": number, "xbar": [d-1 numbers]}
//             product  {"factors": [element...]}, or a plain array when all factors are 1 x 1
//   set       {"set":"rearr","n":4,"m":2} | {"set":"tracenorm","n":3}
//             | {"set":"finite","points":[[...],...]} | {"set":"halfspace-trace","n":2}

#include <cmath>
#include <string>
#include <vector>

#include "json.hpp"

#include "jspec/algebra.hpp"
#include "jspec/permsets.hpp"

namespace jspec::json_io {

using json = nlohmann::json;

inline constexpr double kSymmetryTolerance = 1e-12;

[[noreturn]] inline void parse_error(const std::string& what) { throw Error(ErrorKind::Parse, what); }

inline const json& field(const json& j, const char* key) {
  if (!j.is_object()) parse_error(std::string("expected an object with field '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) parse_error(std::string("missing field '") + key + "'");
  return *it;
}

inline double number(const json& j, const std::string& where) {
  if (!j.is_number()) parse_error(where + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) parse_error(where + ": non-finite number");
  return v;
}

inline int integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) parse_error(where + ": expected an integer");
  return j.get<int>();
}

inline Vec vector_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) parse_error(where + ": expected an array of numbers");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = number(j[i], where);
  return v;
}

inline json vector_to_json(const Vec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

inline RealMatrix matrix_from_json(const json& j, int n, const std::string& where) {
  if (!j.is_array() || j.size() != static_cast<std::size_t>(n))
    parse_error(where + ": expected " + std::to_string(n) + " rows");
  RealMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    const Vec row = vector_from_json(j[static_cast<std::size_t>(i)], where);
    if (row.size() != n) parse_error(where + ": row " + std::to_string(i) + " must have " + std::to_string(n) + " entries");
    m.row(i) = row.transpose();
  }
  return m;
}

inline json matrix_to_json(const RealMatrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(vector_to_json(m.row(i).transpose()));
  return out;
}

// ---------------------------------------------------------------------------

inline Algebra algebra_from_json(const json& j) {
  const json& kind = field(j, "kind");
  if (!kind.is_string()) parse_error("algebra kind must be a string");
  const auto k = kind.get<std::string>();
  try {
    if (k == "sym") return Algebra::real_symmetric(integer(field(j, "n"), "sym.n"));
    if (k == "herm") return Algebra::complex_hermitian(integer(field(j, "n"), "herm.n"));
    if (k == "spin") return Algebra::spin(integer(field(j, "d"), "spin.d"));
    if (k == "rn") return Algebra::euclidean(integer(field(j, "n"), "rn.n"));
    if (k == "product") {
      const json& fs = field(j, "factors");
      if (!fs.is_array()) parse_error("product factors must be an array");
      std::vector<Algebra> factors;
      for (const auto& f : fs) factors.push_back(algebra_from_json(f));
      return Algebra::product(std::move(factors));
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Parse) throw;
    parse_error(std::string("invalid algebra: ") + e.what());
  }
  parse_error("unknown algebra kind '" + k + "'");
}

inline json algebra_to_json(const Algebra& a) {
  switch (a.kind()) {
    case Kind::RealSymmetric: return {{"kind", "sym"}, {"n", a.order()}};
    case Kind::ComplexHermitian: return {{"kind", "herm"}, {"n", a.order()}};
    case Kind::Spin: return {{"kind", "spin"}, {"d", a.order()}};
    case Kind::Product: {
      json fs = json::array();
      for (const auto& f : a.factors()) fs.push_back(algebra_to_json(f));
      return {{"kind", "product"}, {"factors", fs}};
    }
  }
  return {};
}

inline Element element_from_json(const json& j) {
  const Algebra a = algebra_from_json(field(j, "alg"));
  const json& data = field(j, "data");
  switch (a.kind()) {
    case Kind::RealSymmetric: {
      const RealMatrix m = matrix_from_json(data, a.order(), "sym data");
      const double tol = kSymmetryTolerance * std::max(1.0, m.cwiseAbs().maxCoeff());
      if ((m - m.transpose()).cwiseAbs().maxCoeff() > tol) parse_error("sym data is not symmetric");
      return from_real_matrix(a, m);
    }
    case Kind::ComplexHermitian: {
      const RealMatrix re = matrix_from_json(field(data, "re"), a.order(), "herm re");
      const RealMatrix im = matrix_from_json(field(data, "im"), a.order(), "herm im");
      const double tol = kSymmetryTolerance * std::max({1.0, re.cwiseAbs().maxCoeff(), im.cwiseAbs().maxCoeff()});
      if ((re - re.transpose()).cwiseAbs().maxCoeff() > tol) parse_error("herm re part is not symmetric");
      if ((im + im.transpose()).cwiseAbs().maxCoeff() > tol) parse_error("herm im part is not antisymmetric");
      ComplexMatrix m(a.order(), a.order());
      m.real() = re;
      m.imag() = im;
      return from_complex_matrix(a, m);
    }
    case Kind::Spin: {
      const Vec bar = vector_from_json(field(data, "xbar"), "spin xbar");
      if (bar.size() != a.dim() - 1) parse_error("spin xbar must have " + std::to_string(a.dim() - 1) + " entries");
      Vec c(a.dim());
      c[0] = number(field(data, "x0"), "spin x0");
      c.tail(a.dim() - 1) = bar;
      return Element(a, std::move(c));
    }
    case Kind::Product: {
      // R^n shorthand: a plain coordinate array.
      if (data.is_array() && a.dim() == a.rank()) {
        const Vec q = vector_from_json(data, "rn data");
        if (q.size() != a.dim()) parse_error("rn data must have " + std::to_string(a.dim()) + " entries");
        return Element(a, q);
      }
      const json& fs = field(data, "factors");
      if (!fs.is_array() || fs.size() != a.factor_count())
        parse_error("product data needs " + std::to_string(a.factor_count()) + " factors");
      std::vector<Element> parts;
      for (std::size_t i = 0; i < fs.size(); ++i) {
        parts.push_back(element_from_json(fs[i]));
        if (!(parts.back().algebra() == a.factors()[i]))
          parse_error("product factor " + std::to_string(i) + " does not match the declared algebra");
      }
      return from_factors(a, parts);
    }
  }
  parse_error("unsupported algebra");
}

inline json element_to_json(const Element& x) {
  const Algebra& a = x.algebra();
  json data;
  switch (a.kind()) {
    case Kind::RealSymmetric: data = matrix_to_json(to_real_matrix(x)); break;
    case Kind::ComplexHermitian: {
      const ComplexMatrix m = to_complex_matrix(x);
      data = {{"re", matrix_to_json(m.real())}, {"im", matrix_to_json(m.imag())}};
      break;
    }
    case Kind::Spin:
      data = {{"x0", x.coords()[0]}, {"xbar", vector_to_json(x.coords().tail(a.dim() - 1))}};
      break;
    case Kind::Product: {
      json fs = json::array();
      for (std::size_t i = 0; i < a.factor_count(); ++i) fs.push_back(element_to_json(x.factor(i)));
      data = {{"factors", fs}};
      break;
    }
  }
  return {{"alg", algebra_to_json(a)}, {"data", data}};
}

inline PermSet permset_from_json(const json& j) {
  const json& kind = field(j, "set");
  if (!kind.is_string()) parse_error("set kind must be a string");
  const auto k = kind.get<std::string>();
  try {
    if (k == "rearr") return make_rearrangement_cone(integer(field(j, "n"), "rearr.n"), integer(field(j, "m"), "rearr.m"));
    if (k == "tracenorm") return make_trace_norm_cone(integer(field(j, "n"), "tracenorm.n"));
    if (k == "halfspace-trace") return make_halfspace_trace(integer(field(j, "n"), "halfspace-trace.n"));
    if (k == "finite") {
      const json& pts = field(j, "points");
      if (!pts.is_array()) parse_error("finite points must be an array");
      std::vector<Vec> points;
      for (const auto& p : pts) points.push_back(vector_from_json(p, "finite point"));
      return make_finite_orbit(points);
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Parse) throw;
    parse_error(std::string("invalid set: ") + e.what());
  }
  parse_error("unknown set kind '" + k + "'");
}

/// {"vertices": [[...], ...]}
inline std::vector<Vec> polyline_from_json(const json& j) {
  const json& vs = field(j, "vertices");
  if (!vs.is_array() || vs.empty()) parse_error("vertices must be a nonempty array");
  std::vector<Vec> out;
  for (const auto& v : vs) out.push_back(vector_from_json(v, "vertex"));
  return out;
}

}  // namespace jspec::json_io
