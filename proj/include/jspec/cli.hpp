#pragma once

// Command layer behind the `jspec` executable. Each command maps a JSON
// request plus flags to a JSON response and an exit code:
//   0 success, 2 input error, 3 numeric failure, 4 mathematical infeasibility.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jspec/json_io.hpp"
#include "jspec/spectralsets.hpp"

namespace jspec::cli {

using json = nlohmann::json;

enum ExitCode : int { kOk = 0, kInputError = 2, kNumericFailure = 3, kInfeasible = 4 };

struct Options {
  int steps = 50;
  std::uint64_t seed = 0;
  std::size_t samples = 2000;
  std::size_t count = 10;
  double tolerance = kPathTolerance;
  std::optional<json> q_path;  // parsed --qpath document
};

struct Result {
  int exit_code = kOk;
  json output;
};

inline int exit_code_for(const Error& e) {
  if (e.kind() == ErrorKind::NumericFailure) return kNumericFailure;
  if (e.is_infeasibility()) return kInfeasible;
  return kInputError;
}

inline json error_document(const Error& e) {
  return {{"error", to_string(e.kind())}, {"message", e.what()}};
}

// ---------------------------------------------------------------------------

inline json cmd_eig(const json& request) {
  return {{"lambda", json_io::vector_to_json(eigen_map(json_io::element_from_json(request)).values())}};
}

inline json cmd_decompose(const json& request) {
  const auto d = spectral_decompose(json_io::element_from_json(request));
  json frame = json::array();
  for (const auto& e : d.frame.idempotents()) frame.push_back(json_io::element_to_json(e));
  return {{"lambda", json_io::vector_to_json(d.values.values())}, {"frame", frame}};
}

inline json cmd_member(const json& request, const Options& opt) {
  const Element x = json_io::element_from_json(json_io::field(request, "x"));
  const SpectralSet s(x.algebra(), json_io::permset_from_json(json_io::field(request, "set")));
  return {{"member", ss_member(s, x, opt.tolerance)},
          {"lambda", json_io::vector_to_json(eigen_map(x).values())}};
}

inline json path_document(const PathPolyline& p) {
  json samples = json::array();
  for (const auto& s : p.samples) samples.push_back(json_io::element_to_json(s));
  return {{"count", p.samples.size()}, {"max_step", p.max_step}, {"tolerance", p.tolerance}, {"samples", samples}};
}

inline json cmd_connect(const json& request, const Options& opt) {
  const Element x = json_io::element_from_json(json_io::field(request, "x"));
  const Element y = json_io::element_from_json(json_io::field(request, "y"));
  if (!(x.algebra() == y.algebra())) json_io::parse_error("x and y live in different algebras");
  const SpectralSet s(x.algebra(), json_io::permset_from_json(json_io::field(request, "set")));

  ConnectOptions co;
  co.steps = opt.steps;
  co.tolerance = opt.tolerance;
  if (opt.q_path) {
    co.q_path = json_io::polyline_from_json(*opt.q_path);
  } else if (!x.algebra().is_simple() && s.q().flags().convex) {
    // Q convex: the segment between the factor blocks stays in Q.
    co.q_path = std::vector<Vec>{factor_blocks(x), factor_blocks(y)};
  }
  return path_document(connect(s, x, y, co));
}

inline json cmd_fan(const json& request, const Options& opt) {
  const Element c = json_io::element_from_json(json_io::field(request, "c"));
  const Element a = json_io::element_from_json(json_io::field(request, "a"));
  if (!(c.algebra() == a.algebra())) json_io::parse_error("c and a live in different algebras");
  const FanInterval fi = fan_interval(c, a);
  const auto values = fan_sample(c, a, opt.samples, opt.seed);
  bool inside = true;
  double lo = fi.Delta;
  double hi = fi.delta;
  for (double v : values) {
    inside = inside && v >= fi.delta - 1e-9 && v <= fi.Delta + 1e-9;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  json out = {{"delta", fi.delta},
              {"Delta", fi.Delta},
              {"samples_in_interval", inside},
              {"sample_count", values.size()},
              {"minimizer", json_io::element_to_json(fi.minimizer)},
              {"maximizer", json_io::element_to_json(fi.maximizer)}};
  if (!values.empty()) {
    out["sample_min"] = lo;
    out["sample_max"] = hi;
  }
  return out;
}

inline json cmd_orbit_sample(const json& request, const Options& opt) {
  const json& doc = request.contains("x") ? request["x"] : request;
  const Element x = json_io::element_from_json(doc);
  json samples = json::array();
  for (const auto& y : orbit_sample(x, opt.count, opt.seed)) samples.push_back(json_io::element_to_json(y));
  return {{"samples", samples}};
}

inline json cmd_components(const json& request) {
  const Algebra a = json_io::algebra_from_json(json_io::field(request, "alg"));
  const SpectralSet s(a, json_io::permset_from_json(json_io::field(request, "set")));
  json comps = json::array();
  for (const auto& c : components_finite(s))
    comps.push_back({{"representative", json_io::vector_to_json(c.representative)}, {"description", c.description}});
  return {{"count", comps.size()}, {"components", comps}};
}

inline json cmd_certify(const json& request, const Options& opt) {
  const Algebra a = json_io::algebra_from_json(json_io::field(request, "alg"));
  const SpectralSet s(a, json_io::permset_from_json(json_io::field(request, "set")));
  const json& parts = json_io::field(request, "parts");
  if (!parts.is_array()) json_io::parse_error("parts must be an array of generator lists");
  DecompositionCertificate cert;
  for (const auto& part : parts) {
    if (!part.is_array()) json_io::parse_error("each part must be an array of elements");
    std::vector<Element> gens;
    for (const auto& g : part) {
      gens.push_back(json_io::element_from_json(g));
      if (!(gens.back().algebra() == a)) json_io::parse_error("generator algebra does not match 'alg'");
    }
    cert.parts.push_back(std::move(gens));
  }
  const auto v = certificate_check([&](const Element& x) { return ss_member(s, x, 1e-12); }, cert, opt.samples,
                                   opt.seed);
  return {{"accepted", v.accepted},
          {"failed_clause", to_string(v.failed)},
          {"reason", v.reason},
          {"stacked_rank", v.stacked_rank},
          {"rank_sum", v.rank_sum},
          {"samples_checked", v.samples_checked},
          {"worst_residual", v.worst_residual}};
}

inline json cmd_sum_split(const json& request) {
  const Element z = json_io::element_from_json(json_io::field(request, "z"));
  const PermSet q1_set = json_io::permset_from_json(json_io::field(request, "q1set"));
  const PermSet q2_set = json_io::permset_from_json(json_io::field(request, "q2set"));
  Vec q1, q2;
  if (request.contains("q1") || request.contains("q2")) {
    q1 = json_io::vector_from_json(json_io::field(request, "q1"), "q1");
    q2 = json_io::vector_from_json(json_io::field(request, "q2"), "q2");
  } else {
    const auto split = find_split(eigen_map(z).values(), q1_set, q2_set);
    if (!split) throw Error(ErrorKind::HypothesisViolation, "no split of lambda(z) into Q1 + Q2 was found");
    q1 = split->first;
    q2 = split->second;
  }
  const auto [first, second] = sum_split(z, q1_set, q2_set, q1, q2);
  return {{"q1", json_io::vector_to_json(q1)},
          {"q2", json_io::vector_to_json(q2)},
          {"first", json_io::element_to_json(first)},
          {"second", json_io::element_to_json(second)},
          {"reassembly_error", distance(first + second, z)}};
}

inline json cmd_pointed_check(const json& request, const Options& opt) {
  const PermSet q = json_io::permset_from_json(request.contains("set") && request["set"].is_object()
                                                   ? request["set"]
                                                   : request);
  const auto v = pointed_sample_check(q, opt.samples, opt.seed);
  return {{"violation_found", v.violation_found()},
          {"witness", v.witness ? json_io::vector_to_json(*v.witness) : json(nullptr)},
          {"samples_checked", v.samples_checked}};
}

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"eig",        "decompose", "member",  "connect",   "fan",
                                              "orbit-sample", "components", "certify", "sum-split", "pointed-check"};
  return names;
}

/// Runs one command; library errors become error documents with their exit code.
inline Result run(const std::string& command, const json& request, const Options& opt = {}) {
  try {
    if (command == "eig") return {kOk, cmd_eig(request)};
    if (command == "decompose") return {kOk, cmd_decompose(request)};
    if (command == "member") return {kOk, cmd_member(request, opt)};
    if (command == "connect") return {kOk, cmd_connect(request, opt)};
    if (command == "fan") return {kOk, cmd_fan(request, opt)};
    if (command == "orbit-sample") return {kOk, cmd_orbit_sample(request, opt)};
    if (command == "components") return {kOk, cmd_components(request)};
    if (command == "certify") return {kOk, cmd_certify(request, opt)};
    if (command == "sum-split") return {kOk, cmd_sum_split(request)};
    if (command == "pointed-check") return {kOk, cmd_pointed_check(request, opt)};
    throw Error(ErrorKind::Parse, "unknown command '" + command + "'");
  } catch (const Error& e) {
    return {exit_code_for(e), error_document(e)};
  } catch (const json::exception& e) {
    return {kInputError, {{"error", "parse-error"}, {"message", e.what()}}};
  }
}

/// Parses request text first so malformed JSON maps to the input-error code.
inline Result run_text(const std::string& command, const std::string& text, const Options& opt = {}) {
  json request;
  try {
    request = json::parse(text);
  } catch (const json::parse_error& e) {
    return {kInputError, {{"error", "parse-error"}, {"message", e.what()}}};
  }
  return run(command, request, opt);
}

}  // namespace jspec::cli
