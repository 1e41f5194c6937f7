#pragma once
/**
 * JSON documents read and written by the command-line tool.
 *
 * Problem file:
 *   {
 *     "kernel":  {"family": "power_law", "a": 3.0},
 *     "masses":  [1, 2, 3],
 *     "central_mass": 1.0,            // central_mass variant only
 *     "spin":    1.0,                 // A, or B for the curved variant
 *     "variant": "plain",             // plain | central_mass | curved
 *     "initial": {"r": 1.0, "alpha": [0, 2.1, 4.2]}      // optional
 *   }
 * Curved initial configs may instead give {"rho", "gamma", "z"[, "spin"]};
 * z is recomputed and must agree within 1e-9.
 *
 * Reports wrap a result with the echoed problem, options, seed and tool version.
 */

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "configuration.hpp"
#include "curved.hpp"
#include "dynamics.hpp"
#include "error.hpp"
#include "kernel.hpp"
#include "solver.hpp"
#include "variational.hpp"

namespace cocircular {

using json = nlohmann::json;

inline constexpr const char* tool_name = "cocircular";
inline constexpr const char* tool_version = "1.0.0";

struct ProblemFile {
  ProblemSpec spec;
  std::optional<CircularConfig> initial;

  friend bool operator==(const ProblemFile& a, const ProblemFile& b) {
    return a.spec == b.spec && a.initial == b.initial;
  }
};

namespace detail {

inline const json& require_field(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) throw ParseError(path.empty() ? "<root>" : path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

inline double number_at(const json& j, const std::string& path) {
  if (!j.is_number()) throw ParseError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ParseError(path, "not finite");
  return v;
}

inline double number_field(const json& j, const char* key, const std::string& path) {
  return number_at(require_field(j, key, path), path.empty() ? key : path + "." + key);
}

inline double optional_number(const json& j, const char* key, const std::string& path, double fallback) {
  if (!j.contains(key)) return fallback;
  return number_at(j.at(key), path + "." + key);
}

inline std::vector<double> number_array(const json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path, "expected an array");
  std::vector<double> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(number_at(j[k], path + "[" + std::to_string(k) + "]"));
  return out;
}

}  // namespace detail

inline json kernel_to_json(const InteractionKernel& k) {
  json j;
  j["family"] = std::string(to_string(k.family));
  switch (k.family) {
    case KernelFamily::power_law: j["a"] = k.a; break;
    case KernelFamily::quasi_homogeneous:
      j["c1"] = k.c1;
      j["a"] = k.a;
      j["c2"] = k.c2;
      j["b"] = k.b;
      break;
    case KernelFamily::curved_hyperbolic: break;
  }
  j["domain_lo"] = k.domain_lo;
  j["domain_hi"] = k.domain_hi;
  j["G_ref"] = k.G_ref;
  return j;
}

/// Parses and checks admissibility; errors name the field under "kernel".
inline InteractionKernel kernel_from_json(const json& j, int samples = 512) {
  const std::string path = "kernel";
  const json& fam = detail::require_field(j, "family", path);
  if (!fam.is_string()) throw ParseError("kernel.family", "expected a string");
  const auto family = kernel_family_from_string(fam.get<std::string>());
  if (!family) throw ParseError("kernel.family", "unknown family '" + fam.get<std::string>() + "'");
  InteractionKernel k;
  switch (*family) {
    case KernelFamily::power_law: k = InteractionKernel::power_law(detail::number_field(j, "a", path)); break;
    case KernelFamily::quasi_homogeneous:
      k = InteractionKernel::quasi_homogeneous(
          detail::number_field(j, "c1", path), detail::number_field(j, "a", path),
          detail::number_field(j, "c2", path), detail::number_field(j, "b", path));
      break;
    case KernelFamily::curved_hyperbolic: k = InteractionKernel::curved_hyperbolic(); break;
  }
  k.domain_lo = detail::optional_number(j, "domain_lo", path, k.domain_lo);
  k.domain_hi = detail::optional_number(j, "domain_hi", path, k.domain_hi);
  k.G_ref = detail::optional_number(j, "G_ref", path, k.G_ref);
  if (!(k.domain_lo > 0.0) || !(k.domain_hi > k.domain_lo)) {
    throw ParseError("kernel.domain_lo", "need 0 < domain_lo < domain_hi");
  }
  if (!(k.G_ref > 0.0)) throw ParseError("kernel.G_ref", "must be positive");
  const auto verdict = check_admissible(k, samples);
  if (!verdict.admissible) {
    std::ostringstream msg;
    msg << "kernel inadmissible: " << verdict.reason << " at x = " << *verdict.first_violation;
    throw ParseError("kernel", msg.str());
  }
  return k;
}

inline json config_to_json(const CircularConfig& c) {
  json j;
  j["r"] = c.r;
  j["alpha"] = c.alpha;
  j["masses"] = c.masses.m;
  if (c.masses.central) j["central_mass"] = *c.masses.central;
  return j;
}

inline json curved_config_to_json(const CurvedPolygonConfig& c) {
  json j;
  j["rho"] = c.rho;
  j["gamma"] = c.gamma;
  j["z"] = c.z;
  j["spin"] = c.spin;
  j["masses"] = c.masses.m;
  return j;
}

/// Reads {"r","alpha"} or {"rho","gamma","z"}. Masses default to `masses`.
inline CircularConfig config_from_json(const json& j, const MassVector& masses, const std::string& path,
                                       std::optional<double> spin = std::nullopt) {
  CircularConfig c;
  c.masses = masses;
  if (j.contains("masses")) c.masses.m = detail::number_array(j.at("masses"), path + ".masses");
  if (j.contains("central_mass")) c.masses.central = detail::number_at(j.at("central_mass"), path + ".central_mass");
  if (j.contains("rho")) {
    c.r = detail::number_field(j, "rho", path);
    c.alpha = detail::number_array(detail::require_field(j, "gamma", path), path + ".gamma");
    if (!(c.r > 0.0)) throw ParseError(path + ".rho", "must be positive");
    const double z = std::sqrt(1.0 + c.r * c.r);
    if (j.contains("z") && std::abs(detail::number_at(j.at("z"), path + ".z") - z) > 1e-9) {
      throw ParseError(path + ".z", "does not match sqrt(1 + rho^2)");
    }
    if (spin && j.contains("spin") && detail::number_at(j.at("spin"), path + ".spin") != *spin) {
      throw ParseError(path + ".spin", "does not match the problem spin");
    }
  } else {
    c.r = detail::number_field(j, "r", path);
    c.alpha = detail::number_array(detail::require_field(j, "alpha", path), path + ".alpha");
  }
  if (c.alpha.size() != c.masses.size()) throw ParseError(path + ".alpha", "length differs from masses");
  try {
    validate(c);
  } catch (const DomainError& e) {
    throw ParseError(path, e.what());
  }
  return c;
}

inline ProblemFile problem_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("<root>", "expected an object");
  ProblemFile pf;
  const json& vj = detail::require_field(j, "variant", "");
  if (!vj.is_string()) throw ParseError("variant", "expected a string");
  const auto variant = variant_from_string(vj.get<std::string>());
  if (!variant) throw ParseError("variant", "unknown variant '" + vj.get<std::string>() + "'");
  pf.spec.variant = *variant;

  pf.spec.kernel = kernel_from_json(detail::require_field(j, "kernel", ""));
  pf.spec.masses.m = detail::number_array(detail::require_field(j, "masses", ""), "masses");
  if (pf.spec.masses.size() < 2) throw ParseError("masses", "need at least two masses");
  for (std::size_t k = 0; k < pf.spec.masses.size(); ++k) {
    if (!(pf.spec.masses.m[k] > 0.0)) throw ParseError("masses[" + std::to_string(k) + "]", "must be positive");
  }
  if (j.contains("central_mass")) {
    const double mc = detail::number_at(j.at("central_mass"), "central_mass");
    if (!(mc > 0.0)) throw ParseError("central_mass", "must be positive");
    pf.spec.masses.central = mc;
  }
  if (pf.spec.variant == Variant::central_mass && !pf.spec.masses.central) {
    throw ParseError("central_mass", "required for the central_mass variant");
  }
  if (pf.spec.variant != Variant::central_mass && pf.spec.masses.central) {
    throw ParseError("central_mass", "only allowed for the central_mass variant");
  }
  if (pf.spec.variant == Variant::curved && pf.spec.kernel.family != KernelFamily::curved_hyperbolic) {
    throw ParseError("kernel.family", "curved variant requires curved_hyperbolic");
  }
  pf.spec.spin = detail::number_field(j, "spin", "");
  if (!(pf.spec.spin > 0.0)) throw ParseError("spin", "must be positive");

  if (j.contains("initial") && !j.at("initial").is_null()) {
    pf.initial = config_from_json(j.at("initial"), pf.spec.masses, "initial", pf.spec.spin);
  }
  return pf;
}

inline json problem_to_json(const ProblemFile& pf) {
  json j;
  j["kernel"] = kernel_to_json(pf.spec.kernel);
  j["masses"] = pf.spec.masses.m;
  if (pf.spec.masses.central) j["central_mass"] = *pf.spec.masses.central;
  j["spin"] = pf.spec.spin;
  j["variant"] = std::string(to_string(pf.spec.variant));
  if (pf.initial) {
    if (pf.spec.variant == Variant::curved) {
      j["initial"] = curved_config_to_json(lift(*pf.initial, pf.spec.spin));
    } else {
      j["initial"] = config_to_json(*pf.initial);
    }
  }
  return j;
}

inline ProblemFile read_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("<file>", "cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ParseError("<file>", std::string("invalid JSON: ") + e.what());
  }
  return problem_from_json(j);
}

inline json options_to_json(const SolveOptions& o) {
  return json{{"tol_grad", o.tol_grad},         {"max_iter", o.max_iter},
              {"starts", o.starts},             {"seed", o.seed},
              {"perturb_angle", o.perturb_angle}, {"perturb_radius", o.perturb_radius},
              {"gap_epsilon", o.gap_epsilon},   {"tol_eig", o.tol_eig},
              {"tol_class", o.tol_class},       {"tol_residual", o.tol_residual}};
}

inline SolveOptions options_from_json(const json& j) {
  SolveOptions o;
  o.tol_grad = j.at("tol_grad").get<double>();
  o.max_iter = j.at("max_iter").get<int>();
  o.starts = j.at("starts").get<int>();
  o.seed = j.at("seed").get<std::uint64_t>();
  o.perturb_angle = j.at("perturb_angle").get<double>();
  o.perturb_radius = j.at("perturb_radius").get<double>();
  o.gap_epsilon = j.at("gap_epsilon").get<double>();
  o.tol_eig = j.at("tol_eig").get<double>();
  o.tol_class = j.at("tol_class").get<double>();
  o.tol_residual = j.at("tol_residual").get<double>();
  return o;
}

inline json to_json(const StationaryReport& r) {
  json j;
  j["config"] = config_to_json(r.config);
  j["potential"] = r.potential;
  j["grad_norm"] = r.grad_norm;
  j["hessian_spectrum"] = r.hessian_spectrum;
  j["hessian_norm"] = r.hessian_norm;
  j["is_local_max"] = r.is_local_max;
  j["feasibility_margin"] = r.feasibility_margin ? json(*r.feasibility_margin) : json(nullptr);
  j["feasible"] = r.feasible;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["status"] = std::string(to_string(r.status));
  j["residual_max"] = r.residual_max;
  j["is_relative_equilibrium"] = r.is_relative_equilibrium;
  return j;
}

inline json to_json(const LocalMaxVerdict& v) {
  return json{{"is_local_max", v.is_local_max},         {"spectrum", v.spectrum},
              {"full_spectrum", v.full_spectrum},       {"hessian_norm", v.hessian_norm},
              {"near_null_count", v.near_null_count},   {"null_vector_angle", v.null_vector_angle},
              {"rotation_null_ok", v.rotation_null_ok}};
}

inline json to_json(const UniquenessReport& u) {
  json j;
  j["ordering"] = u.ordering.perm;
  json classes = json::array();
  for (std::size_t k = 0; k < u.classes.size(); ++k) {
    json c = config_to_json(u.classes[k]);
    c["starts"] = u.class_sizes[k];
    classes.push_back(std::move(c));
  }
  j["classes"] = std::move(classes);
  json starts = json::array();
  for (const auto& s : u.per_start) {
    starts.push_back(json{{"start", s.start},
                          {"status", std::string(to_string(s.status))},
                          {"iterations", s.iterations},
                          {"grad_norm", s.grad_norm},
                          {"is_local_max", s.is_local_max},
                          {"class", s.class_index}});
  }
  j["per_start"] = std::move(starts);
  j["verdict"] = std::string(to_string(u.verdict));
  j["single_start_caveat"] = u.single_start_caveat;
  return j;
}

inline json to_json(const OrbitCheck& o) {
  return json{{"period", o.period},
              {"max_deviation", o.max_deviation},
              {"max_com_drift", o.max_com_drift},
              {"max_constraint_drift", o.max_constraint_drift},
              {"max_tangency_drift", o.max_tangency_drift},
              {"max_z_deviation", o.max_z_deviation},
              {"truncated", o.truncated},
              {"truncation_time", o.truncation_time}};
}

/// Report envelope: tool, version, command, seed, options, echoed problem, result.
inline json make_report(const std::string& command, const ProblemFile& problem, const SolveOptions& opts,
                        json result) {
  json j;
  j["tool"] = tool_name;
  j["version"] = tool_version;
  j["command"] = command;
  j["seed"] = opts.seed;
  j["options"] = options_to_json(opts);
  j["problem"] = problem_to_json(problem);
  j["result"] = std::move(result);
  return j;
}

}  // namespace cocircular
