#pragma once
/**
 * Reduced potential of co-circular relative equilibria.
 *
 *   V(r, alpha) = sum_{l != k} m_l m_k G(2 r sin(|alpha_l - alpha_k| / 2)) - M A^2 r^2
 *
 * with M the total circle mass. The central-mass variant adds + 2 m_c M G(r)
 * (the W potential); the curved variant is the plain one with the curved
 * kernel h and spin B. Coordinates are ordered (r, alpha_1, ..., alpha_n).
 *
 * Every stationary point of V is a strict local maximum once alpha_1 is
 * pinned; `concavity_form` evaluates the sum-of-squares decomposition that
 * shows it.
 */

#include <cmath>
#include <cstddef>
#include <optional>
#include <string_view>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

#include "configuration.hpp"
#include "error.hpp"
#include "kernel.hpp"

namespace cocircular {

enum class Variant { plain, central_mass, curved };

inline std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::plain: return "plain";
    case Variant::central_mass: return "central_mass";
    case Variant::curved: return "curved";
  }
  return "unknown";
}

inline std::optional<Variant> variant_from_string(std::string_view name) {
  if (name == "plain") return Variant::plain;
  if (name == "central_mass") return Variant::central_mass;
  if (name == "curved") return Variant::curved;
  return std::nullopt;
}

/// One solve instance. `spin` is A for planar variants and B for the curved one.
template <Kernel K>
struct BasicProblem {
  K kernel;
  MassVector masses;
  double spin = 1.0;
  Variant variant = Variant::plain;
};

using ProblemSpec = BasicProblem<InteractionKernel>;

inline bool operator==(const ProblemSpec& a, const ProblemSpec& b) {
  return a.kernel == b.kernel && a.masses == b.masses && a.spin == b.spin && a.variant == b.variant;
}

/// Structural checks on a problem (kernel admissibility is separate, see check_admissible).
template <Kernel K>
void validate(const BasicProblem<K>& spec) {
  validate(spec.masses);
  if (!(spec.spin > 0.0) || !std::isfinite(spec.spin)) throw DomainError("spin must be positive");
  const bool has_central = spec.masses.central.has_value();
  if (spec.variant == Variant::central_mass && !has_central) {
    throw DomainError("central_mass variant requires a central mass");
  }
  if (spec.variant != Variant::central_mass && has_central) {
    throw DomainError("central mass given for a variant without one");
  }
  if constexpr (std::is_same_v<K, InteractionKernel>) {
    if (spec.variant == Variant::curved && spec.kernel.family != KernelFamily::curved_hyperbolic) {
      throw DomainError("curved variant requires the curved_hyperbolic kernel");
    }
  }
}

/// Perturbation direction (rho, gamma_1..gamma_n) for the second-variation form.
struct HessianProbe {
  double rho = 0.0;
  std::vector<double> gamma;
};

using HessianMatrix = Eigen::MatrixXd;

struct Residuals {
  std::vector<double> radial;
  std::vector<double> tangential;

  double max_abs() const {
    double m = 0.0;
    for (double v : radial) m = std::max(m, std::abs(v));
    for (double v : tangential) m = std::max(m, std::abs(v));
    return m;
  }
};

namespace detail {

// Geometry of the ordered pair (i, j): u = |alpha_i - alpha_j| / 2.
struct PairTerms {
  double sign;  // sign(alpha_i - alpha_j), the delta_ij of the stationarity system
  double s;     // sin u
  double c;     // cos u
  double x;     // chord 2 r sin u
};

inline PairTerms pair_terms(const CircularConfig& c, std::size_t i, std::size_t j) {
  const double d = c.alpha[i] - c.alpha[j];
  const double u = 0.5 * std::abs(d);
  const double s = std::sin(u);
  return {d > 0.0 ? 1.0 : -1.0, s, std::cos(u), 2.0 * c.r * s};
}

template <Kernel K>
void check_inputs(const BasicProblem<K>& spec, const CircularConfig& c) {
  validate(c);
  if (c.masses.m.size() != c.size()) throw DomainError("mass/angle count mismatch");
  if (spec.variant == Variant::central_mass && !c.masses.central) {
    throw DomainError("central_mass variant requires a central mass");
  }
}

template <Kernel K>
double central_mass_of(const BasicProblem<K>& spec, const CircularConfig& c) {
  if (spec.variant != Variant::central_mass) return 0.0;
  return c.masses.central.value_or(0.0);
}

}  // namespace detail

/// V (plain, curved) or W (central_mass). Uses the masses stored in `c`.
template <Kernel K>
double potential(const BasicProblem<K>& spec, const CircularConfig& c) {
  detail::check_inputs(spec, c);
  const std::size_t n = c.size();
  const auto& m = c.masses.m;
  const double A2 = spec.spin * spec.spin;
  double pair_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      pair_sum += m[i] * m[j] * eval_G(spec.kernel, detail::pair_terms(c, i, j).x);
    }
  }
  const double M = c.masses.circle_total();
  double value = pair_sum - M * A2 * c.r * c.r;
  const double mc = detail::central_mass_of(spec, c);
  if (mc > 0.0) value += 2.0 * mc * M * eval_G(spec.kernel, c.r);
  return value;
}

/// (dV/dr, dV/dalpha_1, ..., dV/dalpha_n) in closed form.
template <Kernel K>
Eigen::VectorXd gradient(const BasicProblem<K>& spec, const CircularConfig& c) {
  detail::check_inputs(spec, c);
  const std::size_t n = c.size();
  const auto& m = c.masses.m;
  const double r = c.r;
  const double A2 = spec.spin * spec.spin;
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto p = detail::pair_terms(c, i, j);
      const double mm = m[i] * m[j];
      const double g = eval_g(spec.kernel, p.x);
      grad(0) += 2.0 * mm * p.s * g;
      grad(static_cast<Eigen::Index>(i + 1)) += 2.0 * mm * r * p.sign * p.c * g;
    }
  }
  const double M = c.masses.circle_total();
  grad(0) -= 2.0 * M * A2 * r;
  const double mc = detail::central_mass_of(spec, c);
  if (mc > 0.0) grad(0) += 2.0 * mc * M * eval_g(spec.kernel, r);
  return grad;
}

/// Full (n+1)x(n+1) Hessian, obtained by differentiating `gradient` by hand:
///   V_rr        = sum 4 m_i m_j s^2 g'(x) - 2 M A^2 [+ 2 m_c M g'(r)]
///   V_r,a_i     = sum_j 2 m_i m_j sign (c g + 2 r s c g')
///   V_a_i,a_j   = m_i m_j (r s g - 2 r^2 c^2 g'),   i != j
///   V_a_i,a_i   = -sum_{j != i} V_a_i,a_j
template <Kernel K>
HessianMatrix hessian(const BasicProblem<K>& spec, const CircularConfig& c) {
  detail::check_inputs(spec, c);
  const std::size_t n = c.size();
  const auto& m = c.masses.m;
  const double r = c.r;
  const double A2 = spec.spin * spec.spin;
  HessianMatrix H = HessianMatrix::Zero(static_cast<Eigen::Index>(n + 1), static_cast<Eigen::Index>(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i + 1);
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto jj = static_cast<Eigen::Index>(j + 1);
      const auto p = detail::pair_terms(c, i, j);
      const double mm = m[i] * m[j];
      const double g = eval_g(spec.kernel, p.x);
      const double gp = eval_g_prime(spec.kernel, p.x);
      H(0, 0) += 4.0 * mm * p.s * p.s * gp;
      H(0, ii) += 2.0 * mm * p.sign * (p.c * g + 2.0 * r * p.s * p.c * gp);
      const double off = mm * (r * p.s * g - 2.0 * r * r * p.c * p.c * gp);
      H(ii, jj) = off;
      H(ii, ii) -= off;
    }
    H(ii, 0) = H(0, ii);
  }
  const double M = c.masses.circle_total();
  H(0, 0) -= 2.0 * M * A2;
  const double mc = detail::central_mass_of(spec, c);
  if (mc > 0.0) H(0, 0) += 2.0 * mc * M * eval_g_prime(spec.kernel, r);
  return H;
}

inline Eigen::VectorXd probe_vector(const HessianProbe& probe) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(probe.gamma.size() + 1));
  v(0) = probe.rho;
  for (std::size_t i = 0; i < probe.gamma.size(); ++i) v(static_cast<Eigen::Index>(i + 1)) = probe.gamma[i];
  return v;
}

/// rho^2 V_rr + 2 rho sum gamma_i V_r,a_i + sum gamma_i gamma_j V_a_i,a_j.
template <Kernel K>
double quadratic_form(const BasicProblem<K>& spec, const CircularConfig& c, const HessianProbe& probe) {
  if (probe.gamma.size() != c.size()) throw UsageError("quadratic_form: probe size mismatch");
  const HessianMatrix H = hessian(spec, c);
  const Eigen::VectorXd v = probe_vector(probe);
  return v.dot(H * v);
}

/// The second variation rearranged as a sum of non-positive terms:
///   -2 rho^2 M A^2 [+ 2 rho^2 m_c M g'(r)]
///   + sum_{i != j} m_i m_j (2 rho sin(d/2) + r (gamma_i - gamma_j) cos(d/2))^2 g'(x)
///   - 1/2 sum_{i != j} m_i m_j (gamma_i - gamma_j)^2 r sin(|d|/2) g(x)
/// It equals quadratic_form exactly when the tangential equations hold.
template <Kernel K>
double concavity_form(const BasicProblem<K>& spec, const CircularConfig& c, const HessianProbe& probe) {
  detail::check_inputs(spec, c);
  if (probe.gamma.size() != c.size()) throw UsageError("concavity_form: probe size mismatch");
  const std::size_t n = c.size();
  const auto& m = c.masses.m;
  const double r = c.r, rho = probe.rho;
  const double A2 = spec.spin * spec.spin;
  double value = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto p = detail::pair_terms(c, i, j);
      const double mm = m[i] * m[j];
      const double dg = probe.gamma[i] - probe.gamma[j];
      const double sq = 2.0 * rho * p.sign * p.s + r * dg * p.c;
      value += mm * sq * sq * eval_g_prime(spec.kernel, p.x);
      value -= 0.5 * mm * dg * dg * r * p.s * eval_g(spec.kernel, p.x);
    }
  }
  const double M = c.masses.circle_total();
  value -= 2.0 * rho * rho * M * A2;
  const double mc = detail::central_mass_of(spec, c);
  if (mc > 0.0) value += 2.0 * rho * rho * mc * M * eval_g_prime(spec.kernel, r);
  return value;
}

/// Per-body residuals of the stationarity system:
///   radial_i     = m_i A^2 r [- m_i m_c g(r)] - sum_j m_i m_j sin(u) g(x)
///   tangential_i = sum_j m_i m_j r sign cos(u) g(x)
/// gradient = (-2 sum radial_i, 2 tangential_1, ..., 2 tangential_n).
template <Kernel K>
Residuals residuals(const BasicProblem<K>& spec, const CircularConfig& c) {
  detail::check_inputs(spec, c);
  const std::size_t n = c.size();
  const auto& m = c.masses.m;
  const double r = c.r;
  const double A2 = spec.spin * spec.spin;
  const double mc = detail::central_mass_of(spec, c);
  const double central_term = mc > 0.0 ? mc * eval_g(spec.kernel, r) : 0.0;
  Residuals out{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    double radial_sum = 0.0, tangential_sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto p = detail::pair_terms(c, i, j);
      const double mm = m[i] * m[j];
      const double g = eval_g(spec.kernel, p.x);
      radial_sum += mm * p.s * g;
      tangential_sum += mm * r * p.sign * p.c * g;
    }
    out.radial[i] = m[i] * (A2 * r - central_term) - radial_sum;
    out.tangential[i] = tangential_sum;
  }
  return out;
}

/// A^2 r - m_c g(r); must be positive for a consistent central-mass equilibrium.
template <Kernel K>
double feasibility_margin(const BasicProblem<K>& spec, const CircularConfig& c) {
  if (spec.variant != Variant::central_mass) {
    throw UsageError("feasibility_margin: only defined for the central_mass variant");
  }
  const double mc = c.masses.central.value_or(spec.masses.central.value_or(0.0));
  return spec.spin * spec.spin * c.r - mc * eval_g(spec.kernel, c.r);
}

/// Drops the alpha_1 row and column: coordinates (r, alpha_2, ..., alpha_n).
inline HessianMatrix gauge_fixed(const HessianMatrix& H) {
  const Eigen::Index n = H.rows();
  HessianMatrix out(n - 1, n - 1);
  std::vector<Eigen::Index> keep;
  keep.push_back(0);
  for (Eigen::Index k = 2; k < n; ++k) keep.push_back(k);
  for (Eigen::Index a = 0; a < n - 1; ++a) {
    for (Eigen::Index b = 0; b < n - 1; ++b) out(a, b) = H(keep[static_cast<std::size_t>(a)], keep[static_cast<std::size_t>(b)]);
  }
  return out;
}

inline Eigen::VectorXd gauge_fixed(const Eigen::VectorXd& grad) {
  Eigen::VectorXd out(grad.size() - 1);
  out(0) = grad(0);
  for (Eigen::Index k = 2; k < grad.size(); ++k) out(k - 1) = grad(k);
  return out;
}

/// The rotation generator (0, 1, ..., 1), normalised.
inline Eigen::VectorXd rotation_generator(std::size_t n) {
  Eigen::VectorXd v = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n + 1));
  v(0) = 0.0;
  return v.normalized();
}

}  // namespace cocircular
