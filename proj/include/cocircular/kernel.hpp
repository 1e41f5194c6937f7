#pragma once
/**
 * Interaction kernels.
 *
 * A kernel is the force factor f of the planar equations of motion
 *   q_i'' = sum_j m_j (q_j - q_i) f(|q_j - q_i|)
 * together with the derived quantities the reduced potential needs:
 *   g(x) = x f(x),  g'(x),  G with G' = g.
 * Admissible kernels have f > 0 and g strictly decreasing.
 *
 * Any type that provides eval_f / eval_g / eval_g_prime / eval_G through
 * ADL models the `Kernel` concept; InteractionKernel covers the built-in
 * families and FunctionKernel wraps user callables.
 */

#include <algorithm>
#include <cmath>
#include <concepts>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "error.hpp"

namespace cocircular {

enum class KernelFamily { power_law, quasi_homogeneous, curved_hyperbolic };

inline std::string_view to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::power_law: return "power_law";
    case KernelFamily::quasi_homogeneous: return "quasi_homogeneous";
    case KernelFamily::curved_hyperbolic: return "curved_hyperbolic";
  }
  return "unknown";
}

inline std::optional<KernelFamily> kernel_family_from_string(std::string_view name) {
  if (name == "power_law") return KernelFamily::power_law;
  if (name == "quasi_homogeneous") return KernelFamily::quasi_homogeneous;
  if (name == "curved_hyperbolic") return KernelFamily::curved_hyperbolic;
  return std::nullopt;
}

/// Built-in kernel families.
///   power_law:          f(x) = x^-a
///   quasi_homogeneous:  f(x) = c1 x^-a + c2 x^-b
///   curved_hyperbolic:  f(x) = h(x) = 8 x^-3 (4 + x^2)^(-3/2)   (curvature -1)
/// [domain_lo, domain_hi] is the window on which admissibility is sampled.
struct InteractionKernel {
  KernelFamily family = KernelFamily::power_law;
  double c1 = 1.0;
  double a = 3.0;
  double c2 = 0.0;
  double b = 0.0;
  double domain_lo = 1e-3;
  double domain_hi = 1e3;
  double G_ref = 1.0;

  static InteractionKernel power_law(double exponent) {
    InteractionKernel k;
    k.family = KernelFamily::power_law;
    k.a = exponent;
    return k;
  }

  static InteractionKernel quasi_homogeneous(double c1, double a, double c2, double b) {
    InteractionKernel k;
    k.family = KernelFamily::quasi_homogeneous;
    k.c1 = c1;
    k.a = a;
    k.c2 = c2;
    k.b = b;
    return k;
  }

  static InteractionKernel curved_hyperbolic() {
    InteractionKernel k;
    k.family = KernelFamily::curved_hyperbolic;
    return k;
  }

  friend bool operator==(const InteractionKernel&, const InteractionKernel&) = default;
};

namespace detail {

inline void require_positive_length(double x, const char* op) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError(std::string(op) + ": length must be positive and finite, got " + std::to_string(x));
  }
}

// c * x^-e, the building block of power-law terms.
inline double power_term(double c, double e, double x) { return c * std::pow(x, -e); }

// Antiderivative of c * x^(1-e).
inline double power_term_G(double c, double e, double x) {
  if (e == 2.0) return c * std::log(x);
  return c * std::pow(x, 2.0 - e) / (2.0 - e);
}

}  // namespace detail

inline double eval_f(const InteractionKernel& k, double x) {
  detail::require_positive_length(x, "eval_f");
  switch (k.family) {
    case KernelFamily::power_law: return detail::power_term(1.0, k.a, x);
    case KernelFamily::quasi_homogeneous:
      return detail::power_term(k.c1, k.a, x) + detail::power_term(k.c2, k.b, x);
    case KernelFamily::curved_hyperbolic: return 8.0 / (x * x * x) * std::pow(4.0 + x * x, -1.5);
  }
  return 0.0;
}

inline double eval_g(const InteractionKernel& k, double x) { return x * eval_f(k, x); }

inline double eval_g_prime(const InteractionKernel& k, double x) {
  detail::require_positive_length(x, "eval_g_prime");
  switch (k.family) {
    case KernelFamily::power_law: return (1.0 - k.a) * detail::power_term(1.0, k.a, x);
    case KernelFamily::quasi_homogeneous:
      return (1.0 - k.a) * detail::power_term(k.c1, k.a, x) +
             (1.0 - k.b) * detail::power_term(k.c2, k.b, x);
    case KernelFamily::curved_hyperbolic: {
      const double s = 4.0 + x * x;
      return -8.0 * (8.0 + 5.0 * x * x) / (x * x * x) * std::pow(s, -2.5);
    }
  }
  return 0.0;
}

/// Closed-form antiderivative of g. The curved kernel's G follows from x = 2 tan(t).
inline double eval_G(const InteractionKernel& k, double x) {
  detail::require_positive_length(x, "eval_G");
  switch (k.family) {
    case KernelFamily::power_law: return detail::power_term_G(1.0, k.a, x);
    case KernelFamily::quasi_homogeneous:
      return detail::power_term_G(k.c1, k.a, x) + detail::power_term_G(k.c2, k.b, x);
    case KernelFamily::curved_hyperbolic: return -(2.0 + x * x) / (x * std::sqrt(4.0 + x * x));
  }
  return 0.0;
}

inline double G_reference(const InteractionKernel& k) { return k.G_ref; }

template <class K>
concept Kernel = requires(const K& k, double x) {
  { eval_f(k, x) } -> std::convertible_to<double>;
  { eval_g(k, x) } -> std::convertible_to<double>;
  { eval_g_prime(k, x) } -> std::convertible_to<double>;
  { eval_G(k, x) } -> std::convertible_to<double>;
};

namespace detail {

template <class F>
double simpson_step(const F& phi, double a, double fa, double b, double fb, double m, double fm,
                    double whole, double eps, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = phi(lm);
  const double frm = phi(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
  if (depth <= 0 || !std::isfinite(delta)) {
    throw NumericError("adaptive Simpson quadrature did not converge");
  }
  return simpson_step(phi, a, fa, m, fm, lm, flm, left, 0.5 * eps, depth - 1) +
         simpson_step(phi, m, fm, b, fb, rm, frm, right, 0.5 * eps, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson integral of phi over [a, b]; tolerance is relative to max(1, |integral|).
template <class F>
double adaptive_simpson(const F& phi, double a, double b, double tol = 1e-12, int max_depth = 60) {
  if (a == b) return 0.0;
  // Coarse pre-split so a smooth-looking first panel cannot fool the error test.
  const int panels = std::max(1, static_cast<int>(std::ceil(std::abs(b - a) * 4.0)));
  const double width = (b - a) / panels;
  double coarse = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    const double hi = (p + 1 == panels) ? b : lo + width;
    coarse += (hi - lo) / 6.0 * (phi(lo) + 4.0 * phi(0.5 * (lo + hi)) + phi(hi));
  }
  const double eps_total = tol * std::max(1.0, std::abs(coarse));
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    const double hi = (p + 1 == panels) ? b : lo + width;
    const double mid = 0.5 * (lo + hi);
    const double flo = phi(lo), fhi = phi(hi), fmid = phi(mid);
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    total += detail::simpson_step(phi, lo, flo, hi, fhi, mid, fmid, whole, eps_total / panels, max_depth);
  }
  return total;
}

/// G by quadrature of g from `ref` (G(ref) = 0), integrating in log x.
template <class K>
double eval_G_quadrature(const K& k, double x, double ref) {
  detail::require_positive_length(x, "eval_G_quadrature");
  detail::require_positive_length(ref, "eval_G_quadrature");
  auto phi = [&](double s) {
    const double t = std::exp(s);
    return eval_g(k, t) * t;
  };
  return adaptive_simpson(phi, std::log(ref), std::log(x));
}

inline double eval_G_quadrature(const InteractionKernel& k, double x) {
  return eval_G_quadrature(k, x, k.G_ref);
}

/// User-supplied kernel: f and g' callables, G by quadrature pinned at G_ref.
struct FunctionKernel {
  std::function<double(double)> f;
  std::function<double(double)> g_prime;
  double G_ref = 1.0;
};

inline double eval_f(const FunctionKernel& k, double x) {
  detail::require_positive_length(x, "eval_f");
  return k.f(x);
}
inline double eval_g(const FunctionKernel& k, double x) { return x * eval_f(k, x); }
inline double eval_g_prime(const FunctionKernel& k, double x) {
  detail::require_positive_length(x, "eval_g_prime");
  return k.g_prime(x);
}
inline double eval_G(const FunctionKernel& k, double x) { return eval_G_quadrature(k, x, k.G_ref); }
inline double G_reference(const FunctionKernel& k) { return k.G_ref; }

struct AdmissibilityVerdict {
  bool admissible = true;
  std::optional<double> first_violation;
  std::string reason;  // "f nonpositive" or "g increasing" when inadmissible
};

/// Samples f > 0 and g' < 0 on a log-spaced grid over [lo, hi].
template <Kernel K>
AdmissibilityVerdict check_admissible(const K& k, double lo, double hi, int samples = 512) {
  if (samples < 2) throw UsageError("check_admissible: need at least 2 samples");
  if (!(lo > 0.0) || !(hi > lo)) throw UsageError("check_admissible: need 0 < lo < hi");
  const double log_lo = std::log(lo);
  const double step = (std::log(hi) - log_lo) / (samples - 1);
  for (int s = 0; s < samples; ++s) {
    const double x = (s + 1 == samples) ? hi : std::exp(log_lo + step * s);
    const double f = eval_f(k, x);
    if (!(f > 0.0)) return {false, x, "f nonpositive"};
    const double gp = eval_g_prime(k, x);
    if (!(gp < 0.0)) return {false, x, "g increasing"};
  }
  return {};
}

inline AdmissibilityVerdict check_admissible(const InteractionKernel& k, int samples = 512) {
  return check_admissible(k, k.domain_lo, k.domain_hi, samples);
}

}  // namespace cocircular
