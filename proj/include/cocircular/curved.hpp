#pragma once
/**
 * Hyperboloid geometry (curvature -1) and the reduction of polygonal curved
 * relative equilibria to the planar problem with kernel
 *   h(x) = 8 x^-3 (4 + x^2)^(-3/2).
 *
 * Points live on the upper sheet x1^2 + x2^2 - x3^2 = -1, x3 > 0.
 * A polygonal relative equilibrium is p_i(t) = (T(Bt) P_i, z) with
 * P_i = rho (cos gamma_i, sin gamma_i) and z = sqrt(1 + rho^2).
 */

#include <cmath>
#include <cstddef>
#include <vector>

#include "configuration.hpp"
#include "error.hpp"
#include "kernel.hpp"
#include "variational.hpp"

namespace cocircular {

struct Vec3 {
  double x1 = 0.0;
  double x2 = 0.0;
  double x3 = 0.0;

  friend Vec3 operator+(Vec3 p, Vec3 q) { return {p.x1 + q.x1, p.x2 + q.x2, p.x3 + q.x3}; }
  friend Vec3 operator-(Vec3 p, Vec3 q) { return {p.x1 - q.x1, p.x2 - q.x2, p.x3 - q.x3}; }
  friend Vec3 operator*(double s, Vec3 p) { return {s * p.x1, s * p.x2, s * p.x3}; }
  Vec3& operator+=(Vec3 p) {
    x1 += p.x1;
    x2 += p.x2;
    x3 += p.x3;
    return *this;
  }
  friend bool operator==(Vec3, Vec3) = default;
};

using HyperboloidPoint = Vec3;

/// x1 y1 + x2 y2 - x3 y3.
inline double minkowski(const Vec3& p, const Vec3& q) { return p.x1 * q.x1 + p.x2 * q.x2 - p.x3 * q.x3; }

/// |p (.) q + 1| below this counts as a coincidence.
inline constexpr double curved_singularity_guard = 1e-14;

inline HyperboloidPoint hyperboloid_point(Vec2 planar) {
  return {planar.x, planar.y, std::sqrt(1.0 + dot(planar, planar))};
}

struct CurvedPolygonConfig {
  double rho = 1.0;
  std::vector<double> gamma;
  double z = std::sqrt(2.0);
  double spin = 1.0;  // B
  MassVector masses;

  std::size_t size() const noexcept { return gamma.size(); }
};

/// The planar circle (rho, gamma, masses) underlying a curved polygon.
inline CircularConfig planar_shadow(const CurvedPolygonConfig& c) {
  CircularConfig out;
  out.r = c.rho;
  out.alpha = c.gamma;
  out.masses = c.masses;
  return out;
}

inline void validate(const CurvedPolygonConfig& c) {
  validate(planar_shadow(c));
  if (!(c.spin > 0.0)) throw DomainError("curved config: spin B must be positive");
  if (!(c.z > 0.0)) throw DomainError("curved config: z must lie on the upper sheet");
  const double z2 = 1.0 + c.rho * c.rho;
  if (std::abs(c.rho * c.rho - c.z * c.z + 1.0) > 1e-12 * z2) {
    throw DomainError("curved config: rho^2 - z^2 != -1");
  }
}

/// Lift onto the upper sheet: z = sqrt(1 + rho^2).
inline CurvedPolygonConfig lift(const CircularConfig& c, double spin) {
  if (!(c.r > 0.0)) throw DomainError("lift: rho must be positive");
  CurvedPolygonConfig out;
  out.rho = c.r;
  out.gamma = c.alpha;
  out.masses = c.masses;
  out.z = std::sqrt(1.0 + c.r * c.r);
  out.spin = spin;
  return out;
}

struct ReducedProblem {
  ProblemSpec spec;
  CircularConfig config;
};

/// Planar problem equivalent to the curved polygon: kernel h, spin B, radius rho.
inline ReducedProblem reduced_problem(const CurvedPolygonConfig& c) {
  validate(c);
  ReducedProblem out;
  out.spec.kernel = InteractionKernel::curved_hyperbolic();
  out.spec.masses = c.masses;
  out.spec.spin = c.spin;
  out.spec.variant = Variant::curved;
  out.config = planar_shadow(c);
  return out;
}

/// p_i(t) = (T(Bt) P_i, z).
inline HyperboloidPoint curved_position(const CurvedPolygonConfig& c, double t, std::size_t i) {
  const Vec2 P = rotate(Vec2{c.rho * std::cos(c.gamma.at(i)), c.rho * std::sin(c.gamma.at(i))}, c.spin * t);
  return {P.x, P.y, c.z};
}

/// Rigid-rotation velocity (B J T(Bt) P_i, 0).
inline Vec3 curved_velocity(const CurvedPolygonConfig& c, double t, std::size_t i) {
  const HyperboloidPoint p = curved_position(c, t, i);
  const Vec2 v = c.spin * perp(Vec2{p.x1, p.x2});
  return {v.x, v.y, 0.0};
}

/// Interaction part of the curved equations of motion for body i:
///   sum_j m_j (p_j + (p_i.p_j) p_i) / ((p_i.p_j)^2 - 1)^(3/2)
inline Vec3 curved_interaction(const std::vector<HyperboloidPoint>& p, const std::vector<double>& masses,
                               std::size_t i) {
  Vec3 acc;
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (j == i) continue;
    const double pq = minkowski(p[i], p[j]);
    if (std::abs(pq + 1.0) < curved_singularity_guard) {
      throw DomainError("curved interaction: coincident points");
    }
    const double denom = std::pow(pq * pq - 1.0, 1.5);
    acc += (masses[j] / denom) * (p[j] + pq * p[i]);
  }
  return acc;
}

/// Right-hand side of the curved equations at p_i(t) with rigid-rotation velocities.
inline Vec3 curved_acceleration(const CurvedPolygonConfig& c, double t, std::size_t i) {
  validate(c);
  if (i >= c.size()) throw std::out_of_range("curved_acceleration: body index out of range");
  std::vector<HyperboloidPoint> p(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) p[k] = curved_position(c, t, k);
  const Vec3 v = curved_velocity(c, t, i);
  return curved_interaction(p, c.masses.m, i) + minkowski(v, v) * p[i];
}

/// Acceleration of the rigidly rotating orbit: (-B^2 T(Bt) P_i, 0).
inline Vec3 rigid_acceleration(const CurvedPolygonConfig& c, double t, std::size_t i) {
  const HyperboloidPoint p = curved_position(c, t, i);
  const double B2 = c.spin * c.spin;
  return {-B2 * p.x1, -B2 * p.x2, 0.0};
}

/// Equation-of-motion residual in the co-rotating frame of body i:
/// outward and counter-clockwise components of the first two entries, and the third entry.
struct BodyFrameResidual {
  double outward = 0.0;
  double tangential = 0.0;
  double vertical = 0.0;
};

inline BodyFrameResidual direct_residual(const CurvedPolygonConfig& c, double t, std::size_t i) {
  const Vec3 e = curved_acceleration(c, t, i) - rigid_acceleration(c, t, i);
  const HyperboloidPoint p = curved_position(c, t, i);
  const Vec2 u = (1.0 / c.rho) * Vec2{p.x1, p.x2};
  const Vec2 e12{e.x1, e.x2};
  return {dot(e12, u), dot(e12, perp(u)), e.x3};
}

/// The same residual predicted from the reduced planar residuals:
///   outward = z^2 radial_i / m_i,  tangential = -tangential_i / (m_i rho),  vertical = z rho radial_i / m_i.
inline BodyFrameResidual predicted_direct_residual(const CurvedPolygonConfig& c, const Residuals& reduced,
                                                   std::size_t i) {
  const double m = c.masses.m.at(i);
  const double radial = reduced.radial.at(i) / m;
  return {c.z * c.z * radial, -reduced.tangential.at(i) / (m * c.rho), c.z * c.rho * radial};
}

}  // namespace cocircular
