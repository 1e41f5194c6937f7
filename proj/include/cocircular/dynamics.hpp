#pragma once
/**
 * Equations of motion and fixed-step RK4 integration, used to check that a
 * solved configuration really rotates rigidly.
 *
 * Planar:  q_i'' = sum_j m_j (q_j - q_i) f(|q_j - q_i|)
 * Curved:  p_i'' = sum_j m_j (p_j + (p_i.p_j) p_i) / ((p_i.p_j)^2 - 1)^(3/2) + (p_i'.p_i') p_i
 *          with . the Minkowski product. No projection back onto the sheet;
 *          drift is measured and reported instead.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "configuration.hpp"
#include "curved.hpp"
#include "error.hpp"
#include "kernel.hpp"
#include "variational.hpp"

namespace cocircular {

struct PlanarState {
  std::vector<Vec2> positions;
  std::vector<Vec2> velocities;
  std::vector<double> masses;
};

struct CurvedState {
  std::vector<Vec3> positions;
  std::vector<Vec3> velocities;
  std::vector<double> masses;
};

inline constexpr double collision_distance = 1e-12;

template <Kernel K>
std::vector<Vec2> planar_rhs(const PlanarState& s, const K& kernel) {
  const std::size_t n = s.positions.size();
  std::vector<Vec2> acc(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const Vec2 d = s.positions[j] - s.positions[i];
      const double dist = norm(d);
      if (!(dist > collision_distance)) throw DomainError("planar_rhs: collision");
      acc[i] += (s.masses[j] * eval_f(kernel, dist)) * d;
    }
  }
  return acc;
}

inline std::vector<Vec3> curved_rhs(const CurvedState& s) {
  const std::size_t n = s.positions.size();
  std::vector<Vec3> acc(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3& v = s.velocities[i];
    acc[i] = curved_interaction(s.positions, s.masses, i) + minkowski(v, v) * s.positions[i];
  }
  return acc;
}

inline Vec2 planar_center_of_mass(const PlanarState& s) {
  Vec2 sum;
  double total = 0.0;
  for (std::size_t i = 0; i < s.positions.size(); ++i) {
    sum += s.masses[i] * s.positions[i];
    total += s.masses[i];
  }
  return (1.0 / total) * sum;
}

template <class State>
struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  std::vector<double> com_drift;         // planar: |com(t) - com(0)|
  std::vector<double> constraint_drift;  // curved: max_i |p_i.p_i + 1|
  std::vector<double> tangency_drift;    // curved: max_i |p_i.v_i|
  bool truncated = false;
  double truncation_time = 0.0;
  std::string error;
};

namespace detail {

template <class V>
std::vector<V> axpy(const std::vector<V>& x, double a, const std::vector<V>& y) {
  std::vector<V> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + a * y[i];
  return out;
}

// Classical RK4 step for q'' = acc(q, q').
template <class State, class Accel>
State rk4_step(const State& s, double h, const Accel& acc) {
  auto shifted = [&](double a, const auto& dq, const auto& dv) {
    State t = s;
    t.positions = axpy(s.positions, a, dq);
    t.velocities = axpy(s.velocities, a, dv);
    return t;
  };
  const auto k1q = s.velocities;
  const auto k1v = acc(s);
  const State s2 = shifted(0.5 * h, k1q, k1v);
  const auto k2q = s2.velocities;
  const auto k2v = acc(s2);
  const State s3 = shifted(0.5 * h, k2q, k2v);
  const auto k3q = s3.velocities;
  const auto k3v = acc(s3);
  const State s4 = shifted(h, k3q, k3v);
  const auto k4q = s4.velocities;
  const auto k4v = acc(s4);

  State out = s;
  for (std::size_t i = 0; i < s.positions.size(); ++i) {
    out.positions[i] = s.positions[i] + (h / 6.0) * (k1q[i] + 2.0 * k2q[i] + 2.0 * k3q[i] + k4q[i]);
    out.velocities[i] = s.velocities[i] + (h / 6.0) * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i]);
  }
  return out;
}

inline void record_diagnostics(Trajectory<PlanarState>& traj, const PlanarState& s) {
  const Vec2 com = planar_center_of_mass(s);
  const Vec2 com0 = traj.states.empty() ? com : planar_center_of_mass(traj.states.front());
  traj.com_drift.push_back(norm(com - com0));
}

inline void record_diagnostics(Trajectory<CurvedState>& traj, const CurvedState& s) {
  double constraint = 0.0, tangency = 0.0;
  for (std::size_t i = 0; i < s.positions.size(); ++i) {
    constraint = std::max(constraint, std::abs(minkowski(s.positions[i], s.positions[i]) + 1.0));
    tangency = std::max(tangency, std::abs(minkowski(s.positions[i], s.velocities[i])));
  }
  traj.constraint_drift.push_back(constraint);
  traj.tangency_drift.push_back(tangency);
}

template <class State, class Accel>
Trajectory<State> integrate_impl(const State& initial, const Accel& acc, double t_max, double dt, std::size_t stride) {
  if (!(dt > 0.0)) throw UsageError("integrate: dt must be positive");
  if (!(t_max >= 0.0)) throw UsageError("integrate: t_max must be non-negative");
  if (stride == 0) stride = 1;
  Trajectory<State> traj;
  record_diagnostics(traj, initial);
  traj.times.push_back(0.0);
  traj.states.push_back(initial);
  if (t_max == 0.0) return traj;

  const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil(t_max / dt - 1e-9)));
  const double h = t_max / static_cast<double>(steps);
  State s = initial;
  for (std::size_t k = 1; k <= steps; ++k) {
    try {
      s = rk4_step(s, h, acc);
    } catch (const DomainError& e) {
      traj.truncated = true;
      traj.truncation_time = h * static_cast<double>(k - 1);
      traj.error = e.what();
      return traj;
    }
    if (k % stride == 0 || k == steps) {
      record_diagnostics(traj, s);
      traj.times.push_back(h * static_cast<double>(k));
      traj.states.push_back(s);
    }
  }
  return traj;
}

}  // namespace detail

/// Fixed-step RK4; every `stride`-th state is recorded (the last one always is).
template <Kernel K>
Trajectory<PlanarState> integrate(const PlanarState& initial, const K& kernel, double t_max, double dt,
                                  std::size_t stride = 1) {
  return detail::integrate_impl(initial, [&](const PlanarState& s) { return planar_rhs(s, kernel); }, t_max, dt,
                                stride);
}

inline Trajectory<CurvedState> integrate(const CurvedState& initial, double t_max, double dt, std::size_t stride = 1) {
  return detail::integrate_impl(initial, [](const CurvedState& s) { return curved_rhs(s); }, t_max, dt, stride);
}

/// Bodies of a planar relative equilibrium at t = 0, central mass appended last.
inline PlanarState planar_initial_state(const ProblemSpec& spec, const CircularConfig& c) {
  PlanarState s;
  for (std::size_t i = 0; i < c.size(); ++i) {
    s.positions.push_back(cartesian(c, i));
    s.masses.push_back(c.masses.m[i]);
  }
  if (spec.variant == Variant::central_mass && c.masses.central) {
    s.positions.push_back({0.0, 0.0});
    s.masses.push_back(*c.masses.central);
  }
  const Vec2 com = planar_center_of_mass(s);
  for (const Vec2& q : s.positions) s.velocities.push_back(spec.spin * perp(q - com));
  return s;
}

inline CurvedState curved_initial_state(const CurvedPolygonConfig& c) {
  CurvedState s;
  for (std::size_t i = 0; i < c.size(); ++i) {
    s.positions.push_back(curved_position(c, 0.0, i));
    s.velocities.push_back(curved_velocity(c, 0.0, i));
    s.masses.push_back(c.masses.m[i]);
  }
  return s;
}

struct OrbitCheck {
  double period = 0.0;
  double max_deviation = 0.0;         // from the analytic rigid rotation
  double max_com_drift = 0.0;         // planar
  double max_constraint_drift = 0.0;  // curved |p.p + 1|
  double max_tangency_drift = 0.0;    // curved |p.v|
  double max_z_deviation = 0.0;       // curved |x3 - z|
  bool truncated = false;
  double truncation_time = 0.0;
};

struct OrbitRun {
  OrbitCheck check;
  Trajectory<PlanarState> planar;
  Trajectory<CurvedState> curved;
  bool is_curved = false;
};

/// Integrate the relative-equilibrium initial data for `periods` periods of
/// length 2 pi / spin, with `steps_per_period` RK4 steps per period, and
/// measure the distance to the rigidly rotating orbit.
inline OrbitRun simulate_orbit(const ProblemSpec& spec, const CircularConfig& c, double periods = 1.0,
                               double steps_per_period = 1e4, std::size_t stride = 1) {
  OrbitRun run;
  const double period = 2.0 * std::numbers::pi / spec.spin;
  const double t_max = periods * period;
  const double dt = period / steps_per_period;
  run.check.period = period;

  if (spec.variant == Variant::curved) {
    run.is_curved = true;
    const CurvedPolygonConfig cc = lift(c, spec.spin);
    run.curved = integrate(curved_initial_state(cc), t_max, dt, stride);
    const auto& tr = run.curved;
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
      for (std::size_t i = 0; i < cc.size(); ++i) {
        const Vec3 d = tr.states[k].positions[i] - curved_position(cc, tr.times[k], i);
        run.check.max_deviation = std::max(run.check.max_deviation, std::sqrt(d.x1 * d.x1 + d.x2 * d.x2 + d.x3 * d.x3));
        run.check.max_z_deviation = std::max(run.check.max_z_deviation, std::abs(tr.states[k].positions[i].x3 - cc.z));
      }
      run.check.max_constraint_drift = std::max(run.check.max_constraint_drift, tr.constraint_drift[k]);
      run.check.max_tangency_drift = std::max(run.check.max_tangency_drift, tr.tangency_drift[k]);
    }
    run.check.truncated = tr.truncated;
    run.check.truncation_time = tr.truncation_time;
    return run;
  }

  const PlanarState s0 = planar_initial_state(spec, c);
  const Vec2 com = planar_center_of_mass(s0);
  run.planar = integrate(s0, spec.kernel, t_max, dt, stride);
  const auto& tr = run.planar;
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    for (std::size_t i = 0; i < s0.positions.size(); ++i) {
      const Vec2 expected = rotate(s0.positions[i] - com, spec.spin * tr.times[k]) + com;
      run.check.max_deviation = std::max(run.check.max_deviation, norm(tr.states[k].positions[i] - expected));
    }
    run.check.max_com_drift = std::max(run.check.max_com_drift, tr.com_drift[k]);
  }
  run.check.truncated = tr.truncated;
  run.check.truncation_time = tr.truncation_time;
  return run;
}

/// Max distance to the analytic rigid rotation over `periods` periods.
inline double orbit_residual(const ProblemSpec& spec, const CircularConfig& c, double periods = 1.0,
                             double steps_per_period = 1e4) {
  return simulate_orbit(spec, c, periods, steps_per_period).check.max_deviation;
}

/// CSV: t, x_1, y_1, vx_1, vy_1, ... (17 significant digits).
inline void write_csv(std::ostream& os, const Trajectory<PlanarState>& tr) {
  const std::size_t n = tr.states.empty() ? 0 : tr.states.front().positions.size();
  os << "t";
  for (std::size_t i = 1; i <= n; ++i) os << ",x_" << i << ",y_" << i << ",vx_" << i << ",vy_" << i;
  os << '\n' << std::setprecision(17);
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    os << tr.times[k];
    for (std::size_t i = 0; i < n; ++i) {
      const auto& s = tr.states[k];
      os << ',' << s.positions[i].x << ',' << s.positions[i].y << ',' << s.velocities[i].x << ',' << s.velocities[i].y;
    }
    os << '\n';
  }
}

/// CSV: t, x_1, y_1, z_1, vx_1, vy_1, vz_1, ... (17 significant digits).
inline void write_csv(std::ostream& os, const Trajectory<CurvedState>& tr) {
  const std::size_t n = tr.states.empty() ? 0 : tr.states.front().positions.size();
  os << "t";
  for (std::size_t i = 1; i <= n; ++i) {
    os << ",x_" << i << ",y_" << i << ",z_" << i << ",vx_" << i << ",vy_" << i << ",vz_" << i;
  }
  os << '\n' << std::setprecision(17);
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    os << tr.times[k];
    for (std::size_t i = 0; i < n; ++i) {
      const auto& p = tr.states[k].positions[i];
      const auto& v = tr.states[k].velocities[i];
      os << ',' << p.x1 << ',' << p.x2 << ',' << p.x3 << ',' << v.x1 << ',' << v.x2 << ',' << v.x3;
    }
    os << '\n';
  }
}

}  // namespace cocircular
