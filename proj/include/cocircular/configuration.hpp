#pragma once
/**
 * Co-circular configurations.
 *
 * Bodies sit at Q_i = r (cos alpha_i, sin alpha_i) with
 * 0 <= alpha_1 < ... < alpha_n < 2 pi. Masses travel with their angles, so
 * `masses.m[i]` always belongs to `alpha[i]`. Equivalence is rotation only;
 * reflections are different classes.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "error.hpp"

namespace cocircular {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Minimum cyclic angular gap (radians) before two bodies count as colliding.
inline constexpr double default_gap_epsilon = 1e-6;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 p, Vec2 q) { return {p.x + q.x, p.y + q.y}; }
  friend Vec2 operator-(Vec2 p, Vec2 q) { return {p.x - q.x, p.y - q.y}; }
  friend Vec2 operator*(double s, Vec2 p) { return {s * p.x, s * p.y}; }
  Vec2& operator+=(Vec2 p) {
    x += p.x;
    y += p.y;
    return *this;
  }
  friend bool operator==(Vec2, Vec2) = default;
};

inline double norm(Vec2 p) { return std::hypot(p.x, p.y); }
inline double dot(Vec2 p, Vec2 q) { return p.x * q.x + p.y * q.y; }

/// p rotated by angle t (the rotation matrix T(t)).
inline Vec2 rotate(Vec2 p, double t) {
  const double c = std::cos(t), s = std::sin(t);
  return {c * p.x - s * p.y, s * p.x + c * p.y};
}

/// p rotated by a quarter turn counter-clockwise.
inline Vec2 perp(Vec2 p) { return {-p.y, p.x}; }

struct MassVector {
  std::vector<double> m;
  std::optional<double> central;

  std::size_t size() const noexcept { return m.size(); }
  double circle_total() const {
    double total = 0.0;
    for (double v : m) total += v;
    return total;
  }
  double total() const { return circle_total() + central.value_or(0.0); }

  friend bool operator==(const MassVector&, const MassVector&) = default;
};

inline void validate(const MassVector& masses) {
  if (masses.size() < 2) throw DomainError("need at least two circle masses");
  for (double v : masses.m) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("masses must be positive and finite");
  }
  if (masses.central && (!(*masses.central > 0.0) || !std::isfinite(*masses.central))) {
    throw DomainError("central mass must be positive and finite");
  }
}

struct CircularConfig {
  double r = 1.0;
  std::vector<double> alpha;
  MassVector masses;

  std::size_t size() const noexcept { return alpha.size(); }

  friend bool operator==(const CircularConfig&, const CircularConfig&) = default;
};

/// Cyclic gaps alpha_{i+1} - alpha_i, closing with 2 pi + alpha_1 - alpha_n.
inline std::vector<double> cyclic_gaps(const CircularConfig& c) {
  const std::size_t n = c.size();
  std::vector<double> gaps(n);
  for (std::size_t i = 0; i + 1 < n; ++i) gaps[i] = c.alpha[i + 1] - c.alpha[i];
  if (n > 0) gaps[n - 1] = two_pi + c.alpha.front() - c.alpha.back();
  return gaps;
}

inline double min_gap(const CircularConfig& c) {
  const auto gaps = cyclic_gaps(c);
  return gaps.empty() ? 0.0 : *std::min_element(gaps.begin(), gaps.end());
}

/// Throws DomainError unless the config is a valid ordered, collision-free circle.
inline void validate(const CircularConfig& c, double gap_epsilon = default_gap_epsilon) {
  validate(c.masses);
  if (c.alpha.size() != c.masses.size()) throw DomainError("angle count does not match mass count");
  if (!(c.r > 0.0) || !std::isfinite(c.r)) throw DomainError("radius must be positive and finite");
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double a = c.alpha[i];
    if (!std::isfinite(a) || a < 0.0 || a >= two_pi) throw DomainError("angles must lie in [0, 2pi)");
    if (i > 0 && !(a > c.alpha[i - 1])) throw DomainError("angles must be strictly increasing");
  }
  if (min_gap(c) < gap_epsilon) throw DomainError("collision: cyclic angular gap below threshold");
}

/// Q_i = r (cos alpha_i, sin alpha_i), zero-based index.
inline Vec2 cartesian(const CircularConfig& c, std::size_t i) {
  if (i >= c.size()) throw std::out_of_range("cartesian: body index out of range");
  return {c.r * std::cos(c.alpha[i]), c.r * std::sin(c.alpha[i])};
}

/// |Q_i - Q_j| = 2 r sin(|alpha_i - alpha_j| / 2).
inline double chord(const CircularConfig& c, std::size_t i, std::size_t j) {
  if (i >= c.size() || j >= c.size()) throw std::out_of_range("chord: body index out of range");
  if (i == j) throw DomainError("chord: i == j");
  return 2.0 * c.r * std::sin(0.5 * std::abs(c.alpha[i] - c.alpha[j]));
}

/// Mass-weighted center; a central mass contributes at the origin.
inline Vec2 center_of_mass(const CircularConfig& c) {
  Vec2 sum;
  for (std::size_t i = 0; i < c.size(); ++i) sum += c.masses.m[i] * cartesian(c, i);
  return (1.0 / c.masses.total()) * sum;
}

/// Rigid rotation by theta. Angles are wrapped into [0, 2 pi) and the bodies
/// shifted cyclically so the list is increasing again.
inline CircularConfig rotate(const CircularConfig& c, double theta) {
  const std::size_t n = c.size();
  std::vector<double> wrapped(n);
  for (std::size_t i = 0; i < n; ++i) {
    double a = std::fmod(c.alpha[i] + theta, two_pi);
    if (a < 0.0) a += two_pi;
    if (a >= two_pi) a -= two_pi;
    wrapped[i] = a;
  }
  const std::size_t start =
      static_cast<std::size_t>(std::min_element(wrapped.begin(), wrapped.end()) - wrapped.begin());
  CircularConfig out;
  out.r = c.r;
  out.masses.central = c.masses.central;
  out.alpha.resize(n);
  out.masses.m.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.alpha[k] = wrapped[(start + k) % n];
    out.masses.m[k] = c.masses.m[(start + k) % n];
  }
  return out;
}

namespace detail {

// -1 / 0 / +1 lexicographic comparison of two cyclic shifts of `c`.
inline int compare_shifts(const std::vector<double>& m, const std::vector<double>& gaps, std::size_t s,
                          std::size_t t, double gap_tol) {
  const std::size_t n = m.size();
  for (std::size_t k = 0; k < n; ++k) {
    const double a = m[(s + k) % n], b = m[(t + k) % n];
    if (a < b) return -1;
    if (a > b) return 1;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double a = gaps[(s + k) % n], b = gaps[(t + k) % n];
    if (std::abs(a - b) <= gap_tol) continue;
    return a < b ? -1 : 1;
  }
  return 0;
}

}  // namespace detail

/// Canonical representative of the rotation class: the start body is the one
/// whose cyclic (mass, gap) sequence is lexicographically smallest (gaps
/// compared to within 1e-9), and it is rotated to angle 0.
inline CircularConfig canonicalize(const CircularConfig& c) {
  const std::size_t n = c.size();
  if (n == 0) return c;
  const auto gaps = cyclic_gaps(c);
  std::size_t best = 0;
  for (std::size_t s = 1; s < n; ++s) {
    if (detail::compare_shifts(c.masses.m, gaps, s, best, 1e-9) < 0) best = s;
  }
  CircularConfig out;
  out.r = c.r;
  out.masses.central = c.masses.central;
  out.alpha.resize(n);
  out.masses.m.resize(n);
  const double base = c.alpha[best];
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = (best + k) % n;
    double a = c.alpha[src] - base;
    if (a < 0.0) a += two_pi;
    out.alpha[k] = a;
    out.masses.m[k] = c.masses.m[src];
  }
  out.alpha[0] = 0.0;
  return out;
}

/// Max of |dr| and |d alpha_i| between two configs with the same body count.
inline double config_distance(const CircularConfig& a, const CircularConfig& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double d = std::abs(a.r - b.r);
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a.alpha[i] - b.alpha[i]));
  return d;
}

inline CircularConfig regular_ngon(std::size_t n, double r, MassVector masses) {
  if (n < 2) throw DomainError("regular_ngon: need n >= 2");
  if (!(r > 0.0)) throw DomainError("regular_ngon: radius must be positive");
  if (masses.size() != n) throw DomainError("regular_ngon: mass count does not match n");
  CircularConfig c;
  c.r = r;
  c.masses = std::move(masses);
  c.alpha.resize(n);
  for (std::size_t i = 0; i < n; ++i) c.alpha[i] = two_pi * static_cast<double>(i) / static_cast<double>(n);
  return c;
}

/// A cyclic arrangement of masses: `perm[k]` is the index (into the original
/// MassVector) of the body placed k-th counter-clockwise. The value sequence
/// is the smallest of its rotations.
struct OrderingId {
  std::vector<std::size_t> perm;

  friend bool operator==(const OrderingId&, const OrderingId&) = default;
};

inline std::vector<double> ordered_values(const MassVector& masses, const OrderingId& ordering) {
  std::vector<double> values;
  values.reserve(ordering.perm.size());
  for (std::size_t idx : ordering.perm) values.push_back(masses.m.at(idx));
  return values;
}

/// Index of the lexicographically smallest rotation (first one on ties).
inline std::size_t min_rotation(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::size_t best = 0;
  for (std::size_t s = 1; s < n; ++s) {
    for (std::size_t k = 0; k < n; ++k) {
      const double a = values[(s + k) % n], b = values[(best + k) % n];
      if (a < b) {
        best = s;
        break;
      }
      if (a > b) break;
    }
  }
  return best;
}

/// All necklaces (rotation classes, reflections distinct) of the mass values.
/// Cost is (n-1)! permutations, so intended for n <= 10 or so.
inline std::vector<OrderingId> enumerate_orderings(const MassVector& masses) {
  const std::size_t n = masses.size();
  if (n < 2) throw DomainError("enumerate_orderings: need n >= 2");
  std::vector<std::size_t> tail(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) tail[k] = k + 1;

  std::set<std::vector<double>> seen;
  std::vector<OrderingId> out;
  std::vector<std::size_t> perm(n);
  std::vector<double> values(n);
  do {
    perm[0] = 0;
    std::copy(tail.begin(), tail.end(), perm.begin() + 1);
    for (std::size_t k = 0; k < n; ++k) values[k] = masses.m[perm[k]];
    const std::size_t s = min_rotation(values);
    std::vector<double> key(n);
    OrderingId id;
    id.perm.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      key[k] = values[(s + k) % n];
      id.perm[k] = perm[(s + k) % n];
    }
    if (seen.insert(key).second) out.push_back(std::move(id));
  } while (std::next_permutation(tail.begin(), tail.end()));
  return out;
}

/// Masses rearranged so body k carries masses.m[ordering.perm[k]].
inline MassVector arrange(const MassVector& masses, const OrderingId& ordering) {
  MassVector out;
  out.central = masses.central;
  out.m = ordered_values(masses, ordering);
  return out;
}

}  // namespace cocircular
