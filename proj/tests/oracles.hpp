#pragma once
// Independent reference computations used by the tests.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <vector>

#include <Eigen/Dense>

#include "cocircular/cocircular.hpp"

namespace oracle {

using namespace cocircular;

// Closed-form G written out per family, independent of the library evaluation path.
inline double G_ref(const InteractionKernel& k, double x) {
  auto term = [](double c, double e, double x) {
    return std::abs(e - 2.0) < 1e-15 ? c * std::log(x) : c * std::pow(x, 2.0 - e) / (2.0 - e);
  };
  switch (k.family) {
    case KernelFamily::power_law: return term(1.0, k.a, x);
    case KernelFamily::quasi_homogeneous: return term(k.c1, k.a, x) + term(k.c2, k.b, x);
    case KernelFamily::curved_hyperbolic: return -(2.0 + x * x) / (x * std::sqrt(4.0 + x * x));
  }
  return 0.0;
}

// Potential from Cartesian positions. Variables: (r, alpha_1..alpha_n).
inline double potential_cartesian(const ProblemSpec& spec, const MassVector& masses, const Eigen::VectorXd& x) {
  const auto n = static_cast<std::size_t>(x.size() - 1);
  const double r = x[0];
  std::vector<double> px(n), py(n);
  for (std::size_t i = 0; i < n; ++i) {
    px[i] = r * std::cos(x[static_cast<Eigen::Index>(i + 1)]);
    py[i] = r * std::sin(x[static_cast<Eigen::Index>(i + 1)]);
  }
  double v = 0.0;
  double M = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    M += masses.m[i];
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) v += masses.m[i] * masses.m[j] * G_ref(spec.kernel, std::hypot(px[i] - px[j], py[i] - py[j]));
    }
  }
  v -= M * spec.spin * spec.spin * r * r;
  if (spec.variant == Variant::central_mass) v += 2.0 * *masses.central * M * G_ref(spec.kernel, r);
  return v;
}

inline Eigen::VectorXd pack(const CircularConfig& c) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(c.size() + 1));
  x[0] = c.r;
  for (std::size_t i = 0; i < c.size(); ++i) x[static_cast<Eigen::Index>(i + 1)] = c.alpha[i];
  return x;
}

inline Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x,
                                   double h = 1e-5) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    Eigen::VectorXd xp = x, xm = x, xp2 = x, xm2 = x;
    xp[k] += h;
    xm[k] -= h;
    xp2[k] += 2 * h;
    xm2[k] -= 2 * h;
    g[k] = (8.0 * (f(xp) - f(xm)) - (f(xp2) - f(xm2))) / (12.0 * h);
  }
  return g;
}

inline Eigen::MatrixXd fd_hessian(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x,
                                  double h = 1e-4) {
  const Eigen::Index n = x.size();
  Eigen::MatrixXd H(n, n);
  auto at = [&](Eigen::Index i, double di, Eigen::Index j, double dj) {
    Eigen::VectorXd y = x;
    y[i] += di;
    y[j] += dj;
    return f(y);
  };
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      double v;
      if (i == j) {
        v = (-at(i, 2 * h, i, 0) + 16 * at(i, h, i, 0) - 30 * f(x) + 16 * at(i, -h, i, 0) - at(i, -2 * h, i, 0)) /
            (12 * h * h);
      } else {
        v = (at(i, h, j, h) - at(i, h, j, -h) - at(i, -h, j, h) + at(i, -h, j, -h)) / (4 * h * h);
      }
      H(i, j) = H(j, i) = v;
    }
  }
  return H;
}

// Number of distinct cyclic arrangements of `values`, by brute force over all permutations.
inline std::size_t necklace_count(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  std::set<std::vector<double>> seen;
  do {
    std::vector<double> best = values;
    for (std::size_t s = 1; s < values.size(); ++s) {
      std::vector<double> rot(values.begin() + static_cast<long>(s), values.end());
      rot.insert(rot.end(), values.begin(), values.begin() + static_cast<long>(s));
      best = std::min(best, rot);
    }
    seen.insert(best);
  } while (std::next_permutation(values.begin(), values.end()));
  return seen.size();
}

inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Radius of the equal-mass regular n-gon relative equilibrium: per-body radial balance
// m A^2 r = sum_j m^2 sin(pi j / n) g(2 r sin(pi j / n)) (+ m m_c g(r)).
inline double regular_ngon_radius(const ProblemSpec& spec, std::size_t n, double m, double mc = 0.0) {
  auto f = [&](double r) {
    double s = 0.0;
    for (std::size_t j = 1; j < n; ++j) {
      const double sj = std::sin(std::numbers::pi * static_cast<double>(j) / static_cast<double>(n));
      s += m * sj * eval_g(spec.kernel, 2.0 * r * sj);
    }
    if (mc > 0) s += mc * eval_g(spec.kernel, r);
    return spec.spin * spec.spin * r - s;
  };
  return bisect(f, 1e-3, 1e3);
}

struct RandomCase {
  ProblemSpec spec;
  CircularConfig config;
};

// Random admissible kernel and well-separated configuration.
inline RandomCase random_case(std::mt19937_64& rng, int index) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  RandomCase rc;
  switch (index % 3) {
    case 0: rc.spec.kernel = InteractionKernel::power_law(2.0 + static_cast<double>(index / 3 % 3)); break;
    case 1: rc.spec.kernel = InteractionKernel::quasi_homogeneous(0.2 + U(rng), 1.5 + 2 * U(rng), 0.2 + U(rng), 2.5 + 2 * U(rng)); break;
    default: rc.spec.kernel = InteractionKernel::curved_hyperbolic(); break;
  }
  const std::size_t n = 2 + static_cast<std::size_t>(index % 5);
  rc.spec.spin = 0.3 + U(rng);
  rc.spec.variant = index % 3 == 2 ? Variant::curved : (index % 2 ? Variant::central_mass : Variant::plain);
  for (std::size_t i = 0; i < n; ++i) rc.spec.masses.m.push_back(0.5 + 2 * U(rng));
  if (rc.spec.variant == Variant::central_mass) rc.spec.masses.central = 0.5 + U(rng);
  rc.config.masses = rc.spec.masses;
  rc.config.r = 0.5 + 1.5 * U(rng);
  const double spacing = 2 * std::numbers::pi / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) rc.config.alpha.push_back(spacing * (static_cast<double>(i) + 0.3 * (U(rng) - 0.5)));
  rc.config.alpha[0] = 0.0;
  return rc;
}

inline double max_rel_error(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
}

}  // namespace oracle
