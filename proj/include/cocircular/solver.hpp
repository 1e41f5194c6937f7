#pragma once
/**
 * Stationary points of the reduced potential.
 *
 * The search runs in gauge-fixed coordinates (r, alpha_2, ..., alpha_n) with
 * alpha_1 pinned at 0 exactly, which removes the rotation null direction and
 * turns every stationary point into a strict local maximum. Each iteration
 * takes a Newton ascent step (Hessian shifted when not negative definite),
 * caps it, keeps it inside the ordering wedge with a fraction-to-boundary
 * rule, and backtracks on V.
 *
 * uniqueness_experiment repeats the solve from jittered starts for one mass
 * ordering and clusters the canonical results.
 */

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string_view>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "configuration.hpp"
#include "error.hpp"
#include "kernel.hpp"
#include "variational.hpp"

namespace cocircular {

struct SolveOptions {
  double tol_grad = 1e-10;
  int max_iter = 200;
  int starts = 20;
  std::uint64_t seed = 0;
  double perturb_angle = 0.3;   // radians
  double perturb_radius = 0.2;  // fraction of the initial radius
  double gap_epsilon = default_gap_epsilon;
  double r_min = 1e-6;
  double tol_eig = 1e-8;
  double tol_class = 1e-8;
  double tol_residual = 1e-9;  // per-body residual level that counts as a relative equilibrium
  unsigned threads = 1;
};

enum class SolveStatus { converged, max_iterations, step_failure };

inline std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iterations: return "max_iterations";
    case SolveStatus::step_failure: return "step_failure";
  }
  return "unknown";
}

struct StationaryReport {
  CircularConfig config;  // canonical
  double potential = 0.0;
  double grad_norm = std::numeric_limits<double>::infinity();
  std::vector<double> hessian_spectrum;  // gauge-fixed, ascending
  double hessian_norm = 0.0;
  bool is_local_max = false;
  std::optional<double> feasibility_margin;
  bool feasible = true;
  int iterations = 0;
  bool converged = false;
  SolveStatus status = SolveStatus::max_iterations;
  double residual_max = std::numeric_limits<double>::infinity();
  bool is_relative_equilibrium = false;
  std::vector<double> potential_trace;  // V after each accepted step, starting with the initial value
};

struct LocalMaxVerdict {
  bool is_local_max = false;
  std::vector<double> spectrum;       // gauge-fixed, ascending
  std::vector<double> full_spectrum;  // full Hessian, ascending
  double hessian_norm = 0.0;          // spectral norm of the full Hessian
  std::size_t near_null_count = 0;    // eigenvalues with |lambda| < 1e-9 ||H||
  double null_vector_angle = 0.0;     // radians between the near-null eigenvector and (0,1,...,1)
  bool rotation_null_ok = false;
};

namespace detail {

inline std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

inline double spectral_norm(const HessianMatrix& H) {
  Eigen::SelfAdjointEigenSolver<HessianMatrix> es(H, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

// Largest t in (0, 1] keeping all cyclic gaps >= eps and r >= r_min along x + t*step.
// `step` is in gauge-fixed coordinates.
inline double boundary_fraction(const CircularConfig& c, const Eigen::VectorXd& step, double eps, double r_min) {
  const std::size_t n = c.size();
  double t = std::numeric_limits<double>::infinity();
  if (step(0) < 0.0) t = std::min(t, (c.r - r_min) / -step(0));
  auto dalpha = [&](std::size_t k) { return k == 0 ? 0.0 : step(static_cast<Eigen::Index>(k)); };
  const auto gaps = cyclic_gaps(c);
  for (std::size_t k = 0; k < n; ++k) {
    const double d = (k + 1 < n) ? dalpha(k + 1) - dalpha(k) : -dalpha(n - 1);
    if (d < 0.0) t = std::min(t, (gaps[k] - eps) / -d);
  }
  return t;
}

inline CircularConfig apply_step(const CircularConfig& c, const Eigen::VectorXd& step, double t) {
  CircularConfig out = c;
  out.r = c.r + t * step(0);
  for (std::size_t k = 1; k < c.size(); ++k) out.alpha[k] = c.alpha[k] + t * step(static_cast<Eigen::Index>(k));
  out.alpha[0] = 0.0;
  return out;
}

// Ascent direction from the gauge-fixed gradient and Hessian.
inline Eigen::VectorXd ascent_direction(const HessianMatrix& Hf, const Eigen::VectorXd& gf) {
  const HessianMatrix negH = -Hf;
  Eigen::LLT<HessianMatrix> llt(negH);
  if (llt.info() == Eigen::Success) {
    Eigen::VectorXd p = llt.solve(gf);
    if (p.allFinite() && p.dot(gf) > 0.0) return p;
  }
  Eigen::SelfAdjointEigenSolver<HessianMatrix> es(Hf, Eigen::EigenvaluesOnly);
  const double top = es.eigenvalues().maxCoeff();
  const double scale = std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
  const double shift = std::max(top, 0.0) + 1e-3 * scale;
  const HessianMatrix shifted = negH + shift * HessianMatrix::Identity(Hf.rows(), Hf.cols());
  return Eigen::LLT<HessianMatrix>(shifted).solve(gf);
}

}  // namespace detail

/// Eigen-analysis of the Hessian at `c` without the stationarity precondition.
template <Kernel K>
LocalMaxVerdict analyse_hessian(const BasicProblem<K>& spec, const CircularConfig& c, double tol_eig = 1e-8) {
  LocalMaxVerdict v;
  const HessianMatrix H = hessian(spec, c);
  Eigen::SelfAdjointEigenSolver<HessianMatrix> full(H);
  Eigen::SelfAdjointEigenSolver<HessianMatrix> fixed(gauge_fixed(H), Eigen::EigenvaluesOnly);
  v.full_spectrum = detail::to_std(full.eigenvalues());
  v.spectrum = detail::to_std(fixed.eigenvalues());
  v.hessian_norm = full.eigenvalues().cwiseAbs().maxCoeff();
  v.is_local_max = !v.spectrum.empty() && v.spectrum.back() < -tol_eig * v.hessian_norm;

  Eigen::Index null_idx = 0;
  full.eigenvalues().cwiseAbs().minCoeff(&null_idx);
  for (Eigen::Index k = 0; k < full.eigenvalues().size(); ++k) {
    if (std::abs(full.eigenvalues()(k)) < 1e-9 * v.hessian_norm) ++v.near_null_count;
  }
  const Eigen::VectorXd e = rotation_generator(c.size());
  const Eigen::VectorXd w = full.eigenvectors().col(null_idx);
  const double along = std::abs(w.dot(e));
  const double across = (w - w.dot(e) * e).norm();
  v.null_vector_angle = std::atan2(across, along);
  v.rotation_null_ok = v.near_null_count == 1 && v.null_vector_angle <= 1e-6;
  return v;
}

/// Local-max certificate at a stationary point. Throws UsageError if |grad V| > tol_grad.
template <Kernel K>
LocalMaxVerdict verify_local_max(const BasicProblem<K>& spec, const CircularConfig& c, double tol_eig = 1e-8,
                                 double tol_grad = 1e-8) {
  const double gn = gradient(spec, c).norm();
  if (!(gn <= tol_grad)) {
    throw UsageError("verify_local_max: configuration is not stationary (|grad| = " + std::to_string(gn) + ")");
  }
  return analyse_hessian(spec, c, tol_eig);
}

template <Kernel K>
StationaryReport solve_stationary(const BasicProblem<K>& spec, const CircularConfig& init,
                                  const SolveOptions& opts = {}) {
  validate(spec);
  validate(init, opts.gap_epsilon);
  if (!(opts.tol_grad > 0.0)) throw UsageError("solve_stationary: tol_grad must be positive");

  // Pin alpha_1 = 0 without relabelling bodies.
  CircularConfig x = init;
  const double base = init.alpha[0];
  for (double& a : x.alpha) a -= base;
  x.alpha[0] = 0.0;
  if (spec.variant == Variant::central_mass && !x.masses.central) x.masses.central = spec.masses.central;

  StationaryReport report;
  double V = potential(spec, x);
  report.potential_trace.push_back(V);
  report.status = SolveStatus::max_iterations;

  int iter = 0;
  for (;; ++iter) {
    const Eigen::VectorXd g = gradient(spec, x);
    report.grad_norm = g.norm();
    if (report.grad_norm <= opts.tol_grad) {
      report.status = SolveStatus::converged;
      break;
    }
    if (iter >= opts.max_iter) break;

    const Eigen::VectorXd gf = gauge_fixed(g);
    const HessianMatrix Hf = gauge_fixed(hessian(spec, x));
    Eigen::VectorXd p = detail::ascent_direction(Hf, gf);
    if (!p.allFinite()) {
      report.status = SolveStatus::step_failure;
      break;
    }

    // Cap: at most 50% radial change and 0.5 rad per angle.
    double cap = 1.0;
    if (std::abs(p(0)) > 0.5 * x.r) cap = std::min(cap, 0.5 * x.r / std::abs(p(0)));
    for (Eigen::Index k = 1; k < p.size(); ++k) {
      if (std::abs(p(k)) > 0.5) cap = std::min(cap, 0.5 / std::abs(p(k)));
    }
    p *= cap;

    const double slope = gf.dot(p);
    double t = std::min(1.0, 0.995 * detail::boundary_fraction(x, p, opts.gap_epsilon, opts.r_min));
    bool accepted = false;
    for (int tries = 0; tries < 60 && t > 0.0; ++tries, t *= 0.5) {
      const CircularConfig trial = detail::apply_step(x, p, t);
      if (min_gap(trial) < opts.gap_epsilon || trial.r < opts.r_min) continue;
      const double V_trial = potential(spec, trial);
      if (std::isfinite(V_trial) && V_trial >= V + 1e-4 * t * slope - 1e-13 * std::abs(V)) {
        x = trial;
        V = V_trial;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      report.status = SolveStatus::step_failure;
      break;
    }
    report.potential_trace.push_back(V);
  }

  report.iterations = iter;
  report.converged = report.status == SolveStatus::converged;
  report.config = canonicalize(x);
  report.potential = potential(spec, report.config);

  const LocalMaxVerdict lm = analyse_hessian(spec, report.config, opts.tol_eig);
  report.hessian_spectrum = lm.spectrum;
  report.hessian_norm = lm.hessian_norm;
  report.is_local_max = lm.is_local_max;

  const Residuals res = residuals(spec, report.config);
  report.residual_max = res.max_abs();
  report.is_relative_equilibrium = report.converged && report.residual_max <= opts.tol_residual;

  if (spec.variant == Variant::central_mass) {
    report.feasibility_margin = feasibility_margin(spec, report.config);
    report.feasible = *report.feasibility_margin > 0.0;
  }
  return report;
}

/// Radius of the regular n-gon with every mass replaced by the mean, from the
/// radial stationarity equation, by bisection on [1e-3, 1e3]. Falls back to 1.
template <Kernel K>
double initial_radius(const BasicProblem<K>& spec, const MassVector& masses) {
  const std::size_t n = masses.size();
  const double mean = masses.circle_total() / static_cast<double>(n);
  const double mc = spec.variant == Variant::central_mass ? masses.central.value_or(0.0) : 0.0;
  const double A2 = spec.spin * spec.spin;
  auto F = [&](double r) {
    double sum = 0.0;
    for (std::size_t j = 1; j < n; ++j) {
      const double s = std::sin(std::numbers::pi * static_cast<double>(j) / static_cast<double>(n));
      sum += s * eval_g(spec.kernel, 2.0 * r * s);
    }
    return A2 * r - (mc > 0.0 ? mc * eval_g(spec.kernel, r) : 0.0) - mean * sum;
  };
  double lo = 1e-3, hi = 1e3;
  double flo = F(lo), fhi = F(hi);
  if (!(flo < 0.0 && fhi > 0.0)) return 1.0;
  for (int k = 0; k < 200 && hi - lo > 1e-15 * hi; ++k) {
    const double mid = 0.5 * (lo + hi);
    const double fm = F(mid);
    if (fm < 0.0) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  return 0.5 * (lo + hi);
}

/// Independent stream per (seed, start), so schedules do not affect results.
inline std::mt19937_64 start_rng(std::uint64_t seed, std::size_t start) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(start), static_cast<std::uint32_t>(static_cast<std::uint64_t>(start) >> 32)};
  return std::mt19937_64(seq);
}

inline double uniform_symmetric(std::mt19937_64& rng) {
  return 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0;
}

/// Regular polygon at radius r0 with every angle and the radius jittered.
/// The angular jitter is capped at 0.45 of the spacing so the ordering survives.
inline CircularConfig jittered_start(const MassVector& masses, double r0, const SolveOptions& opts,
                                     std::mt19937_64& rng) {
  const std::size_t n = masses.size();
  const double spacing = two_pi / static_cast<double>(n);
  const double amp = std::min(opts.perturb_angle, 0.45 * spacing);
  CircularConfig c;
  c.masses = masses;
  c.r = r0 * (1.0 + opts.perturb_radius * uniform_symmetric(rng));
  c.alpha.resize(n);
  for (std::size_t k = 0; k < n; ++k) c.alpha[k] = spacing * static_cast<double>(k) + amp * uniform_symmetric(rng);
  const double base = c.alpha[0];
  for (double& a : c.alpha) a -= base;
  c.alpha[0] = 0.0;
  return c;
}

enum class UniquenessVerdict { unique, multiple, none_found };

inline std::string_view to_string(UniquenessVerdict v) {
  switch (v) {
    case UniquenessVerdict::unique: return "unique";
    case UniquenessVerdict::multiple: return "multiple";
    case UniquenessVerdict::none_found: return "none_found";
  }
  return "unknown";
}

struct StartOutcome {
  std::size_t start = 0;
  SolveStatus status = SolveStatus::max_iterations;
  int iterations = 0;
  double grad_norm = 0.0;
  bool is_local_max = false;
  int class_index = -1;  // -1 when the start did not converge
};

struct UniquenessReport {
  OrderingId ordering;
  std::vector<CircularConfig> classes;
  std::vector<std::size_t> class_sizes;
  std::vector<StartOutcome> per_start;
  UniquenessVerdict verdict = UniquenessVerdict::none_found;
  bool single_start_caveat = false;
};

template <Kernel K>
UniquenessReport uniqueness_experiment(const BasicProblem<K>& spec, const OrderingId& ordering,
                                       const SolveOptions& opts = {}) {
  validate(spec);
  if (opts.starts < 1) throw UsageError("uniqueness_experiment: need at least one start");
  const MassVector masses = arrange(spec.masses, ordering);
  const double r0 = initial_radius(spec, masses);
  const auto starts = static_cast<std::size_t>(opts.starts);

  std::vector<StationaryReport> reports(starts);
  auto run = [&](std::size_t s) {
    auto rng = start_rng(opts.seed, s);
    reports[s] = solve_stationary(spec, jittered_start(masses, r0, opts, rng), opts);
  };
  if (opts.threads <= 1 || starts == 1) {
    for (std::size_t s = 0; s < starts; ++s) run(s);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    for (unsigned w = 0; w < std::min<std::size_t>(opts.threads, starts); ++w) {
      workers.emplace_back([&] {
        for (std::size_t s = next++; s < starts; s = next++) run(s);
      });
    }
    for (auto& w : workers) w.join();
  }

  UniquenessReport out;
  out.ordering = ordering;
  out.single_start_caveat = starts == 1;
  for (std::size_t s = 0; s < starts; ++s) {
    const StationaryReport& r = reports[s];
    StartOutcome o{s, r.status, r.iterations, r.grad_norm, r.is_local_max, -1};
    if (r.converged) {
      for (std::size_t k = 0; k < out.classes.size(); ++k) {
        if (config_distance(out.classes[k], r.config) <= opts.tol_class) {
          o.class_index = static_cast<int>(k);
          ++out.class_sizes[k];
          break;
        }
      }
      if (o.class_index < 0) {
        o.class_index = static_cast<int>(out.classes.size());
        out.classes.push_back(r.config);
        out.class_sizes.push_back(1);
      }
    }
    out.per_start.push_back(o);
  }
  if (out.classes.empty()) out.verdict = UniquenessVerdict::none_found;
  else if (out.classes.size() == 1) out.verdict = UniquenessVerdict::unique;
  else out.verdict = UniquenessVerdict::multiple;
  return out;
}

}  // namespace cocircular
