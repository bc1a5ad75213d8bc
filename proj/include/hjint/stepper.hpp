// SPDX-License-Identifier: MIT
//
// Poisson one-step maps from generating series, and trajectory drivers.
//
// A step solves the implicit system  src_map(u, grad_u S(h, u)) = state  for
// u by damped Newton iteration with the exact Jacobian assembled from the
// series' second derivatives, then emits  tgt_map(u, grad_u S(h, u)).  Both
// maps come from one Lagrangian bisection, so the step is Poisson to solver
// tolerance at every truncation order.  Charts whose identity bisection
// generates a coordinate permutation sigma get the permutation inverse
// applied before the generating step, making h -> 0 the identity.

#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hjint/chart.hpp"
#include "hjint/error.hpp"
#include "hjint/jet.hpp"
#include "hjint/linalg.hpp"
#include "hjint/series.hpp"
#include "hjint/systems.hpp"
#include "hjint/trajectory.hpp"

namespace hjint {

struct IntegratorConfig {
  int order_k = 2;
  double step_h = 0.01;
  double newton_tol = 1e-12;
  int newton_max_iter = 50;
  int p_degree = -1;  // -1 resolves to order_k + 2
  bool recenter_every_step = true;
  // Solve the target map and emit the source map instead.  The resulting
  // map integrates the time-reversed flow and inverts the forward step up
  // to series truncation (exactly, when the truncated series does not
  // depend on the expansion center).
  bool reverse_orientation = false;

  int resolved_p_degree() const {
    return p_degree < 0 ? default_p_degree(order_k) : p_degree;
  }
  void validate() const {
    if (order_k < 1) throw ConfigError("order_k must be >= 1");
    if (!(step_h >= 0.0) || !std::isfinite(step_h))
      throw ConfigError("step_h must be a nonnegative real");
    if (!(newton_tol > 0.0)) throw ConfigError("newton_tol must be positive");
    if (newton_max_iter < 1)
      throw ConfigError("newton_max_iter must be >= 1");
    if (resolved_p_degree() < order_k + 2)
      throw ConfigError("p_degree must be >= order_k + 2");
  }
};

struct StepResult {
  std::vector<double> coords;
  int newton_iters = 0;
  double newton_residual = 0.0;
};

namespace detail {

inline double vec_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Condition threshold above which the implicit system is treated as leaving
// the chart's bisection region.
inline constexpr double kJacobianConditionLimit = 1e12;

struct NewtonOutcome {
  std::vector<double> du;
  std::vector<double> w;  // grad_u S at (t, du)
  int iters = 0;
  double residual = 0.0;
};

// Damped Newton solve of  solve_map(center + du, grad_u S(t, du)) = target.
// `grads` and `hess` are the cached first and second u-partials of the
// series (same jet layout as the series itself).
inline NewtonOutcome newton_solve(const GroupoidChart& chart,
                                  const GeneratingSeries& series,
                                  const std::vector<Jet>& grads,
                                  const std::vector<std::vector<Jet>>& hess,
                                  const ChartMap& solve_map, double t,
                                  const std::vector<double>& target,
                                  double tol, int max_iter,
                                  std::vector<double> du) {
  const int m = chart.dim_u;
  std::vector<double> offs(m + 1, 0.0);
  offs[0] = t;

  auto gradient_at = [&](const std::vector<double>& duv) {
    for (int i = 0; i < m; ++i) offs[1 + i] = duv[i];
    std::vector<double> w(m);
    for (int i = 0; i < m; ++i) w[i] = grads[i].eval(offs);
    return w;
  };
  auto residual_at = [&](const std::vector<double>& duv,
                         std::vector<double>* w_out) {
    std::vector<double> w = gradient_at(duv);
    std::vector<double> u(m);
    for (int i = 0; i < m; ++i) u[i] = series.center[i] + duv[i];
    std::vector<double> F = solve_map.real(u, w);
    for (int i = 0; i < m; ++i) F[i] -= target[i];
    if (w_out) *w_out = std::move(w);
    return F;
  };

  std::vector<double> w;
  std::vector<double> F = residual_at(du, &w);
  int it = 0;
  while (vec_norm(F) > tol && it < max_iter) {
    ++it;
    // Real Hessian of S at the current iterate.
    for (int i = 0; i < m; ++i) offs[1 + i] = du[i];
    std::vector<double> wv(m);
    for (int i = 0; i < m; ++i) wv[i] = grads[i].eval(offs);
    Matrix Hs(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) Hs(i, j) = hess[i][j].eval(offs);

    // Jacobian of F(du) through degree-1 jets: u_i are seeded as variables,
    // w_i as their value plus the Hessian row as linear part, so the chain
    // rule d src/d u + d src/d w * Hess comes out of one chart evaluation.
    std::vector<Jet> useed, wseed;
    useed.reserve(m);
    wseed.reserve(m);
    for (int i = 0; i < m; ++i)
      useed.push_back(Jet::variable(i, series.center[i] + du[i], m, 1));
    std::vector<int> e(m, 0);
    for (int i = 0; i < m; ++i) {
      Jet jw = Jet::constant(wv[i], m, 1);
      for (int j = 0; j < m; ++j) {
        if (Hs(i, j) != 0.0) {
          e[j] = 1;
          jw.set_coeff(e, Hs(i, j));
          e[j] = 0;
        }
      }
      wseed.push_back(std::move(jw));
    }
    std::vector<Jet> Fj = solve_map.jet(useed, wseed);
    Matrix J(m, m);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        e[j] = 1;
        J(i, j) = Fj[i].coeff(e);
        e[j] = 0;
      }
    }

    const double cond = condition_estimate(J);
    if (!(cond <= kJacobianConditionLimit))
      throw SingularJacobian(
          "newton jacobian condition estimate " + std::to_string(cond) +
              " exceeds " + std::to_string(kJacobianConditionLimit),
          cond);
    LuFactorization lu(J);
    std::vector<double> rhs(m);
    for (int i = 0; i < m; ++i) rhs[i] = -F[i];
    std::vector<double> delta = lu.solve(rhs);

    // Backtracking: halve the update (at most five times) while the
    // residual norm increases.
    const double base = vec_norm(F);
    double lam = 1.0;
    std::vector<double> trial(m);
    for (int tries = 0; tries < 6; ++tries) {
      for (int i = 0; i < m; ++i) trial[i] = du[i] + lam * delta[i];
      if (vec_norm(residual_at(trial, nullptr)) <= base) break;
      lam *= 0.5;
    }
    for (int i = 0; i < m; ++i) du[i] += lam * delta[i];
    F = residual_at(du, &w);
  }
  const double res = vec_norm(F);
  if (res > tol)
    throw NewtonNoConvergence("newton solve stalled at residual " +
                                  std::to_string(res) + " after " +
                                  std::to_string(it) + " iterations",
                              it, res);
  return NewtonOutcome{std::move(du), std::move(w), it, res};
}

}  // namespace detail

// One-step integrator bound to a chart, a Hamiltonian, and a config.
// Generates (and optionally reuses) the series, Newton-solves the implicit
// system, and applies the chart's permutation correction.
class Stepper {
 public:
  Stepper(GroupoidChart chart, ScalarField hamiltonian, IntegratorConfig cfg)
      : chart_(std::move(chart)),
        hamiltonian_(std::move(hamiltonian)),
        cfg_(cfg) {
    cfg_.validate();
  }

  const GroupoidChart& chart() const { return chart_; }
  const IntegratorConfig& config() const { return cfg_; }
  const GeneratingSeries& series() const {
    if (!series_) throw Error("stepper: no series generated yet");
    return *series_;
  }

  // The raw generating-function map: solve src = state, emit tgt (swapped
  // when reverse_orientation is set).  No permutation handling; at h = 0
  // this returns sigma(state) rather than state for permutation charts.
  StepResult generating_step(const std::vector<double>& state) {
    if (static_cast<int>(state.size()) != chart_.dim_state)
      throw ConfigError("step: state size does not match chart");
    // Forward, the Newton solution lies within O(h) of the solve target;
    // reversed, the tgt-side solve puts it near sigma^{-1}(target) instead.
    // Anchor the expansion center and the initial guess there so the solve
    // stays inside the series' region of validity on permutation charts.
    const std::vector<double> anchor =
        cfg_.reverse_orientation ? chart_.apply_sigma_inverse(state) : state;
    ensure_series(anchor);
    const int m = chart_.dim_u;
    std::vector<double> du0(m, 0.0);
    if (!cfg_.recenter_every_step) {
      const std::vector<double> natural = chart_.center_rule(anchor);
      for (int i = 0; i < m; ++i) du0[i] = natural[i] - series_->center[i];
    }
    const ChartMap& solve_map =
        cfg_.reverse_orientation ? chart_.tgt_map : chart_.src_map;
    const ChartMap& emit_map =
        cfg_.reverse_orientation ? chart_.src_map : chart_.tgt_map;
    detail::NewtonOutcome nr = detail::newton_solve(
        chart_, *series_, grads_, hess_, solve_map, cfg_.step_h, state,
        cfg_.newton_tol, cfg_.newton_max_iter, std::move(du0));
    std::vector<double> u(m);
    for (int i = 0; i < m; ++i) u[i] = series_->center[i] + nr.du[i];
    return StepResult{emit_map.real(u, nr.w), nr.iters, nr.residual};
  }

  // The integrator map: h -> 0 gives the identity on every chart.  Forward,
  // the permutation inverse is applied before the generating step; reversed,
  // the permutation is applied after.  The two orientations invert each
  // other up to the series truncation error (exactly, when the truncated
  // series does not depend on the expansion center).
  StepResult step_detailed(const std::vector<double>& state) {
    if (chart_.sigma_is_identity()) return generating_step(state);
    if (cfg_.reverse_orientation) {
      StepResult r = generating_step(state);
      r.coords = chart_.apply_sigma(r.coords);
      return r;
    }
    return generating_step(chart_.apply_sigma_inverse(state));
  }

  std::vector<double> step(const std::vector<double>& state) {
    return step_detailed(state).coords;
  }

 private:
  void ensure_series(const std::vector<double>& state) {
    if (series_ && !cfg_.recenter_every_step) return;
    std::vector<double> center = chart_.center_rule(state);
    if (series_ && series_->center == center) return;
    series_ = generate_series(chart_, hamiltonian_, cfg_.order_k,
                              std::move(center), cfg_.resolved_p_degree());
    const int m = chart_.dim_u;
    grads_.clear();
    hess_.clear();
    for (int i = 0; i < m; ++i)
      grads_.push_back(series_->series.partial(1 + i));
    for (int i = 0; i < m; ++i) {
      hess_.emplace_back();
      for (int j = 0; j < m; ++j)
        hess_.back().push_back(grads_[i].partial(1 + j));
    }
  }

  GroupoidChart chart_;
  ScalarField hamiltonian_;
  IntegratorConfig cfg_;
  std::optional<GeneratingSeries> series_;
  std::vector<Jet> grads_;
  std::vector<std::vector<Jet>> hess_;
};

// Convenience single-step entry point.
inline StepResult step(const GroupoidChart& chart,
                       const HamiltonianSystem& system,
                       const IntegratorConfig& cfg,
                       const std::vector<double>& state) {
  Stepper stepper(chart, system.hamiltonian, cfg);
  return stepper.step_detailed(state);
}

// Raw generating step driven by a caller-supplied series that is kept fixed
// (no re-generation, any center): solve src = state, emit tgt.  On
// permutation charts this map tends to sigma, not the identity, as h -> 0.
inline StepResult series_generating_step(const GroupoidChart& chart,
                                         const GeneratingSeries& series,
                                         double h,
                                         const std::vector<double>& state,
                                         double newton_tol = 1e-12,
                                         int newton_max_iter = 50) {
  if (static_cast<int>(state.size()) != chart.dim_state)
    throw ConfigError("series step: state size does not match chart");
  if (static_cast<int>(series.center.size()) != chart.dim_u)
    throw ConfigError("series step: series center does not match chart");
  const int m = chart.dim_u;
  std::vector<Jet> grads;
  grads.reserve(m);
  for (int i = 0; i < m; ++i) grads.push_back(series.series.partial(1 + i));
  std::vector<std::vector<Jet>> hess;
  for (int i = 0; i < m; ++i) {
    hess.emplace_back();
    for (int j = 0; j < m; ++j) hess.back().push_back(grads[i].partial(1 + j));
  }
  const std::vector<double> natural = chart.center_rule(state);
  std::vector<double> du0(m);
  for (int i = 0; i < m; ++i) du0[i] = natural[i] - series.center[i];
  detail::NewtonOutcome nr =
      detail::newton_solve(chart, series, grads, hess, chart.src_map, h,
                           state, newton_tol, newton_max_iter,
                           std::move(du0));
  std::vector<double> u(m);
  for (int i = 0; i < m; ++i) u[i] = series.center[i] + nr.du[i];
  return StepResult{chart.tgt_map.real(u, nr.w), nr.iters, nr.residual};
}

// Integrator step driven by a caller-supplied fixed series: the chart's
// permutation inverse is applied first, so h -> 0 gives the identity.
inline StepResult series_step(const GroupoidChart& chart,
                              const GeneratingSeries& series, double h,
                              const std::vector<double>& state,
                              double newton_tol = 1e-12,
                              int newton_max_iter = 50) {
  return series_generating_step(chart, series, h,
                                chart.apply_sigma_inverse(state), newton_tol,
                                newton_max_iter);
}

// Fixed-step trajectory with energy/Casimir/Newton diagnostics recorded at
// every sample.  N = round(T / step_h) steps; T = 0 yields the single
// initial sample.
inline TrajectoryRecord integrate(const GroupoidChart& chart,
                                  const HamiltonianSystem& system,
                                  const IntegratorConfig& cfg,
                                  const std::vector<double>& state0,
                                  double t_final) {
  cfg.validate();
  if (t_final < 0.0) throw ConfigError("integrate: t_final must be >= 0");
  long n_steps = 0;
  if (t_final > 0.0) {
    if (!(cfg.step_h > 0.0))
      throw ConfigError("integrate: step_h must be positive");
    n_steps = std::lround(t_final / cfg.step_h);
  }

  TrajectoryRecord rec;
  auto record = [&](double t, const std::vector<double>& st, int iters) {
    rec.times.push_back(t);
    rec.energy.push_back(system.hamiltonian.real(st));
    std::vector<double> cas;
    cas.reserve(system.casimirs.size());
    for (const auto& c : system.casimirs) cas.push_back(c.real(st));
    rec.casimirs.push_back(std::move(cas));
    rec.newton_iters.push_back(iters);
    rec.states.push_back(PoissonState{system.name, st});
  };

  Stepper stepper(chart, system.hamiltonian, cfg);
  std::vector<double> st = state0;
  record(0.0, st, 0);
  for (long i = 0; i < n_steps; ++i) {
    try {
      StepResult r = stepper.step_detailed(st);
      st = std::move(r.coords);
      record(static_cast<double>(i + 1) * cfg.step_h, st, r.newton_iters);
    } catch (const Error& e) {
      throw IntegrationError("integration failed at step " +
                                 std::to_string(i) + ": " + e.what(),
                             i);
    }
  }
  return rec;
}

// Property check: a critical point of S(t, .) induces a fixed point of the
// generating step map.  Returns true vacuously when u_candidate is not a
// critical point (gradient norm > 1e-10); otherwise runs the step at the
// induced state and compares.
inline bool fixed_point_check(const GroupoidChart& chart,
                              const GeneratingSeries& series, double t,
                              const std::vector<double>& u_candidate,
                              double newton_tol = 1e-12,
                              int newton_max_iter = 50) {
  const int m = chart.dim_u;
  if (static_cast<int>(u_candidate.size()) != m)
    throw ConfigError("fixed_point_check: candidate size mismatch");
  std::vector<double> offset(m);
  for (int i = 0; i < m; ++i) offset[i] = u_candidate[i] - series.center[i];
  std::vector<double> grad = series_gradient_u(series, t, offset);
  if (detail::vec_norm(grad) > 1e-10) return true;

  const std::vector<double> state = chart.src_map.real(u_candidate, grad);
  std::vector<Jet> grads;
  std::vector<std::vector<Jet>> hess;
  for (int i = 0; i < m; ++i)
    grads.push_back(series.series.partial(1 + i));
  for (int i = 0; i < m; ++i) {
    hess.emplace_back();
    for (int j = 0; j < m; ++j)
      hess.back().push_back(grads[i].partial(1 + j));
  }
  detail::NewtonOutcome nr =
      detail::newton_solve(chart, series, grads, hess, chart.src_map, t,
                           state, newton_tol, newton_max_iter, offset);
  std::vector<double> u(m);
  for (int i = 0; i < m; ++i) u[i] = series.center[i] + nr.du[i];
  const std::vector<double> out = chart.tgt_map.real(u, nr.w);
  double diff = 0.0;
  for (int i = 0; i < m; ++i)
    diff = std::max(diff, std::abs(out[i] - state[i]));
  return diff <= 1e-8;
}

}  // namespace hjint
