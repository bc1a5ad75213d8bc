// SPDX-License-Identifier: MIT
//
// Casimir-modified Hamiltonians and explicit splitting steps for the free
// rigid body.
//
// Adding a multiple of a Casimir to the Hamiltonian leaves the dynamics
// unchanged (the Casimir's bracket with everything vanishes) but reshapes
// the Hamilton-Jacobi equation seen by the series generator.  For so(3)*
// the choice H' = H - C/(2 I1) with C = |Pi|^2 cancels the Pi_1 term:
//
//   H' = c1 Pi_2^2 + c2 Pi_3^2,  c1 = (I1-I2)/(2 I1 I2),
//                                c2 = (I1-I3)/(2 I1 I3).
//
// For the symmetric top (I1 = I2) only the Pi_3^2 term survives, the
// Hamilton-Jacobi equation on the Euler-angle chart terminates at t^1, and
// the closed-form series below generates the exact flow.  For the
// asymmetric body, each quadratic term alone generates a rotation about its
// own axis, giving explicit Lie-Trotter and Strang compositions.

#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "hjint/chart.hpp"
#include "hjint/error.hpp"
#include "hjint/jet.hpp"
#include "hjint/series.hpp"
#include "hjint/stepper.hpp"
#include "hjint/systems.hpp"
#include "hjint/trajectory.hpp"

namespace hjint {

// A Hamiltonian shifted by a constant multiple of one of the system's
// declared Casimirs.  The shifted function is dynamically equivalent to the
// original; it exists to simplify series generation.
struct CasimirModification {
  HamiltonianSystem base_hamiltonian;
  int casimir_index = 0;
  double lambda = 0.0;
  ScalarField modified;  // H + lambda * C, evaluable on reals and jets
};

inline CasimirModification make_casimir_modification(
    const HamiltonianSystem& system, int casimir_index, double lambda) {
  if (casimir_index < 0 ||
      casimir_index >= static_cast<int>(system.casimirs.size()))
    throw ConfigError("casimir modification: index " +
                      std::to_string(casimir_index) +
                      " out of range for system '" + system.name + "'");
  CasimirModification mod;
  mod.base_hamiltonian = system;
  mod.casimir_index = casimir_index;
  mod.lambda = lambda;
  const ScalarField h = system.hamiltonian;
  const ScalarField c = system.casimirs[casimir_index];
  mod.modified.real = [h, c, lambda](const std::vector<double>& st) {
    return h.real(st) + lambda * c.real(st);
  };
  mod.modified.jet = [h, c, lambda](const std::vector<Jet>& st) {
    return h.jet(st) + lambda * c.jet(st);
  };
  return mod;
}

// Same system, same reference dynamics, but series generation sees
// H + lambda * C.  Name, parameters, Casimirs, and defaults are inherited
// unchanged because the trajectory they describe is identical.
inline HamiltonianSystem apply_casimir_modification(
    const HamiltonianSystem& system, int casimir_index, double lambda) {
  CasimirModification mod =
      make_casimir_modification(system, casimir_index, lambda);
  HamiltonianSystem out = system;
  out.hamiltonian = std::move(mod.modified);
  return out;
}

// Exact generating series on the Euler-angle chart for H = coefficient *
// Pi_3^2.  The chart's target map sends its third component to p_phi
// independently of the angles, so H composed with the target map is a
// function of the generating variables alone and the Hamilton-Jacobi
// recursion terminates after one level:
//
//   S(t, p) = s0(p) - coefficient * p_phi^2 * t,
//
// with residual identically zero for every t (theta stays pinned at pi/2
// along the graph, so no chart singularity is approached).
inline GeneratingSeries quadratic_axis3_exact_series(double coefficient) {
  GroupoidChart chart = make_chart("so3_euler");
  const int n = 1 + chart.dim_u;  // variable 0 is t
  const int cap = 3;              // monomials used: u_i and t*u_0^2
  std::vector<Jet> u;
  u.reserve(chart.dim_u);
  for (int i = 0; i < chart.dim_u; ++i)
    u.push_back(Jet::variable(1 + i, 0.0, n, cap));
  const Jet t = Jet::variable(0, 0.0, n, cap);
  Jet S = chart.s0(u) - (t * (u[0] * u[0])) * coefficient;
  return GeneratingSeries{chart.name, 1, cap,
                          std::vector<double>(chart.dim_u, 0.0),
                          std::move(S)};
}

// Exact generating series for the symmetric top I1 = I2 = inertia,
// I3 = inertia_axis.  With the Casimir shift H' = H - C/(2 I1),
//
//   H' = ((inertia - inertia_axis)/(2 inertia inertia_axis)) Pi_3^2,
//
// and the induced step map (composed with the chart's permutation inverse)
// is the exact flow: Pi_3 frozen, (Pi_1, Pi_2) rotating by the angle
// Pi_3 h (inertia - inertia_axis)/(inertia * inertia_axis).  For
// inertia == inertia_axis the series degenerates to s0 and the raw
// generating map is the permutation itself.
inline GeneratingSeries symmetric_top_exact_series(double inertia,
                                                   double inertia_axis) {
  if (!(inertia > 0.0) || !(inertia_axis > 0.0))
    throw ConfigError("symmetric top series: inertias must be positive");
  const double coeff =
      (inertia - inertia_axis) / (2.0 * inertia * inertia_axis);
  return quadratic_axis3_exact_series(coeff);
}

enum class SplitVariant { kLieTrotter, kStrang };
enum class SplitOrdering { kAxis2First, kAxis3First };

inline SplitVariant split_variant_from_name(const std::string& name) {
  if (name == "lie-trotter") return SplitVariant::kLieTrotter;
  if (name == "strang") return SplitVariant::kStrang;
  throw ConfigError("unknown splitting variant '" + name +
                    "' (expected lie-trotter or strang)");
}

inline SplitOrdering split_ordering_from_name(const std::string& name) {
  if (name == "axis2-first") return SplitOrdering::kAxis2First;
  if (name == "axis3-first") return SplitOrdering::kAxis3First;
  throw ConfigError("unknown splitting ordering '" + name +
                    "' (expected axis2-first or axis3-first)");
}

// Exact flow of c1 Pi_2^2, c1 = (I1-I2)/(2 I1 I2): the field is
// Pi x (0, 2 c1 Pi_2, 0) = 2 c1 Pi_2 (-Pi_3, 0, Pi_1), a rotation of
// (Pi_1, Pi_3) about axis 2 with frozen angular rate 2 c1 Pi_2.
inline std::vector<double> split_flow_axis2(double i1, double i2, double h,
                                            const std::vector<double>& pi) {
  const double c1 = (i1 - i2) / (2.0 * i1 * i2);
  const double angle = 2.0 * c1 * pi[1] * h;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * pi[0] - s * pi[2], pi[1], s * pi[0] + c * pi[2]};
}

// Exact flow of c2 Pi_3^2, c2 = (I1-I3)/(2 I1 I3): the field is
// Pi x (0, 0, 2 c2 Pi_3) = 2 c2 Pi_3 (Pi_2, -Pi_1, 0), a rotation of
// (Pi_1, Pi_2) about axis 3 with frozen angular rate 2 c2 Pi_3.
inline std::vector<double> split_flow_axis3(double i1, double i3, double h,
                                            const std::vector<double>& pi) {
  const double c2 = (i1 - i3) / (2.0 * i1 * i3);
  const double angle = 2.0 * c2 * pi[2] * h;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * pi[0] + s * pi[1], -s * pi[0] + c * pi[1], pi[2]};
}

// One explicit splitting step for the free rigid body: the flow of
// H' = c1 Pi_2^2 + c2 Pi_3^2 (= H - C/(2 I1) up to the Casimir, so the
// same dynamics as H) composed from the two exact axis rotations.
// Lie-Trotter runs first(h) then second(h); Strang runs first(h/2),
// second(h), first(h/2).  Every substep is a rotation, so |Pi| is conserved
// to roundoff regardless of h.
inline std::vector<double> split_step(
    double i1, double i2, double i3, double h, const std::vector<double>& pi,
    SplitVariant variant = SplitVariant::kLieTrotter,
    SplitOrdering ordering = SplitOrdering::kAxis2First) {
  if (!(i1 > 0.0) || !(i2 > 0.0) || !(i3 > 0.0))
    throw ConfigError("split step: inertias must be positive");
  if (pi.size() != 3)
    throw ConfigError("split step: state must have 3 components");
  auto first = [&](double dt, const std::vector<double>& s) {
    return ordering == SplitOrdering::kAxis2First
               ? split_flow_axis2(i1, i2, dt, s)
               : split_flow_axis3(i1, i3, dt, s);
  };
  auto second = [&](double dt, const std::vector<double>& s) {
    return ordering == SplitOrdering::kAxis2First
               ? split_flow_axis3(i1, i3, dt, s)
               : split_flow_axis2(i1, i2, dt, s);
  };
  if (variant == SplitVariant::kLieTrotter)
    return second(h, first(h, pi));
  return first(0.5 * h, second(h, first(0.5 * h, pi)));
}

// Fixed-step splitting trajectory with the same diagnostics layout as
// integrate(): energy is the physical Hamiltonian of the rigid body with
// the given inertias, the recorded Casimir is |Pi|^2, newton_iters is 0
// (the method is explicit).
inline TrajectoryRecord split_integrate(
    double i1, double i2, double i3, double h,
    const std::vector<double>& state0, double t_final,
    SplitVariant variant = SplitVariant::kLieTrotter,
    SplitOrdering ordering = SplitOrdering::kAxis2First) {
  if (t_final < 0.0)
    throw ConfigError("split integrate: t_final must be >= 0");
  long n_steps = 0;
  if (t_final > 0.0) {
    if (!(h > 0.0))
      throw ConfigError("split integrate: step_h must be positive");
    n_steps = std::lround(t_final / h);
  }
  HamiltonianSystem rigid = make_system(
      "rigid_body", {{"I1", i1}, {"I2", i2}, {"I3", i3}});

  TrajectoryRecord rec;
  auto record = [&](double t, const std::vector<double>& st) {
    rec.times.push_back(t);
    rec.energy.push_back(rigid.hamiltonian.real(st));
    std::vector<double> cas;
    cas.reserve(rigid.casimirs.size());
    for (const auto& c : rigid.casimirs) cas.push_back(c.real(st));
    rec.casimirs.push_back(std::move(cas));
    rec.newton_iters.push_back(0);
    rec.states.push_back(PoissonState{rigid.name, st});
  };

  std::vector<double> st = state0;
  record(0.0, st);
  for (long i = 0; i < n_steps; ++i) {
    st = split_step(i1, i2, i3, h, st, variant, ordering);
    record(static_cast<double>(i + 1) * h, st);
  }
  return rec;
}

}  // namespace hjint
