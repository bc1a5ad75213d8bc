// SPDX-License-Identifier: MIT
//
// High-accuracy reference integration of a system's exact right-hand side
// with an embedded Dormand–Prince 5(4) pair and proportional step control.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "hjint/error.hpp"
#include "hjint/systems.hpp"
#include "hjint/trajectory.hpp"

namespace hjint {

namespace detail {

// Dormand–Prince 5(4) coefficients. The first row of b5 doubles as the
// seventh stage (FSAL), so each accepted step costs six fresh evaluations.
struct Dopri5 {
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113,
                          b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                          b6 = 11.0 / 84;
  // b5 - b4 (embedded error weights).
  static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600,
                          e3 = 500.0 / 1113 - 7571.0 / 16695,
                          e4 = 125.0 / 192 - 393.0 / 640,
                          e5 = -2187.0 / 6784 + 92097.0 / 339200,
                          e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;
};

}  // namespace detail

using OdeRhs = std::function<std::vector<double>(const std::vector<double>&)>;

// Integrates y' = rhs(y) from y0 over [0, T] with absolute and relative
// tolerance `tol`; returns the states at the accepted step times (t = 0 and
// t = T included). T may be zero.
inline std::vector<std::pair<double, std::vector<double>>> ode_solve(
    const OdeRhs& rhs, const std::vector<double>& y0, double T, double tol) {
  if (!(tol >= 1e-14 && tol <= 1e-6))
    throw ConfigError("reference tolerance must lie in [1e-14, 1e-6]");
  if (T < 0.0) throw ConfigError("reference horizon must be nonnegative");

  // The contract is on delivered endpoint accuracy (halving `tol` moves the
  // endpoint by at most 10 tol), while the pair controls local error per
  // step. A fixed safety factor absorbs error transport over the supported
  // horizons, including flows with strongly unstable directions.
  const double tol_eff = std::max(tol * 1e-2, 1e-15);

  using D = detail::Dopri5;
  const size_t d = y0.size();
  std::vector<std::pair<double, std::vector<double>>> out;
  out.emplace_back(0.0, y0);
  if (T == 0.0) return out;

  std::vector<double> y = y0;
  std::vector<double> k1 = rhs(y);
  double t = 0.0;
  double h = std::min(T, 1e-3);
  size_t step_index = 0;

  std::vector<double> ytmp(d), y5(d), k2(d), k3(d), k4(d), k5(d), k6(d),
      k7(d);
  while (t < T) {
    h = std::min(h, T - t);
    if (h <= 1e-14 * std::max(1.0, std::abs(t)))
      throw IntegrationError("reference solver step-size underflow",
                             step_index);

    for (size_t i = 0; i < d; ++i) ytmp[i] = y[i] + h * D::a21 * k1[i];
    k2 = rhs(ytmp);
    for (size_t i = 0; i < d; ++i)
      ytmp[i] = y[i] + h * (D::a31 * k1[i] + D::a32 * k2[i]);
    k3 = rhs(ytmp);
    for (size_t i = 0; i < d; ++i)
      ytmp[i] = y[i] + h * (D::a41 * k1[i] + D::a42 * k2[i] + D::a43 * k3[i]);
    k4 = rhs(ytmp);
    for (size_t i = 0; i < d; ++i)
      ytmp[i] = y[i] + h * (D::a51 * k1[i] + D::a52 * k2[i] +
                            D::a53 * k3[i] + D::a54 * k4[i]);
    k5 = rhs(ytmp);
    for (size_t i = 0; i < d; ++i)
      ytmp[i] = y[i] + h * (D::a61 * k1[i] + D::a62 * k2[i] +
                            D::a63 * k3[i] + D::a64 * k4[i] + D::a65 * k5[i]);
    k6 = rhs(ytmp);
    for (size_t i = 0; i < d; ++i)
      y5[i] = y[i] + h * (D::b1 * k1[i] + D::b3 * k3[i] + D::b4 * k4[i] +
                          D::b5 * k5[i] + D::b6 * k6[i]);
    k7 = rhs(y5);

    double err2 = 0.0;
    for (size_t i = 0; i < d; ++i) {
      const double e = h * (D::e1 * k1[i] + D::e3 * k3[i] + D::e4 * k4[i] +
                            D::e5 * k5[i] + D::e6 * k6[i] + D::e7 * k7[i]);
      const double scale =
          tol_eff + tol_eff * std::max(std::abs(y[i]), std::abs(y5[i]));
      err2 += (e / scale) * (e / scale);
    }
    const double err = std::sqrt(err2 / static_cast<double>(d));

    if (err <= 1.0) {
      t += h;
      y = y5;
      k1 = k7;  // FSAL
      out.emplace_back(t, y);
      ++step_index;
    }
    const double factor = (err > 0.0)
                              ? 0.9 * std::pow(err, -0.2)
                              : 5.0;
    h *= std::clamp(factor, 0.2, 5.0);
  }
  return out;
}

// System-level wrapper recording energy and Casimirs along the way.
inline TrajectoryRecord reference_solve(const HamiltonianSystem& system,
                                        const std::vector<double>& state0,
                                        double T, double tol) {
  auto samples = ode_solve(system.reference_rhs, state0, T, tol);
  TrajectoryRecord rec;
  rec.times.reserve(samples.size());
  for (auto& [t, y] : samples) {
    rec.times.push_back(t);
    rec.energy.push_back(system.hamiltonian.real(y));
    std::vector<double> cas;
    cas.reserve(system.casimirs.size());
    for (const auto& c : system.casimirs) cas.push_back(c.real(y));
    rec.casimirs.push_back(std::move(cas));
    rec.newton_iters.push_back(0);
    rec.states.push_back(PoissonState{system.name, std::move(y)});
  }
  return rec;
}

// Endpoint-only convenience.
inline std::vector<double> reference_endpoint(const HamiltonianSystem& system,
                                              const std::vector<double>& y0,
                                              double T, double tol) {
  return ode_solve(system.reference_rhs, y0, T, tol).back().second;
}

}  // namespace hjint
