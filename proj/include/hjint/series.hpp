// SPDX-License-Identifier: MIT
//
// Truncated generating series for Poisson integrators.
//
// The series S(t, u) is built by iterative deepening of the Hamilton–Jacobi
// equation dS/dt + H(tgt_map(u, grad_u S)) = 0: starting from the identity
// generator s0, the t^(k+1) coefficient slice is read off from the t^k slice
// of H evaluated through the chart's target map.  Any polynomial truncation
// of S is still an exact generating function, so the induced step map is
// exactly Poisson at every order; the order only controls accuracy in time.

#pragma once

#include <array>
#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hjint/chart.hpp"
#include "hjint/error.hpp"
#include "hjint/jet.hpp"
#include "hjint/systems.hpp"

namespace hjint {

struct GeneratingSeries {
  std::string chart_name;
  int order_k = 0;   // time truncation order K
  int p_degree = 0;  // joint total-degree cap of the jet in (t, u)
  std::vector<double> center;
  // Polynomial in (t, u - center); variable 0 is t, variables 1..m are the
  // chart variables.  The t^0 slice is s0 expanded at the center.
  Jet series;
};

// Default p_degree: one u-derivative is consumed per recursion level and the
// Newton solver needs accurate second u-derivatives at the end.
inline int default_p_degree(int order_k) { return order_k + 2; }

inline GeneratingSeries generate_series(const GroupoidChart& chart,
                                        const ScalarField& hamiltonian,
                                        int order_k,
                                        std::vector<double> center,
                                        int p_degree = -1) {
  if (order_k < 1)
    throw ConfigError("generate_series: order_k must be >= 1");
  if (p_degree < 0) p_degree = default_p_degree(order_k);
  if (p_degree < order_k + 2)
    throw ConfigError("generate_series: p_degree must be >= order_k + 2");
  if (static_cast<int>(center.size()) != chart.dim_u)
    throw ConfigError("generate_series: center size does not match chart");

  const int m = chart.dim_u;
  const int n = m + 1;  // variable 0 is t
  std::vector<Jet> u;
  u.reserve(m);
  for (int i = 0; i < m; ++i)
    u.push_back(Jet::variable(1 + i, center[i], n, p_degree));

  Jet S = chart.s0(u);
  for (int k = 0; k < order_k; ++k) {
    std::vector<Jet> w;
    w.reserve(m);
    for (int i = 0; i < m; ++i) w.push_back(S.partial(1 + i));
    const Jet hhat = hamiltonian.jet(chart.tgt_map.jet(u, w));

    // Transfer the t^k slice of H-hat into the t^(k+1) slice of S.
    const JetLayout& L = hhat.layout();
    std::array<int, JetLayout::kMaxVars> e{};
    for (int r = 0; r < L.size(); ++r) {
      const double c = hhat.coefficients()[r];
      if (c == 0.0) continue;
      const JetLayout::Exponents& exps = L.exponents(r);
      if (exps[0] != k) continue;
      if (L.degree(r) + 1 > p_degree) continue;
      for (int v = 0; v < n; ++v) e[v] = exps[v];
      e[0] = k + 1;
      S.set_coeff(std::span<const int>(e.data(), n), -c / (k + 1));
    }
  }
  return GeneratingSeries{chart.name, order_k, p_degree, std::move(center),
                          std::move(S)};
}

inline GeneratingSeries generate_series(const GroupoidChart& chart,
                                        const HamiltonianSystem& system,
                                        int order_k,
                                        std::vector<double> center,
                                        int p_degree = -1) {
  return generate_series(chart, system.hamiltonian, order_k,
                         std::move(center), p_degree);
}

namespace detail {

inline std::vector<double> series_offsets(const GeneratingSeries& gs,
                                          double t,
                                          std::span<const double> u_offset) {
  if (static_cast<int>(u_offset.size()) !=
      static_cast<int>(gs.center.size()))
    throw ConfigError("series evaluation: u_offset size mismatch");
  std::vector<double> offs(gs.center.size() + 1);
  offs[0] = t;
  for (size_t i = 0; i < u_offset.size(); ++i) offs[1 + i] = u_offset[i];
  return offs;
}

}  // namespace detail

// S(t, center + u_offset).
inline double series_value(const GeneratingSeries& gs, double t,
                           std::span<const double> u_offset) {
  return gs.series.eval(detail::series_offsets(gs, t, u_offset));
}

// grad_u S(t, center + u_offset) as real numbers.
inline std::vector<double> series_gradient_u(
    const GeneratingSeries& gs, double t, std::span<const double> u_offset) {
  const int m = static_cast<int>(gs.center.size());
  const std::vector<double> offs = detail::series_offsets(gs, t, u_offset);
  std::vector<double> grad(m);
  for (int i = 0; i < m; ++i) grad[i] = gs.series.partial(1 + i).eval(offs);
  return grad;
}

// Pointwise Hamilton–Jacobi residual dS/dt + H(tgt_map(u, grad_u S)) at
// t and u = center + u_offset, evaluated in real arithmetic.
inline double hj_residual(const GeneratingSeries& gs,
                          const GroupoidChart& chart,
                          const ScalarField& hamiltonian, double t,
                          std::span<const double> u_offset) {
  const int m = chart.dim_u;
  const std::vector<double> offs = detail::series_offsets(gs, t, u_offset);
  const double dsdt = gs.series.partial(0).eval(offs);
  std::vector<double> u(m), w(m);
  for (int i = 0; i < m; ++i) u[i] = gs.center[i] + u_offset[i];
  for (int i = 0; i < m; ++i) w[i] = gs.series.partial(1 + i).eval(offs);
  return dsdt + hamiltonian.real(chart.tgt_map.real(u, w));
}

inline double hj_residual(const GeneratingSeries& gs,
                          const GroupoidChart& chart,
                          const HamiltonianSystem& system, double t,
                          std::span<const double> u_offset) {
  return hj_residual(gs, chart, system.hamiltonian, t, u_offset);
}

// The residual as a jet in (t, u - center); its t^k coefficient slices
// vanish for k < order_k by construction.
inline Jet hj_residual_jet(const GeneratingSeries& gs,
                           const GroupoidChart& chart,
                           const ScalarField& hamiltonian) {
  const int m = chart.dim_u;
  const int n = m + 1;
  std::vector<Jet> u, w;
  u.reserve(m);
  w.reserve(m);
  for (int i = 0; i < m; ++i)
    u.push_back(Jet::variable(1 + i, gs.center[i], n, gs.p_degree));
  for (int i = 0; i < m; ++i) w.push_back(gs.series.partial(1 + i));
  return gs.series.partial(0) + hamiltonian.jet(chart.tgt_map.jet(u, w));
}

// Max-abs coefficient per t-power (index k collects all monomials t^k u^a).
inline std::vector<double> t_slice_norms(const Jet& j) {
  std::vector<double> norms(j.degree_cap() + 1, 0.0);
  const JetLayout& L = j.layout();
  for (int r = 0; r < L.size(); ++r) {
    const double c = std::abs(j.coefficients()[r]);
    const int k = L.exponents(r)[0];
    if (c > norms[k]) norms[k] = c;
  }
  return norms;
}

// Drops every t-power above new_k, keeping center and p_degree; generating
// the series directly at new_k yields the same coefficients.
inline GeneratingSeries truncated_to_order(const GeneratingSeries& gs,
                                           int new_k) {
  if (new_k < 1 || new_k > gs.order_k)
    throw ConfigError("truncated_to_order: new_k out of range");
  GeneratingSeries out = gs;
  out.order_k = new_k;
  const JetLayout& L = out.series.layout();
  const int n = L.num_vars();
  std::array<int, JetLayout::kMaxVars> e{};
  for (int r = 0; r < L.size(); ++r) {
    const JetLayout::Exponents& exps = L.exponents(r);
    if (exps[0] <= new_k) continue;
    if (out.series.coefficients()[r] == 0.0) continue;
    for (int v = 0; v < n; ++v) e[v] = exps[v];
    out.series.set_coeff(std::span<const int>(e.data(), n), 0.0);
  }
  return out;
}

}  // namespace hjint
