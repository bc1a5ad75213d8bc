// SPDX-License-Identifier: MIT
//
// Coordinate charts on cotangent groupoids.
//
// A chart packages the data the integrator needs: generating variables
// u_1..u_m, the source and target maps evaluated on the graph of a
// generating function S (they consume u together with w = dS/du), the
// identity generating function s0, and a rule choosing the series expansion
// center from the current state.  Solving src(u, dS/du) = state for u and
// emitting tgt(u, dS/du) realizes the Poisson map generated by S.
//
// Source/target expressions are written once as generic lambdas and
// instantiated for both plain doubles (Newton path) and Jets (series
// path), which makes real-vs-jet agreement exact by construction.
//
// Every factory runs a numerical identity self-test before returning: on
// the identity bisection (w = grad s0) the source map must reproduce the
// state and the target map must produce sigma(state), where sigma is the
// chart's base permutation (the identity for every chart except the
// Euler-angle chart, whose identity bisection generates a cyclic coordinate
// permutation).  A chart that fails the self-test refuses to construct.

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "hjint/error.hpp"
#include "hjint/jet.hpp"

namespace hjint {

inline double constant_part(double x) { return x; }
inline double constant_part(const Jet& j) { return j.constant_term(); }

// A scalar-valued expression evaluable on reals and on Jets, instantiated
// from a single generic callable.
struct ScalarField {
  std::function<double(const std::vector<double>&)> real;
  std::function<Jet(const std::vector<Jet>&)> jet;
};

template <class F>
ScalarField make_scalar_field(F f) {
  return ScalarField{
      [f](const std::vector<double>& x) -> double { return f(x); },
      [f](const std::vector<Jet>& x) -> Jet { return f(x); }};
}

// A vector-valued map (u, w) -> coords, same dual instantiation.
struct ChartMap {
  std::function<std::vector<double>(const std::vector<double>&,
                                    const std::vector<double>&)>
      real;
  std::function<std::vector<Jet>(const std::vector<Jet>&,
                                 const std::vector<Jet>&)>
      jet;
};

template <class F>
ChartMap make_chart_map(F f) {
  return ChartMap{[f](const std::vector<double>& u,
                      const std::vector<double>& w) { return f(u, w); },
                  [f](const std::vector<Jet>& u, const std::vector<Jet>& w) {
                    return f(u, w);
                  }};
}

struct GroupoidChart {
  std::string name;
  int dim_state = 0;  // d: coordinates of the state space in this chart
  int dim_u = 0;      // m: generating variables (always equal to d here)
  ChartMap src_map;
  ChartMap tgt_map;
  std::function<Jet(const std::vector<Jet>&)> s0;
  std::function<std::vector<double>(const std::vector<double>&)> center_rule;
  // Base permutation generated by the identity bisection:
  // sigma(state)[i] = state[sigma_perm[i]].
  std::vector<int> sigma_perm;
  std::string validity_note;
  // Box used for sampling self-test states (not a hard state constraint).
  std::vector<std::pair<double, double>> sample_box;

  bool sigma_is_identity() const {
    for (int i = 0; i < static_cast<int>(sigma_perm.size()); ++i)
      if (sigma_perm[i] != i) return false;
    return true;
  }
  std::vector<double> apply_sigma(const std::vector<double>& state) const {
    std::vector<double> out(state.size());
    for (size_t i = 0; i < state.size(); ++i) out[i] = state[sigma_perm[i]];
    return out;
  }
  std::vector<double> apply_sigma_inverse(
      const std::vector<double>& state) const {
    std::vector<double> out(state.size());
    for (size_t i = 0; i < state.size(); ++i) out[sigma_perm[i]] = state[i];
    return out;
  }

  // Gradient of s0 at the point u (as real numbers).
  std::vector<double> s0_gradient(const std::vector<double>& u) const {
    const int n = dim_u + 1;
    std::vector<Jet> uj;
    uj.reserve(dim_u);
    for (int i = 0; i < dim_u; ++i)
      uj.push_back(Jet::variable(1 + i, u[i], n, 2));
    Jet s = s0(uj);
    std::vector<double> grad(dim_u);
    std::vector<double> zero(n, 0.0);
    for (int i = 0; i < dim_u; ++i)
      grad[i] = s.partial(1 + i).eval(zero);
    return grad;
  }
};

namespace detail {

// Deterministic sampling used by the construction self-tests (32-bit linear
// congruential generator; identical values on every platform).
class SelfTestRng {
 public:
  explicit SelfTestRng(std::uint32_t seed) : state_(seed) {}
  double uniform(double lo, double hi) {
    state_ = state_ * 1664525u + 1013904223u;
    return lo + (hi - lo) * (state_ * (1.0 / 4294967296.0));
  }

 private:
  std::uint32_t state_;
};

inline void run_identity_self_test(const GroupoidChart& chart) {
  SelfTestRng rng(0x5eed0001u);
  const double tol = 1e-10;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> state(chart.dim_state);
    for (int i = 0; i < chart.dim_state; ++i)
      state[i] = rng.uniform(chart.sample_box[i].first,
                             chart.sample_box[i].second);
    const std::vector<double> u = chart.center_rule(state);
    const std::vector<double> w = chart.s0_gradient(u);
    const std::vector<double> src = chart.src_map.real(u, w);
    const std::vector<double> tgt = chart.tgt_map.real(u, w);
    const std::vector<double> expect_tgt = chart.apply_sigma(state);
    for (int i = 0; i < chart.dim_state; ++i) {
      if (std::abs(src[i] - state[i]) > tol ||
          std::abs(tgt[i] - expect_tgt[i]) > tol)
        throw Error("chart '" + chart.name +
                    "' failed its identity self-test");
    }
  }
}

inline std::vector<int> identity_perm(int d) {
  std::vector<int> p(d);
  for (int i = 0; i < d; ++i) p[i] = i;
  return p;
}

inline std::vector<std::pair<double, double>> unit_box(int d) {
  return std::vector<std::pair<double, double>>(d, {-1.0, 1.0});
}

}  // namespace detail

// Pair groupoid over R^n.  Generating variables u = (y_1..y_n, q^1..q^n);
// the graph of S supplies the first-leg position x = dS/dy and the
// second-leg momentum p = dS/dq.  State layout: (q_1..q_n, p_1..p_n).
// s0 = sum_i q^i y_i generates the identity.  With S = s0 - t H(q, y) this
// is the classical type-II generating-function setup, and K = 1 reproduces
// the symplectic Euler method.
inline GroupoidChart chart_pair(int dim_q) {
  if (dim_q < 1) throw Error("chart_pair: dim_q must be >= 1");
  if (2 * dim_q + 1 > JetLayout::kMaxVars)
    throw Error("chart_pair: dim_q too large for the jet variable budget");
  const int n = dim_q;
  GroupoidChart chart;
  chart.name = "pair";
  chart.dim_state = 2 * n;
  chart.dim_u = 2 * n;
  chart.src_map = make_chart_map([n](const auto& u, const auto& w) {
    using V = std::remove_cvref_t<decltype(u)>;
    V out;
    out.reserve(2 * n);
    for (int i = 0; i < n; ++i) out.push_back(w[i]);  // x = dS/dy
    for (int i = 0; i < n; ++i) out.push_back(u[i]);  // momentum y
    return out;
  });
  chart.tgt_map = make_chart_map([n](const auto& u, const auto& w) {
    using V = std::remove_cvref_t<decltype(u)>;
    V out;
    out.reserve(2 * n);
    for (int i = 0; i < n; ++i) out.push_back(u[n + i]);  // position q
    for (int i = 0; i < n; ++i) out.push_back(w[n + i]);  // p = dS/dq
    return out;
  });
  chart.s0 = [n](const std::vector<Jet>& u) {
    Jet s = u[n] * u[0];
    for (int i = 1; i < n; ++i) s = s + u[n + i] * u[i];
    return s;
  };
  chart.center_rule = [n](const std::vector<double>& state) {
    std::vector<double> u(2 * n);
    for (int i = 0; i < n; ++i) u[i] = state[n + i];  // y-center = p
    for (int i = 0; i < n; ++i) u[n + i] = state[i];  // q-center = q
    return u;
  };
  chart.sigma_perm = detail::identity_perm(2 * n);
  chart.validity_note = "globally valid (linear maps)";
  chart.sample_box = detail::unit_box(2 * n);
  detail::run_identity_self_test(chart);
  return chart;
}

// so(3)* with the Cayley retraction.  Generating variables u = (p_x,p_y,p_z)
// are the body angular momentum; the graph supplies the Cayley coordinates
// (x,y,z) = dS/du of the rotation increment.  Source and target differ only
// in the sign of the (1/2) x cross p block:
//   src = p - (1/2) x x p + (1/4) x (x.p),  tgt = p + (1/2) x x p + ...
// written out row-by-row below exactly as transcribed.
inline GroupoidChart chart_so3_cayley() {
  GroupoidChart chart;
  chart.name = "so3_cayley";
  chart.dim_state = 3;
  chart.dim_u = 3;
  chart.src_map = make_chart_map([](const auto& u, const auto& w) {
    using V = std::remove_cvref_t<decltype(u)>;
    const auto& x = w[0];
    const auto& y = w[1];
    const auto& z = w[2];
    const auto& p1 = u[0];
    const auto& p2 = u[1];
    const auto& p3 = u[2];
    V out;
    out.reserve(3);
    out.push_back((x * x / 4 + 1) * p1 + (x * y / 4 + z / 2) * p2 +
                  (x * z / 4 - y / 2) * p3);
    out.push_back((x * y / 4 - z / 2) * p1 + (y * y / 4 + 1) * p2 +
                  (y * z / 4 + x / 2) * p3);
    out.push_back((x * z / 4 + y / 2) * p1 + (y * z / 4 - x / 2) * p2 +
                  (z * z / 4 + 1) * p3);
    return out;
  });
  chart.tgt_map = make_chart_map([](const auto& u, const auto& w) {
    using V = std::remove_cvref_t<decltype(u)>;
    const auto& x = w[0];
    const auto& y = w[1];
    const auto& z = w[2];
    const auto& p1 = u[0];
    const auto& p2 = u[1];
    const auto& p3 = u[2];
    V out;
    out.reserve(3);
    out.push_back((x * x / 4 + 1) * p1 + (x * y / 4 - z / 2) * p2 +
                  (x * z / 4 + y / 2) * p3);
    out.push_back((x * y / 4 + z / 2) * p1 + (y * y / 4 + 1) * p2 +
                  (y * z / 4 - x / 2) * p3);
    out.push_back((x * z / 4 - y / 2) * p1 + (y * z / 4 + x / 2) * p2 +
                  (z * z / 4 + 1) * p3);
    return out;
  });
  chart.s0 = [](const std::vector<Jet>& u) {
    return Jet::constant(0.0, u[0].num_vars(), u[0].degree_cap());
  };
  chart.center_rule = [](const std::vector<double>& state) { return state; };
  chart.sigma_perm = detail::identity_perm(3);
  chart.validity_note = "valid for rotation increments away from angle pi "
                        "(Cayley chart covers |angle| < pi)";
  chart.sample_box = detail::unit_box(3);
  detail::run_identity_self_test(chart);
  return chart;
}

// Heavy top: T*(S^2 x SO(3)) reduced chart.  State (a_1,a_2,a_3, P_1..P_3)
// with a the advected unit vector (gravity direction in the body frame) and
// P the body angular momentum.  Generating variables u = (a, p); the graph
// supplies the Cayley increment (x,y,z) = dS/dp and the base momentum
// p_a = -dS/da.  (Only this sign makes the induced first-order vector field
// Hamiltonian; the opposite sign also passes the identity test but produces
// an energy-drifting method, see the stepper consistency tests.)
// The target's a-block is the Cayley rotation written as a rational matrix;
// it is orthogonal, so |a| is preserved exactly.
inline GroupoidChart chart_heavy_top() {
  GroupoidChart chart;
  chart.name = "heavy_top";
  chart.dim_state = 6;
  chart.dim_u = 6;
  chart.src_map = make_chart_map([](const auto& u, const auto& w) {
    using V = std::remove_cvref_t<decltype(u)>;
    const auto& a1 = u[0];
    const auto& a2 = u[1];
    const auto& a3 = u[2];
    const auto& p1 = u[3];
    const auto& p2 = u[4];
    const auto& p3 = u[5];
    const auto pa1 = -w[0];
    const auto pa2 = -w[1];
    const auto pa3 = -w[2];
    const auto& x = w[3];
    const auto& y = w[4];
    const auto& z = w[5];
    V out;
    out.reserve(6);
    out.push_back(u[0]);
    out.push_back(u[1]);
    out.push_back(u[2]);
    out.push_back((x * x / 4 + 1) * p1 + (x * y / 4 - z / 2) * p2 +
                  (x * z / 4 + y / 2) * p3 + (a2 * pa3 - a3 * pa2));
    out.push_back((x * y / 4 + z / 2) * p1 + (y * y / 4 + 1) * p2 +
                  (y * z / 4 - x / 2) * p3 + (a3 * pa1 - a1 * pa3));
    out.push_back((x * z / 4 - y / 2) * p1 + (y * z / 4 + x / 2) * p2 +
                  (z * z / 4 + 1) * p3 + (a1 * pa2 - a2 * pa1));
    return out;
  });
  chart.tgt_map = make_chart_map([](const auto& u, const auto& w) {
    using V = std::remove_cvref_t<decltype(u)>;
    const auto& a1 = u[0];
    const auto& a2 = u[1];
    const auto& a3 = u[2];
    const auto& p1 = u[3];
    const auto& p2 = u[4];
    const auto& p3 = u[5];
    const auto& x = w[3];
    const auto& y = w[4];
    const auto& z = w[5];
    const auto den = x * x + y * y + z * z + 4;
    V out;
    out.reserve(6);
    out.push_back(((x * x - y * y - z * z + 4) * a1 +
                   (2 * (y * x) + 4 * z) * a2 + (2 * (z * x) - 4 * y) * a3) /
                  den);
    out.push_back(((2 * (y * x) - 4 * z) * a1 +
                   (-(x * x) + y * y - z * z + 4) * a2 +
                   (2 * (z * y) + 4 * x) * a3) /
                  den);
    out.push_back(((2 * (z * x) + 4 * y) * a1 + (2 * (z * y) - 4 * x) * a2 +
                   (-(x * x) - y * y + z * z + 4) * a3) /
                  den);
    out.push_back((x * x / 4 + 1) * p1 + (x * y / 4 + z / 2) * p2 +
                  (x * z / 4 - y / 2) * p3);
    out.push_back((x * y / 4 - z / 2) * p1 + (y * y / 4 + 1) * p2 +
                  (y * z / 4 + x / 2) * p3);
    out.push_back((x * z / 4 + y / 2) * p1 + (y * z / 4 - x / 2) * p2 +
                  (z * z / 4 + 1) * p3);
    return out;
  });
  chart.s0 = [](const std::vector<Jet>& u) {
    return Jet::constant(0.0, u[0].num_vars(), u[0].degree_cap());
  };
  chart.center_rule = [](const std::vector<double>& state) { return state; };
  chart.sigma_perm = detail::identity_perm(6);
  chart.validity_note = "valid for rotation increments away from angle pi; "
                        "a treated in ambient R^3 (|a| = 1 monitored, not "
                        "enforced)";
  chart.sample_box = detail::unit_box(6);
  detail::run_identity_self_test(chart);
  return chart;
}

// Elroy's beanie: two planar bodies joined at a pivot, Atiyah chart of
// T*S^1 x T*SE(2).  State (psi, p_psi, p_1, p_2, p_3): relative angle and
// momentum plus the SE(2) momenta.  Generating variables
// u = (p_psi^1, psi_2, P_1, P_2, P_3); the graph supplies
// psi_1 = dS/dp_psi^1, p_psi^2 = dS/dpsi_2 and (z_1, z_2, theta) = dS/dP.
// s0 = psi_2 p_psi^1.
inline GroupoidChart chart_elroy_beanie() {
  GroupoidChart chart;
  chart.name = "elroy_beanie";
  chart.dim_state = 5;
  chart.dim_u = 5;
  chart.src_map = make_chart_map([](const auto& u, const auto& w) {
    using V = std::remove_cvref_t<decltype(u)>;
    const auto& P1 = u[2];
    const auto& P2 = u[3];
    const auto& P3 = u[4];
    const auto& z1 = w[2];
    const auto& z2 = w[3];
    V out;
    out.reserve(5);
    out.push_back(w[0]);  // psi_1 = dS/dp_psi^1
    out.push_back(u[0]);  // momentum slot: -(raw coordinate) = p_psi^1
    out.push_back(P1);
    out.push_back(P2);
    out.push_back(P3 - P1 * z2 + P2 * z1);
    return out;
  });
  chart.tgt_map = make_chart_map([](const auto& u, const auto& w) {
    using V = std::remove_cvref_t<decltype(u)>;
    const auto& P1 = u[2];
    const auto& P2 = u[3];
    const auto& P3 = u[4];
    const auto& theta = w[4];
    const auto c = cos(theta);
    const auto s = sin(theta);
    V out;
    out.reserve(5);
    out.push_back(u[1]);  // psi_2
    out.push_back(w[1]);  // p_psi^2 = dS/dpsi_2
    out.push_back(P1 * c + P2 * s);
    out.push_back(-(P1 * s) + P2 * c);
    out.push_back(P3);
    return out;
  });
  chart.s0 = [](const std::vector<Jet>& u) { return u[1] * u[0]; };
  chart.center_rule = [](const std::vector<double>& state) {
    return std::vector<double>{state[1], state[0], state[2], state[3],
                               state[4]};
  };
  chart.sigma_perm = detail::identity_perm(5);
  chart.validity_note = "globally valid";
  chart.sample_box = detail::unit_box(5);
  detail::run_identity_self_test(chart);
  return chart;
}

// so(3)* in Euler angles (z-x-z convention).  Generating variables
// u = (p_phi, p_psi, p_theta); the graph supplies the angles
// (phi, psi, theta) = dS/du.  s0 = pi p_phi + (pi/2) p_psi + (pi/2) p_theta
// centers the identity bisection at angles (pi, pi/2, pi/2), where both
// maps are regular (sin theta = 1).
//
// This chart's identity bisection generates a cyclic coordinate
// permutation, not the identity: sigma(P_1,P_2,P_3) = (P_2,P_3,P_1).  The
// near-identity integrator step is step o sigma^{-1}.
//
// Of the two printed momentum maps, the one involving (psi, theta) serves
// as the source and the one involving (phi, theta) as the target; this
// assignment (not the reverse) makes step o sigma^{-1} integrate the same
// flow as the Cayley chart, which the stepper consistency test pins down.
inline GroupoidChart chart_so3_euler() {
  GroupoidChart chart;
  chart.name = "so3_euler";
  chart.dim_state = 3;
  chart.dim_u = 3;
  chart.src_map = make_chart_map([](const auto& u, const auto& w) {
    using V = std::remove_cvref_t<decltype(u)>;
    const auto& pphi = u[0];
    const auto& ppsi = u[1];
    const auto& pth = u[2];
    const auto& psi = w[1];
    const auto& theta = w[2];
    const auto sth = sin(theta);
    if (std::abs(constant_part(sth)) < 1e-8)
      throw SingularDivision("so3_euler: sin(theta) ~ 0 (chart singularity)");
    const auto cth = cos(theta);
    const auto spsi = sin(psi);
    const auto cpsi = cos(psi);
    V out;
    out.reserve(3);
    out.push_back(((pphi - ppsi * cth) * spsi + pth * sth * cpsi) / sth);
    out.push_back(((pphi - ppsi * cth) * cpsi - pth * sth * spsi) / sth);
    out.push_back(ppsi);
    return out;
  });
  chart.tgt_map = make_chart_map([](const auto& u, const auto& w) {
    using V = std::remove_cvref_t<decltype(u)>;
    const auto& pphi = u[0];
    const auto& ppsi = u[1];
    const auto& pth = u[2];
    const auto& phi = w[0];
    const auto& theta = w[2];
    const auto sth = sin(theta);
    if (std::abs(constant_part(sth)) < 1e-8)
      throw SingularDivision("so3_euler: sin(theta) ~ 0 (chart singularity)");
    const auto cth = cos(theta);
    const auto sphi = sin(phi);
    const auto cphi = cos(phi);
    V out;
    out.reserve(3);
    out.push_back(((ppsi - cth * pphi) * sphi + cphi * sth * pth) / sth);
    out.push_back(((cth * pphi - ppsi) * cphi + sth * sphi * pth) / sth);
    out.push_back(pphi);
    return out;
  });
  chart.s0 = [](const std::vector<Jet>& u) {
    const double half_pi = 2.0 * std::atan(1.0);
    return u[0] * (2.0 * half_pi) + u[1] * half_pi + u[2] * half_pi;
  };
  // At the bisection angles, source = (p_phi, -p_theta, p_psi); invert that
  // assignment to center the generating variables on the current state.
  chart.center_rule = [](const std::vector<double>& state) {
    return std::vector<double>{state[0], state[2], -state[1]};
  };
  chart.sigma_perm = {1, 2, 0};  // sigma(P) = (P_2, P_3, P_1)
  chart.validity_note = "requires sin(theta) bounded away from 0; the "
                        "identity bisection sits at theta = pi/2";
  chart.sample_box = detail::unit_box(3);
  detail::run_identity_self_test(chart);
  return chart;
}

// Trian(2): the groupoid of invertible upper-triangular 2x2 matrices.
// Generating variables u = (p_1, p_2, p_3); the graph supplies the group
// coordinates (g^1, g^2, g^3) = dS/du.  s0 = p_1 + p_3 places the group
// point at the identity matrix e = (1, 0, 1) and generates the identity.
inline GroupoidChart chart_trian2() {
  GroupoidChart chart;
  chart.name = "trian2";
  chart.dim_state = 3;
  chart.dim_u = 3;
  chart.src_map = make_chart_map([](const auto& u, const auto& w) {
    using V = std::remove_cvref_t<decltype(u)>;
    const auto& p1 = u[0];
    const auto& p2 = u[1];
    const auto& p3 = u[2];
    const auto& g1 = w[0];
    const auto& g2 = w[1];
    const auto& g3 = w[2];
    V out;
    out.reserve(3);
    out.push_back(p1 * g1 + p2 * g2);
    out.push_back(p2 * g3);
    out.push_back(p3 * g3);
    return out;
  });
  chart.tgt_map = make_chart_map([](const auto& u, const auto& w) {
    using V = std::remove_cvref_t<decltype(u)>;
    const auto& p1 = u[0];
    const auto& p2 = u[1];
    const auto& p3 = u[2];
    const auto& g1 = w[0];
    const auto& g2 = w[1];
    const auto& g3 = w[2];
    V out;
    out.reserve(3);
    out.push_back(p1 * g1);
    out.push_back(p2 * g1);
    out.push_back(p2 * g2 + p3 * g3);
    return out;
  });
  chart.s0 = [](const std::vector<Jet>& u) { return u[0] + u[2]; };
  chart.center_rule = [](const std::vector<double>& state) { return state; };
  chart.sigma_perm = detail::identity_perm(3);
  chart.validity_note = "valid while the group point stays in the "
                        "invertible region g^1, g^3 > 0";
  chart.sample_box = detail::unit_box(3);
  detail::run_identity_self_test(chart);
  return chart;
}

// Chart lookup by CLI name.
inline GroupoidChart make_chart(const std::string& name) {
  if (name == "pair") return chart_pair(1);
  if (name == "so3_cayley") return chart_so3_cayley();
  if (name == "heavy_top") return chart_heavy_top();
  if (name == "elroy_beanie") return chart_elroy_beanie();
  if (name == "so3_euler") return chart_so3_euler();
  if (name == "trian2") return chart_trian2();
  throw ConfigError("unknown chart name: '" + name + "'");
}

inline std::vector<std::string> chart_names() {
  return {"pair", "so3_cayley", "heavy_top",
          "elroy_beanie", "so3_euler", "trian2"};
}

}  // namespace hjint
