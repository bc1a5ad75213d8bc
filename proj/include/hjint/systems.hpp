// SPDX-License-Identifier: MIT
//
// Built-in Hamiltonian systems: name, parameters, scalar-generic Hamiltonian
// and Casimir functions, and the exact ODE right-hand side used by the
// reference solver.

#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "hjint/chart.hpp"
#include "hjint/error.hpp"

namespace hjint {

struct HamiltonianSystem {
  std::string name;
  int dim = 0;  // number of chart coordinates of the state
  std::map<std::string, double> params;
  ScalarField hamiltonian;
  std::vector<ScalarField> casimirs;
  // Exact ODE right-hand side in the same coordinates.
  std::function<std::vector<double>(const std::vector<double>&)> reference_rhs;
  std::string default_chart;
  std::vector<double> default_state;
};

namespace detail {

// Apply user overrides onto the default parameter table; unknown keys are
// rejected so typos in configs fail loudly.
inline std::map<std::string, double> resolve_params(
    std::map<std::string, double> defaults,
    const std::map<std::string, double>& overrides,
    const std::string& system_name) {
  for (const auto& [key, value] : overrides) {
    auto it = defaults.find(key);
    if (it == defaults.end())
      throw ConfigError("unknown parameter '" + key + "' for system '" +
                        system_name + "'");
    it->second = value;
  }
  return defaults;
}

}  // namespace detail

// Free rigid body on so(3)*: H = (1/2)(Pi_1^2/I_1 + Pi_2^2/I_2 + Pi_3^2/I_3),
// Casimir |Pi|^2, equations Pi' = Pi x Omega with Omega_i = Pi_i / I_i.
inline HamiltonianSystem system_rigid_body(
    const std::map<std::string, double>& overrides = {}) {
  HamiltonianSystem sys;
  sys.name = "rigid_body";
  sys.dim = 3;
  sys.params = detail::resolve_params(
      {{"I1", 0.81}, {"I2", 1.0}, {"I3", 0.21}}, overrides, sys.name);
  const double I1 = sys.params["I1"];
  const double I2 = sys.params["I2"];
  const double I3 = sys.params["I3"];
  sys.hamiltonian = make_scalar_field([I1, I2, I3](const auto& st) {
    return 0.5 * (st[0] * st[0] / I1 + st[1] * st[1] / I2 +
                  st[2] * st[2] / I3);
  });
  sys.casimirs.push_back(make_scalar_field([](const auto& st) {
    return st[0] * st[0] + st[1] * st[1] + st[2] * st[2];
  }));
  sys.reference_rhs = [I1, I2, I3](const std::vector<double>& p) {
    const double w1 = p[0] / I1, w2 = p[1] / I2, w3 = p[2] / I3;
    return std::vector<double>{p[1] * w3 - p[2] * w2,
                               p[2] * w1 - p[0] * w3,
                               p[0] * w2 - p[1] * w1};
  };
  sys.default_chart = "so3_cayley";
  sys.default_state = {1.5, 0.1, 0.0};
  return sys;
}

// Heavy top on se(3)* ~ (Gamma, Pi): H = kinetic + m g l Gamma.e with the
// symmetry axis e fixed in the body frame. Casimirs |Gamma|^2 and Gamma.Pi.
inline HamiltonianSystem system_heavy_top(
    const std::map<std::string, double>& overrides = {}) {
  HamiltonianSystem sys;
  sys.name = "heavy_top";
  sys.dim = 6;
  const double en = std::sqrt(0.1 * 0.1 + 0.2 * 0.2 + 0.5 * 0.5);
  sys.params = detail::resolve_params(
      {{"I1", 1.0},
       {"I2", 1.5},
       {"I3", 2.0},
       {"m", 0.1},
       {"g", 9.8},
       {"l", 0.2},
       {"e1", 0.1 / en},
       {"e2", 0.2 / en},
       {"e3", 0.5 / en}},
      overrides, sys.name);
  const double I1 = sys.params["I1"];
  const double I2 = sys.params["I2"];
  const double I3 = sys.params["I3"];
  const double mgl = sys.params["m"] * sys.params["g"] * sys.params["l"];
  const double e1 = sys.params["e1"];
  const double e2 = sys.params["e2"];
  const double e3 = sys.params["e3"];
  sys.hamiltonian = make_scalar_field([=](const auto& st) {
    auto kin = 0.5 * (st[3] * st[3] / I1 + st[4] * st[4] / I2 +
                      st[5] * st[5] / I3);
    return kin + mgl * (st[0] * e1 + st[1] * e2 + st[2] * e3);
  });
  sys.casimirs.push_back(make_scalar_field([](const auto& st) {
    return st[0] * st[0] + st[1] * st[1] + st[2] * st[2];
  }));
  sys.casimirs.push_back(make_scalar_field([](const auto& st) {
    return st[0] * st[3] + st[1] * st[4] + st[2] * st[5];
  }));
  sys.reference_rhs = [=](const std::vector<double>& s) {
    const double w1 = s[3] / I1, w2 = s[4] / I2, w3 = s[5] / I3;
    // Gamma' = Omega x Gamma, Pi' = Omega x Pi - m g l Gamma x e.
    return std::vector<double>{
        w2 * s[2] - w3 * s[1],
        w3 * s[0] - w1 * s[2],
        w1 * s[1] - w2 * s[0],
        w2 * s[5] - w3 * s[4] - mgl * (s[1] * e3 - s[2] * e2),
        w3 * s[3] - w1 * s[5] - mgl * (s[2] * e1 - s[0] * e3),
        w1 * s[4] - w2 * s[3] - mgl * (s[0] * e2 - s[1] * e1)};
  };
  sys.default_chart = "heavy_top";
  const double gn = std::sqrt(0.75);  // |(0.5, 0.5, -0.5)|
  sys.default_state = {0.5 / gn, 0.5 / gn, -0.5 / gn, 0.1, -1.0, 2.0};
  return sys;
}

// Planar rotor pair ("Elroy's beanie") reduced to
// (psi, p_psi, p_1, p_2, p_3): two coupled planar bodies plus the conserved
// linear momentum pair (p_1, p_2) carrying the Casimir p_1^2 + p_2^2.
inline HamiltonianSystem system_elroy_beanie(
    const std::map<std::string, double>& overrides = {}) {
  HamiltonianSystem sys;
  sys.name = "elroy_beanie";
  sys.dim = 5;
  sys.params = detail::resolve_params({{"m", 3.0}, {"I1", 5.0}, {"I2", 1.0}},
                                      overrides, sys.name);
  const double m = sys.params["m"];
  const double I1 = sys.params["I1"];
  const double I2 = sys.params["I2"];
  sys.hamiltonian = make_scalar_field([m, I1, I2](const auto& st) {
    auto r = st[4] - st[1];  // p_3 - p_psi
    return (st[2] * st[2] + st[3] * st[3]) / (2.0 * m) +
           st[1] * st[1] / (2.0 * I2) + r * r / (2.0 * I1) +
           cos(2.0 * st[0]);
  });
  sys.casimirs.push_back(make_scalar_field([](const auto& st) {
    return st[2] * st[2] + st[3] * st[3];
  }));
  sys.reference_rhs = [m, I1, I2](const std::vector<double>& s) {
    const double r = (s[4] - s[1]) / I1;
    return std::vector<double>{s[1] / I2 - r, 2.0 * std::sin(2.0 * s[0]),
                               -r * s[3], r * s[2], 0.0};
  };
  sys.default_chart = "elroy_beanie";
  sys.default_state = {1.0, -0.1, 0.1, 0.2, 1.0};
  return sys;
}

// Free particle on the line, canonical chart (q, p).
inline HamiltonianSystem system_free_particle(
    const std::map<std::string, double>& overrides = {}) {
  HamiltonianSystem sys;
  sys.name = "free_particle";
  sys.dim = 2;
  sys.params = detail::resolve_params({}, overrides, sys.name);
  sys.hamiltonian = make_scalar_field(
      [](const auto& st) { return 0.5 * (st[1] * st[1]); });
  sys.reference_rhs = [](const std::vector<double>& s) {
    return std::vector<double>{s[1], 0.0};
  };
  sys.default_chart = "pair";
  sys.default_state = {0.0, 1.0};
  return sys;
}

// Unit harmonic oscillator, canonical chart (q, p).
inline HamiltonianSystem system_harmonic_oscillator(
    const std::map<std::string, double>& overrides = {}) {
  HamiltonianSystem sys;
  sys.name = "harmonic_oscillator";
  sys.dim = 2;
  sys.params = detail::resolve_params({}, overrides, sys.name);
  sys.hamiltonian = make_scalar_field(
      [](const auto& st) { return 0.5 * (st[1] * st[1] + st[0] * st[0]); });
  sys.reference_rhs = [](const std::vector<double>& s) {
    return std::vector<double>{s[1], -s[0]};
  };
  sys.default_chart = "pair";
  sys.default_state = {1.0, 0.0};
  return sys;
}

inline HamiltonianSystem make_system(
    const std::string& name,
    const std::map<std::string, double>& overrides = {}) {
  if (name == "rigid_body") return system_rigid_body(overrides);
  if (name == "heavy_top") return system_heavy_top(overrides);
  if (name == "elroy_beanie") return system_elroy_beanie(overrides);
  if (name == "free_particle") return system_free_particle(overrides);
  if (name == "harmonic_oscillator")
    return system_harmonic_oscillator(overrides);
  throw ConfigError("unknown system name: '" + name + "'");
}

inline std::vector<std::string> system_names() {
  return {"rigid_body", "heavy_top", "elroy_beanie", "free_particle",
          "harmonic_oscillator"};
}

}  // namespace hjint
