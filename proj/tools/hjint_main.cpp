// SPDX-License-Identifier: MIT
//
// Benchmark CLI: simulate / converge / drift drive the experiment layer
// from a JSON config; selftest runs quick built-in sanity suites.
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hjint/chart.hpp"
#include "hjint/config.hpp"
#include "hjint/experiment.hpp"
#include "hjint/jet.hpp"
#include "hjint/stepper.hpp"
#include "hjint/systems.hpp"

namespace {

void print_rows(const std::vector<hjint::SummaryRow>& rows) {
  for (const auto& r : rows) {
    std::printf(
        "order_k=%d h=%g T=%g global_error=%.6g slope=%.4g energy_dev=%.6g "
        "casimir_dev=%.6g\n",
        r.order_k, r.step_h, r.t_final, r.global_error, r.fitted_slope,
        r.max_energy_dev, r.max_casimir_dev);
  }
}

int checks_run = 0;

void expect(bool ok, const std::string& what) {
  ++checks_run;
  if (!ok) throw hjint::Error("selftest failed: " + what);
}

// Quick product check: jet multiplication against a direct convolution over
// the layout's exponent table.
void selftest_jets() {
  using hjint::Jet;
  using hjint::JetLayout;
  const int n = 3, cap = 3;
  unsigned long s = 12345;
  auto next = [&s]() {
    s = s * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<double>(s >> 11) / 9007199254740992.0 - 0.5;
  };
  Jet a = Jet::constant(0.0, n, cap);
  Jet b = Jet::constant(0.0, n, cap);
  const JetLayout& L = a.layout();
  std::vector<double> ac(L.size()), bc(L.size());
  for (int r = 0; r < L.size(); ++r) {
    ac[r] = next();
    bc[r] = next();
    std::vector<int> e(L.exponents(r).begin(), L.exponents(r).begin() + n);
    a.set_coeff(e, ac[r]);
    b.set_coeff(e, bc[r]);
  }
  Jet prod = a * b;
  for (int r = 0; r < L.size(); ++r) {
    double want = 0.0;
    for (int r1 = 0; r1 < L.size(); ++r1) {
      for (int r2 = 0; r2 < L.size(); ++r2) {
        bool match = true;
        for (int v = 0; v < n; ++v)
          if (L.exponents(r1)[v] + L.exponents(r2)[v] != L.exponents(r)[v])
            match = false;
        if (match) want += ac[r1] * bc[r2];
      }
    }
    expect(std::abs(prod.coefficients()[r] - want) <= 1e-12 * (1.0 + std::abs(want)),
           "jet product convolution");
  }

  // First derivative of sin against a central finite difference.
  const double x0 = 0.37;
  Jet x = Jet::variable(0, x0, 1, 3);
  Jet sx = sin(x);
  const double eps = 1e-6;
  const double fd = (std::sin(x0 + eps) - std::sin(x0 - eps)) / (2.0 * eps);
  expect(std::abs(sx.coeff({1}) - fd) <= 1e-9, "jet sin derivative");
  Jet rx = (x * x + 1.0).reciprocal();
  const double rd = (1.0 / ((x0 + eps) * (x0 + eps) + 1.0) -
                     1.0 / ((x0 - eps) * (x0 - eps) + 1.0)) /
                    (2.0 * eps);
  expect(std::abs(rx.coeff({1}) - rd) <= 1e-9, "jet reciprocal derivative");
}

// Chart identity bisections: construction re-runs each chart's internal
// self-test; on top of that, check the permutation round trip and that a
// zero-width step is the identity under a generic quadratic Hamiltonian.
void selftest_charts() {
  for (const std::string& name : hjint::chart_names()) {
    hjint::GroupoidChart chart = hjint::make_chart(name);
    std::vector<double> state(chart.dim_state);
    for (int i = 0; i < chart.dim_state; ++i)
      state[i] = 0.1 + 0.07 * static_cast<double>(i);
    std::vector<double> round =
        chart.apply_sigma_inverse(chart.apply_sigma(state));
    for (int i = 0; i < chart.dim_state; ++i)
      expect(round[i] == state[i], name + ": permutation round trip");

    hjint::ScalarField quad = hjint::make_scalar_field([](const auto& st) {
      auto acc = st[0] * st[0];
      for (size_t i = 1; i < st.size(); ++i) acc = acc + st[i] * st[i];
      return acc * 0.5;
    });
    hjint::IntegratorConfig cfg;
    cfg.order_k = 2;
    cfg.step_h = 0.0;
    hjint::Stepper stepper(chart, quad, cfg);
    std::vector<double> out = stepper.step(state);
    for (int i = 0; i < chart.dim_state; ++i)
      expect(std::abs(out[i] - state[i]) <= 1e-12,
             name + ": zero-step identity");
  }

  // Built-in systems: scalar genericity (real vs degree-0 jet) and Casimir
  // invariance along the reference field at one probe state.
  for (const std::string& name : hjint::system_names()) {
    hjint::HamiltonianSystem sys = hjint::make_system(name);
    const std::vector<double>& st = sys.default_state;
    std::vector<hjint::Jet> stj;
    for (double x : st)
      stj.push_back(
          hjint::Jet::constant(x, static_cast<int>(st.size()), 0));
    expect(sys.hamiltonian.real(st) ==
               sys.hamiltonian.jet(stj).constant_term(),
           name + ": scalar genericity");
    const std::vector<double> rhs = sys.reference_rhs(st);
    for (size_t c = 0; c < sys.casimirs.size(); ++c) {
      std::vector<hjint::Jet> v;
      for (size_t i = 0; i < st.size(); ++i)
        v.push_back(hjint::Jet::variable(static_cast<int>(i), st[i],
                                         static_cast<int>(st.size()), 1));
      hjint::Jet cj = sys.casimirs[c].jet(v);
      double dot = 0.0;
      for (size_t i = 0; i < st.size(); ++i) {
        std::vector<int> e(st.size(), 0);
        e[i] = 1;
        dot += cj.coeff(e) * rhs[i];
      }
      expect(std::abs(dot) <= 1e-10, name + ": casimir invariance");
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Poisson integrator benchmarks from generating functions"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<int> orders;
  std::vector<double> hs;
  double t_final_flag = 0.0;

  CLI::App* sim = app.add_subcommand(
      "simulate", "run one trajectory described by a JSON config");
  sim->add_option("--config", config_path, "path to the JSON config")
      ->required();

  CLI::App* conv = app.add_subcommand(
      "converge", "global-error ladder with a log-log slope fit");
  conv->add_option("--config", config_path, "path to the JSON config")
      ->required();
  conv->add_option("--orders", orders, "comma-separated truncation orders")
      ->delimiter(',');
  conv->add_option("--hs", hs, "comma-separated step sizes")->delimiter(',');

  CLI::App* drift = app.add_subcommand(
      "drift", "long-horizon conservation run");
  drift->add_option("--config", config_path, "path to the JSON config")
      ->required();
  CLI::Option* tf_opt = drift->add_option(
      "--t-final", t_final_flag, "override the config's time horizon");

  CLI::App* selftest = app.add_subcommand(
      "selftest", "run built-in jet and chart sanity suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (sim->parsed()) {
      hjint::SimulateResult res =
          hjint::run_simulate(hjint::load_config(config_path));
      print_rows({res.row});
    } else if (conv->parsed()) {
      hjint::ExperimentConfig cfg = hjint::load_config(config_path);
      if (orders.empty()) orders = {cfg.integrator.order_k};
      if (hs.empty()) hs = {cfg.integrator.step_h};
      hjint::ConvergeResult res = hjint::run_converge(cfg, orders, hs);
      print_rows(res.rows);
    } else if (drift->parsed()) {
      std::optional<double> override_t;
      if (tf_opt->count() > 0) override_t = t_final_flag;
      hjint::SimulateResult res =
          hjint::run_drift(hjint::load_config(config_path), override_t);
      print_rows({res.row});
    } else if (selftest->parsed()) {
      selftest_jets();
      selftest_charts();
      std::printf("selftest passed (%d checks)\n", checks_run);
    }
  } catch (const hjint::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const hjint::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
