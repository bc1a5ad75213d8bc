// SPDX-License-Identifier: MIT
//
// Experiment drivers over the integrators: single trajectories, convergence
// sweeps (global error against the in-repo reference on an h-ladder with a
// least-squares slope fit), and long-horizon drift runs.  All file output
// is CSV with a header row and 17-significant-digit floats, deterministic
// for a fixed config.

#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "hjint/config.hpp"
#include "hjint/error.hpp"
#include "hjint/reference.hpp"
#include "hjint/splitting.hpp"
#include "hjint/stepper.hpp"
#include "hjint/systems.hpp"
#include "hjint/trajectory.hpp"

namespace hjint {

// Least-squares fit of log10(err) = slope * log10(h) + intercept.
// residual_per_decade is the RMS deviation of log10(err) from the fitted
// line; a clean power law stays well under 0.1.
struct PowerLawFit {
  double slope = std::nan("");
  double intercept = std::nan("");
  double residual_per_decade = std::nan("");
};

inline PowerLawFit fit_power_law(const std::vector<double>& hs,
                                 const std::vector<double>& errs) {
  if (hs.size() != errs.size())
    throw ConfigError("power-law fit: mismatched sample counts");
  const int n = static_cast<int>(hs.size());
  if (n < 2) return PowerLawFit{};
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::vector<double> xs(n), ys(n);
  for (int i = 0; i < n; ++i) {
    if (!(hs[i] > 0.0) || !(errs[i] > 0.0))
      throw ConfigError("power-law fit: samples must be positive");
    xs[i] = std::log10(hs[i]);
    ys[i] = std::log10(errs[i]);
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  PowerLawFit fit;
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = ys[i] - (fit.slope * xs[i] + fit.intercept);
    ss += d * d;
  }
  fit.residual_per_decade = std::sqrt(ss / n);
  return fit;
}

namespace detail {

inline std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out)
    throw ConfigError("cannot open output file '" + path + "'");
  return out;
}

}  // namespace detail

// Trajectory CSV: step, t, coord_0..coord_{d-1}, energy, casimir_0..,
// newton_iters.
inline void write_trajectory_csv(std::ostream& out,
                                 const TrajectoryRecord& rec) {
  const size_t dim = rec.states.empty() ? 0 : rec.states[0].coords.size();
  const size_t n_cas = rec.casimirs.empty() ? 0 : rec.casimirs[0].size();
  out << "step,t";
  for (size_t i = 0; i < dim; ++i) out << ",coord_" << i;
  out << ",energy";
  for (size_t i = 0; i < n_cas; ++i) out << ",casimir_" << i;
  out << ",newton_iters\n";
  for (size_t i = 0; i < rec.size(); ++i) {
    out << i << ',' << detail::fmt17(rec.times[i]);
    for (double x : rec.states[i].coords) out << ',' << detail::fmt17(x);
    out << ',' << detail::fmt17(rec.energy[i]);
    for (double c : rec.casimirs[i]) out << ',' << detail::fmt17(c);
    out << ',' << rec.newton_iters[i] << '\n';
  }
}

inline void write_trajectory_csv(const std::string& path,
                                 const TrajectoryRecord& rec) {
  std::ofstream out = detail::open_output(path);
  write_trajectory_csv(out, rec);
}

// One summary line per run.  Fields that a given driver does not compute
// (e.g. the slope for a single trajectory) are written as nan.
struct SummaryRow {
  int order_k = 0;
  double step_h = 0.0;
  double t_final = 0.0;
  double global_error = std::nan("");
  double fitted_slope = std::nan("");
  double fit_residual = std::nan("");
  double max_energy_dev = 0.0;
  double max_casimir_dev = 0.0;
  double energy_half_ratio = 0.0;
};

inline void write_summary_csv(std::ostream& out,
                              const std::vector<SummaryRow>& rows) {
  out << "order_k,step_h,t_final,global_error,fitted_slope,fit_residual,"
         "max_energy_dev,max_casimir_dev,energy_half_ratio\n";
  for (const SummaryRow& r : rows) {
    out << r.order_k << ',' << detail::fmt17(r.step_h) << ','
        << detail::fmt17(r.t_final) << ',' << detail::fmt17(r.global_error)
        << ',' << detail::fmt17(r.fitted_slope) << ','
        << detail::fmt17(r.fit_residual) << ','
        << detail::fmt17(r.max_energy_dev) << ','
        << detail::fmt17(r.max_casimir_dev) << ','
        << detail::fmt17(r.energy_half_ratio) << '\n';
  }
}

inline void write_summary_csv(const std::string& path,
                              const std::vector<SummaryRow>& rows) {
  std::ofstream out = detail::open_output(path);
  write_summary_csv(out, rows);
}

inline double max_energy_deviation(const TrajectoryRecord& rec) {
  if (rec.energy.empty()) return 0.0;
  const double e0 = rec.energy.front();
  double worst = 0.0;
  for (double e : rec.energy) worst = std::max(worst, std::abs(e - e0));
  return worst;
}

inline double max_casimir_deviation(const TrajectoryRecord& rec) {
  if (rec.casimirs.empty()) return 0.0;
  double worst = 0.0;
  for (size_t c = 0; c < rec.casimirs[0].size(); ++c) {
    const double c0 = rec.casimirs[0][c];
    for (const auto& cs : rec.casimirs)
      worst = std::max(worst, std::abs(cs[c] - c0));
  }
  return worst;
}

// Drift statistic: max |H - H0| over the second half of the samples divided
// by the max over the first half.  A drift-free (quasi-periodic) energy
// error keeps this ratio near 1; secular growth pushes it up.
inline double energy_half_ratio(const TrajectoryRecord& rec) {
  const size_t n = rec.energy.size();
  if (n == 0) return 1.0;
  const double e0 = rec.energy.front();
  const size_t mid = n / 2;
  double first = 0.0, second = 0.0;
  for (size_t i = 0; i < mid; ++i)
    first = std::max(first, std::abs(rec.energy[i] - e0));
  for (size_t i = mid; i < n; ++i)
    second = std::max(second, std::abs(rec.energy[i] - e0));
  if (first == 0.0) return second == 0.0 ? 1.0 : HUGE_VAL;
  return second / first;
}

namespace detail {

inline double euclidean_distance(const std::vector<double>& a,
                                 const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace detail

// Reference tolerance used for global-error comparisons.
inline constexpr double kExperimentReferenceTol = 1e-12;

// Run one trajectory described by the config, overriding order/step/horizon
// (sweeps vary these around a fixed base config).
inline TrajectoryRecord run_trajectory(const ExperimentConfig& cfg,
                                       int order_k, double step_h,
                                       double t_final) {
  HamiltonianSystem sys = make_system(cfg.system, cfg.params);
  const std::vector<double> state0 =
      cfg.initial_state.empty() ? sys.default_state : cfg.initial_state;
  if (cfg.method == Method::kSplit) {
    if (cfg.system != "rigid_body")
      throw ConfigError(
          "method 'split' supports only the rigid body (got '" + cfg.system +
          "')");
    return split_integrate(sys.params.at("I1"), sys.params.at("I2"),
                           sys.params.at("I3"), step_h, state0, t_final,
                           cfg.split_variant, cfg.split_ordering);
  }
  GroupoidChart chart =
      make_chart(cfg.chart.empty() ? sys.default_chart : cfg.chart);
  IntegratorConfig icfg = cfg.integrator;
  icfg.order_k = order_k;
  icfg.step_h = step_h;
  icfg.p_degree = cfg.integrator.p_degree < 0
                      ? -1
                      : std::max(cfg.integrator.p_degree, order_k + 2);
  return integrate(chart, sys, icfg, state0, t_final);
}

inline SummaryRow summarize(const ExperimentConfig& cfg, int order_k,
                            double step_h, double t_final,
                            const TrajectoryRecord& rec,
                            bool against_reference) {
  SummaryRow row;
  row.order_k = order_k;
  row.step_h = step_h;
  row.t_final = t_final;
  if (against_reference) {
    HamiltonianSystem sys = make_system(cfg.system, cfg.params);
    const std::vector<double> state0 =
        cfg.initial_state.empty() ? sys.default_state : cfg.initial_state;
    const std::vector<double> ref =
        reference_endpoint(sys, state0, t_final, kExperimentReferenceTol);
    row.global_error =
        detail::euclidean_distance(rec.states.back().coords, ref);
  }
  row.max_energy_dev = max_energy_deviation(rec);
  row.max_casimir_dev = max_casimir_deviation(rec);
  row.energy_half_ratio = energy_half_ratio(rec);
  return row;
}

struct SimulateResult {
  TrajectoryRecord record;
  SummaryRow row;
};

// One trajectory at the config's own (order_k, step_h, t_final); writes the
// trajectory and a one-row summary to whichever output paths are set.
inline SimulateResult run_simulate(const ExperimentConfig& cfg) {
  SimulateResult res;
  res.record = run_trajectory(cfg, cfg.integrator.order_k,
                              cfg.integrator.step_h, cfg.t_final);
  res.row = summarize(cfg, cfg.integrator.order_k, cfg.integrator.step_h,
                      cfg.t_final, res.record, true);
  if (!cfg.outputs.trajectory_csv.empty())
    write_trajectory_csv(cfg.outputs.trajectory_csv, res.record);
  if (!cfg.outputs.summary_csv.empty())
    write_summary_csv(cfg.outputs.summary_csv, {res.row});
  return res;
}

struct ConvergeResult {
  std::vector<SummaryRow> rows;  // orders outer, step sizes inner
};

// Global-error ladder: for each order, run every step size, fit the
// log-log slope across the ladder, and emit one summary row per run (slope
// and fit residual repeated on each row of the same order).  Only the
// summary file is written; per-run trajectories are not retained.
inline ConvergeResult run_converge(const ExperimentConfig& cfg,
                                   const std::vector<int>& orders,
                                   const std::vector<double>& hs) {
  if (orders.empty() || hs.empty())
    throw ConfigError("converge: need at least one order and one step size");
  ConvergeResult res;
  for (int k : orders) {
    std::vector<SummaryRow> block;
    std::vector<double> errs;
    for (double h : hs) {
      TrajectoryRecord rec = run_trajectory(cfg, k, h, cfg.t_final);
      SummaryRow row = summarize(cfg, k, h, cfg.t_final, rec, true);
      errs.push_back(row.global_error);
      block.push_back(row);
    }
    bool fittable = hs.size() >= 2;
    for (double e : errs)
      if (!(e > 0.0)) fittable = false;  // roundoff-floor runs break the fit
    if (fittable) {
      const PowerLawFit fit = fit_power_law(hs, errs);
      for (SummaryRow& row : block) {
        row.fitted_slope = fit.slope;
        row.fit_residual = fit.residual_per_decade;
      }
    }
    for (SummaryRow& row : block) res.rows.push_back(row);
  }
  if (!cfg.outputs.summary_csv.empty())
    write_summary_csv(cfg.outputs.summary_csv, res.rows);
  return res;
}

// Long-horizon conservation run at the config's (order_k, step_h).  The
// global error against the reference is skipped (a reference solve over the
// drift horizon is expensive and the statistic of interest is drift).
inline SimulateResult run_drift(const ExperimentConfig& cfg,
                                std::optional<double> t_final_override) {
  const double t_final = t_final_override.value_or(cfg.t_final);
  SimulateResult res;
  res.record = run_trajectory(cfg, cfg.integrator.order_k,
                              cfg.integrator.step_h, t_final);
  res.row = summarize(cfg, cfg.integrator.order_k, cfg.integrator.step_h,
                      t_final, res.record, false);
  if (!cfg.outputs.trajectory_csv.empty())
    write_trajectory_csv(cfg.outputs.trajectory_csv, res.record);
  if (!cfg.outputs.summary_csv.empty())
    write_summary_csv(cfg.outputs.summary_csv, {res.row});
  return res;
}

// Config-file entry point: load, run one simulation, write outputs.
// Returns 0; failures surface as exceptions for the caller to map to exit
// codes.
inline int run_experiment(const std::string& config_path) {
  run_simulate(load_config(config_path));
  return 0;
}

}  // namespace hjint
