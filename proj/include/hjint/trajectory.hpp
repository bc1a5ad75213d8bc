// SPDX-License-Identifier: MIT
//
// Shared trajectory containers used by the Poisson stepper and the
// reference solver.

#pragma once

#include <string>
#include <vector>

namespace hjint {

struct PoissonState {
  std::string system_name;
  std::vector<double> coords;
};

// One recorded trajectory: per-sample times, states, energy, Casimir values
// (one inner vector per sample, one entry per declared Casimir), and Newton
// iteration counts (zero for non-iterative producers such as the reference
// solver). All outer vectors share their length.
struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<PoissonState> states;
  std::vector<double> energy;
  std::vector<std::vector<double>> casimirs;
  std::vector<int> newton_iters;

  size_t size() const { return times.size(); }
};

}  // namespace hjint
