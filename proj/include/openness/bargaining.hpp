#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "openness/best_response.hpp"
#include "openness/core_model.hpp"

namespace openness {

/// Joint objective maximized by the bargain. The disagreement point is (0, 0).
constexpr double bargaining_objective(BargainingRule rule, double u_g,
                                      double u_d) {
  switch (rule) {
    case BargainingRule::kNash:
      return u_g * u_d;
    case BargainingRule::kVerticalMonopoly:
      return u_g + u_d;
    case BargainingRule::kEgalitarian:
      return std::min(u_g, u_d);
  }
  return 0.0;
}

/// The delta grid {0, step, 2 step, ..., 1}. The last point is exactly 1 even
/// when 1 is not a multiple of step.
inline std::vector<double> delta_grid(double step) {
  const auto n = static_cast<std::size_t>(std::floor(1.0 / step + 1e-9));
  std::vector<double> grid;
  grid.reserve(n + 2);
  for (std::size_t i = 0; i <= n; ++i) {
    grid.push_back(std::min(1.0, static_cast<double>(i) * step));
  }
  if (grid.back() < 1.0) grid.push_back(1.0);
  return grid;
}

inline Equilibrium to_equilibrium(const GeneralistResponse& r,
                                  BargainingRule rule) {
  return {.profile = r.profile, .u_g = r.u_g, .u_d = r.u_d, .rule = rule};
}

/// Subgame-perfect equilibrium with the revenue share chosen by grid search.
/// Objective ties within tol go to the larger delta, then the larger omega.
inline Equilibrium solve_bargain(const GameParams& params,
                                 const Regulation& reg, BargainingRule rule) {
  params.validate();
  reg.validate();
  std::vector<GeneralistResponse> responses;
  std::vector<double> objectives;
  for (double delta : delta_grid(params.delta_step)) {
    responses.push_back(generalist_best_response(params, reg, delta));
    objectives.push_back(
        bargaining_objective(rule, responses.back().u_g, responses.back().u_d));
  }
  const double top = *std::max_element(objectives.begin(), objectives.end());
  std::size_t pick = 0;
  bool found = false;
  for (std::size_t i = 0; i < responses.size(); ++i) {
    if (objectives[i] < top - params.tol) continue;
    if (!found) {
      pick = i;
      found = true;
      continue;
    }
    const auto& cur = responses[i].profile;
    const auto& prev = responses[pick].profile;
    const double cur_omega = cur.omega.value_or(-1.0);
    const double prev_omega = prev.omega.value_or(-1.0);
    if (cur.delta > prev.delta ||
        (cur.delta == prev.delta && cur_omega > prev_omega)) {
      pick = i;
    }
  }
  return to_equilibrium(responses[pick], rule);
}

}  // namespace openness
