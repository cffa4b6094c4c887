#pragma once

// Exhaustive-search reference solvers. They share only the utility functions
// with the closed-form path in best_response.hpp and are used to validate it.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>

#include "openness/best_response.hpp"
#include "openness/core_model.hpp"

namespace openness {

namespace detail {

// Maximize f over n+1 evenly spaced points of [lo, hi] (endpoints included).
// Returns the first maximizer.
template <typename F>
std::pair<double, double> grid_argmax(F&& f, double lo, double hi,
                                      std::size_t n) {
  double best_x = lo;
  double best_v = f(lo);
  for (std::size_t i = 1; i <= n; ++i) {
    const double x = (i == n) ? hi : lo + (hi - lo) * static_cast<double>(i) /
                                              static_cast<double>(n);
    const double v = f(x);
    if (v > best_v) {
      best_v = v;
      best_x = x;
    }
  }
  return {best_x, best_v};
}

inline std::size_t grid_intervals(double lo, double hi, double step) {
  return std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil((hi - lo) / step - 1e-12)));
}

}  // namespace detail

/// Argmax of U_D over alpha1 in [alpha0, alpha0 + 1] by a uniform grid of
/// spacing grid_step followed by one refinement grid around the winner.
/// The gain omega * margin / 2 never exceeds 1/2, so the window suffices.
/// A monotone revenue function other than the identity may be supplied.
inline double specialist_oracle(
    const GameParams& params, double delta, double omega,
    double grid_step = 1e-5,
    const std::function<double(double)>& revenue_fn = {}) {
  const auto utility = [&](double alpha1) {
    const double rev = revenue_fn ? revenue_fn(alpha1) : revenue(alpha1);
    return specialist_share(delta, omega) * rev -
           specialist_cost(params, omega, alpha1);
  };
  const double lo = params.alpha0;
  const double hi = params.alpha0 + 1.0;
  auto [x, v] = detail::grid_argmax(utility, lo, hi,
                                    detail::grid_intervals(lo, hi, grid_step));
  const double rlo = std::max(lo, x - grid_step);
  const double rhi = std::min(hi, x + grid_step);
  if (rhi > rlo) {
    x = detail::grid_argmax(utility, rlo, rhi, 1000).first;
  }
  return x;
}

/// G's best release found by scanning omega over [omega_min, 1] with spacing
/// grid_step (theta inserted exactly), refining around the winner, and
/// comparing against abstention. D answers with its closed-form response.
inline GeneralistResponse generalist_oracle(const GameParams& params,
                                            const Regulation& reg,
                                            double delta,
                                            double grid_step = 1e-4) {
  const auto utility = [&](double omega) {
    return evaluate_release(params, reg, delta, omega).u_g;
  };
  const double lo = params.omega_min;
  const double hi = 1.0;
  auto [x, v] =
      detail::grid_argmax(utility, lo, hi, detail::grid_intervals(lo, hi, grid_step));
  if (reg.theta >= lo && reg.theta <= hi) {
    const double at_theta = utility(reg.theta);
    if (at_theta > v) {
      x = reg.theta;
      v = at_theta;
    }
  }
  // Refine on each side separately so the penalty jump is not smeared.
  for (auto [a, b] : {std::pair{x - grid_step, x}, std::pair{x, x + grid_step}}) {
    a = std::max(a, lo);
    b = std::min(b, hi);
    if (!(b > a)) continue;
    auto [rx, rv] = detail::grid_argmax(utility, a, b, 200);
    if (rv > v) {
      x = rx;
      v = rv;
    }
  }
  if (v < 0.0) return abstention(delta);
  return evaluate_release(params, reg, delta, x);
}

}  // namespace openness
