#pragma once

// Backward induction for a fixed revenue share delta: D's closed-form
// fine-tuning response, then G's openness choice over a finite candidate set.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "openness/core_model.hpp"

namespace openness {

/// Symbolic marker for the analytic limit omega -> 0+.
struct OmegaLimitZero {};
inline constexpr OmegaLimitZero kOmegaLimitZero{};

/// D's chosen performance; empty when D abstains.
struct SpecialistResponse {
  std::optional<double> alpha1;

  [[nodiscard]] bool abstains() const { return !alpha1.has_value(); }
};

/// Coefficients of A*w^2 + B*w + C, the derivative of G's penalty-free
/// utility once D's best response has been substituted for alpha1.
struct QuadraticCoefficients {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

/// D's net marginal share of revenue at alpha1 = alpha0. Evaluated in product
/// form so no division by (c_omega - delta) is ever needed.
constexpr double participation_margin(double delta, double omega,
                                      double c_omega) {
  return 1.0 - delta * (1.0 - omega) - c_omega * omega;
}

constexpr bool specialist_participates(double delta, double omega,
                                       double c_omega) {
  return participation_margin(delta, omega, c_omega) >= 0.0;
}

inline SpecialistResponse specialist_best_response(const GameParams& params,
                                                   double delta, double omega) {
  const double margin = participation_margin(delta, omega, params.c_omega);
  if (margin < 0.0) return {};
  return {params.alpha0 + omega * margin / 2.0};
}

inline SpecialistResponse specialist_best_response(const GameParams& params,
                                                   double /*delta*/,
                                                   OmegaLimitZero) {
  return {params.alpha0};
}

// Write alpha1*(w) = alpha0 + ((1-delta) w + (delta-c) w^2) / 2 and
// U_G(w) = ((eps-delta+c) w + (delta-c)) alpha1*(w) - alpha0 w - c alpha1*(w)
// once the constant operation term is folded in. Differentiating gives the
// coefficients below.
inline QuadraticCoefficients quadratic_coefficients(const GameParams& params,
                                                    double delta) {
  const double slope = params.eps - delta + params.c_omega;
  const double level = delta - params.c_omega;
  return {
      .a = 1.5 * slope * level,
      .b = slope * (1.0 - delta) + level * level,
      .c = (slope - 1.0) * params.alpha0 + level * (1.0 - delta) / 2.0,
  };
}

/// Real roots of A w^2 + B w + C = 0 (linear when A vanishes). No roots are
/// returned when A = B = 0.
inline std::vector<double> stationary_points(const QuadraticCoefficients& q,
                                             double tol) {
  std::vector<double> roots;
  if (std::abs(q.a) <= tol) {
    if (std::abs(q.b) > tol) roots.push_back(-q.c / q.b);
    return roots;
  }
  const double disc = q.b * q.b - 4.0 * q.a * q.c;
  if (disc < 0.0) return roots;
  // Cancellation-free form of the quadratic formula.
  const double s = -0.5 * (q.b + std::copysign(std::sqrt(disc), q.b));
  if (s != 0.0) {
    roots.push_back(s / q.a);
    roots.push_back(q.c / s);
  } else {
    roots.push_back(0.0);
  }
  return roots;
}

/// Openness at which D's participation margin reaches zero, if such a point
/// lies in (0, 1). Only possible when c_omega > 1.
inline std::optional<double> participation_boundary(double delta,
                                                    double c_omega) {
  if (!(c_omega > delta)) return std::nullopt;
  const double bound = (1.0 - delta) / (c_omega - delta);
  if (bound > 0.0 && bound < 1.0) return bound;
  return std::nullopt;
}

/// G's openness candidates for a fixed delta. std::nullopt is the abstain
/// option and is always the last element; numeric entries are sorted
/// ascending and de-duplicated within params.tol.
inline std::vector<std::optional<double>> generalist_candidates(
    const GameParams& params, const Regulation& reg, double delta) {
  std::vector<double> values{params.omega_min, 1.0};
  if (reg.theta >= params.omega_min && reg.theta <= 1.0) {
    values.push_back(reg.theta);
  }
  for (double root :
       stationary_points(quadratic_coefficients(params, delta), params.tol)) {
    if (root > params.omega_min && root <= 1.0) values.push_back(root);
  }
  if (auto bound = participation_boundary(delta, params.c_omega);
      bound && *bound > params.omega_min) {
    values.push_back(*bound);
  }
  std::sort(values.begin(), values.end());
  std::vector<std::optional<double>> out;
  for (double v : values) {
    if (!out.empty() && std::abs(v - *out.back()) <= params.tol) {
      // Keep exact boundary values (theta, 1) over nearby roots.
      if (v == reg.theta || v == 1.0) out.back() = v;
      continue;
    }
    out.emplace_back(v);
  }
  out.emplace_back(std::nullopt);
  return out;
}

struct GeneralistResponse {
  StrategyProfile profile;
  double u_g = 0.0;
  double u_d = 0.0;
};

/// Outcome of G releasing at a given openness, with D responding optimally.
/// If D abstains, G still serves the base model: U_G is evaluated at
/// alpha1 = alpha0 and U_D = 0.
inline GeneralistResponse evaluate_release(const GameParams& params,
                                           const Regulation& reg, double delta,
                                           double omega) {
  GeneralistResponse out;
  out.profile.delta = delta;
  out.profile.omega = omega;
  const SpecialistResponse d = specialist_best_response(params, delta, omega);
  if (d.abstains()) {
    out.u_g = generalist_utility(params, reg, delta, omega, params.alpha0);
    out.u_d = 0.0;
    return out;
  }
  out.profile.alpha1 = d.alpha1;
  out.u_g = generalist_utility(params, reg, delta, omega, *d.alpha1);
  out.u_d = specialist_utility(params, delta, omega, *d.alpha1);
  return out;
}

inline GeneralistResponse abstention(double delta) {
  GeneralistResponse out;
  out.profile.delta = delta;
  return out;
}

/// G's utility-maximizing release for a fixed delta. Ties within tol go to
/// the larger openness. G abstains iff every candidate yields U_G < 0.
inline GeneralistResponse generalist_best_response(const GameParams& params,
                                                   const Regulation& reg,
                                                   double delta) {
  std::vector<GeneralistResponse> releases;
  for (const auto& candidate : generalist_candidates(params, reg, delta)) {
    if (candidate) {
      releases.push_back(evaluate_release(params, reg, delta, *candidate));
    }
  }
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& r : releases) top = std::max(top, r.u_g);
  if (releases.empty() || top < 0.0) return abstention(delta);
  // Releases are in ascending omega; take the last one tied with the max.
  auto it = std::find_if(releases.rbegin(), releases.rend(), [&](const auto& r) {
    return r.u_g >= top - params.tol;
  });
  return *it;
}

}  // namespace openness
