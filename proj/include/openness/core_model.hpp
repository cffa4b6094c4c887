#pragma once

// Domain types and the utility/cost functions of the generalist/specialist
// openness game.
//
// The generalist G releases a base model of performance alpha0 at openness
// omega in [0, 1]. The specialist D fine-tunes it to alpha1 >= alpha0. The
// closed-channel revenue is split by the bargained share delta. A regulator
// charges G a penalty p whenever omega falls strictly below the open-source
// threshold theta.

#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "openness/errors.hpp"

namespace openness {

struct GameParams {
  double alpha0 = 0.1;
  double eps = 0.1;
  double c_omega = 0.05;
  // Openness used for the "fully closed" release. omega = 0 itself is not a
  // playable strategy for D (its production cost diverges).
  double omega_min = 0.01;
  double delta_step = 0.01;
  double tol = 1e-9;

  void validate() const {
    if (!(alpha0 > 0.0) || !std::isfinite(alpha0)) {
      throw ValidationError("alpha0 must be a finite value > 0");
    }
    if (!(eps >= 0.0 && eps <= 1.0)) {
      throw ValidationError("eps must lie in [0,1]");
    }
    if (!(c_omega >= 0.0) || !std::isfinite(c_omega)) {
      throw ValidationError("c_omega must be a finite value >= 0");
    }
    if (!(omega_min > 0.0 && omega_min <= 1.0)) {
      throw ValidationError("omega_min must lie in (0,1]");
    }
    if (!(delta_step > 0.0 && delta_step <= 0.5)) {
      throw ValidationError("delta_step must lie in (0,0.5]");
    }
    if (!(tol > 0.0) || !std::isfinite(tol)) {
      throw ValidationError("tol must be a finite value > 0");
    }
  }
};

/// A regulatory profile. penalty == 0 is the unregulated baseline.
struct Regulation {
  double theta = 0.0;
  double penalty = 0.0;

  void validate() const {
    if (!(theta >= 0.0 && theta <= 1.0)) {
      throw ValidationError("theta must lie in [0,1]");
    }
    if (!(penalty >= 0.0) || !std::isfinite(penalty)) {
      throw ValidationError("penalty must be a finite value >= 0");
    }
  }

  [[nodiscard]] bool penalizes(double omega) const { return omega < theta; }
};

enum class BargainingRule { kNash, kVerticalMonopoly, kEgalitarian };

enum class Region {
  kCompliant,
  kClosedDeadweight,
  kGeneralistAbstains,
  kSpecialistAbstains,
  kParetoImproving,
  kOpenUnregulated,
  // Cell whose parameters failed validation inside a sweep.
  kInvalid,
};

/// Solved strategies. An empty omega means G withheld the model; an empty
/// alpha1 means D declined to adopt it (always the case when G abstains).
struct StrategyProfile {
  double delta = 0.0;
  std::optional<double> omega;
  std::optional<double> alpha1;

  [[nodiscard]] bool generalist_abstains() const { return !omega.has_value(); }
  [[nodiscard]] bool specialist_abstains() const { return !alpha1.has_value(); }
};

struct Equilibrium {
  StrategyProfile profile;
  double u_g = 0.0;
  double u_d = 0.0;
  BargainingRule rule = BargainingRule::kNash;
  std::optional<Region> region;
};

inline std::string_view to_string(BargainingRule rule) {
  switch (rule) {
    case BargainingRule::kNash:
      return "nash";
    case BargainingRule::kVerticalMonopoly:
      return "vm";
    case BargainingRule::kEgalitarian:
      return "egalitarian";
  }
  return "unknown";
}

inline BargainingRule parse_rule(std::string_view text) {
  if (text == "nash") return BargainingRule::kNash;
  if (text == "vm") return BargainingRule::kVerticalMonopoly;
  if (text == "egalitarian") return BargainingRule::kEgalitarian;
  throw ValidationError("rule must be one of nash|vm|egalitarian, got '" +
                        std::string(text) + "'");
}

inline std::string_view to_string(Region region) {
  switch (region) {
    case Region::kCompliant:
      return "COMPLIANT";
    case Region::kClosedDeadweight:
      return "CLOSED_DEADWEIGHT";
    case Region::kGeneralistAbstains:
      return "G_ABSTAIN";
    case Region::kSpecialistAbstains:
      return "D_ABSTAIN";
    case Region::kParetoImproving:
      return "PARETO_IMPROVING";
    case Region::kOpenUnregulated:
      return "OPEN_UNREGULATED";
    case Region::kInvalid:
      return "INVALID";
  }
  return "UNKNOWN";
}

inline Region parse_region(std::string_view text) {
  for (auto r : {Region::kCompliant, Region::kClosedDeadweight,
                 Region::kGeneralistAbstains, Region::kSpecialistAbstains,
                 Region::kParetoImproving, Region::kOpenUnregulated,
                 Region::kInvalid}) {
    if (to_string(r) == text) return r;
  }
  throw ValidationError("unknown region tag '" + std::string(text) + "'");
}

// Revenue is the identity in performance.
constexpr double revenue(double alpha1) { return alpha1; }

// Serving cost split by who operates the model: G runs the closed part,
// D runs the open part.
constexpr double generalist_operation_cost(double c_omega, double omega,
                                           double alpha1) {
  return c_omega * alpha1 * (1.0 - omega);
}

constexpr double specialist_operation_cost(double c_omega, double omega,
                                           double alpha1) {
  return c_omega * alpha1 * omega;
}

/// Production + operation + regulatory cost of G.
inline double generalist_cost(const GameParams& params, const Regulation& reg,
                              double omega, double alpha1) {
  const double production = params.alpha0 * omega;
  const double operation =
      generalist_operation_cost(params.c_omega, omega, alpha1);
  const double regulatory = reg.penalizes(omega) ? reg.penalty : 0.0;
  return production + operation + regulatory;
}

/// Production + operation cost of D. Throws DomainError at omega <= 0, where
/// the production term diverges.
inline double specialist_cost(const GameParams& params, double omega,
                              double alpha1) {
  if (!(omega > 0.0)) {
    throw DomainError("specialist_cost requires omega > 0");
  }
  const double gain = alpha1 - params.alpha0;
  return gain * gain / omega +
         specialist_operation_cost(params.c_omega, omega, alpha1);
}

/// G's fraction of revenue: the reputational benefit on the open part plus
/// the bargained share of the closed part.
constexpr double generalist_share(double eps, double delta, double omega) {
  return eps * omega + delta * (1.0 - omega);
}

constexpr double specialist_share(double delta, double omega) {
  return 1.0 - delta * (1.0 - omega);
}

inline double generalist_utility(const GameParams& params,
                                 const Regulation& reg, double delta,
                                 double omega, double alpha1) {
  return generalist_share(params.eps, delta, omega) * revenue(alpha1) -
         generalist_cost(params, reg, omega, alpha1);
}

inline double specialist_utility(const GameParams& params, double delta,
                                 double omega, double alpha1) {
  return specialist_share(delta, omega) * revenue(alpha1) -
         specialist_cost(params, omega, alpha1);
}

}  // namespace openness
