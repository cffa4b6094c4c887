#pragma once

// Maps regulation space (and other two-parameter slices) into equilibrium
// outcomes and region labels, locates the generalist's indifference boundary,
// and scans for Pareto-optimal policies.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "openness/bargaining.hpp"
#include "openness/core_model.hpp"

namespace openness {

/// Penalty at which G is indifferent between closing (omega -> 0) and meeting
/// theta, holding delta and alpha1 fixed. Negative means compliance dominates
/// at every penalty.
inline double indifference_penalty(double theta, double delta, double alpha0,
                                   double alpha1, double eps, double c_omega) {
  if (alpha1 == 0.0) {
    throw DivisionError("indifference_penalty requires alpha1 != 0");
  }
  return theta * (delta + alpha0 / alpha1 - eps - c_omega) * alpha1;
}

/// True when G releases at or above the threshold.
inline bool complies(const Equilibrium& eq, const Regulation& reg) {
  return eq.profile.omega.has_value() && *eq.profile.omega >= reg.theta;
}

/// Smallest penalty in [0, p_max] at which the full equilibrium (delta and
/// alpha1 endogenous) meets theta, located by bisection to within tol_p. The
/// returned value is the compliant end of the final bracket. Returns 0 when G
/// already meets theta unregulated and std::nullopt when even p_max fails.
inline std::optional<double> indifference_boundary_numeric(
    const GameParams& params, BargainingRule rule, double theta, double p_max,
    double tol_p = 1e-4) {
  if (!(p_max > 0.0)) throw ValidationError("p_max must be > 0");
  if (!(tol_p > 0.0)) throw ValidationError("tol_p must be > 0");
  const auto meets = [&](double p) {
    const Regulation reg{theta, p};
    return complies(solve_bargain(params, reg, rule), reg);
  };
  if (theta == 0.0 || meets(0.0)) return 0.0;
  if (!meets(p_max)) return std::nullopt;
  double lo = 0.0;
  double hi = p_max;
  while (hi - lo > tol_p) {
    const double mid = 0.5 * (lo + hi);
    (meets(mid) ? hi : lo) = mid;
  }
  return hi;
}

namespace detail {

inline double outcome_omega(const Equilibrium& eq) {
  return eq.profile.omega.value_or(0.0);
}
inline double outcome_alpha1(const Equilibrium& eq) {
  return eq.profile.alpha1.value_or(0.0);
}

}  // namespace detail

/// Labels one regulated outcome against the unregulated baseline. Abstentions
/// count as zero openness, performance and utility in the comparison.
inline Region classify_cell(const Equilibrium& eq, const Regulation& reg,
                            const Equilibrium& baseline) {
  if (eq.profile.generalist_abstains()) return Region::kGeneralistAbstains;
  if (eq.profile.specialist_abstains()) return Region::kSpecialistAbstains;
  if (reg.penalty == 0.0) return Region::kOpenUnregulated;
  if (!complies(eq, reg)) return Region::kClosedDeadweight;
  const bool improves =
      detail::outcome_omega(eq) > detail::outcome_omega(baseline) &&
      detail::outcome_alpha1(eq) > detail::outcome_alpha1(baseline) &&
      eq.u_g > baseline.u_g && eq.u_d > baseline.u_d;
  return improves ? Region::kParetoImproving : Region::kCompliant;
}

/// Unregulated reference equilibrium. theta has no effect without a penalty,
/// so it is pinned to 0.
inline Equilibrium solve_baseline(const GameParams& params,
                                  BargainingRule rule) {
  return solve_bargain(params, Regulation{0.0, 0.0}, rule);
}

// ---------------------------------------------------------------------------
// Sweeps

enum class SweepParam { kAlpha0, kEps, kCOmega, kTheta, kPenalty };

inline std::string_view to_string(SweepParam p) {
  switch (p) {
    case SweepParam::kAlpha0:
      return "alpha0";
    case SweepParam::kEps:
      return "eps";
    case SweepParam::kCOmega:
      return "c_omega";
    case SweepParam::kTheta:
      return "theta";
    case SweepParam::kPenalty:
      return "penalty";
  }
  return "unknown";
}

inline SweepParam parse_sweep_param(std::string_view text) {
  for (auto p : {SweepParam::kAlpha0, SweepParam::kEps, SweepParam::kCOmega,
                 SweepParam::kTheta, SweepParam::kPenalty}) {
    if (to_string(p) == text) return p;
  }
  throw ValidationError(
      "sweep axis must be one of alpha0|eps|c_omega|theta|penalty, got '" +
      std::string(text) + "'");
}

struct Axis {
  SweepParam param = SweepParam::kPenalty;
  double min = 0.0;
  double max = 1.0;
  std::size_t steps = 101;

  [[nodiscard]] double value(std::size_t i) const {
    if (i + 1 == steps) return max;
    return min + (max - min) * static_cast<double>(i) /
                     static_cast<double>(steps - 1);
  }
};

struct SweepSpec {
  // Penalty on the horizontal axis and threshold on the vertical one, so that
  // "above the indifference curve" means non-compliance.
  Axis x{SweepParam::kPenalty, 0.0, 0.2, 101};
  Axis y{SweepParam::kTheta, 0.0, 1.0, 101};
  GameParams params;
  Regulation reg;
  BargainingRule rule = BargainingRule::kNash;
  // Worker threads; 0 picks the hardware concurrency.
  unsigned threads = 0;

  void validate() const {
    if (x.param == y.param) {
      throw ValidationError("sweep axes must name distinct parameters");
    }
    for (const Axis* a : {&x, &y}) {
      if (a->steps < 2) throw ValidationError("sweep axis steps must be >= 2");
      if (!(a->min < a->max)) {
        throw ValidationError("sweep axis " + std::string(to_string(a->param)) +
                              " requires min < max");
      }
    }
    params.validate();
    reg.validate();
  }
};

struct SweepCell {
  double x = 0.0;
  double y = 0.0;
  GameParams params;
  Regulation reg;
  Equilibrium eq;
  // Non-empty when the cell's parameters were rejected; eq.region is kInvalid.
  std::string error;

  [[nodiscard]] Region region() const {
    return eq.region.value_or(Region::kInvalid);
  }
  [[nodiscard]] bool valid() const { return error.empty(); }
};

/// Row-major grid of solved cells: cell (ix, iy) sits at iy * x.steps + ix.
struct SweepTable {
  SweepSpec spec;
  std::vector<SweepCell> cells;
  Equilibrium baseline;

  [[nodiscard]] const SweepCell& at(std::size_t ix, std::size_t iy) const {
    return cells.at(iy * spec.x.steps + ix);
  }
};

inline void apply(SweepParam param, double value, GameParams& params,
                  Regulation& reg) {
  switch (param) {
    case SweepParam::kAlpha0:
      params.alpha0 = value;
      break;
    case SweepParam::kEps:
      params.eps = value;
      break;
    case SweepParam::kCOmega:
      params.c_omega = value;
      break;
    case SweepParam::kTheta:
      reg.theta = value;
      break;
    case SweepParam::kPenalty:
      reg.penalty = value;
      break;
  }
}

inline bool is_game_param(SweepParam p) {
  return p == SweepParam::kAlpha0 || p == SweepParam::kEps ||
         p == SweepParam::kCOmega;
}

inline SweepTable run_sweep(const SweepSpec& spec) {
  spec.validate();
  SweepTable table{.spec = spec, .cells = {}, .baseline = {}};
  table.baseline = solve_baseline(spec.params, spec.rule);
  const bool per_cell_baseline =
      is_game_param(spec.x.param) || is_game_param(spec.y.param);

  const std::size_t nx = spec.x.steps;
  const std::size_t ny = spec.y.steps;
  table.cells.resize(nx * ny);

  const auto solve_cell = [&](std::size_t index) {
    SweepCell& cell = table.cells[index];
    const std::size_t ix = index % nx;
    const std::size_t iy = index / nx;
    cell.x = spec.x.value(ix);
    cell.y = spec.y.value(iy);
    cell.params = spec.params;
    cell.reg = spec.reg;
    apply(spec.x.param, cell.x, cell.params, cell.reg);
    apply(spec.y.param, cell.y, cell.params, cell.reg);
    cell.eq.rule = spec.rule;
    try {
      cell.eq = solve_bargain(cell.params, cell.reg, spec.rule);
      const Equilibrium baseline = per_cell_baseline
                                       ? solve_baseline(cell.params, spec.rule)
                                       : table.baseline;
      cell.eq.region = classify_cell(cell.eq, cell.reg, baseline);
    } catch (const std::exception& e) {
      cell.error = e.what();
      cell.eq.region = Region::kInvalid;
    }
  };

  unsigned workers = spec.threads != 0 ? spec.threads
                                       : std::thread::hardware_concurrency();
  workers = std::clamp<unsigned>(workers, 1, 64);
  if (workers == 1) {
    for (std::size_t i = 0; i < table.cells.size(); ++i) solve_cell(i);
    return table;
  }
  // Strided partition; every cell is written by exactly one worker.
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < table.cells.size(); i += workers) {
        solve_cell(i);
      }
    });
  }
  pool.clear();
  return table;
}

// ---------------------------------------------------------------------------
// Pareto analysis

/// Envelope of the Pareto-improving region in (p, theta) space.
struct ParetoRegionBounds {
  GameParams params;
  BargainingRule rule = BargainingRule::kNash;
  double theta_min = 0.0;
  double theta_max = 1.0;
  double p_upper = 0.0;
  double tol_p = 1e-4;

  /// A penalty that every compliant penalty at this threshold strictly
  /// exceeds, taken from the endogenous indifference boundary. Infinite when
  /// no penalty up to p_upper induces compliance.
  [[nodiscard]] double p_lower(double theta) const {
    const auto boundary =
        indifference_boundary_numeric(params, rule, theta, p_upper, tol_p);
    if (!boundary) return std::numeric_limits<double>::infinity();
    return std::max(0.0, *boundary - tol_p);
  }

  [[nodiscard]] bool contains(double penalty, double theta) const {
    return theta >= theta_min && theta <= theta_max && penalty <= p_upper &&
           penalty > p_lower(theta);
  }
};

/// Bounds on thresholds and penalties that can be Pareto-improving. The
/// threshold cap comes from D's participation at the unregulated delta*.
inline ParetoRegionBounds pareto_region_bounds(const GameParams& params,
                                               BargainingRule rule,
                                               double p_max,
                                               double tol_p = 1e-4) {
  const Equilibrium baseline = solve_baseline(params, rule);
  const double delta = baseline.profile.delta;
  double theta_max = 1.0;
  if (params.c_omega > delta) {
    theta_max = std::min(1.0, (1.0 - delta) / (params.c_omega - delta));
  }
  return {.params = params,
          .rule = rule,
          .theta_min = params.tol,
          .theta_max = theta_max,
          .p_upper = p_max,
          .tol_p = tol_p};
}

enum class Objective { kOmega, kAlpha1, kUG, kUD };

inline std::string_view to_string(Objective o) {
  switch (o) {
    case Objective::kOmega:
      return "omega";
    case Objective::kAlpha1:
      return "alpha1";
    case Objective::kUG:
      return "u_g";
    case Objective::kUD:
      return "u_d";
  }
  return "unknown";
}

inline Objective parse_objective(std::string_view text) {
  for (auto o : {Objective::kOmega, Objective::kAlpha1, Objective::kUG,
                 Objective::kUD}) {
    if (to_string(o) == text) return o;
  }
  throw ValidationError("objective must be one of omega|alpha1|u_g|u_d, got '" +
                        std::string(text) + "'");
}

inline double objective_value(const Equilibrium& eq, Objective o) {
  switch (o) {
    case Objective::kOmega:
      return detail::outcome_omega(eq);
    case Objective::kAlpha1:
      return detail::outcome_alpha1(eq);
    case Objective::kUG:
      return eq.u_g;
    case Objective::kUD:
      return eq.u_d;
  }
  return 0.0;
}

/// Strictly positive weights on the simplex, one per objective.
struct ParetoWeighting {
  std::vector<Objective> objectives;
  std::vector<double> weights;

  void validate(double tol = 1e-9) const {
    if (objectives.empty() || objectives.size() != weights.size()) {
      throw ValidationError("weighting needs one weight per objective");
    }
    double sum = 0.0;
    for (double w : weights) {
      if (!(w > 0.0)) throw ValidationError("weights must be > 0");
      sum += w;
    }
    if (std::abs(sum - 1.0) > tol) {
      throw ValidationError("weights must sum to 1");
    }
  }

  [[nodiscard]] double score(const Equilibrium& eq) const {
    double s = 0.0;
    for (std::size_t i = 0; i < objectives.size(); ++i) {
      s += weights[i] * objective_value(eq, objectives[i]);
    }
    return s;
  }
};

/// Every interior point of the simplex grid {k / steps : k_i >= 1, sum = steps}.
inline std::vector<ParetoWeighting> simplex_weightings(
    const std::vector<Objective>& objectives, std::size_t steps) {
  const std::size_t d = objectives.size();
  std::vector<ParetoWeighting> out;
  if (d == 0 || steps < d) return out;
  std::vector<std::size_t> parts(d, 1);
  // Enumerate compositions of `steps` into d positive parts.
  const auto recurse = [&](auto&& self, std::size_t i, std::size_t left) -> void {
    if (i + 1 == d) {
      parts[i] = left;
      ParetoWeighting w{objectives, {}};
      for (std::size_t k : parts) {
        w.weights.push_back(static_cast<double>(k) / static_cast<double>(steps));
      }
      out.push_back(std::move(w));
      return;
    }
    for (std::size_t k = 1; k + (d - i - 1) <= left; ++k) {
      parts[i] = k;
      self(self, i + 1, left - k);
    }
  };
  recurse(recurse, 0, steps);
  return out;
}

struct PolicyPoint {
  std::size_t ix = 0;
  std::size_t iy = 0;
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const PolicyPoint&, const PolicyPoint&) = default;
};

/// Cells that maximize some strictly positive weighting of the objectives.
/// The first maximizing cell in row-major order wins each weighting. Output is
/// deduplicated and ordered by cell index.
inline std::vector<PolicyPoint> pareto_optimal_policies(
    const SweepTable& table, std::size_t weighting_grid_steps,
    const std::vector<Objective>& objectives) {
  if (objectives.empty()) throw ValidationError("objectives must be nonempty");
  if (weighting_grid_steps < 2) {
    throw ValidationError("weighting grid steps must be >= 2");
  }
  // A single objective has only the weight 1.
  const std::size_t steps =
      objectives.size() == 1 ? 1 : std::max(weighting_grid_steps, objectives.size());
  std::vector<bool> chosen(table.cells.size(), false);
  for (const auto& weighting : simplex_weightings(objectives, steps)) {
    std::optional<std::size_t> best;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < table.cells.size(); ++i) {
      if (!table.cells[i].valid()) continue;
      const double s = weighting.score(table.cells[i].eq);
      if (s > best_score) {
        best_score = s;
        best = i;
      }
    }
    if (best) chosen[*best] = true;
  }
  std::vector<PolicyPoint> out;
  const std::size_t nx = table.spec.x.steps;
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    if (!chosen[i]) continue;
    out.push_back({i % nx, i / nx, table.cells[i].x, table.cells[i].y});
  }
  return out;
}

}  // namespace openness
