// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "openness/openness.hpp"
#include "openness/oracle.hpp"
#include "test_support.hpp"

namespace {

using namespace openness;

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      notes.push_back(what);
      pass = false;
    }
  }
  void note(std::string what) { notes.push_back(std::move(what)); }

  [[nodiscard]] std::string summary() const {
    std::string out;
    for (const auto& n : notes) out += (out.empty() ? "" : "; ") + n;
    return out;
  }
};

bool within(double value, double target, double tol) {
  return std::abs(value - target) <= tol;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string fmt_opt(const std::optional<double>& v) {
  return v ? fmt(*v) : std::string("none");
}

// Checks one equilibrium field against target +- tol and records it on failure.
void expect_near(Outcome& o, const char* name, const std::optional<double>& v,
                 double target, double tol) {
  o.require(v && within(*v, target, tol),
            std::string(name) + "=" + fmt_opt(v) + " want " + fmt(target) +
                "+-" + fmt(tol));
}

GameParams make_params(double alpha0, double eps, double c_omega) {
  GameParams p;
  p.alpha0 = alpha0;
  p.eps = eps;
  p.c_omega = c_omega;
  return p;
}

SweepTable policy_sweep(const GameParams& params, double p_max) {
  SweepSpec spec;
  spec.params = params;
  spec.x = {SweepParam::kPenalty, 0.0, p_max, 101};
  spec.y = {SweepParam::kTheta, 0.0, 1.0, 101};
  return run_sweep(spec);
}

bool complied(const SweepCell& cell) {
  const Region r = cell.region();
  return r == Region::kCompliant || r == Region::kParetoImproving;
}

// ---------------------------------------------------------------------------

Outcome reference_regression() {
  Outcome o;
  const GameParams p = testing::reference_params();
  const auto base = solve_baseline(p, BargainingRule::kNash);
  expect_near(o, "base.delta", base.profile.delta, 0.53, 0.01 + 1e-12);
  o.require(base.profile.omega == 0.01,
            "base.omega=" + fmt_opt(base.profile.omega) + " want 0.01");
  expect_near(o, "base.alpha1", base.profile.alpha1, 0.1024, 0.0005);
  expect_near(o, "base.u_g", base.u_g, 0.0478, 0.0005);
  expect_near(o, "base.u_d", base.u_d, 0.0480, 0.0005);

  const Regulation reg{0.6, 0.05};
  const auto eq = solve_bargain(p, reg, BargainingRule::kNash);
  expect_near(o, "reg.delta", eq.profile.delta, 0.97, 0.01 + 1e-12);
  o.require(eq.profile.omega == 0.6,
            "reg.omega=" + fmt_opt(eq.profile.omega) + " want 0.6 exactly");
  expect_near(o, "reg.alpha1", eq.profile.alpha1, 0.2746, 0.0005);
  expect_near(o, "reg.u_g", eq.u_g, 0.0575, 0.0005);
  expect_near(o, "reg.u_d", eq.u_d, 0.1090, 0.0005);
  const Region region = classify_cell(eq, reg, base);
  o.require(region == Region::kParetoImproving,
            "region=" + std::string(to_string(region)));
  if (o.pass) {
    o.note("delta* " + fmt(base.profile.delta) + " -> " + fmt(eq.profile.delta) +
           ", alpha1 " + fmt_opt(base.profile.alpha1) + " -> " +
           fmt_opt(eq.profile.alpha1));
  }
  return o;
}

Outcome low_performance_regression() {
  Outcome o;
  const GameParams p = make_params(0.1, 0.1, 0.01);
  const auto base = solve_baseline(p, BargainingRule::kNash);
  o.require(base.profile.omega == p.omega_min,
            "omega=" + fmt_opt(base.profile.omega) + " want omega_min");
  expect_near(o, "alpha1", base.profile.alpha1, 0.102, 0.001);
  expect_near(o, "u_g", base.u_g, 0.047, 0.002);
  expect_near(o, "u_d", base.u_d, 0.049, 0.002);

  const auto table = policy_sweep(p, 0.2);
  std::size_t pareto = 0;
  for (const auto& cell : table.cells) {
    pareto += cell.region() == Region::kParetoImproving;
  }
  o.require(pareto > 0, "no PARETO_IMPROVING cells");
  o.note(std::to_string(pareto) + "/" + std::to_string(table.cells.size()) +
         " Pareto-improving cells");
  return o;
}

Outcome high_performance_regression() {
  Outcome o;
  const GameParams p = make_params(1.0, 0.1, 0.01);
  const auto base = solve_baseline(p, BargainingRule::kNash);
  o.require(base.profile.omega == 0.01,
            "omega=" + fmt_opt(base.profile.omega) + " want 0.01");
  expect_near(o, "alpha1", base.profile.alpha1, 1.00, 0.01);
  expect_near(o, "u_g", base.u_g, 0.492, 0.01);
  expect_near(o, "u_d", base.u_d, 0.491, 0.01);

  const auto table = policy_sweep(p, 1.0);
  const double tol = p.tol;
  std::size_t pairs = 0;
  std::size_t violations = 0;
  std::size_t capped_pairs = 0;
  std::size_t capped_violations = 0;
  std::string first;
  for (std::size_t ix = 0; ix < table.spec.x.steps; ++ix) {
    for (std::size_t iy = 0; iy + 1 < table.spec.y.steps; ++iy) {
      const auto& lo = table.at(ix, iy);
      const auto& hi = table.at(ix, iy + 1);
      if (!complied(lo) || !complied(hi)) continue;
      ++pairs;
      const bool ok = *hi.eq.profile.omega >= *lo.eq.profile.omega - tol &&
                      *hi.eq.profile.alpha1 >= *lo.eq.profile.alpha1 - tol &&
                      hi.eq.u_d >= lo.eq.u_d - tol &&
                      hi.eq.u_g <= lo.eq.u_g + tol;
      const bool capped = lo.eq.profile.delta == 1.0 && hi.eq.profile.delta == 1.0;
      capped_pairs += capped;
      if (!ok) {
        if (first.empty()) {
          first = "first at p=" + fmt(lo.reg.penalty) + " theta " +
                  fmt(lo.reg.theta) + "->" + fmt(hi.reg.theta) + " (U_D " +
                  fmt(lo.eq.u_d) + "->" + fmt(hi.eq.u_d) + ", delta " +
                  fmt(lo.eq.profile.delta) + "->" + fmt(hi.eq.profile.delta) + ")";
        }
        ++violations;
        capped_violations += capped;
      }
    }
  }
  o.require(pairs > 0, "no adjacent compliant cells");
  o.require(violations == 0, std::to_string(violations) + "/" +
                                 std::to_string(pairs) +
                                 " adjacent compliant pairs not monotone, " + first);
  o.note("delta*=1 band: " + std::to_string(capped_pairs - capped_violations) +
         "/" + std::to_string(capped_pairs) + " pairs monotone");
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  constexpr int kDraws = 1000;
  constexpr double kTol = 1e-4;
  testing::DrawGenerator gen(2024);
  int specialist_bad = 0;
  int generalist_bad = 0;
  int abstain_mismatch = 0;
  for (int i = 0; i < kDraws; ++i) {
    const auto d = gen.next();
    const double omega = 1e-3 + (1.0 - 1e-3) * gen.unit();

    const auto fast = specialist_best_response(d.params, d.delta, omega);
    const double slow = specialist_oracle(d.params, d.delta, omega);
    const bool slow_abstains =
        specialist_utility(d.params, d.delta, omega, slow) < 0.0;
    if (fast.abstains() != slow_abstains) {
      ++abstain_mismatch;
    } else if (!fast.abstains() && !within(*fast.alpha1, slow, kTol)) {
      ++specialist_bad;
    }

    const auto g_fast = generalist_best_response(d.params, d.reg, d.delta);
    const auto g_slow = generalist_oracle(d.params, d.reg, d.delta);
    if (g_fast.profile.generalist_abstains() !=
        g_slow.profile.generalist_abstains()) {
      ++abstain_mismatch;
    } else if (!within(g_fast.u_g, g_slow.u_g, kTol)) {
      ++generalist_bad;
    }
  }
  o.require(specialist_bad == 0, std::to_string(specialist_bad) + " alpha1 mismatches");
  o.require(generalist_bad == 0, std::to_string(generalist_bad) + " U_G mismatches");
  o.require(abstain_mismatch == 0,
            std::to_string(abstain_mismatch) + " abstention mismatches");
  if (o.pass) o.note(std::to_string(kDraws) + " draws");
  return o;
}

Outcome conservation_identities() {
  Outcome o;
  constexpr int kDraws = 10000;
  constexpr double kRel = 1e-12;
  testing::DrawGenerator gen(77);
  double worst_cost = 0.0;
  double worst_share = 0.0;
  for (int i = 0; i < kDraws; ++i) {
    const auto d = gen.next();
    const double omega = gen.unit();
    const double alpha1 = d.params.alpha0 + gen.unit();
    const double c = d.params.c_omega;
    const double cost = generalist_operation_cost(c, omega, alpha1) +
                        specialist_operation_cost(c, omega, alpha1);
    const double share =
        (generalist_share(d.params.eps, d.delta, omega) +
         specialist_share(d.delta, omega)) *
        revenue(alpha1);
    const double want_cost = c * alpha1;
    const double want_share = (d.params.eps * omega + 1.0) * alpha1;
    if (want_cost > 0.0) {
      worst_cost = std::max(worst_cost, std::abs(cost - want_cost) / want_cost);
    } else {
      worst_cost = std::max(worst_cost, std::abs(cost));
    }
    worst_share =
        std::max(worst_share, std::abs(share - want_share) / want_share);
  }
  o.require(worst_cost <= kRel, "cost rel err " + fmt(worst_cost));
  o.require(worst_share <= kRel, "share rel err " + fmt(worst_share));
  if (o.pass) {
    o.note(std::to_string(kDraws) + " draws, worst rel err " + fmt(worst_cost) +
           " / " + fmt(worst_share));
  }
  return o;
}

Outcome penalty_discontinuity() {
  Outcome o;
  constexpr int kConfigs = 100;
  constexpr double kStep = 1e-9;
  constexpr double kTol = 1e-6;
  testing::DrawGenerator gen(5);
  double worst = 0.0;
  for (int i = 0; i < kConfigs; ++i) {
    auto d = gen.next();
    d.reg.theta = 0.01 + 0.98 * gen.unit();
    d.reg.penalty = 1e-3 + (1.0 - 2e-3) * gen.unit();
    const double alpha1 = d.params.alpha0 + gen.unit();
    const double at = generalist_utility(d.params, d.reg, d.delta, d.reg.theta, alpha1);
    const double below =
        generalist_utility(d.params, d.reg, d.delta, d.reg.theta - kStep, alpha1);
    worst = std::max(worst, std::abs((at - below) - d.reg.penalty));
  }
  o.require(worst <= kTol, "worst jump error " + fmt(worst));
  if (o.pass) {
    o.note(std::to_string(kConfigs) + " configs, worst error " + fmt(worst));
  }
  return o;
}

Outcome indifference_consistency() {
  Outcome o;
  constexpr double kTol = 1e-9;
  const std::vector<double> alpha0s{0.5, 1.0, 5.0};
  double worst = 0.0;
  std::size_t checked = 0;
  for (double alpha0 : alpha0s) {
    const GameParams p = make_params(alpha0, 0.15, 0.01);
    const double p_max = 4.0 * alpha0 + 1.0;
    double prev = 0.0;
    for (int k = 0; k <= 20; ++k) {
      const double theta = k / 20.0;
      const auto boundary =
          indifference_boundary_numeric(p, BargainingRule::kNash, theta, p_max);
      const double value =
          boundary.value_or(std::numeric_limits<double>::infinity());
      if (value < prev) {
        o.require(false, "boundary decreases at alpha0=" + fmt(alpha0) +
                             " theta=" + fmt(theta));
      }
      prev = value;
      if (!boundary || theta == 0.0) continue;

      // Compliant equilibrium just past the boundary fixes (delta, alpha1).
      const Regulation reg{theta, *boundary};
      const auto eq = solve_bargain(p, reg, BargainingRule::kNash);
      if (!complies(eq, reg)) {
        o.require(false, "no compliant equilibrium at theta=" + fmt(theta));
        continue;
      }
      const double delta = eq.profile.delta;
      const double alpha1 = *eq.profile.alpha1;
      const double p_star =
          indifference_penalty(theta, delta, p.alpha0, alpha1, p.eps, p.c_omega);
      const double closed =
          generalist_utility(p, {theta, p_star}, delta, 0.0, alpha1);
      const double open = generalist_utility(p, {theta, 0.0}, delta, theta, alpha1);
      worst = std::max(worst, std::abs(closed - open));
      ++checked;
    }
  }
  o.require(checked > 0, "no compliant reference points");
  o.require(worst <= kTol, "closed vs compliant U_G gap " + fmt(worst));
  if (o.pass) {
    o.note(std::to_string(checked) + " reference points, worst gap " +
           fmt(worst) + ", boundaries nondecreasing");
  }
  return o;
}

Outcome deadweight_property() {
  Outcome o;
  constexpr double kTol = 1e-12;
  const std::vector<double> shifts{0.01, 0.05};
  std::size_t checked = 0;
  double worst = 0.0;
  for (const auto& [params, p_max] :
       std::vector<std::pair<GameParams, double>>{
           {testing::reference_params(), 0.2},
           {make_params(0.1, 0.1, 0.01), 0.2},
           {make_params(1.0, 0.1, 0.01), 1.0}}) {
    const auto table = policy_sweep(params, p_max);
    for (const auto& cell : table.cells) {
      if (cell.region() != Region::kClosedDeadweight) continue;
      const double delta = cell.eq.profile.delta;
      const auto ref = generalist_best_response(params, cell.reg, delta);
      for (double dp : shifts) {
        const Regulation raised{cell.reg.theta, cell.reg.penalty + dp};
        const auto r = generalist_best_response(params, raised, delta);
        if (r.profile.generalist_abstains() || !r.profile.omega ||
            !raised.penalizes(*r.profile.omega)) {
          continue;
        }
        ++checked;
        worst = std::max(worst, std::abs((r.u_g - ref.u_g) + dp));
        o.require(r.profile.omega == ref.profile.omega &&
                      r.profile.alpha1 == ref.profile.alpha1,
                  "strategy moved at p=" + fmt(cell.reg.penalty) +
                      " theta=" + fmt(cell.reg.theta));
      }
    }
  }
  o.require(checked > 0, "no deadweight cells");
  o.require(worst <= kTol, "worst dU_G + dp = " + fmt(worst));
  if (o.pass) {
    o.note(std::to_string(checked) + " shifts, worst error " + fmt(worst));
  }
  return o;
}

struct Criterion {
  const char* name;
  double budget_seconds;
  std::function<Outcome()> check;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"reference_regression", 5.0, reference_regression},
      {"low_performance_regression", 60.0, low_performance_regression},
      {"high_performance_regression", 60.0, high_performance_regression},
      {"oracle_equivalence", 120.0, oracle_equivalence},
      {"conservation_identities", 60.0, conservation_identities},
      {"penalty_discontinuity", 60.0, penalty_discontinuity},
      {"indifference_consistency", 120.0, indifference_consistency},
      {"deadweight_property", 60.0, deadweight_property},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o.require(false, std::string("threw: ") + e.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    o.require(seconds < c.budget_seconds,
              "took " + fmt(seconds) + "s, budget " + fmt(c.budget_seconds) + "s");
    failures += !o.pass;
    std::printf("%s  %-28s %7.3fs  %s\n", o.pass ? "PASS" : "FAIL", c.name,
                seconds, o.summary().c_str());
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failures);
  return failures == 0 ? 0 : 1;
}
