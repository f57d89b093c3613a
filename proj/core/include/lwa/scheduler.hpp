#pragma once

#include <array>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "lwa/scenario.hpp"

namespace lwa::opt {

inline constexpr int kUnlicensed = 0;  // band 1 (WiFi)
inline constexpr int kLicensed = 1;    // band 2 (LTE)

// Decision variables of one (band, user) pair in the (delta, a)
// parameterization: delta = bandwidth * theta, a = 1/theta.
struct BandDecision {
  double x = 1.0;
  double delta = 0.0;
  double a = 0.0;

  double bandwidth() const { return delta * a; }
  double qos_exponent() const {
    return a > 0.0 ? 1.0 / a : std::numeric_limits<double>::infinity();
  }
};

struct Allocation {
  std::vector<std::array<BandDecision, 2>> users;
  // Effective capacities per (user, band); filled by the solver/checker.
  std::vector<std::array<double, 2>> capacity;

  double licensed_bandwidth() const;  // sum over users of x2 * beta2
  double unlicensed_usage() const;    // sum over users of delta1 * a1
};

struct FeasibilityReport {
  double rate_violation = 0.0;       // max_n max(0, (R_n - sum_m x C)/R_n)
  double budget_violation = 0.0;     // max(0, (usage - B1)/B1)
  double qos_exact_violation = 0.0;  // max_n max(0, (exact_lhs - P)/P)
  double big_m_violation = 0.0;      // max over (m,n) of (delta a - x Lambda)/Lambda
  double binarity_residual = 0.0;    // max x(1-x)
  bool relaxed_holds = true;
  bool exact_holds = true;
  bool relaxed_implies_exact = true;  // logged soundness check

  bool ok(double tol = 1e-6) const {
    return rate_violation <= tol && budget_violation <= tol && qos_exact_violation <= tol &&
           big_m_violation <= tol && binarity_residual <= tol;
  }
};

enum class SolveStatus { converged, iteration_cap, infeasible };

struct SolveOptions {
  double outer_tol = 1e-6;     // relative change of the descent objective
  int outer_cap = 200;
  double inner_x_tol = 1e-6;   // max |x - x_prev| stop for the DC inner loop
  int inner_cap = 25;
  double binarity_tol = 1e-3;
  double lambda_growth = 2.0;
  double lambda_cap_factor = 1e8;
  double barrier_gap_tol = 1e-9;
  bool quiet = true;
};

struct SolveReport {
  // Penalized descent objective per outer iteration; reset when the penalty
  // factor escalates, so the recorded trace is nonincreasing.
  std::vector<double> objective_trace;
  std::vector<int> dc_inner_iters;
  double penalty_lambda = 0.0;
  double binarity_residual = 0.0;  // of the relaxation at convergence
  FeasibilityReport feasibility;
  double wall_time = 0.0;
  SolveStatus status = SolveStatus::infeasible;
  int outer_iterations = 0;
  int lambda_rounds = 1;
  double objective = 0.0;  // licensed bandwidth (Hz) of the final allocation
  double lp_certificate_residual = 0.0;
  std::string message;
};

struct StartResult {
  Allocation alloc;
  bool feasible = false;
  double big_m = 0.0;
  std::string message;
};

class ScenarioModel;  // internal: per-user decay-rate evaluations

// Block-coordinate-descent solver: alternates an exact LP in {a} with a
// DC-programming step in {delta, x}, then rounds x and repairs.
class BcdSolver {
 public:
  explicit BcdSolver(const Scenario& scenario, const SolveOptions& options = {});
  ~BcdSolver();

  StartResult feasible_start() const;

  struct LpOutcome {
    bool solved = false;
    double objective_before = 0.0;
    double objective_after = 0.0;
    double certificate_residual = 0.0;
  };
  // Minimizes sum delta2*a2 over {a} at fixed (delta, x); exact simplex.
  LpOutcome lp_step(Allocation& alloc) const;

  struct DcOutcome {
    int inner_iters = 0;
    bool solver_ok = true;
    double objective_after = 0.0;  // penalized objective at the accepted point
  };
  // Majorize-minimize loop on the convexified penalty subproblem.  With
  // pin_x the selection variables stay fixed at their (binary) values and
  // only the deltas move (the post-rounding continuous re-solve).
  DcOutcome dc_step(Allocation& alloc, double lambda, bool pin_x = false) const;

  std::pair<Allocation, SolveReport> solve() const;

  // sum delta2 * a2
  double pure_objective(const Allocation& alloc) const;
  // pure + lambda * sum x(1-x)
  double penalized_objective(const Allocation& alloc, double lambda) const;
  double big_m() const;
  // Effective capacity of (band m, user n) at the given (delta, a).
  double capacity(int m, int n, double delta, double a) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::pair<Allocation, SolveReport> solve_bcd(const Scenario& scenario,
                                             const SolveOptions& options = {});

// Exact P1 feasibility of an allocation (binary or fractional x); shared by
// the optimizer, the baselines, and the tests.
FeasibilityReport check_allocation(const Scenario& scenario, const Allocation& alloc);

// JSON / CSV emission (stable key order; wall time zeroed unless `timing`).
std::string allocation_to_json(const Scenario& scenario, const Allocation& alloc);
std::string report_to_json(const SolveReport& report, bool timing = false);
std::string summary_csv_row(const std::string& scenario_id, const std::string& scheme,
                            double objective, int iterations, SolveStatus status,
                            double wall_time, bool timing = false);

}  // namespace lwa::opt
