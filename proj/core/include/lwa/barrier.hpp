#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

namespace lwa::num {

// Sparse gradient / diagonal-Hessian entries of one constraint.
struct SparseVec {
  std::vector<std::pair<int, double>> entries;
  void clear() { entries.clear(); }
  void add(int i, double v) { entries.emplace_back(i, v); }
};

// Smooth convex feasibility system g_i(z) <= 0.  Constraints have sparse
// gradients and diagonal Hessians (each nonlinear term depends on a single
// coordinate), which is all the scheduler subproblems need.
class SmoothProgram {
 public:
  virtual ~SmoothProgram() = default;
  virtual int dim() const = 0;
  virtual int constraint_count() const = 0;
  virtual void constraint_values(const Eigen::VectorXd& z, Eigen::VectorXd& g) const = 0;
  virtual void constraint_derivs(const Eigen::VectorXd& z, Eigen::VectorXd& g,
                                 std::vector<SparseVec>& grads,
                                 std::vector<SparseVec>& hess_diag) const = 0;
};

struct BarrierOptions {
  double gap_tol = 1e-9;         // duality-gap bound m/t at exit
  double mu = 20.0;              // barrier parameter growth
  double t0 = 1.0;
  double newton_tol = 1e-11;     // half squared Newton decrement
  int max_newton_per_center = 80;
  int max_centerings = 80;
  double phase1_target = -1e-9;  // strict-interior margin for phase 1
  double armijo_c = 1e-4;
  int max_backtracks = 60;
};

struct BarrierResult {
  Eigen::VectorXd z;
  bool feasible = false;   // ended strictly feasible
  bool converged = false;  // duality gap below tolerance
  double gap = 0.0;
  int newton_iters = 0;
};

// Minimize c.z subject to the program's constraints, starting from z0.
// Runs a phase-1 (min s, g_i <= s) when z0 is not strictly interior.
BarrierResult barrier_minimize(const Eigen::VectorXd& c, const SmoothProgram& prog,
                               const Eigen::VectorXd& z0, const BarrierOptions& opts = {});

}  // namespace lwa::num
