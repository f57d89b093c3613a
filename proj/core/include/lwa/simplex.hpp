#pragma once

#include <Eigen/Dense>
#include <vector>

namespace lwa::num {

// Small dense LP:  minimize c.x  s.t.  A x (<=|==|>=) b,  x >= 0.
struct LpProblem {
  Eigen::VectorXd c;
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  std::vector<int> relation;  // per row: -1 "<=", 0 "==", +1 ">="
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  Eigen::VectorXd x;
  Eigen::VectorXd duals;  // one multiplier per row
  double objective = 0.0;
  // max of |y_i * row slack_i| and dual-feasibility violations; an optimal
  // vertex certificate when below ~1e-8.
  double complementarity_residual = 0.0;
};

// Two-phase dense tableau simplex.  Deterministic pivoting (Dantzig rule
// with lowest-index ties, Bland fallback after a stall).
LpSolution solve_lp(const LpProblem& problem);

}  // namespace lwa::num
