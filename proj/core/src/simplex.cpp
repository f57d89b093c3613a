#include "lwa/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace lwa::num {

namespace {

constexpr double kEps = 1e-10;

struct Tableau {
  Eigen::MatrixXd t;       // rows x (cols + 1); last column is the rhs
  std::vector<int> basis;  // basic column per row
  int rows = 0, cols = 0;

  double rhs(int r) const { return t(r, cols); }
};

// Reduced costs for a minimization: cbar_j = c_j - y.A_j with y = c_B B^-1.
void price(const Tableau& tab, const Eigen::VectorXd& costs, Eigen::VectorXd& cbar) {
  Eigen::VectorXd cb(tab.rows);
  for (int r = 0; r < tab.rows; ++r) cb(r) = costs(tab.basis[r]);
  cbar = costs - (cb.transpose() * tab.t.leftCols(tab.cols)).transpose();
}

// Minimize costs over the tableau; blocked columns never enter.
// Returns false when unbounded.
bool run_phase(Tableau& tab, const Eigen::VectorXd& costs, const std::vector<bool>& blocked) {
  const int max_iters = 500 * (tab.rows + tab.cols + 10);
  int stall = 0;
  double last_obj = std::numeric_limits<double>::infinity();
  for (int it = 0; it < max_iters; ++it) {
    Eigen::VectorXd cbar;
    price(tab, costs, cbar);

    double obj = 0.0;
    for (int r = 0; r < tab.rows; ++r) obj += costs(tab.basis[r]) * tab.rhs(r);
    if (obj < last_obj - 1e-13) {
      stall = 0;
      last_obj = obj;
    } else {
      ++stall;
    }
    const bool bland = stall > 2 * (tab.rows + 5);

    int enter = -1;
    if (!bland) {
      double best = -kEps;
      for (int j = 0; j < tab.cols; ++j)
        if (!blocked[j] && cbar(j) < best) {
          best = cbar(j);
          enter = j;
        }
    } else {
      for (int j = 0; j < tab.cols; ++j)
        if (!blocked[j] && cbar(j) < -kEps) {
          enter = j;
          break;
        }
    }
    if (enter < 0) return true;  // optimal

    int leave = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int r = 0; r < tab.rows; ++r) {
      const double a = tab.t(r, enter);
      if (a > kEps) {
        const double ratio = tab.rhs(r) / a;
        if (ratio < best_ratio - 1e-12 ||
            (ratio < best_ratio + 1e-12 && (leave < 0 || tab.basis[r] < tab.basis[leave]))) {
          best_ratio = ratio;
          leave = r;
        }
      }
    }
    if (leave < 0) return false;  // unbounded

    tab.t.row(leave) /= tab.t(leave, enter);
    for (int r = 0; r < tab.rows; ++r) {
      if (r == leave) continue;
      const double f = tab.t(r, enter);
      if (f != 0.0) tab.t.row(r) -= f * tab.t.row(leave);
    }
    tab.basis[leave] = enter;
  }
  throw std::runtime_error("solve_lp: simplex iteration cap reached");
}

}  // namespace

LpSolution solve_lp(const LpProblem& problem) {
  const int m = static_cast<int>(problem.a.rows());
  const int n = static_cast<int>(problem.a.cols());
  if (problem.b.size() != m || static_cast<int>(problem.relation.size()) != m ||
      problem.c.size() != n)
    throw std::invalid_argument("solve_lp: inconsistent problem dimensions");

  // Canonical form: b >= 0.
  Eigen::MatrixXd a = problem.a;
  Eigen::VectorXd b = problem.b;
  std::vector<int> rel = problem.relation;
  std::vector<double> flip(m, 1.0);
  for (int r = 0; r < m; ++r)
    if (b(r) < 0.0) {
      a.row(r) = -a.row(r);
      b(r) = -b(r);
      rel[r] = -rel[r];
      flip[r] = -1.0;
    }

  int n_slack = 0, n_art = 0;
  for (int r = 0; r < m; ++r) {
    if (rel[r] != 0) ++n_slack;
    if (rel[r] >= 0) ++n_art;
  }

  Tableau tab;
  tab.rows = m;
  tab.cols = n + n_slack + n_art;
  tab.t = Eigen::MatrixXd::Zero(m, tab.cols + 1);
  tab.t.block(0, 0, m, n) = a;
  tab.t.col(tab.cols) = b;
  tab.basis.assign(m, -1);

  std::vector<int> unit_col(m, -1);  // the row's initial unit column (for duals)
  std::vector<int> art_col(m, -1);
  int col = n;
  for (int r = 0; r < m; ++r) {
    if (rel[r] == -1) {
      tab.t(r, col) = 1.0;  // slack
      unit_col[r] = col;
      tab.basis[r] = col;
      ++col;
    } else if (rel[r] == +1) {
      tab.t(r, col) = -1.0;  // surplus
      ++col;
    }
  }
  for (int r = 0; r < m; ++r) {
    if (rel[r] >= 0) {
      tab.t(r, col) = 1.0;  // artificial
      art_col[r] = col;
      unit_col[r] = col;
      tab.basis[r] = col;
      ++col;
    }
  }

  std::vector<bool> art_mask(tab.cols, false);
  for (int r = 0; r < m; ++r)
    if (art_col[r] >= 0) art_mask[art_col[r]] = true;

  LpSolution sol;

  if (n_art > 0) {
    Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(tab.cols);
    for (int r = 0; r < m; ++r)
      if (art_col[r] >= 0) phase1(art_col[r]) = 1.0;
    std::vector<bool> none(tab.cols, false);
    if (!run_phase(tab, phase1, none)) throw std::runtime_error("solve_lp: phase-1 unbounded");
    double art_sum = 0.0;
    for (int r = 0; r < m; ++r)
      if (art_col[r] >= 0 && tab.basis[r] == art_col[r]) art_sum += tab.rhs(r);
    if (art_sum > 1e-7 * std::max(1.0, b.cwiseAbs().maxCoeff())) {
      sol.status = LpStatus::infeasible;
      return sol;
    }
    // Pivot degenerate basic artificials out where possible; rows where no
    // pivot exists are redundant (all-zero) and stay inert.
    for (int r = 0; r < m; ++r) {
      if (art_col[r] >= 0 && tab.basis[r] == art_col[r]) {
        for (int j = 0; j < n + n_slack; ++j) {
          if (std::abs(tab.t(r, j)) > kEps) {
            tab.t.row(r) /= tab.t(r, j);
            for (int r2 = 0; r2 < m; ++r2)
              if (r2 != r && tab.t(r2, j) != 0.0) tab.t.row(r2) -= tab.t(r2, j) * tab.t.row(r);
            tab.basis[r] = j;
            break;
          }
        }
      }
    }
  }

  Eigen::VectorXd costs = Eigen::VectorXd::Zero(tab.cols);
  costs.head(n) = problem.c;
  if (!run_phase(tab, costs, art_mask)) {
    sol.status = LpStatus::unbounded;
    return sol;
  }

  sol.status = LpStatus::optimal;
  sol.x = Eigen::VectorXd::Zero(n);
  for (int r = 0; r < m; ++r)
    if (tab.basis[r] < n) sol.x(tab.basis[r]) = tab.rhs(r);
  sol.objective = problem.c.dot(sol.x);

  // Duals: y_r = c_{u} - cbar_{u} on the row's initial unit column u.
  Eigen::VectorXd cbar;
  price(tab, costs, cbar);
  Eigen::VectorXd y(m);
  for (int r = 0; r < m; ++r) y(r) = costs(unit_col[r]) - cbar(unit_col[r]);

  // Certificate on the canonical rows: dual slack s = c - A^T y must be
  // >= 0 with x_j s_j = 0; row multipliers obey y <= 0 on "<=", >= 0 on
  // ">=", and y_r * (row slack) = 0.
  double res = 0.0;
  const Eigen::VectorXd row_val = a * sol.x;
  for (int r = 0; r < m; ++r) {
    res = std::max(res, std::abs(y(r) * (b(r) - row_val(r))));
    if (rel[r] == -1) res = std::max(res, std::max(0.0, y(r)));
    if (rel[r] == +1) res = std::max(res, std::max(0.0, -y(r)));
  }
  const Eigen::VectorXd dual_slack = problem.c - a.transpose() * y;
  for (int j = 0; j < n; ++j) {
    res = std::max(res, std::max(0.0, -dual_slack(j)));
    res = std::max(res, std::abs(dual_slack(j) * sol.x(j)));
  }
  res = std::max(res, std::abs(sol.objective - b.dot(y)));
  const double scale = std::max({1.0, std::abs(sol.objective), b.cwiseAbs().maxCoeff()});
  sol.complementarity_residual = res / scale;

  // Report duals for the caller's original row orientation.
  sol.duals = y;
  for (int r = 0; r < m; ++r) sol.duals(r) *= flip[r];
  return sol;
}

}  // namespace lwa::num
