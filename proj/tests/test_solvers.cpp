#include <cmath>

#include "doctest.h"
#include "lwa/barrier.hpp"
#include "lwa/simplex.hpp"

using namespace lwa::num;

TEST_CASE("simplex: basic inequality LP with duals") {
  // min -x - 2y  s.t. x + y <= 4, x <= 2, y <= 3, x,y >= 0  -> (1,3), obj -7
  LpProblem p;
  p.c = Eigen::Vector2d(-1, -2);
  p.a = Eigen::MatrixXd(3, 2);
  p.a << 1, 1, 1, 0, 0, 1;
  p.b = Eigen::Vector3d(4, 2, 3);
  p.relation = {-1, -1, -1};
  const auto s = solve_lp(p);
  REQUIRE(s.status == LpStatus::optimal);
  CHECK(s.x(0) == doctest::Approx(1.0));
  CHECK(s.x(1) == doctest::Approx(3.0));
  CHECK(s.objective == doctest::Approx(-7.0));
  CHECK(s.complementarity_residual < 1e-8);
}

TEST_CASE("simplex: >= rows through two phases") {
  // min 2x + 3y  s.t. x + y >= 2, x - y <= 1, x,y >= 0.
  // Feasible vertices: (1.5, 0.5) obj 4.5 and (0, 2) obj 6.
  LpProblem p;
  p.c = Eigen::Vector2d(2, 3);
  p.a = Eigen::MatrixXd(2, 2);
  p.a << 1, 1, 1, -1;
  p.b = Eigen::Vector2d(2, 1);
  p.relation = {+1, -1};
  const auto s = solve_lp(p);
  REQUIRE(s.status == LpStatus::optimal);
  CHECK(s.x(0) == doctest::Approx(1.5));
  CHECK(s.x(1) == doctest::Approx(0.5));
  CHECK(s.objective == doctest::Approx(4.5));
  CHECK(s.complementarity_residual < 1e-8);
}

TEST_CASE("simplex: equality rows") {
  // min x + y s.t. x + 2y == 3, x,y >= 0 -> (0, 1.5), obj 1.5
  LpProblem p;
  p.c = Eigen::Vector2d(1, 1);
  p.a = Eigen::MatrixXd(1, 2);
  p.a << 1, 2;
  p.b = Eigen::VectorXd::Constant(1, 3.0);
  p.relation = {0};
  const auto s = solve_lp(p);
  REQUIRE(s.status == LpStatus::optimal);
  CHECK(s.objective == doctest::Approx(1.5));
  CHECK(s.x(1) == doctest::Approx(1.5));
}

TEST_CASE("simplex: infeasible and unbounded detection") {
  LpProblem p;
  p.c = Eigen::Vector2d(1, 1);
  p.a = Eigen::MatrixXd(2, 2);
  p.a << 1, 1, -1, -1;
  p.b = Eigen::Vector2d(1, -2);  // x+y <= 1 and x+y >= 2
  p.relation = {-1, -1};
  CHECK(solve_lp(p).status == LpStatus::infeasible);

  LpProblem u;
  u.c = Eigen::Vector2d(-1, 0);
  u.a = Eigen::MatrixXd(1, 2);
  u.a << 0, 1;
  u.b = Eigen::VectorXd::Constant(1, 1.0);
  u.relation = {-1};
  CHECK(solve_lp(u).status == LpStatus::unbounded);
}

TEST_CASE("simplex: negative rhs rows are normalized") {
  // min x s.t. -x <= -2  (x >= 2)
  LpProblem p;
  p.c = Eigen::VectorXd::Constant(1, 1.0);
  p.a = Eigen::MatrixXd(1, 1);
  p.a << -1;
  p.b = Eigen::VectorXd::Constant(1, -2.0);
  p.relation = {-1};
  const auto s = solve_lp(p);
  REQUIRE(s.status == LpStatus::optimal);
  CHECK(s.x(0) == doctest::Approx(2.0));
}

namespace {

// g0: 1 - x0 <= 0;  g1: x0 + x1 - 10 <= 0; g2: -x1 <= 0
class LinearToy final : public SmoothProgram {
 public:
  int dim() const override { return 2; }
  int constraint_count() const override { return 3; }
  void constraint_values(const Eigen::VectorXd& z, Eigen::VectorXd& g) const override {
    g.resize(3);
    g(0) = 1.0 - z(0);
    g(1) = z(0) + z(1) - 10.0;
    g(2) = -z(1);
  }
  void constraint_derivs(const Eigen::VectorXd& z, Eigen::VectorXd& g,
                         std::vector<SparseVec>& grads,
                         std::vector<SparseVec>& hess) const override {
    constraint_values(z, g);
    grads.assign(3, {});
    hess.assign(3, {});
    grads[0].add(0, -1.0);
    grads[1].add(0, 1.0);
    grads[1].add(1, 1.0);
    grads[2].add(1, -1.0);
  }
};

// min x + y over the unit disk: x^2 + y^2 - 1 <= 0
class DiskToy final : public SmoothProgram {
 public:
  int dim() const override { return 2; }
  int constraint_count() const override { return 1; }
  void constraint_values(const Eigen::VectorXd& z, Eigen::VectorXd& g) const override {
    g.resize(1);
    g(0) = z.squaredNorm() - 1.0;
  }
  void constraint_derivs(const Eigen::VectorXd& z, Eigen::VectorXd& g,
                         std::vector<SparseVec>& grads,
                         std::vector<SparseVec>& hess) const override {
    constraint_values(z, g);
    grads.assign(1, {});
    hess.assign(1, {});
    grads[0].add(0, 2.0 * z(0));
    grads[0].add(1, 2.0 * z(1));
    hess[0].add(0, 2.0);
    hess[0].add(1, 2.0);
  }
};

}  // namespace

TEST_CASE("barrier: linear program to the vertex") {
  LinearToy prog;
  Eigen::VectorXd c(2);
  c << 1.0, 1.0;
  Eigen::VectorXd z0(2);
  z0 << 5.0, 5.0;  // strictly feasible
  const auto res = barrier_minimize(c, prog, z0);
  REQUIRE(res.feasible);
  REQUIRE(res.converged);
  CHECK(res.z(0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(res.z(1) == doctest::Approx(0.0).scale(1).epsilon(1e-6));
}

TEST_CASE("barrier: quadratic boundary optimum on the disk") {
  DiskToy prog;
  Eigen::VectorXd c(2);
  c << 1.0, 1.0;
  Eigen::VectorXd z0 = Eigen::VectorXd::Zero(2);
  const auto res = barrier_minimize(c, prog, z0);
  REQUIRE(res.converged);
  const double r = -1.0 / std::sqrt(2.0);
  CHECK(res.z(0) == doctest::Approx(r).epsilon(1e-5));
  CHECK(res.z(1) == doctest::Approx(r).epsilon(1e-5));
}

TEST_CASE("barrier: phase 1 recovers from an infeasible start") {
  LinearToy prog;
  Eigen::VectorXd c(2);
  c << 1.0, 1.0;
  Eigen::VectorXd z0(2);
  z0 << -3.0, 20.0;  // violates both g0 and g1
  const auto res = barrier_minimize(c, prog, z0);
  REQUIRE(res.feasible);
  REQUIRE(res.converged);
  CHECK(res.z(0) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("barrier: reports infeasibility when the interior is empty") {
  // 1 - x <= 0 and x - 1 <= 0 has no strict interior.
  class Empty final : public SmoothProgram {
   public:
    int dim() const override { return 1; }
    int constraint_count() const override { return 2; }
    void constraint_values(const Eigen::VectorXd& z, Eigen::VectorXd& g) const override {
      g.resize(2);
      g(0) = 1.0 - z(0);
      g(1) = z(0) - 1.0;
    }
    void constraint_derivs(const Eigen::VectorXd& z, Eigen::VectorXd& g,
                           std::vector<SparseVec>& grads,
                           std::vector<SparseVec>& hess) const override {
      constraint_values(z, g);
      grads.assign(2, {});
      hess.assign(2, {});
      grads[0].add(0, -1.0);
      grads[1].add(0, 1.0);
    }
  } prog;
  Eigen::VectorXd c = Eigen::VectorXd::Ones(1);
  Eigen::VectorXd z0 = Eigen::VectorXd::Constant(1, 5.0);
  const auto res = barrier_minimize(c, prog, z0);
  CHECK_FALSE(res.feasible);
}
