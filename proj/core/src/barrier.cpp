#include "lwa/barrier.hpp"
#include <cstdio>
#include <cstdlib>

#include <cmath>
#include <limits>

namespace lwa::num {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Barrier potential t*c.z - sum log(-g); +inf outside the strict interior.
double potential(double t, const Eigen::VectorXd& c, const Eigen::VectorXd& z,
                 const Eigen::VectorXd& g) {
  double phi = t * c.dot(z);
  for (int i = 0; i < g.size(); ++i) {
    if (!(g(i) < 0.0)) return kInf;
    phi -= std::log(-g(i));
  }
  return phi;
}

// One centering run at fixed t; returns false if no progress was possible.
bool center(double t, const Eigen::VectorXd& c, const SmoothProgram& prog, Eigen::VectorXd& z,
            const BarrierOptions& opts, int& newton_iters, double stop_below = -kInf,
            int stop_coord = -1) {
  const int n = prog.dim();
  const int m = prog.constraint_count();
  Eigen::VectorXd g(m);
  std::vector<SparseVec> grads(m), hess(m);
  Eigen::VectorXd grad(n);
  Eigen::MatrixXd h(n, n);

  for (int it = 0; it < opts.max_newton_per_center; ++it) {
    if (stop_coord >= 0 && z(stop_coord) < stop_below) return true;

    prog.constraint_derivs(z, g, grads, hess);
    grad = t * c;
    h.setZero();
    for (int i = 0; i < m; ++i) {
      const double s = -g(i);
      if (!(s > 0.0)) return false;  // lost the interior (numerical)
      const double w1 = 1.0 / s;
      const double w2 = 1.0 / (s * s);
      for (const auto& [j, v] : grads[i].entries) grad(j) += w1 * v;
      for (const auto& [j, v] : grads[i].entries)
        for (const auto& [k, u] : grads[i].entries) h(j, k) += w2 * v * u;
      for (const auto& [j, v] : hess[i].entries) h(j, j) += std::max(v, 0.0) * w1;
    }

    Eigen::LDLT<Eigen::MatrixXd> ldlt(h);
    Eigen::VectorXd d = -ldlt.solve(grad);
    double decrement = -grad.dot(d);
    if (!(decrement > 0.0) || ldlt.info() != Eigen::Success) {
      // Regularize and retry once; fall back to steepest descent scaling.
      h.diagonal().array() += 1e-10 * (1.0 + h.diagonal().cwiseAbs().maxCoeff());
      ldlt.compute(h);
      d = -ldlt.solve(grad);
      decrement = -grad.dot(d);
      if (!(decrement > 0.0)) {
        if (std::getenv("LWA_BARRIER_DEBUG"))
          std::fprintf(stderr, "  center stall: it=%d decrement=%g |grad|=%g\n", it, decrement,
                       grad.norm());
        return true;  // numerically centered
      }
    }
    ++newton_iters;
    if (0.5 * decrement < opts.newton_tol) return true;

    const double phi0 = potential(t, c, z, g);
    double alpha = 1.0;
    bool moved = false;
    Eigen::VectorXd znew(n), gnew(m);
    for (int bt = 0; bt < opts.max_backtracks; ++bt) {
      znew = z + alpha * d;
      prog.constraint_values(znew, gnew);
      const double phi = potential(t, c, znew, gnew);
      if (phi < phi0 - opts.armijo_c * alpha * decrement) {
        z = znew;
        moved = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!moved) return true;  // step collapsed; treat as centered
  }
  return true;
}

// Phase-1 wrapper: variables (z, s), constraints g_i(z) - s <= 0.
class Phase1Program final : public SmoothProgram {
 public:
  explicit Phase1Program(const SmoothProgram& inner) : inner_(inner) {}
  int dim() const override { return inner_.dim() + 1; }
  int constraint_count() const override { return inner_.constraint_count(); }

  void constraint_values(const Eigen::VectorXd& z, Eigen::VectorXd& g) const override {
    const Eigen::VectorXd zz = z.head(inner_.dim());
    inner_.constraint_values(zz, g);
    g.array() -= z(inner_.dim());
  }
  void constraint_derivs(const Eigen::VectorXd& z, Eigen::VectorXd& g,
                         std::vector<SparseVec>& grads,
                         std::vector<SparseVec>& hess) const override {
    const Eigen::VectorXd zz = z.head(inner_.dim());
    inner_.constraint_derivs(zz, g, grads, hess);
    g.array() -= z(inner_.dim());
    const int s_idx = inner_.dim();
    for (auto& gr : grads) gr.add(s_idx, -1.0);
  }

 private:
  const SmoothProgram& inner_;
};

}  // namespace

BarrierResult barrier_minimize(const Eigen::VectorXd& c, const SmoothProgram& prog,
                               const Eigen::VectorXd& z0, const BarrierOptions& opts) {
  const int n = prog.dim();
  const int m = prog.constraint_count();
  BarrierResult res;
  res.z = z0;

  Eigen::VectorXd g(m);
  prog.constraint_values(res.z, g);
  double worst = g.maxCoeff();

  if (worst > opts.phase1_target) {
    // Phase 1: drive s = max slack below the strict-interior target.
    Phase1Program p1(prog);
    Eigen::VectorXd zs(n + 1);
    zs.head(n) = res.z;
    zs(n) = worst + std::max(1.0, 0.1 * std::abs(worst));
    Eigen::VectorXd c1 = Eigen::VectorXd::Zero(n + 1);
    c1(n) = 1.0;

    double t = 1.0;
    for (int round = 0; round < opts.max_centerings; ++round) {
      const bool ok = center(t, c1, p1, zs, opts, res.newton_iters, opts.phase1_target, n);
      if (std::getenv("LWA_BARRIER_DEBUG")) {
        Eigen::VectorXd gg(m);
        prog.constraint_values(zs.head(n), gg);
        std::fprintf(stderr, "p1 round=%d t=%g s=%g maxg=%g center_ok=%d iters=%d\n", round, t,
                     zs(n), gg.maxCoeff(), ok, res.newton_iters);
      }
      if (!ok) break;
      if (zs(n) < opts.phase1_target) break;
      if (static_cast<double>(m) / t < 0.01 * std::abs(opts.phase1_target)) break;
      t *= opts.mu;
    }
    prog.constraint_values(zs.head(n), g);
    if (g.maxCoeff() >= 0.0) {
      res.feasible = false;  // no strictly interior point found
      return res;
    }
    res.z = zs.head(n);
  }
  res.feasible = true;

  double t = opts.t0;
  for (int round = 0; round < opts.max_centerings; ++round) {
    if (!center(t, c, prog, res.z, opts, res.newton_iters)) break;
    res.gap = static_cast<double>(m) / t;
    if (res.gap < opts.gap_tol) {
      res.converged = true;
      break;
    }
    t *= opts.mu;
  }
  return res;
}

}  // namespace lwa::num
