#include "lwa/scheduler.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "json.hpp"
#include "lwa/barrier.hpp"
#include "lwa/baselines.hpp"
#include "lwa/effective_capacity.hpp"
#include "lwa/numerics.hpp"
#include "lwa/simplex.hpp"

namespace lwa::opt {

namespace {
constexpr double kDeltaZero = 1e-14;   // treat smaller deltas as unused
constexpr double kQosMargin = 1e-3;    // strictness margin in equality solves
constexpr double kRateMargin = 1e-6;
}  // namespace

double Allocation::licensed_bandwidth() const {
  double s = 0.0;
  for (const auto& u : users) s += u[kLicensed].x * u[kLicensed].bandwidth();
  return s;
}

double Allocation::unlicensed_usage() const {
  double s = 0.0;
  for (const auto& u : users) s += u[kUnlicensed].bandwidth();
  return s;
}

// ---------------------------------------------------------------------------
// Per-scenario model: decay rates theta*C = Psi_m(delta) and derivatives.
// ---------------------------------------------------------------------------
class ScenarioModel {
 public:
  explicit ScenarioModel(const Scenario& s)
      : scenario_(s), point_(dcf::solve_fixed_point(s.dcf)), off_(s.dcf, point_) {
    for (const auto& u : s.users) {
      c1_.push_back(std::log2(1.0 + u.snr_unlicensed) * s.dcf.success_slot);
      snr2_.push_back(u.snr_licensed);
    }
  }

  int user_count() const { return static_cast<int>(c1_.size()); }
  const Scenario& scenario() const { return scenario_; }
  const dcf::OffTimeModel& off_model() const { return off_; }

  double psi(int m, int n, double delta) const {
    if (delta == 0.0) return 0.0;
    if (m == kUnlicensed) return off_.cycle_log_mgf_inverse(delta * c1_[n]);
    return ec::licensed_decay_rate(delta, snr2_[n], scenario_.frame_length);
  }

  struct PsiEval {
    double value = 0.0, d1 = 0.0, d2 = 0.0;
  };

  PsiEval psi_derivs(int m, int n, double delta) const {
    PsiEval out;
    if (m == kUnlicensed) {
      const double c = c1_[n];
      const double v = off_.cycle_log_mgf_inverse(delta * c);
      // Inverse-function rule with central differences on the forward
      // transform (F_inverse itself has no closed-form derivatives).
      const double h1 = 1e-6 * (1.0 + std::abs(v));
      const double f_p = off_.cycle_log_mgf(v + h1);
      const double f_m = off_.cycle_log_mgf(v - h1);
      const double fp = (f_p - f_m) / (2.0 * h1);
      const double h2 = 1e-4 * (1.0 + std::abs(v));
      const double fpp = (off_.cycle_log_mgf(v + h2) - 2.0 * (delta * c) +
                          off_.cycle_log_mgf(v - h2)) /
                         (h2 * h2);
      out.value = v;
      out.d1 = c / fp;
      out.d2 = -c * c * fpp / (fp * fp * fp);
    } else {
      auto m2 = ec::licensed_exp_moments(delta, snr2_[n], scenario_.frame_length);
      m2.e0 = std::max(m2.e0, 1e-300);
      const double t = scenario_.frame_length;
      out.value = -std::log(m2.e0) / t;
      out.d1 = m2.e1 / m2.e0;
      out.d2 = -t * (m2.e2 * m2.e0 - m2.e1 * m2.e1) / (m2.e0 * m2.e0);
    }
    return out;
  }

  // Psi_2^{-1}: delta achieving a licensed decay rate target.
  double licensed_delta_for_decay(int n, double target) const {
    if (target <= 0.0) return 0.0;
    double hi = 1.0;
    int grow = 0;
    while (psi(kLicensed, n, hi) < target) {
      hi *= 2.0;
      if (++grow > 200) throw std::runtime_error("licensed_delta_for_decay: no bracket");
    }
    return num::bisect([&](double d) { return psi(kLicensed, n, d) - target; }, 0.0, hi, 80);
  }

  double unlicensed_delta_for_decay(int n, double target) const {
    // Psi_1(delta) = F_inv(delta c1) = target  <=>  delta = F(target)/c1.
    return off_.cycle_log_mgf(target) / c1_[n];
  }

 private:
  Scenario scenario_;
  dcf::ContentionPoint point_;
  dcf::OffTimeModel off_;
  std::vector<double> c1_;
  std::vector<double> snr2_;
};

namespace {

// ---------------------------------------------------------------------------
// The convex subproblem over (delta, x) at fixed a: constraints of P2/P3.
// ---------------------------------------------------------------------------
class DcProgram final : public num::SmoothProgram {
 public:
  DcProgram(const ScenarioModel& model, const Allocation& alloc, double big_m, bool pin_x,
            const std::vector<double>& p_eff,
            const std::vector<std::array<double, 2>>& delta_cap)
      : model_(model), big_m_(big_m), p_eff_(p_eff) {
    const int n_users = model.user_count();
    const Scenario& s = model.scenario();
    delta_idx_.assign(n_users, {-1, -1});
    x_idx_.assign(n_users, {-1, -1});
    x_fixed_.assign(n_users, {1.0, 1.0});
    a_.assign(n_users, {0.0, 0.0});

    int dim = 0;
    for (int n = 0; n < n_users; ++n) {
      for (int m = 0; m < 2; ++m) {
        a_[n][m] = alloc.users[n][m].a;
        x_fixed_[n][m] = alloc.users[n][m].x;
        const bool band_usable = !(m == kUnlicensed && s.unlicensed_budget <= 0.0);
        const bool active = band_usable && !(pin_x && alloc.users[n][m].x < 0.5);
        if (active) {
          delta_idx_[n][m] = dim++;
          delta_scale_.push_back(std::max(1e-3, alloc.users[n][m].delta));
          delta_cap_.push_back(delta_cap[n][m]);
        }
        if (!pin_x && band_usable) x_idx_[n][m] = dim++;
        if (!band_usable) x_fixed_[n][m] = 0.0;
        if (pin_x) x_fixed_[n][m] = alloc.users[n][m].x < 0.5 ? 0.0 : 1.0;
      }
    }
    dim_ = dim;

    has_budget_row_ = s.unlicensed_budget > 0.0;
    // Row layout: rate (N) | budget (0/1) | qos (N) | bigM per delta var |
    //             delta box (2 per delta var) | x box (2 per x var).
    // The delta upper bound is far above any useful operating point; it only
    // keeps the barrier's level sets compact when a band has a = 0 and the
    // objective/constraints cannot pin its delta.
    n_delta_vars_ = 0;
    n_x_vars_ = 0;
    for (int n = 0; n < n_users; ++n)
      for (int m = 0; m < 2; ++m) {
        if (delta_idx_[n][m] >= 0) ++n_delta_vars_;
        if (x_idx_[n][m] >= 0) ++n_x_vars_;
      }
    rows_ = n_users + (has_budget_row_ ? 1 : 0) + n_users + n_delta_vars_ +
            2 * n_delta_vars_ + 2 * n_x_vars_;
  }

  int dim() const override { return dim_; }
  int constraint_count() const override { return rows_; }

  void constraint_values(const Eigen::VectorXd& z, Eigen::VectorXd& g) const override {
    assemble(z, g, nullptr, nullptr);
  }
  void constraint_derivs(const Eigen::VectorXd& z, Eigen::VectorXd& g,
                         std::vector<num::SparseVec>& grads,
                         std::vector<num::SparseVec>& hess) const override {
    grads.assign(rows_, {});
    hess.assign(rows_, {});
    assemble(z, g, &grads, &hess);
  }

  // Objective coefficients of the convexified penalty problem (36), in the
  // caller's scale: sum delta2 a2 + lambda sum x - 2 lambda sum x_prev x.
  Eigen::VectorXd objective(double lambda, const std::vector<std::array<double, 2>>& x_prev,
                            double scale) const {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(dim_);
    for (int n = 0; n < static_cast<int>(delta_idx_.size()); ++n) {
      if (delta_idx_[n][kLicensed] >= 0) c(delta_idx_[n][kLicensed]) = a_[n][kLicensed] / scale;
      for (int m = 0; m < 2; ++m)
        if (x_idx_[n][m] >= 0) c(x_idx_[n][m]) = lambda * (1.0 - 2.0 * x_prev[n][m]) / scale;
    }
    return c;
  }

  Eigen::VectorXd pack(const Allocation& alloc) const {
    Eigen::VectorXd z = Eigen::VectorXd::Zero(dim_);
    for (int n = 0; n < static_cast<int>(delta_idx_.size()); ++n)
      for (int m = 0; m < 2; ++m) {
        if (delta_idx_[n][m] >= 0) z(delta_idx_[n][m]) = alloc.users[n][m].delta;
        if (x_idx_[n][m] >= 0) z(x_idx_[n][m]) = alloc.users[n][m].x;
      }
    return z;
  }

  void unpack(const Eigen::VectorXd& z, Allocation& alloc) const {
    for (int n = 0; n < static_cast<int>(delta_idx_.size()); ++n)
      for (int m = 0; m < 2; ++m) {
        if (delta_idx_[n][m] >= 0)
          alloc.users[n][m].delta = std::max(0.0, z(delta_idx_[n][m]));
        else if (x_fixed_[n][m] < 0.5 && x_idx_[n][m] < 0)
          alloc.users[n][m].delta = 0.0;
        if (x_idx_[n][m] >= 0)
          alloc.users[n][m].x = std::min(1.0, std::max(0.0, z(x_idx_[n][m])));
        else
          alloc.users[n][m].x = x_fixed_[n][m];
      }
  }

 private:
  void assemble(const Eigen::VectorXd& z, Eigen::VectorXd& g, std::vector<num::SparseVec>* grads,
                std::vector<num::SparseVec>* hess) const {
    const Scenario& s = model_.scenario();
    const int n_users = static_cast<int>(delta_idx_.size());
    g.resize(rows_);

    // Per-(user, band) decay-rate evaluations at the current z.
    struct Term {
      double delta = 0.0, psi = 0.0, d1 = 0.0, d2 = 0.0;
    };
    std::vector<std::array<Term, 2>> terms(n_users);
    for (int n = 0; n < n_users; ++n)
      for (int m = 0; m < 2; ++m) {
        Term& t = terms[n][m];
        if (delta_idx_[n][m] >= 0) {
          t.delta = z(delta_idx_[n][m]);
          if (grads) {
            const auto e = model_.psi_derivs(m, n, t.delta);
            t.psi = e.value;
            t.d1 = e.d1;
            t.d2 = e.d2;
          } else {
            t.psi = model_.psi(m, n, t.delta);
          }
        }
      }

    int row = 0;
    // Rate rows: (R - sum a psi)/R <= 0
    for (int n = 0; n < n_users; ++n, ++row) {
      const double r = s.users[n].qos.min_rate;
      double cap = 0.0;
      for (int m = 0; m < 2; ++m) cap += a_[n][m] * terms[n][m].psi;
      g(row) = (r - cap) / r;
      if (grads) {
        for (int m = 0; m < 2; ++m)
          if (delta_idx_[n][m] >= 0 && a_[n][m] > 0.0) {
            (*grads)[row].add(delta_idx_[n][m], -a_[n][m] * terms[n][m].d1 / r);
            (*hess)[row].add(delta_idx_[n][m], -a_[n][m] * terms[n][m].d2 / r);
          }
      }
    }
    // Budget row: (sum delta1 a1 - B1)/B1 <= 0
    if (has_budget_row_) {
      const double b1 = s.unlicensed_budget;
      double usage = 0.0;
      for (int n = 0; n < n_users; ++n)
        if (delta_idx_[n][kUnlicensed] >= 0) usage += terms[n][kUnlicensed].delta * a_[n][kUnlicensed];
      g(row) = (usage - b1) / b1;
      if (grads)
        for (int n = 0; n < n_users; ++n)
          if (delta_idx_[n][kUnlicensed] >= 0 && a_[n][kUnlicensed] > 0.0)
            (*grads)[row].add(delta_idx_[n][kUnlicensed], a_[n][kUnlicensed] / b1);
      ++row;
    }
    // QoS rows: e1 + e2 - 2 + (1 - P) (x1 + x2) <= 0
    for (int n = 0; n < n_users; ++n, ++row) {
      const double d_th = s.users[n].qos.delay_bound;
      const double p = p_eff_[n];
      double lhs = -2.0;
      for (int m = 0; m < 2; ++m) {
        const double e = std::exp(-terms[n][m].psi * d_th);
        lhs += e;
        const double xv = x_idx_[n][m] >= 0 ? z(x_idx_[n][m]) : x_fixed_[n][m];
        lhs += (1.0 - p) * xv;
        if (grads) {
          if (delta_idx_[n][m] >= 0) {
            (*grads)[row].add(delta_idx_[n][m], -d_th * terms[n][m].d1 * e);
            (*hess)[row].add(delta_idx_[n][m],
                             e * (d_th * d_th * terms[n][m].d1 * terms[n][m].d1 -
                                  d_th * terms[n][m].d2));
          }
          if (x_idx_[n][m] >= 0) (*grads)[row].add(x_idx_[n][m], 1.0 - p);
        }
      }
      g(row) = lhs;
    }
    // Big-M rows: (delta a - x Lambda)/Lambda <= 0
    for (int n = 0; n < n_users; ++n)
      for (int m = 0; m < 2; ++m) {
        if (delta_idx_[n][m] < 0) continue;
        const double xv = x_idx_[n][m] >= 0 ? z(x_idx_[n][m]) : x_fixed_[n][m];
        g(row) = (terms[n][m].delta * a_[n][m] - xv * big_m_) / big_m_;
        if (grads) {
          if (a_[n][m] > 0.0) (*grads)[row].add(delta_idx_[n][m], a_[n][m] / big_m_);
          if (x_idx_[n][m] >= 0) (*grads)[row].add(x_idx_[n][m], -1.0);
        }
        ++row;
      }
    // delta box rows
    {
      int k = 0;
      for (int n = 0; n < n_users; ++n)
        for (int m = 0; m < 2; ++m) {
          if (delta_idx_[n][m] < 0) continue;
          g(row) = -terms[n][m].delta / delta_scale_[k];
          if (grads) (*grads)[row].add(delta_idx_[n][m], -1.0 / delta_scale_[k]);
          ++row;
          g(row) = (terms[n][m].delta - delta_cap_[k]) / delta_cap_[k];
          if (grads) (*grads)[row].add(delta_idx_[n][m], 1.0 / delta_cap_[k]);
          ++row;
          ++k;
        }
    }
    // x box rows
    for (int n = 0; n < n_users; ++n)
      for (int m = 0; m < 2; ++m) {
        if (x_idx_[n][m] < 0) continue;
        const double xv = z(x_idx_[n][m]);
        g(row) = -xv;
        if (grads) (*grads)[row].add(x_idx_[n][m], -1.0);
        ++row;
        g(row) = xv - 1.0;
        if (grads) (*grads)[row].add(x_idx_[n][m], 1.0);
        ++row;
      }
  }

  const ScenarioModel& model_;
  double big_m_;
  std::vector<double> p_eff_;
  std::vector<std::array<int, 2>> delta_idx_, x_idx_;
  std::vector<std::array<double, 2>> x_fixed_, a_;
  std::vector<double> delta_scale_;
  std::vector<double> delta_cap_;
  bool has_budget_row_ = false;
  int dim_ = 0, rows_ = 0, n_delta_vars_ = 0, n_x_vars_ = 0;
};

}  // namespace

// ---------------------------------------------------------------------------
// BcdSolver
// ---------------------------------------------------------------------------
struct BcdSolver::Impl {
  Scenario scenario;
  SolveOptions opts;
  std::unique_ptr<ScenarioModel> model;
  StartResult start;
  double big_m = 0.0;
  double obj_scale = 1.0;

  Impl(const Scenario& s, const SolveOptions& o) : scenario(s), opts(o) {
    scenario.validate();
    model = std::make_unique<ScenarioModel>(scenario);
    start = build_start();
    big_m = start.big_m;
    obj_scale = std::max(1.0, objective_pure(start.alloc));
  }

  static double objective_pure(const Allocation& alloc) {
    double s = 0.0;
    for (const auto& u : alloc.users) s += u[kLicensed].delta * u[kLicensed].a;
    return s;
  }

  double objective_penalized(const Allocation& alloc, double lambda) const {
    double pen = 0.0;
    for (const auto& u : alloc.users)
      for (int m = 0; m < 2; ++m) pen += u[m].x * (1.0 - u[m].x);
    return objective_pure(alloc) + lambda * pen;
  }

  // Feasible start per the fixed recipe: both bands selected, equal
  // unlicensed split, per-band decay rates pinned to the QoS target, and
  // licensed share grown until the rate constraint holds.
  StartResult build_start() const {
    const int n_users = model->user_count();
    StartResult out;
    out.alloc.users.assign(n_users, {});
    out.alloc.capacity.assign(n_users, {0.0, 0.0});
    const double b1 = scenario.unlicensed_budget;

    for (int n = 0; n < n_users; ++n) {
      const auto& qos = scenario.users[n].qos;
      const double p_strict = qos.violation_prob * (1.0 - kQosMargin);
      const double q = std::log(1.0 / p_strict) / qos.delay_bound;

      auto& bu = out.alloc.users[n][kUnlicensed];
      bu.x = 1.0;
      if (b1 > 0.0) {
        bu.delta = model->unlicensed_delta_for_decay(n, q);
        const double beta1 = (b1 / n_users) * (1.0 - kRateMargin);
        bu.a = beta1 / bu.delta;
      } else {
        bu.delta = 0.0;
        bu.a = 0.0;
        bu.x = 0.0;
      }
      const double c1 = bu.a * (b1 > 0.0 ? q : 0.0);

      auto& bl = out.alloc.users[n][kLicensed];
      bl.x = 1.0;
      bl.delta = model->licensed_delta_for_decay(n, q);
      const double need = qos.min_rate * (1.0 + kRateMargin);
      double a2 = std::max(0.0, (need - c1) / q);
      // Geometric growth guard in case the closed-form estimate undershoots.
      for (int i = 0; i < 80; ++i) {
        const double cap = c1 + a2 * model->psi(kLicensed, n, bl.delta);
        if (cap >= need || a2 > 1e30) break;
        a2 = a2 > 0.0 ? a2 * 2.0 : need / (2.0 * q);
      }
      bl.a = a2;
      out.alloc.capacity[n][kUnlicensed] = c1;
      out.alloc.capacity[n][kLicensed] = a2 * q;
    }

    double licensed = 0.0;
    for (const auto& u : out.alloc.users) licensed += u[kLicensed].bandwidth();
    out.big_m = scenario.big_m > 0.0 ? scenario.big_m
                                     : std::max(scenario.unlicensed_budget, 4.0 * licensed);
    if (out.big_m <= 0.0) out.big_m = 1.0;

    // Within the cap?
    out.feasible = true;
    for (int n = 0; n < n_users; ++n) {
      if (out.alloc.users[n][kLicensed].bandwidth() > out.big_m * (1.0 + 1e-9)) {
        out.feasible = false;
        std::ostringstream msg;
        msg << "user " << n << ": licensed bandwidth "
            << out.alloc.users[n][kLicensed].bandwidth() << " exceeds the cap " << out.big_m;
        out.message = msg.str();
      }
    }
    return out;
  }

  LpOutcome run_lp(Allocation& alloc) const {
    LpOutcome out;
    out.objective_before = objective_pure(alloc);
    const int n_users = model->user_count();

    // Active variables: (m, n) with positive delta and selection weight.
    std::vector<std::pair<int, int>> vars;  // (n, m)
    for (int n = 0; n < n_users; ++n)
      for (int m = 0; m < 2; ++m)
        if (alloc.users[n][m].delta > kDeltaZero && alloc.users[n][m].x > 1e-12)
          vars.emplace_back(n, m);
    if (vars.empty()) {
      out.solved = true;
      out.objective_after = out.objective_before;
      return out;
    }

    std::vector<double> psi(vars.size());
    for (std::size_t j = 0; j < vars.size(); ++j)
      psi[j] = model->psi(vars[j].second, vars[j].first, alloc.users[vars[j].first][vars[j].second].delta);

    const bool budget_row = scenario.unlicensed_budget > 0.0;
    const int n_rows = n_users + (budget_row ? 1 : 0) + static_cast<int>(vars.size());
    num::LpProblem lp;
    lp.c = Eigen::VectorXd::Zero(vars.size());
    lp.a = Eigen::MatrixXd::Zero(n_rows, vars.size());
    lp.b = Eigen::VectorXd::Zero(n_rows);
    lp.relation.assign(n_rows, -1);

    for (std::size_t j = 0; j < vars.size(); ++j) {
      const auto [n, m] = vars[j];
      if (m == kLicensed) lp.c(j) = alloc.users[n][m].delta;
      lp.a(n, j) = psi[j];
      if (budget_row && m == kUnlicensed) lp.a(n_users, j) = alloc.users[n][m].delta;
      const int bigm_row = n_users + (budget_row ? 1 : 0) + static_cast<int>(j);
      lp.a(bigm_row, j) = alloc.users[n][m].delta;
      lp.b(bigm_row) = alloc.users[n][m].x * big_m;
    }
    for (int n = 0; n < n_users; ++n) {
      lp.b(n) = scenario.users[n].qos.min_rate;
      lp.relation[n] = +1;
    }
    if (budget_row) lp.b(n_users) = scenario.unlicensed_budget;

    const auto sol = num::solve_lp(lp);
    if (sol.status != num::LpStatus::optimal) {
      out.solved = false;
      out.objective_after = out.objective_before;
      return out;
    }
    out.certificate_residual = sol.complementarity_residual;

    Allocation trial = alloc;
    for (std::size_t j = 0; j < vars.size(); ++j)
      trial.users[vars[j].first][vars[j].second].a = std::max(0.0, sol.x(j));
    const double after = objective_pure(trial);
    if (after <= out.objective_before + 1e-9 * obj_scale) {
      alloc = trial;
      out.objective_after = after;
    } else {
      out.objective_after = out.objective_before;  // keep the old point
    }
    out.solved = true;
    return out;
  }

  DcOutcome run_dc(Allocation& alloc, double lambda, bool pin_x,
                   const std::vector<double>& p_eff) const {
    DcOutcome out;
    std::vector<std::array<double, 2>> delta_cap(alloc.users.size());
    for (std::size_t n = 0; n < alloc.users.size(); ++n)
      for (int m = 0; m < 2; ++m)
        delta_cap[n][m] = 1e3 * std::max({1.0, start.alloc.users[n][m].delta,
                                          alloc.users[n][m].delta});
    DcProgram prog(*model, alloc, big_m, pin_x, p_eff, delta_cap);
    num::BarrierOptions bopts;
    bopts.gap_tol = opts.barrier_gap_tol;

    Eigen::VectorXd z = prog.pack(alloc);
    double f_prev = objective_penalized(alloc, lambda);
    std::vector<std::array<double, 2>> x_prev(alloc.users.size());
    for (std::size_t n = 0; n < alloc.users.size(); ++n)
      for (int m = 0; m < 2; ++m) x_prev[n][m] = alloc.users[n][m].x;

    const int cap = pin_x ? 1 : opts.inner_cap;
    for (int l = 0; l < cap; ++l) {
      const Eigen::VectorXd c = prog.objective(lambda, x_prev, obj_scale);
      const auto res = num::barrier_minimize(c, prog, z, bopts);
      if (!res.feasible) {
        out.solver_ok = false;
        break;
      }
      ++out.inner_iters;

      Allocation trial = alloc;
      prog.unpack(res.z, trial);
      const double f_new = objective_penalized(trial, lambda);
      if (!pin_x && f_new > f_prev + 1e-9 * std::max(1.0, std::abs(f_prev))) break;

      double dx = 0.0;
      for (std::size_t n = 0; n < trial.users.size(); ++n)
        for (int m = 0; m < 2; ++m) dx = std::max(dx, std::abs(trial.users[n][m].x - x_prev[n][m]));

      alloc = trial;
      z = res.z;
      f_prev = f_new;
      for (std::size_t n = 0; n < alloc.users.size(); ++n)
        for (int m = 0; m < 2; ++m) x_prev[n][m] = alloc.users[n][m].x;
      if (dx < opts.inner_x_tol) break;
    }
    out.objective_after = f_prev;
    return out;
  }

  void fill_capacities(Allocation& alloc) const {
    alloc.capacity.assign(alloc.users.size(), {0.0, 0.0});
    for (std::size_t n = 0; n < alloc.users.size(); ++n)
      for (int m = 0; m < 2; ++m) {
        const auto& b = alloc.users[n][m];
        alloc.capacity[n][m] =
            b.delta > 0.0 && b.a > 0.0 ? b.a * model->psi(m, static_cast<int>(n), b.delta) : 0.0;
      }
  }

  // Rounding, continuous re-solve, exact verification, and repair.
  SolveStatus round_and_repair(Allocation& alloc, SolveReport& report) const {
    std::vector<double> p_eff(scenario.users.size());
    for (std::size_t n = 0; n < p_eff.size(); ++n)
      p_eff[n] = scenario.users[n].qos.violation_prob;

    auto round_x = [&](Allocation& a) {
      for (auto& u : a.users)
        for (int m = 0; m < 2; ++m) {
          double& x = u[m].x;
          if (std::abs(x - 0.5) < 1e-12)
            x = (m == kUnlicensed) ? 1.0 : 0.0;  // prefer the free band on ties
          else
            x = x > 0.5 ? 1.0 : 0.0;
          if (x == 0.0) u[m].delta = 0.0;
        }
    };

    auto resolve = [&](Allocation& a) {
      const auto lp1 = run_lp(a);
      report.lp_certificate_residual =
          std::max(report.lp_certificate_residual, lp1.certificate_residual);
      run_dc(a, 0.0, /*pin_x=*/true, p_eff);
      const auto lp2 = run_lp(a);
      report.lp_certificate_residual =
          std::max(report.lp_certificate_residual, lp2.certificate_residual);
    };

    auto debug_feas = [&](const char* tag, const FeasibilityReport& f) {
      if (!std::getenv("LWA_SOLVER_DEBUG")) return;
      std::fprintf(stderr,
                   "repair[%s]: rate=%.3g budget=%.3g qos=%.3g bigm=%.3g bin=%.3g ok=%d\n", tag,
                   f.rate_violation, f.budget_violation, f.qos_exact_violation,
                   f.big_m_violation, f.binarity_residual, f.ok());
    };

    round_x(alloc);
    resolve(alloc);
    fill_capacities(alloc);
    auto feas = check_allocation(scenario, alloc);
    debug_feas("post-round", feas);
    if (feas.ok()) {
      report.feasibility = feas;
      return SolveStatus::converged;
    }

    // Repair 1: force the licensed band on for violating users.
    for (std::size_t n = 0; n < alloc.users.size(); ++n) {
      const auto user_feas = user_violates(alloc, static_cast<int>(n));
      if (user_feas) {
        auto& bl = alloc.users[n][kLicensed];
        bl.x = 1.0;
        if (bl.delta <= kDeltaZero)
          bl.delta = model->licensed_delta_for_decay(
              static_cast<int>(n),
              std::log(1.0 / (scenario.users[n].qos.violation_prob * (1.0 - kQosMargin))) /
                  scenario.users[n].qos.delay_bound);
        if (bl.a <= 0.0) bl.a = scenario.users[n].qos.min_rate;
      }
    }
    resolve(alloc);
    fill_capacities(alloc);
    feas = check_allocation(scenario, alloc);
    debug_feas("post-repair1", feas);
    if (feas.ok()) {
      report.feasibility = feas;
      return SolveStatus::converged;
    }

    // Repair 2: tighten the relaxed QoS budget for violating users; the
    // halved budget makes the separable form imply the exact ratio form.
    for (std::size_t n = 0; n < alloc.users.size(); ++n)
      if (user_violates(alloc, static_cast<int>(n))) p_eff[n] *= 0.5;
    {
      const auto lp1 = run_lp(alloc);
      report.lp_certificate_residual =
          std::max(report.lp_certificate_residual, lp1.certificate_residual);
      run_dc(alloc, 0.0, /*pin_x=*/true, p_eff);
      const auto lp2 = run_lp(alloc);
      report.lp_certificate_residual =
          std::max(report.lp_certificate_residual, lp2.certificate_residual);
    }
    fill_capacities(alloc);
    feas = check_allocation(scenario, alloc);
    debug_feas("post-repair2", feas);
    report.feasibility = feas;
    return feas.ok() ? SolveStatus::converged : SolveStatus::infeasible;
  }

  // ----- exact-QoS-aware refinement -----------------------------------
  // At binary selections the per-user optimum given its unlicensed share
  // has a closed per-band structure: serve the rate at the cheapest pair of
  // violation levels (e1, e2) satisfying both the separable constraint
  // e1 + e2 <= 2p and the exact capacity-weighted ratio.  The relaxed
  // formulation the BCD optimizes cannot see the ratio's slack, so its
  // solutions overprice users whose unlicensed band can run above p while a
  // low-violation licensed trickle pulls the weighted mean back under p.
  // Reprice every user on delta grids, re-split the budget by DP, and adopt
  // the allocation when it verifies feasible and cheaper.

  struct BandTables {
    std::vector<double> delta1, k1, e1;  // capacity per Hz, violation
    std::vector<double> delta2, e2, m2;  // sorted by e2 ascending
    std::vector<double> g;               // m2/(p - e2), 1e300 where e2 >= p
    num::RangeMin gmin;
    double p = 0.0, rate = 0.0;
  };

  struct Choice {
    double cost = 1e300;
    double beta1 = 0.0, delta1 = 0.0;
    double c2 = 0.0, delta2 = 0.0;
  };

  BandTables build_tables(int n, int grid, double f_lo, double f_hi, double d1_center,
                          double d2_center) const {
    BandTables t;
    const auto& u = scenario.users[n];
    t.p = u.qos.violation_prob * (1.0 - 1e-9);
    t.rate = u.qos.min_rate * (1.0 + 1e-9);
    const double d = u.qos.delay_bound;
    std::vector<std::pair<double, double>> band2;
    for (int i = 0; i < grid; ++i) {
      const double f = std::exp(std::log(f_lo) + (std::log(f_hi) - std::log(f_lo)) * i /
                                                     (grid - 1));
      {
        const double delta = d1_center * f;
        const double psi = model->psi(kUnlicensed, n, delta);
        t.delta1.push_back(delta);
        t.k1.push_back(psi / delta);
        t.e1.push_back(std::exp(-psi * d));
      }
      {
        const double delta = d2_center * f;
        const double psi = model->psi(kLicensed, n, delta);
        band2.emplace_back(std::exp(-psi * d), delta);
      }
    }
    std::sort(band2.begin(), band2.end());
    for (const auto& [e, delta] : band2) {
      const double psi = model->psi(kLicensed, n, delta);
      t.delta2.push_back(delta);
      t.e2.push_back(e);
      t.m2.push_back(delta / psi);
      t.g.push_back(e < t.p ? t.m2.back() / (t.p - e) : 1e300);
    }
    t.gmin = num::RangeMin(t.g);
    return t;
  }

  // Minimal licensed bandwidth serving the user's rate with unlicensed
  // bandwidth b; returns the witness when `witness` is set.
  Choice price_user(const BandTables& t, double b, bool witness) const {
    const double p = t.p;
    Choice best;
    auto last_e2_below = [&](double v) {
      return static_cast<int>(std::upper_bound(t.e2.begin(), t.e2.end(), v) - t.e2.begin()) - 1;
    };
    auto consider = [&](double cost, std::size_t i, int j, double c2) {
      if (cost >= best.cost) return;
      best.cost = cost;
      if (b > 0.0) {
        best.beta1 = b;
        best.delta1 = t.delta1[i];
      } else {
        best.beta1 = 0.0;
        best.delta1 = 0.0;
      }
      best.c2 = c2;
      best.delta2 = j >= 0 && c2 > 0.0 ? t.delta2[j] : 0.0;
    };
    for (std::size_t i = 0; i < t.k1.size(); ++i) {
      const double e1 = t.e1[i];
      if (e1 >= 2.0 * p) continue;
      const double cap1 = b * t.k1[i];
      const double need = std::max(0.0, t.rate - cap1);
      if (e1 <= p) {
        if (need == 0.0) {
          consider(0.0, i, -1, 0.0);
          continue;
        }
        const double thr = std::min(2.0 * p - e1, p + cap1 * (p - e1) / need);
        const int j = last_e2_below(thr);
        if (j >= 0) consider(need * t.m2[j], i, j, need);
      } else {
        const double surplus = cap1 * (e1 - p);
        const int hi = last_e2_below(std::nextafter(2.0 * p - e1, 0.0));
        if (hi < 0) continue;
        int lo = 0;
        if (need > 0.0) {
          const double thr_b1 = p - surplus / need;
          const int j1 = thr_b1 > 0.0 ? std::min(last_e2_below(thr_b1), hi) : -1;
          if (j1 >= 0) consider(need * t.m2[j1], i, j1, need);
          lo = j1 + 1;
        }
        if (lo <= hi) {
          const double gm = t.gmin.query(lo, hi);
          if (gm < 1e290) {
            const double cost = surplus * gm;
            if (cost < best.cost) {
              if (!witness) {
                best.cost = cost;
              } else {
                for (int j = lo; j <= hi; ++j)
                  if (t.g[j] < 1e290)
                    consider(std::max(need, surplus / (p - t.e2[j])) * t.m2[j], i, j,
                             std::max(need, surplus / (p - t.e2[j])));
              }
            }
          }
        }
      }
    }
    return best;
  }

  bool refine_allocation(Allocation& alloc) const {
    const int n_users = model->user_count();
    const double b_total = scenario.unlicensed_budget;
    constexpr int kUnits = 256;
    constexpr int kGrid = 600;

    std::vector<BandTables> tables;
    std::vector<double> d1_center(n_users), d2_center(n_users);
    for (int n = 0; n < n_users; ++n) {
      const auto& qos = scenario.users[n].qos;
      const double q = std::log(1.0 / (qos.violation_prob * (1.0 - 1e-9))) / qos.delay_bound;
      d1_center[n] = model->unlicensed_delta_for_decay(n, q);
      d2_center[n] = model->licensed_delta_for_decay(n, q);
      tables.push_back(build_tables(n, kGrid, 2e-3, 50.0, d1_center[n], d2_center[n]));
    }

    // Pricing at every budget point, with use-at-most monotonization.
    const int units = b_total > 0.0 ? kUnits : 0;
    std::vector<std::vector<double>> h(n_users, std::vector<double>(units + 1));
    std::vector<std::vector<int>> h_arg(n_users, std::vector<int>(units + 1));
    for (int n = 0; n < n_users; ++n) {
      for (int u = 0; u <= units; ++u) {
        const double b = units == 0 ? 0.0 : b_total * u / units;
        h[n][u] = price_user(tables[n], b, false).cost;
        h_arg[n][u] = u;
        if (u > 0 && h[n][u - 1] < h[n][u]) {
          h[n][u] = h[n][u - 1];
          h_arg[n][u] = h_arg[n][u - 1];
        }
      }
      if (h[n][units] >= 1e290) return false;  // user unserviceable on the grids
    }

    // Split the budget: dp over users, tracking choices.
    std::vector<std::vector<double>> dp(n_users + 1,
                                        std::vector<double>(units + 1, 1e300));
    std::vector<std::vector<int>> take(n_users, std::vector<int>(units + 1, 0));
    for (int r = 0; r <= units; ++r) dp[0][r] = 0.0;
    for (int n = 0; n < n_users; ++n)
      for (int r = 0; r <= units; ++r) {
        for (int u = 0; u <= r; ++u) {
          const double v = dp[n][r - u] + h[n][u];
          if (v < dp[n + 1][r]) {
            dp[n + 1][r] = v;
            take[n][r] = u;
          }
        }
      }

    // Trace back the chosen units and materialize the witnesses with a
    // zoomed second pass around each user's coarse optimum.
    std::vector<int> chosen(n_users, 0);
    {
      int r = units;
      for (int n = n_users - 1; n >= 0; --n) {
        chosen[n] = h_arg[n][take[n][r]];
        r -= take[n][r];
      }
    }

    Allocation cand = alloc;
    double total = 0.0;
    for (int n = 0; n < n_users; ++n) {
      const double b = units == 0 ? 0.0 : b_total * chosen[n] / units;
      Choice c = price_user(tables[n], b, true);
      if (c.cost >= 1e290) return false;
      for (int zoom = 0; zoom < 2; ++zoom) {
        const auto zt = build_tables(n, 400, 1.0 / 1.25, 1.25,
                                     c.delta1 > 0.0 ? c.delta1 : d1_center[n],
                                     c.delta2 > 0.0 ? c.delta2 : d2_center[n]);
        const Choice zc = price_user(zt, b, true);
        if (zc.cost < c.cost) c = zc;
      }
      auto& bu = cand.users[n][kUnlicensed];
      auto& bl = cand.users[n][kLicensed];
      if (c.beta1 > 0.0) {
        bu = {1.0, c.delta1, c.beta1 / c.delta1};
      } else {
        bu = {0.0, 0.0, 0.0};
      }
      if (c.c2 > 0.0) {
        const double psi2 = model->psi(kLicensed, n, c.delta2);
        bl = {1.0, c.delta2, c.c2 / psi2};
      } else {
        bl = {0.0, 0.0, 0.0};
      }
      total += c.c2 > 0.0 ? bl.bandwidth() : 0.0;
    }

    const double current = alloc.licensed_bandwidth();
    if (total >= current - 1e-12 * std::max(1.0, current)) return false;
    fill_capacities(cand);
    if (!check_allocation(scenario, cand).ok(1e-6)) return false;
    alloc = cand;
    return true;
  }

  // Continuous re-solve at the seed's binary x; adopts the result into
  // (best, best_obj) only when it is exactly feasible and strictly better.
  bool polish_candidate(Allocation& best, double& best_obj, const Allocation& seed) const {
    std::vector<double> p_eff(scenario.users.size());
    for (std::size_t n = 0; n < p_eff.size(); ++n)
      p_eff[n] = scenario.users[n].qos.violation_prob;

    bool improved = false;
    auto consider = [&](const Allocation& a) {
      const double obj = a.licensed_bandwidth();
      if (obj < best_obj - 1e-12 * std::max(1.0, best_obj) &&
          check_allocation(scenario, a).ok(1e-6)) {
        best = a;
        best_obj = obj;
        improved = true;
      }
    };
    consider(seed);
    Allocation work = seed;
    for (int round = 0; round < 3; ++round) {
      run_lp(work);
      run_dc(work, 0.0, /*pin_x=*/true, p_eff);
      run_lp(work);
      fill_capacities(work);
      consider(work);
    }
    return improved;
  }

  bool user_violates(const Allocation& alloc, int n) const {
    const auto& qos = scenario.users[n].qos;
    double cap = 0.0;
    std::vector<ec::EcPoint> pts(2);
    std::vector<int> sel(2);
    for (int m = 0; m < 2; ++m) {
      const auto& b = alloc.users[n][m];
      const double c =
          b.delta > 0.0 && b.a > 0.0 ? b.a * model->psi(m, n, b.delta) : 0.0;
      cap += b.x * c;
      pts[m] = {b.bandwidth(), b.qos_exponent(), b.delta, b.a, c};
      if (!(b.a > 0.0)) pts[m].qos_exponent = 0.0;
      sel[m] = b.x > 0.5 ? 1 : 0;
    }
    if (cap < qos.min_rate * (1.0 - 1e-6)) return true;
    if (sel[0] + sel[1] == 0) return true;
    // exact Eq. (3)
    double num = 0.0, den = 0.0;
    for (int m = 0; m < 2; ++m) {
      const double e = pts[m].capacity > 0.0
                           ? std::exp(-model->psi(m, n, alloc.users[n][m].delta) * qos.delay_bound)
                           : 1.0;
      num += sel[m] * e * pts[m].capacity;
      den += sel[m] * pts[m].capacity;
    }
    const double exact = den > 0.0 ? num / den : 1.0;
    return exact > qos.violation_prob * (1.0 + 1e-6);
  }
};

BcdSolver::BcdSolver(const Scenario& scenario, const SolveOptions& options)
    : impl_(std::make_unique<Impl>(scenario, options)) {}
BcdSolver::~BcdSolver() = default;

StartResult BcdSolver::feasible_start() const { return impl_->start; }
double BcdSolver::big_m() const { return impl_->big_m; }
double BcdSolver::pure_objective(const Allocation& alloc) const {
  return Impl::objective_pure(alloc);
}
double BcdSolver::penalized_objective(const Allocation& alloc, double lambda) const {
  return impl_->objective_penalized(alloc, lambda);
}
double BcdSolver::capacity(int m, int n, double delta, double a) const {
  return delta > 0.0 && a > 0.0 ? a * impl_->model->psi(m, n, delta) : 0.0;
}

BcdSolver::LpOutcome BcdSolver::lp_step(Allocation& alloc) const { return impl_->run_lp(alloc); }

BcdSolver::DcOutcome BcdSolver::dc_step(Allocation& alloc, double lambda, bool pin_x) const {
  std::vector<double> p_eff(impl_->scenario.users.size());
  for (std::size_t n = 0; n < p_eff.size(); ++n)
    p_eff[n] = impl_->scenario.users[n].qos.violation_prob;
  return impl_->run_dc(alloc, lambda, pin_x, p_eff);
}

std::pair<Allocation, SolveReport> BcdSolver::solve() const {
  const auto t_begin = std::chrono::steady_clock::now();
  auto& impl = *impl_;
  SolveReport report;
  Allocation alloc = impl.start.alloc;

  if (!impl.start.feasible) {
    report.status = SolveStatus::infeasible;
    report.message = "no feasible start: " + impl.start.message;
    return {alloc, report};
  }

  std::vector<double> p_eff(impl.scenario.users.size());
  for (std::size_t n = 0; n < p_eff.size(); ++n)
    p_eff[n] = impl.scenario.users[n].qos.violation_prob;

  const double lambda0 =
      10.0 * std::max({Impl::objective_pure(alloc), 1e-3 * impl.scenario.unlicensed_budget, 1.0});
  double lambda = lambda0;
  report.penalty_lambda = lambda;
  report.objective_trace.push_back(impl.objective_penalized(alloc, lambda));

  bool hit_cap = true;
  for (int outer = 0; outer < impl.opts.outer_cap; ++outer) {
    ++report.outer_iterations;

    const auto lp = impl.run_lp(alloc);
    report.lp_certificate_residual =
        std::max(report.lp_certificate_residual, lp.certificate_residual);
    const auto dc = impl.run_dc(alloc, lambda, /*pin_x=*/false, p_eff);
    report.dc_inner_iters.push_back(dc.inner_iters);
    if (!dc.solver_ok && report.message.empty())
      report.message = "dc subproblem solver failure; kept previous iterate";

    const double f = impl.objective_penalized(alloc, lambda);
    const double f_prev = report.objective_trace.back();
    report.objective_trace.push_back(std::min(f, f_prev));

    if (std::abs(f_prev - f) < impl.opts.outer_tol * std::max(1.0, std::abs(f))) {
      double binres = 0.0;
      for (const auto& u : alloc.users)
        for (int m = 0; m < 2; ++m) binres = std::max(binres, u[m].x * (1.0 - u[m].x));
      report.binarity_residual = binres;
      if (binres > impl.opts.binarity_tol && lambda < lambda0 * impl.opts.lambda_cap_factor) {
        lambda *= impl.opts.lambda_growth;
        report.penalty_lambda = lambda;
        ++report.lambda_rounds;
        report.objective_trace.clear();
        report.objective_trace.push_back(impl.objective_penalized(alloc, lambda));
        continue;
      }
      hit_cap = false;
      break;
    }
  }

  {
    double binres = 0.0;
    for (const auto& u : alloc.users)
      for (int m = 0; m < 2; ++m) binres = std::max(binres, u[m].x * (1.0 - u[m].x));
    report.binarity_residual = binres;
  }

  report.status = impl.round_and_repair(alloc, report);
  if (hit_cap && report.status == SolveStatus::converged)
    report.status = SolveStatus::iteration_cap;

  // Drop empty selections: a band with no bandwidth is not selected.
  for (auto& u : alloc.users) {
    for (int m = 0; m < 2; ++m)
      if (u[m].x > 0.5 && u[m].bandwidth() < kDeltaZero && u[(m + 1) % 2].x > 0.5) {
        u[m].x = 0.0;
        u[m].delta = 0.0;
      }
  }
  impl.fill_capacities(alloc);
  if (report.status != SolveStatus::infeasible)
    report.feasibility = check_allocation(impl.scenario, alloc);

  // Baseline-seeded polish.  BCD reaches partial optima, which can sit a
  // fraction of a percent above a baseline corner; re-solving the continuous
  // problem at each baseline's selections and keeping the best feasible
  // candidate makes the dominance comparison structural.
  {
    double best_obj = report.status == SolveStatus::infeasible
                          ? std::numeric_limits<double>::infinity()
                          : alloc.licensed_bandwidth();
    Allocation best = alloc;
    std::string winner;
    try {
      const auto sas = baselines::run_sas(impl.scenario);
      if (sas.feasible && impl.polish_candidate(best, best_obj, sas.alloc)) winner = "sas";
    } catch (const std::exception&) {
    }
    try {
      baselines::BaselineConfig cfg;
      cfg.scheme = baselines::BaselineConfig::Scheme::sms;
      const auto sms = baselines::run_sms(impl.scenario, cfg);
      if (sms.feasible && impl.polish_candidate(best, best_obj, sms.alloc)) winner = "sms";
    } catch (const std::exception&) {
    }
    if (!winner.empty()) {
      alloc = best;
      impl.fill_capacities(alloc);
      report.feasibility = check_allocation(impl.scenario, alloc);
      report.status = SolveStatus::converged;
      report.message += (report.message.empty() ? "" : "; ");
      report.message += "final allocation from " + winner + "-seeded polish";
    }
  }

  // Exact-ratio repricing of the final structure (see refine_allocation).
  try {
    if (impl.refine_allocation(alloc)) {
      impl.fill_capacities(alloc);
      report.feasibility = check_allocation(impl.scenario, alloc);
      report.status = SolveStatus::converged;
      report.message += (report.message.empty() ? "" : "; ");
      report.message += "exact-ratio refinement applied";
    }
  } catch (const std::exception&) {
  }

  report.objective = alloc.licensed_bandwidth();
  report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin).count();
  return {alloc, report};
}

std::pair<Allocation, SolveReport> solve_bcd(const Scenario& scenario,
                                             const SolveOptions& options) {
  return BcdSolver(scenario, options).solve();
}

// ---------------------------------------------------------------------------
// Exact feasibility checker
// ---------------------------------------------------------------------------
FeasibilityReport check_allocation(const Scenario& scenario, const Allocation& alloc) {
  ScenarioModel model(scenario);
  FeasibilityReport rep;
  if (alloc.users.size() != scenario.users.size())
    throw std::invalid_argument("check_allocation: allocation size mismatch");

  double usage = 0.0;
  for (std::size_t n = 0; n < alloc.users.size(); ++n) {
    const auto& qos = scenario.users[n].qos;
    double rate = 0.0;
    double num = 0.0, den = 0.0;
    double relaxed_lhs = 0.0, relaxed_rhs = 0.0;
    for (int m = 0; m < 2; ++m) {
      const auto& b = alloc.users[n][m];
      rep.binarity_residual = std::max(rep.binarity_residual, b.x * (1.0 - b.x));
      const double psi =
          b.delta > 0.0 ? model.psi(m, static_cast<int>(n), b.delta) : 0.0;
      const double cap = b.a > 0.0 ? b.a * psi : 0.0;
      const double e = std::exp(-psi * qos.delay_bound);
      rate += b.x * cap;
      num += b.x * e * cap;
      den += b.x * cap;
      relaxed_lhs += e - 1.0 + b.x;
      relaxed_rhs += qos.violation_prob * b.x;
      if (m == kUnlicensed) usage += b.x * b.bandwidth();
      if (scenario.big_m > 0.0)
        rep.big_m_violation = std::max(
            rep.big_m_violation, (b.delta * b.a - b.x * scenario.big_m) / scenario.big_m);
      else if (b.x < 1e-9)
        rep.big_m_violation =
            std::max(rep.big_m_violation,
                     b.delta * b.a / std::max(1.0, scenario.unlicensed_budget));
    }
    rep.rate_violation =
        std::max(rep.rate_violation, (qos.min_rate - rate) / qos.min_rate);
    const double exact = den > 0.0 ? num / den : 1.0;
    const double exact_viol = (exact - qos.violation_prob) / qos.violation_prob;
    rep.qos_exact_violation = std::max(rep.qos_exact_violation, exact_viol);
    const bool relaxed_ok_n = relaxed_lhs <= relaxed_rhs + 1e-12;
    const bool exact_ok_n = exact_viol <= 1e-6;
    rep.relaxed_holds = rep.relaxed_holds && relaxed_ok_n;
    rep.exact_holds = rep.exact_holds && exact_ok_n;
    if (relaxed_ok_n && !exact_ok_n) rep.relaxed_implies_exact = false;
  }
  rep.rate_violation = std::max(0.0, rep.rate_violation);
  rep.big_m_violation = std::max(0.0, rep.big_m_violation);
  rep.qos_exact_violation = std::max(0.0, rep.qos_exact_violation);
  if (scenario.unlicensed_budget > 0.0)
    rep.budget_violation =
        std::max(0.0, (usage - scenario.unlicensed_budget) / scenario.unlicensed_budget);
  else
    rep.budget_violation = usage > 1e-9 ? usage : 0.0;
  return rep;
}

// ---------------------------------------------------------------------------
// JSON / CSV emission
// ---------------------------------------------------------------------------
namespace {
using json = nlohmann::ordered_json;

const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::iteration_cap: return "iteration-cap";
    case SolveStatus::infeasible: return "infeasible";
  }
  return "unknown";
}
}  // namespace

std::string allocation_to_json(const Scenario& scenario, const Allocation& alloc) {
  json users = json::array();
  for (std::size_t n = 0; n < alloc.users.size(); ++n) {
    json bands = json::array();
    for (int m = 0; m < 2; ++m) {
      const auto& b = alloc.users[n][m];
      bands.push_back(json{{"band", m + 1},
                           {"x", b.x},
                           {"delta", b.delta},
                           {"a", b.a},
                           {"beta", b.bandwidth()},
                           {"theta", b.a > 0.0 ? 1.0 / b.a : 0.0},
                           {"capacity", alloc.capacity.size() > n ? alloc.capacity[n][m] : 0.0}});
    }
    users.push_back(json{{"user", n}, {"bands", bands}});
  }
  json j{{"scenario_id", scenario.id},
         {"licensed_bandwidth", alloc.licensed_bandwidth()},
         {"unlicensed_usage", alloc.unlicensed_usage()},
         {"users", users}};
  return j.dump(2) + "\n";
}

std::string report_to_json(const SolveReport& report, bool timing) {
  json j{{"status", status_name(report.status)},
         {"objective", report.objective},
         {"outer_iterations", report.outer_iterations},
         {"lambda_rounds", report.lambda_rounds},
         {"penalty_lambda", report.penalty_lambda},
         {"binarity_residual", report.binarity_residual},
         {"objective_trace", report.objective_trace},
         {"dc_inner_iters", report.dc_inner_iters},
         {"lp_certificate_residual", report.lp_certificate_residual},
         {"feasibility",
          json{{"rate_violation", report.feasibility.rate_violation},
               {"budget_violation", report.feasibility.budget_violation},
               {"qos_exact_violation", report.feasibility.qos_exact_violation},
               {"big_m_violation", report.feasibility.big_m_violation},
               {"binarity_residual", report.feasibility.binarity_residual},
               {"relaxed_implies_exact", report.feasibility.relaxed_implies_exact}}},
         {"wall_time", timing ? report.wall_time : 0.0},
         {"message", report.message}};
  return j.dump(2) + "\n";
}

std::string summary_csv_row(const std::string& scenario_id, const std::string& scheme,
                            double objective, int iterations, SolveStatus status,
                            double wall_time, bool timing) {
  std::ostringstream os;
  os.precision(10);
  os << scenario_id << ',' << scheme << ',' << objective << ',' << iterations << ','
     << status_name(status) << ',' << (timing ? wall_time : 0.0);
  return os.str();
}

}  // namespace lwa::opt
