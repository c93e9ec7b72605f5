#pragma once

// Globally stiffly accurate IMEX Runge-Kutta stepping of the micro-macro DG
// system. a_h, b_{h,v} and s2 are explicit; d_h and s1 are implicit.

#include <functional>
#include <vector>

#include "apdg/dg_operators.hpp"
#include "apdg/kinetic_models.hpp"
#include "apdg/state.hpp"

namespace apdg {

struct DoubleButcherTableau {
  int s = 0;
  std::vector<double> explicit_a;  // s x s row-major, strictly lower
  std::vector<double> implicit_a;  // s x s row-major, lower
  std::vector<double> explicit_b;
  std::vector<double> implicit_b;
  std::vector<double> explicit_c;
  std::vector<double> implicit_c;

  double at(int i, int j) const { return explicit_a[i * s + j]; }
  double a(int i, int j) const { return implicit_a[i * s + j]; }
};

/// 1: forward-backward Euler pair, 2: ARS(2,2,2), 3: ARS(4,4,3).
DoubleButcherTableau tableau(int order);

/// c_s = ctilde_s = 1 and the last rows equal the weights.
bool check_gsa(const DoubleButcherTableau& t, double tol = 1e-15);

struct SchemeConfig {
  int order = 1;
  FluxChoice flux = AltLeftRight{};
  BoundaryCondition bc = Periodic{};
  CollisionModel model = Porous{};
  double epsilon = 1.0;
  double c_hyper = 0.5;
  double c_diff = 0.25;
};

struct DtConstants {
  double c_hyper;
  double c_diff;
};

DtConstants default_dt_constants(int order);

/// SchemeConfig with the default time-step constants of the given order.
SchemeConfig make_scheme(int order, CollisionModel model, double epsilon,
                         FluxChoice flux = AltLeftRight{}, BoundaryCondition bc = Periodic{});

/// dt = c_hyper * eps * dx + c_diff * dx^2.
double compute_dt(const SchemeConfig& cfg, double dx);

struct StageView {
  int stage;  // 0-based
  const DGField& rho;
  const DGField& g_plus;
  const DGField& g_minus;
};

using StageObserver = std::function<void(const StageView&)>;
using StepObserver = std::function<void(const KineticState&, double t, long step)>;

class ImexStepper {
 public:
  /// Throws ConfigError for invalid model parameters or a non-GSA tableau.
  ImexStepper(SpacePtr space, const SchemeConfig& cfg);
  ImexStepper(SpacePtr space, const SchemeConfig& cfg, DoubleButcherTableau t);

  const SchemeConfig& config() const noexcept { return cfg_; }
  const DoubleButcherTableau& butcher() const noexcept { return tab_; }
  const DGOperators& operators() const noexcept { return ops_; }

  void set_stage_observer(StageObserver obs) { observer_ = std::move(obs); }
  /// Nodes where a negative rho was clamped to zero in a degenerate solve.
  long clamp_count() const noexcept { return clamps_; }

  void step(KineticState& state, double dt);

  /// Steps to time T from t = 0 with compute_dt, shrinking the last step.
  /// Returns the number of steps taken.
  long advance_to(KineticState& state, double T, const StepObserver& on_step = {});

 private:
  void stage_solve(int l, double dt_a);

  SpacePtr space_;
  SchemeConfig cfg_;
  DoubleButcherTableau tab_;
  DGOperators ops_;
  StageObserver observer_;
  long clamps_ = 0;
  bool need_first_stiff_ = false;

  std::vector<double> mass_;     // per local index, physical element
  std::vector<double> rho_n_;
  VelocityPair<std::vector<double>> mg_n_;
  DGField rho_l_;
  VelocityPair<DGField> g_l_;
  std::vector<std::vector<double>> ah_;    // a_h residual per stage
  std::vector<VelocityPair<std::vector<double>>> ex_;  // (1/eps) b + s2 per stage
  std::vector<VelocityPair<std::vector<double>>> im_;  // stiff derivative per stage
  VelocityPair<std::vector<double>> rn_;
  std::vector<double> dp_;       // d_h(rho) + affine part
  std::vector<double> scratch_;
  std::vector<double> scratch2_;
};

/// Solves, per element and velocity, (M + factor W(rho)) g = rhs + factor P_v(rho),
/// where W is the linear part of s1 and P_v its rho-dependent affine part.
VelocityPair<DGField> implicit_stage_solve(const CollisionModel& model, const DGField& rho_stage,
                                           const VelocityPair<Residual>& rhs, double factor,
                                           long* clamp_count = nullptr);

/// Low-level form shared with the stepper: solves
/// (a M + b W) g = a r1 + b v dp for one velocity, where dp already contains
/// the affine part of s1 for v = +1 (null means zero).
void solve_stage_velocity(const CollisionModel& model, const Space& space, Velocity v,
                          std::span<const double> rho, std::span<const double> r1,
                          const double* dp, double a, double b, std::span<double> g,
                          long& clamps);

/// One step of the scheme, returning the new state.
KineticState step(const KineticState& state, const SchemeConfig& cfg,
                  const DoubleButcherTableau& t, double dt);

}  // namespace apdg
