#pragma once

// Two-velocity collision operators in micro-macro form, their equilibria, and
// closed-form reference solutions.

#include <span>
#include <variant>
#include <vector>

#include "apdg/mesh_basis.hpp"
#include "apdg/state.hpp"

namespace apdg {

/// C(f) = K <f>^m (<f> - f). K = 1, m = 0 is the telegraph (Goldstein-Taylor)
/// model whose diffusive limit is the heat equation.
struct Porous {
  double K = 1.0;
  double m = 0.0;
};

/// C(f) = <f> - f + A eps v <f>, requires |A eps| < 1.
struct AdvDiff {
  double A = 1.0;
};

/// Ruijgrok-Wu: C(f) = <f> - f + C eps [<f>^2 - (<f> - f)^2] v.
struct Burgers {
  double C = 0.5;
};

using CollisionModel = std::variant<Porous, AdvDiff, Burgers>;

inline CollisionModel telegraph() { return Porous{1.0, 0.0}; }

/// Throws ConfigError unless K > 0, m <= 0 (Porous) or C > 0 (Burgers).
void validate(const CollisionModel& model);
/// Additionally enforces |A eps| < 1 for AdvDiff.
void validate(const CollisionModel& model, double epsilon);

enum class Velocity : int { Plus = 1, Minus = -1 };

constexpr double value(Velocity v) noexcept { return static_cast<double>(static_cast<int>(v)); }
inline constexpr Velocity kVelocities[] = {Velocity::Plus, Velocity::Minus};

/// Integrand of s^(1): K rho^m g (Porous), g - A v rho (AdvDiff),
/// g - C v rho^2 (Burgers). Throws DegenerateError for Porous, m < 0, rho <= 0.
double s1_pointwise(const CollisionModel& model, Velocity v, double rho, double g);

/// Integrand of s^(2): C v g^2 for Burgers, zero otherwise.
double s2_pointwise(const CollisionModel& model, Velocity v, double g);

struct Equilibrium {
  double g;
  bool degenerate;  // Porous with m < 0 at rho <= 0; g is the limit value 0
};

/// The eps -> 0 local equilibrium g(rho, drho/dx) at velocity v.
Equilibrium equilibrium_g(const CollisionModel& model, Velocity v, double rho, double drho_dx);

/// Flux j of the local Maxwellian C(f) = 0 with density rho.
double local_maxwellian_j(const CollisionModel& model, double rho, double epsilon);

struct TelegraphSmooth {
  double epsilon;
};

/// Smooth solution of the limiting advection-diffusion equation with A = 1.
struct AdvDiffSmooth {};

/// Erf solution of the limiting advection-diffusion equation from a step.
struct AdvDiffRiemann {
  double rho_left;
  double rho_right;
  double A = 1.0;
};

/// Traveling smooth shock of the Ruijgrok-Wu model with C = 1/2.
class RuijgrokWuShock {
 public:
  RuijgrokWuShock(double epsilon, double rho_minus, double rho_plus, double xi0 = 0.0);

  double epsilon() const noexcept { return epsilon_; }
  double rho_minus() const noexcept { return rho_minus_; }
  double rho_plus() const noexcept { return rho_plus_; }
  double j_minus() const noexcept { return j_minus_; }
  double j_plus() const noexcept { return j_plus_; }
  double u_minus() const noexcept { return rho_minus_ + epsilon_ * j_minus_; }
  double u_plus() const noexcept { return rho_plus_ + epsilon_ * j_plus_; }
  double v_minus() const noexcept { return rho_minus_ - epsilon_ * j_minus_; }
  double v_plus() const noexcept { return rho_plus_ - epsilon_ * j_plus_; }
  /// Dimensionless speed w; the profile travels with dx/dt = w / eps.
  double w() const noexcept { return w_; }
  /// Width X0 computed from the u states.
  double width() const noexcept { return width_; }
  /// Width X0 computed independently from the v states.
  double width_from_v() const noexcept;
  double xi0() const noexcept { return xi0_; }

  struct Value {
    double rho;
    double j;
  };
  Value operator()(double x, double t) const;

 private:
  double epsilon_;
  double rho_minus_;
  double rho_plus_;
  double xi0_;
  double j_minus_;
  double j_plus_;
  double w_;
  double speed_;  // w / eps, evaluated without cancellation
  double width_;
};

/// Barenblatt solution of rho_t = (rho^2)_xx (Porous with K = 1/2, m = -1).
struct Barenblatt {};

double barenblatt_radius(double t);

using ExactSolution =
    std::variant<TelegraphSmooth, AdvDiffSmooth, AdvDiffRiemann, RuijgrokWuShock, Barenblatt>;

struct RhoJ {
  double rho;
  double j;
};

RhoJ exact_eval(const ExactSolution& sol, double x, double t);

/// Initial macroscopic data: pointwise rho and j, plus jump locations.
struct InitialProfile {
  PointFunction rho;
  PointFunction j;
  std::vector<double> breakpoints;
};

InitialProfile profile_from_exact(const ExactSolution& sol, double t0 = 0.0);

/// Piecewise-constant (rho, j) with a single jump at x_jump.
InitialProfile riemann_profile(double x_jump, double rho_left, double j_left, double rho_right,
                               double j_right);

/// Two local Maxwellians, j = local_maxwellian_j(model, rho, eps) on each side.
InitialProfile maxwellian_riemann(const CollisionModel& model, double epsilon, double x_jump,
                                  double rho_left, double rho_right);

/// rho_h = P(rho), g_h(v) = P(v j), so <g_h> = 0 and <v g_h> = P(j) hold
/// coefficient by coefficient.
KineticState initial_state(const InitialProfile& profile, const SpacePtr& space, double epsilon);

}  // namespace apdg
