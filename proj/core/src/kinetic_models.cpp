#include "apdg/kinetic_models.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "apdg/errors.hpp"

namespace apdg {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Maxwellian flux of the Ruijgrok-Wu model, j = 2 C rho^2 / (1 + sqrt(1 + 4 C^2 eps^2 rho^2)).
double burgers_maxwellian(double C, double rho, double eps) {
  const double a = 2.0 * C * eps * rho;
  return 2.0 * C * rho * rho / (1.0 + std::sqrt(1.0 + a * a));
}

}  // namespace

void validate(const CollisionModel& model) {
  std::visit(overloaded{
                 [](const Porous& p) {
                   if (!(p.K > 0.0)) throw ConfigError("Porous: K must be positive");
                   if (!(p.m <= 0.0)) throw ConfigError("Porous: m must be <= 0");
                 },
                 [](const AdvDiff& a) {
                   if (!std::isfinite(a.A)) throw ConfigError("AdvDiff: A must be finite");
                 },
                 [](const Burgers& b) {
                   if (!(b.C > 0.0)) throw ConfigError("Burgers: C must be positive");
                 },
             },
             model);
}

void validate(const CollisionModel& model, double epsilon) {
  validate(model);
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (const auto* a = std::get_if<AdvDiff>(&model)) {
    if (!(std::abs(a->A * epsilon) < 1.0)) {
      throw ConfigError("AdvDiff: |A eps| < 1 is required");
    }
  }
}

double s1_pointwise(const CollisionModel& model, Velocity v, double rho, double g) {
  const double vv = value(v);
  return std::visit(overloaded{
                        [&](const Porous& p) {
                          if (p.m == 0.0) return p.K * g;
                          if (rho <= 0.0) {
                            throw DegenerateError("s1: porous term at rho <= 0 with m < 0");
                          }
                          return p.K * std::pow(rho, p.m) * g;
                        },
                        [&](const AdvDiff& a) { return g - a.A * vv * rho; },
                        [&](const Burgers& b) { return g - b.C * vv * rho * rho; },
                    },
                    model);
}

double s2_pointwise(const CollisionModel& model, Velocity v, double g) {
  if (const auto* b = std::get_if<Burgers>(&model)) return b->C * value(v) * g * g;
  return 0.0;
}

Equilibrium equilibrium_g(const CollisionModel& model, Velocity v, double rho, double drho_dx) {
  const double vv = value(v);
  return std::visit(
      overloaded{
          [&](const Porous& p) -> Equilibrium {
            // -1/(K(1-m)) v d(rho^{1-m})/dx = -v rho^{-m} drho/dx / K
            if (p.m == 0.0) return {-vv * drho_dx / p.K, false};
            if (rho <= 0.0) return {0.0, true};
            return {-vv * std::pow(rho, -p.m) * drho_dx / p.K, false};
          },
          [&](const AdvDiff& a) -> Equilibrium { return {a.A * vv * rho - vv * drho_dx, false}; },
          [&](const Burgers& b) -> Equilibrium {
            return {b.C * vv * rho * rho - vv * drho_dx, false};
          },
      },
      model);
}

double local_maxwellian_j(const CollisionModel& model, double rho, double epsilon) {
  return std::visit(overloaded{
                        [](const Porous&) { return 0.0; },
                        [&](const AdvDiff& a) { return a.A * rho; },
                        [&](const Burgers& b) { return burgers_maxwellian(b.C, rho, epsilon); },
                    },
                    model);
}

RuijgrokWuShock::RuijgrokWuShock(double epsilon, double rho_minus, double rho_plus, double xi0)
    : epsilon_(epsilon),
      rho_minus_(rho_minus),
      rho_plus_(rho_plus),
      xi0_(xi0),
      j_minus_(burgers_maxwellian(0.5, rho_minus, epsilon)),
      j_plus_(burgers_maxwellian(0.5, rho_plus, epsilon)),
      w_(0.0),
      speed_(0.0),
      width_(0.0) {
  if (!(epsilon > 0.0)) throw ConfigError("RuijgrokWuShock: epsilon must be positive");
  if (rho_minus == rho_plus) throw ConfigError("RuijgrokWuShock: states must differ");
  // u^- - u^+ - v^- + v^+ = 2 eps (j^- - j^+), u^- - u^+ + v^- - v^+ = 2 (rho^- - rho^+)
  speed_ = (j_minus_ - j_plus_) / (rho_minus_ - rho_plus_);
  w_ = epsilon_ * speed_;
  width_ = (1.0 + w_) / (u_minus() - u_plus());
}

double RuijgrokWuShock::width_from_v() const noexcept {
  return (1.0 - w_) / (v_minus() - v_plus());
}

RuijgrokWuShock::Value RuijgrokWuShock::operator()(double x, double t) const {
  const double xi = 0.5 * (x - speed_ * t);
  const double a = -(xi - xi0_) / width_;
  // Logistic blend (s^+ + s^- e^a) / (1 + e^a) without overflow.
  auto blend = [a](double s_plus, double s_minus) {
    if (a > 0.0) {
      const double e = std::exp(-a);
      return (s_plus * e + s_minus) / (e + 1.0);
    }
    const double e = std::exp(a);
    return (s_plus + s_minus * e) / (1.0 + e);
  };
  return {blend(rho_plus_, rho_minus_), blend(j_plus_, j_minus_)};
}

double barenblatt_radius(double t) { return std::cbrt(12.0 * (t + 1.0)); }

RhoJ exact_eval(const ExactSolution& sol, double x, double t) {
  if (t < 0.0) throw ConfigError("exact_eval: t must be >= 0");
  return std::visit(
      overloaded{
          [&](const TelegraphSmooth& s) -> RhoJ {
            const double disc = 1.0 - 4.0 * s.epsilon * s.epsilon;
            if (disc < 0.0) throw ConfigError("TelegraphSmooth: requires eps <= 1/2");
            const double r = -2.0 / (1.0 + std::sqrt(disc));
            const double decay = std::exp(r * t);
            return {decay * std::sin(x) / r, decay * std::cos(x)};
          },
          [&](const AdvDiffSmooth&) -> RhoJ {
            const double decay = std::exp(-t);
            return {decay * std::sin(x - t), decay * (std::sin(x - t) - std::cos(x - t))};
          },
          [&](const AdvDiffRiemann& s) -> RhoJ {
            const double mid = 0.5 * (s.rho_left + s.rho_right);
            const double half = 0.5 * (s.rho_left - s.rho_right);
            if (t == 0.0) {
              // Sharp step; the gradient part of j is a delta and is dropped.
              const double rho = x < 0.0 ? s.rho_left : (x > 0.0 ? s.rho_right : mid);
              return {rho, s.A * rho};
            }
            const double sq = std::sqrt(t);
            const double z = (s.A * t - x) / (2.0 * sq);
            const double rho = mid + half * std::erf(z);
            const double drho = -half * std::exp(-z * z) / (std::sqrt(std::numbers::pi) * sq);
            return {rho, s.A * rho - drho};
          },
          [&](const RuijgrokWuShock& s) -> RhoJ {
            const auto v = s(x, t);
            return {v.rho, v.j};
          },
          [&](const Barenblatt&) -> RhoJ {
            const double R = barenblatt_radius(t);
            if (std::abs(x) >= R) return {0.0, 0.0};
            const double rho = (1.0 - (x / R) * (x / R)) / R;
            return {rho, rho * 4.0 * x / (R * R * R)};
          },
      },
      sol);
}

InitialProfile profile_from_exact(const ExactSolution& sol, double t0) {
  InitialProfile p;
  p.rho = [sol, t0](double x) { return exact_eval(sol, x, t0).rho; };
  p.j = [sol, t0](double x) { return exact_eval(sol, x, t0).j; };
  if (std::holds_alternative<AdvDiffRiemann>(sol) && t0 == 0.0) p.breakpoints = {0.0};
  if (std::holds_alternative<Barenblatt>(sol)) {
    const double R = barenblatt_radius(t0);
    p.breakpoints = {-R, R};
  }
  return p;
}

InitialProfile riemann_profile(double x_jump, double rho_left, double j_left, double rho_right,
                               double j_right) {
  InitialProfile p;
  p.rho = [=](double x) { return x < x_jump ? rho_left : rho_right; };
  p.j = [=](double x) { return x < x_jump ? j_left : j_right; };
  p.breakpoints = {x_jump};
  return p;
}

InitialProfile maxwellian_riemann(const CollisionModel& model, double epsilon, double x_jump,
                                  double rho_left, double rho_right) {
  return riemann_profile(x_jump, rho_left, local_maxwellian_j(model, rho_left, epsilon), rho_right,
                         local_maxwellian_j(model, rho_right, epsilon));
}

KineticState initial_state(const InitialProfile& profile, const SpacePtr& space, double epsilon) {
  if (!(epsilon > 0.0)) throw ConfigError("initial_state: epsilon must be positive");
  auto rho = project_l2(profile.rho, space, profile.breakpoints);
  auto g_plus = project_l2(profile.j, space, profile.breakpoints);
  auto g_minus = g_plus;
  g_minus *= -1.0;
  return KineticState{std::move(rho), std::move(g_plus), std::move(g_minus), epsilon};
}

}  // namespace apdg
