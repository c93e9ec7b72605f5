#pragma once

// Semi-discrete spatial operators of the micro-macro DG scheme.
//
// Sign conventions, for element I_i and test function phi:
//   a_h(g, phi) = -int <vg> phi' - sum qhat [phi]
//   d_h(rho, psi) = int rho psi' + sum rhohat [psi]
//   (D_h(g; v), psi) = -int v g psi' - sum (vg)~ [psi]
// with [u] = u^+ - u^- at each interface.

#include <span>
#include <variant>
#include <vector>

#include "apdg/kinetic_models.hpp"
#include "apdg/mesh_basis.hpp"
#include "apdg/state.hpp"

namespace apdg {

struct AltLeftRight {};  // qhat = q^-, rhohat = rho^+
struct AltRightLeft {};  // qhat = q^+, rhohat = rho^-
struct Central {};
/// Right-left strictly left of split_point, left-right at and right of it.
struct PorousSplit {
  double split_point = 0.0;
};

using FluxChoice = std::variant<AltLeftRight, AltRightLeft, Central, PorousSplit>;

struct Periodic {};
/// Fixed outer states; the ghost of g at velocity v is v * j.
struct InflowOutflow {
  double rho_left = 0.0;
  double j_left = 0.0;
  double rho_right = 0.0;
  double j_right = 0.0;
};

using BoundaryCondition = std::variant<Periodic, InflowOutflow>;

inline double velocity_average(double a_plus, double a_minus) { return 0.5 * (a_plus + a_minus); }
inline double v_moment(double a_plus, double a_minus) { return 0.5 * (a_plus - a_minus); }

template <class T>
struct VelocityPair {
  T plus;
  T minus;

  T& operator[](Velocity v) { return v == Velocity::Plus ? plus : minus; }
  const T& operator[](Velocity v) const { return v == Velocity::Plus ? plus : minus; }
};

/// qhat = w_minus q^- + w_plus q^+; the paired rhohat swaps the weights.
struct InterfaceWeights {
  double w_minus;
  double w_plus;
};

class DGOperators {
 public:
  /// Throws ConfigError for a split point outside the domain or PorousSplit with k = 0.
  DGOperators(SpacePtr space, FluxChoice flux, BoundaryCondition bc);

  const Space& space() const noexcept { return *space_; }
  const SpacePtr& space_ptr() const noexcept { return space_; }
  const FluxChoice& flux() const noexcept { return flux_; }
  const BoundaryCondition& bc() const noexcept { return bc_; }
  InterfaceWeights weights(int interface) const noexcept { return weights_[interface]; }
  bool periodic() const noexcept { return periodic_; }

  Residual apply_ah(const DGField& g_plus, const DGField& g_minus) const;
  /// a_h form applied to a given q = <vg>; the boundary ghost of q is j.
  Residual apply_rh(const DGField& q) const;
  Residual apply_dh(const DGField& rho) const;
  VelocityPair<DGField> apply_Dh_upwind(const DGField& g_plus, const DGField& g_minus) const;
  VelocityPair<Residual> apply_bhv(const DGField& g_plus, const DGField& g_minus) const;

  // Kernels on raw element-major coefficient arrays, no allocation.
  void q_form(std::span<const double> q, std::span<double> out) const;
  void dh_form(std::span<const double> rho, std::span<double> out) const;
  /// Upwind residual of v d/dx g_v (mass not inverted).
  void upwind_form(Velocity v, std::span<const double> g, std::span<double> out) const;
  /// Writes b_{h,v} residuals; the inputs are g at both velocities.
  void bhv_form(std::span<const double> g_plus, std::span<const double> g_minus,
                std::span<double> out_plus, std::span<double> out_minus) const;

 private:
  // Traces at interface I of an element-major array with the given ghosts.
  double minus_trace(std::span<const double> u, int interface, double ghost) const noexcept;
  double plus_trace(std::span<const double> u, int interface, double ghost) const noexcept;

  SpacePtr space_;
  FluxChoice flux_;
  BoundaryCondition bc_;
  bool periodic_;
  std::vector<InterfaceWeights> weights_;
  double rho_ghost_left_ = 0.0, rho_ghost_right_ = 0.0;
  double j_ghost_left_ = 0.0, j_ghost_right_ = 0.0;
};

Residual apply_ah(const DGField& g_plus, const DGField& g_minus, const FluxChoice& flux,
                  const BoundaryCondition& bc);
Residual apply_dh(const DGField& rho, const FluxChoice& flux, const BoundaryCondition& bc);
VelocityPair<DGField> apply_Dh_upwind(const DGField& g_plus, const DGField& g_minus,
                                      const BoundaryCondition& bc);
VelocityPair<Residual> apply_bhv(const DGField& g_plus, const DGField& g_minus,
                                 const BoundaryCondition& bc);

/// (s1 integrand, psi) collocated at the source rule of the basis.
VelocityPair<Residual> assemble_s1(const CollisionModel& model, const KineticState& state);
/// (s2 integrand, psi) collocated at the source rule of the basis.
VelocityPair<Residual> assemble_s2(const CollisionModel& model, const KineticState& state);

/// Kernel forms of the two sources for one velocity, on raw coefficient arrays.
void s1_form(const CollisionModel& model, const Space& space, Velocity v,
             std::span<const double> rho, std::span<const double> g, std::span<double> out);
void s2_form(const CollisionModel& model, const Space& space, Velocity v,
             std::span<const double> g, std::span<double> out);

/// (model-dependent affine part of v d_h-balance, psi): A v rho (AdvDiff),
/// C v rho^2 (Burgers), zero for Porous. Written for v = +1; negate for v = -1.
void assemble_affine_source(const CollisionModel& model, const Space& space,
                            std::span<const double> rho, std::span<double> out);

}  // namespace apdg
