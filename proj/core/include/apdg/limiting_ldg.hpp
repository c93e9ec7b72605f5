#pragma once

// Explicit local DG scheme for the eps -> 0 limit equations, written in
// first-order form with the auxiliary flux q = <vg>.

#include "apdg/dg_operators.hpp"
#include "apdg/imex_integrator.hpp"
#include "apdg/kinetic_models.hpp"

namespace apdg {

struct LDGState {
  DGField rho;
  DGField q;
};

/// q from rho: K rho^m q = d_h(rho) (Porous), q = M^{-1} d_h(rho) + P(A rho)
/// (AdvDiff) or + P(C rho^2) (Burgers). Degenerate porous nodes give q = 0.
DGField ldg_stage_q(const CollisionModel& model, const DGField& rho, const FluxChoice& flux,
                    const BoundaryCondition& bc, long* clamp_count = nullptr);

class LdgStepper {
 public:
  /// Uses the explicit half of the tableau.
  LdgStepper(SpacePtr space, CollisionModel model, FluxChoice flux, BoundaryCondition bc,
             DoubleButcherTableau t);

  const DGOperators& operators() const noexcept { return ops_; }
  long clamp_count() const noexcept { return clamps_; }

  /// q of the current rho, written into q.
  void stage_q(std::span<const double> rho, std::span<double> q);
  LDGState initial(const DGField& rho);
  void step(LDGState& state, double dt);
  /// Steps to T with a fixed dt, shrinking the last step. Returns the step count.
  long advance_to(LDGState& state, double T, double dt);

 private:
  SpacePtr space_;
  CollisionModel model_;
  DoubleButcherTableau tab_;
  DGOperators ops_;
  long clamps_ = 0;
  std::vector<double> mass_;
  std::vector<double> rho_n_;
  std::vector<std::vector<double>> rh_;
  std::vector<double> dp_;
  std::vector<double> scratch_;
};

LDGState ldg_step(const LDGState& state, const CollisionModel& model,
                  const DoubleButcherTableau& t, const FluxChoice& flux,
                  const BoundaryCondition& bc, double dt);

}  // namespace apdg
