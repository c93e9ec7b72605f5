#include "apdg/limiting_ldg.hpp"

#include <algorithm>
#include <cmath>

#include "apdg/errors.hpp"

namespace apdg {

LdgStepper::LdgStepper(SpacePtr space, CollisionModel model, FluxChoice flux,
                       BoundaryCondition bc, DoubleButcherTableau t)
    : space_(std::move(space)),
      model_(model),
      tab_(std::move(t)),
      ops_(space_, flux, bc) {
  validate(model_);
  if (!check_gsa(tab_)) throw ConfigError("tableau is not globally stiffly accurate");
  mass_ = element_mass_diagonal(*space_);
  const std::size_t size =
      static_cast<std::size_t>(space_->mesh.n_elements()) * space_->basis.size();
  rho_n_.resize(size);
  rh_.assign(tab_.s, std::vector<double>(size));
  dp_.resize(size);
  scratch_.resize(size);
}

void LdgStepper::stage_q(std::span<const double> rho, std::span<double> q) {
  ops_.dh_form(rho, dp_);
  if (!std::holds_alternative<Porous>(model_)) {
    assemble_affine_source(model_, *space_, rho, scratch_);
    for (std::size_t k = 0; k < dp_.size(); ++k) dp_[k] += scratch_[k];
  }
  // The eps = 0 stage equation W q = d_h + P, i.e. a = 0, b = 1 at v = +1.
  solve_stage_velocity(model_, *space_, Velocity::Plus, rho, dp_, dp_.data(), 0.0, 1.0, q,
                       clamps_);
}

LDGState LdgStepper::initial(const DGField& rho) {
  LDGState s{rho, DGField(space_)};
  stage_q(s.rho.coeffs(), s.q.coeffs());
  return s;
}

void LdgStepper::step(LDGState& state, double dt) {
  if (!(dt > 0.0)) throw ConfigError("ldg step: dt must be positive");
  const int nl = space_->basis.size();
  const std::size_t size = rho_n_.size();
  auto rho = state.rho.coeffs();
  auto q = state.q.coeffs();
  std::copy(rho.begin(), rho.end(), rho_n_.begin());
  for (int l = 0; l < tab_.s; ++l) {
    std::copy(rho_n_.begin(), rho_n_.end(), rho.begin());
    for (int j = 0; j < l; ++j) {
      const double c = dt * tab_.at(l, j);
      if (c == 0.0) continue;
      for (std::size_t k = 0; k < size; ++k) rho[k] -= c * rh_[j][k] / mass_[k % nl];
    }
    stage_q(rho, q);
    if (l < tab_.s - 1) ops_.q_form(q, rh_[l]);
  }
}

long LdgStepper::advance_to(LDGState& state, double T, double dt) {
  if (!(T > 0.0) || !(dt > 0.0)) throw ConfigError("ldg advance: T and dt must be positive");
  const long n = std::max(1L, static_cast<long>(std::ceil(T / dt * (1.0 - 1e-12))));
  for (long k = 0; k < n; ++k) {
    step(state, k == n - 1 ? T - static_cast<double>(n - 1) * dt : dt);
  }
  return n;
}

DGField ldg_stage_q(const CollisionModel& model, const DGField& rho, const FluxChoice& flux,
                    const BoundaryCondition& bc, long* clamp_count) {
  LdgStepper s(rho.space_ptr(), model, flux, bc, tableau(1));
  DGField q(rho.space_ptr());
  s.stage_q(rho.coeffs(), q.coeffs());
  if (clamp_count) *clamp_count += s.clamp_count();
  return q;
}

LDGState ldg_step(const LDGState& state, const CollisionModel& model,
                  const DoubleButcherTableau& t, const FluxChoice& flux,
                  const BoundaryCondition& bc, double dt) {
  LdgStepper s(state.rho.space_ptr(), model, flux, bc, t);
  LDGState out = state;
  s.step(out, dt);
  return out;
}

}  // namespace apdg
