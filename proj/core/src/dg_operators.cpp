#include "apdg/dg_operators.hpp"

#include <cmath>

#include "apdg/errors.hpp"

namespace apdg {

namespace {

constexpr InterfaceWeights kLeftRight{1.0, 0.0};
constexpr InterfaceWeights kRightLeft{0.0, 1.0};
constexpr InterfaceWeights kCentral{0.5, 0.5};

double dot(std::span<const double> a, const double* b) {
  double s = 0.0;
  for (std::size_t l = 0; l < a.size(); ++l) s += a[l] * b[l];
  return s;
}

void require_same(const CoefficientArray& a, const CoefficientArray& b) {
  if (!a.same_space(b)) throw ConfigError("fields live on different spaces");
}

}  // namespace

DGOperators::DGOperators(SpacePtr space, FluxChoice flux, BoundaryCondition bc)
    : space_(std::move(space)), flux_(flux), bc_(bc) {
  const Mesh1D& mesh = space_->mesh;
  const int n = mesh.n_elements();
  weights_.resize(n + 1);
  if (const auto* split = std::get_if<PorousSplit>(&flux_)) {
    if (!(split->split_point >= mesh.x_min() && split->split_point <= mesh.x_max())) {
      throw ConfigError("PorousSplit: split point outside the domain");
    }
    if (space_->basis.degree() == 0) {
      throw ConfigError("PorousSplit: inconsistent for piecewise constants (k = 0)");
    }
    for (int I = 0; I <= n; ++I) {
      weights_[I] = mesh.interface_coordinate(I) < split->split_point ? kRightLeft : kLeftRight;
    }
  } else {
    InterfaceWeights w = kCentral;
    if (std::holds_alternative<AltLeftRight>(flux_)) w = kLeftRight;
    if (std::holds_alternative<AltRightLeft>(flux_)) w = kRightLeft;
    for (auto& x : weights_) x = w;
  }
  periodic_ = std::holds_alternative<Periodic>(bc_);
  // Interfaces 0 and n coincide under periodic wrap and must share one flux.
  if (periodic_) weights_[n] = weights_[0];
  if (const auto* io = std::get_if<InflowOutflow>(&bc_)) {
    rho_ghost_left_ = io->rho_left;
    rho_ghost_right_ = io->rho_right;
    j_ghost_left_ = io->j_left;
    j_ghost_right_ = io->j_right;
  }
}

double DGOperators::minus_trace(std::span<const double> u, int interface,
                                double ghost) const noexcept {
  const int n = space_->mesh.n_elements();
  const int nl = space_->basis.size();
  int e = interface - 1;
  if (interface == 0) {
    if (!periodic_) return ghost;
    e = n - 1;
  }
  return dot(space_->basis.right_traces(), u.data() + e * nl);
}

double DGOperators::plus_trace(std::span<const double> u, int interface,
                               double ghost) const noexcept {
  const int n = space_->mesh.n_elements();
  const int nl = space_->basis.size();
  int e = interface;
  if (interface == n) {
    if (!periodic_) return ghost;
    e = 0;
  }
  return dot(space_->basis.left_traces(), u.data() + e * nl);
}

void DGOperators::q_form(std::span<const double> q, std::span<double> out) const {
  const Basis& b = space_->basis;
  const int n = space_->mesh.n_elements();
  const int nl = b.size();
  auto hat = [&](int I) {
    const auto w = weights_[I];
    return w.w_minus * minus_trace(q, I, j_ghost_left_) +
           w.w_plus * plus_trace(q, I, j_ghost_right_);
  };
  const auto L = b.left_traces();
  const auto R = b.right_traces();
  double hat_left = hat(0);
  for (int i = 0; i < n; ++i) {
    const double hat_right = hat(i + 1);
    const double* qi = q.data() + i * nl;
    double* oi = out.data() + i * nl;
    for (int j = 0; j < nl; ++j) {
      double vol = 0.0;
      for (int l = 0; l < nl; ++l) vol += b.stiffness(j, l) * qi[l];
      oi[j] = -vol + hat_right * R[j] - hat_left * L[j];
    }
    hat_left = hat_right;
  }
}

void DGOperators::dh_form(std::span<const double> rho, std::span<double> out) const {
  const Basis& b = space_->basis;
  const int n = space_->mesh.n_elements();
  const int nl = b.size();
  auto hat = [&](int I) {
    const auto w = weights_[I];
    return w.w_plus * minus_trace(rho, I, rho_ghost_left_) +
           w.w_minus * plus_trace(rho, I, rho_ghost_right_);
  };
  const auto L = b.left_traces();
  const auto R = b.right_traces();
  double hat_left = hat(0);
  for (int i = 0; i < n; ++i) {
    const double hat_right = hat(i + 1);
    const double* ri = rho.data() + i * nl;
    double* oi = out.data() + i * nl;
    for (int j = 0; j < nl; ++j) {
      double vol = 0.0;
      for (int l = 0; l < nl; ++l) vol += b.stiffness(j, l) * ri[l];
      oi[j] = vol + hat_left * L[j] - hat_right * R[j];
    }
    hat_left = hat_right;
  }
}

void DGOperators::upwind_form(Velocity v, std::span<const double> g, std::span<double> out) const {
  const Basis& b = space_->basis;
  const int n = space_->mesh.n_elements();
  const int nl = b.size();
  const double vv = value(v);
  auto flux = [&](int I) {
    if (v == Velocity::Plus) return minus_trace(g, I, j_ghost_left_);
    return -plus_trace(g, I, -j_ghost_right_);
  };
  const auto L = b.left_traces();
  const auto R = b.right_traces();
  double f_left = flux(0);
  for (int i = 0; i < n; ++i) {
    const double f_right = flux(i + 1);
    const double* gi = g.data() + i * nl;
    double* oi = out.data() + i * nl;
    for (int j = 0; j < nl; ++j) {
      double vol = 0.0;
      for (int l = 0; l < nl; ++l) vol += b.stiffness(j, l) * gi[l];
      oi[j] = -vv * vol + f_right * R[j] - f_left * L[j];
    }
    f_left = f_right;
  }
}

void DGOperators::bhv_form(std::span<const double> g_plus, std::span<const double> g_minus,
                           std::span<double> out_plus, std::span<double> out_minus) const {
  upwind_form(Velocity::Plus, g_plus, out_plus);
  upwind_form(Velocity::Minus, g_minus, out_minus);
  for (std::size_t k = 0; k < out_plus.size(); ++k) {
    const double d = 0.5 * (out_plus[k] - out_minus[k]);
    out_plus[k] = d;
    out_minus[k] = -d;
  }
}

Residual DGOperators::apply_ah(const DGField& g_plus, const DGField& g_minus) const {
  require_same(g_plus, g_minus);
  DGField q(space_);
  auto qc = q.coeffs();
  for (std::size_t k = 0; k < qc.size(); ++k) {
    qc[k] = v_moment(g_plus.coeffs()[k], g_minus.coeffs()[k]);
  }
  return apply_rh(q);
}

Residual DGOperators::apply_rh(const DGField& q) const {
  Residual out(space_);
  q_form(q.coeffs(), out.coeffs());
  return out;
}

Residual DGOperators::apply_dh(const DGField& rho) const {
  Residual out(space_);
  dh_form(rho.coeffs(), out.coeffs());
  return out;
}

VelocityPair<DGField> DGOperators::apply_Dh_upwind(const DGField& g_plus,
                                                   const DGField& g_minus) const {
  require_same(g_plus, g_minus);
  Residual rp(space_), rm(space_);
  upwind_form(Velocity::Plus, g_plus.coeffs(), rp.coeffs());
  upwind_form(Velocity::Minus, g_minus.coeffs(), rm.coeffs());
  return {rp.apply_mass_inverse(), rm.apply_mass_inverse()};
}

VelocityPair<Residual> DGOperators::apply_bhv(const DGField& g_plus,
                                              const DGField& g_minus) const {
  require_same(g_plus, g_minus);
  VelocityPair<Residual> out{Residual(space_), Residual(space_)};
  bhv_form(g_plus.coeffs(), g_minus.coeffs(), out.plus.coeffs(), out.minus.coeffs());
  return out;
}

Residual apply_ah(const DGField& g_plus, const DGField& g_minus, const FluxChoice& flux,
                  const BoundaryCondition& bc) {
  return DGOperators(g_plus.space_ptr(), flux, bc).apply_ah(g_plus, g_minus);
}

Residual apply_dh(const DGField& rho, const FluxChoice& flux, const BoundaryCondition& bc) {
  return DGOperators(rho.space_ptr(), flux, bc).apply_dh(rho);
}

VelocityPair<DGField> apply_Dh_upwind(const DGField& g_plus, const DGField& g_minus,
                                      const BoundaryCondition& bc) {
  return DGOperators(g_plus.space_ptr(), Central{}, bc).apply_Dh_upwind(g_plus, g_minus);
}

VelocityPair<Residual> apply_bhv(const DGField& g_plus, const DGField& g_minus,
                                 const BoundaryCondition& bc) {
  return DGOperators(g_plus.space_ptr(), Central{}, bc).apply_bhv(g_plus, g_minus);
}

namespace {

// out_ij = (dx/2) sum_p w_p F(rho(x_p), g(x_p)) phi_j(x_p) over the source rule.
template <class F>
void collocate(const Space& space, std::span<const double> rho, std::span<const double> g,
               std::span<double> out, F&& integrand) {
  const Basis& b = space.basis;
  const auto& rule = b.source_rule();
  const auto vals = b.source_values();
  const int n = space.mesh.n_elements();
  const int nl = b.size();
  const int np = static_cast<int>(rule.size());
  const double half = 0.5 * space.mesh.dx();
  for (int i = 0; i < n; ++i) {
    const double* ri = rho.data() + i * nl;
    const double* gi = g.data() + i * nl;
    double* oi = out.data() + i * nl;
    for (int j = 0; j < nl; ++j) oi[j] = 0.0;
    for (int p = 0; p < np; ++p) {
      const double* phi = vals.data() + p * nl;
      double r = 0.0, gp = 0.0;
      for (int l = 0; l < nl; ++l) {
        r += phi[l] * ri[l];
        gp += phi[l] * gi[l];
      }
      const double w = half * rule.weights[p] * integrand(r, gp);
      for (int j = 0; j < nl; ++j) oi[j] += w * phi[j];
    }
  }
}

}  // namespace

void s1_form(const CollisionModel& model, const Space& space, Velocity v,
             std::span<const double> rho, std::span<const double> g, std::span<double> out) {
  collocate(space, rho, g, out, [&](double r, double gv) { return s1_pointwise(model, v, r, gv); });
}

void s2_form(const CollisionModel& model, const Space& space, Velocity v,
             std::span<const double> g, std::span<double> out) {
  const auto* b = std::get_if<Burgers>(&model);
  if (b == nullptr) {
    for (auto& x : out) x = 0.0;
    return;
  }
  const double cv = b->C * value(v);
  collocate(space, g, g, out, [cv](double, double gv) { return cv * gv * gv; });
}

VelocityPair<Residual> assemble_s1(const CollisionModel& model, const KineticState& state) {
  require_same(state.rho, state.g_plus);
  require_same(state.rho, state.g_minus);
  const SpacePtr& sp = state.rho.space_ptr();
  VelocityPair<Residual> out{Residual(sp), Residual(sp)};
  for (Velocity v : kVelocities) {
    const DGField& g = v == Velocity::Plus ? state.g_plus : state.g_minus;
    s1_form(model, *sp, v, state.rho.coeffs(), g.coeffs(), out[v].coeffs());
  }
  return out;
}

VelocityPair<Residual> assemble_s2(const CollisionModel& model, const KineticState& state) {
  require_same(state.rho, state.g_plus);
  require_same(state.rho, state.g_minus);
  const SpacePtr& sp = state.rho.space_ptr();
  VelocityPair<Residual> out{Residual(sp), Residual(sp)};
  for (Velocity v : kVelocities) {
    const DGField& g = v == Velocity::Plus ? state.g_plus : state.g_minus;
    s2_form(model, *sp, v, g.coeffs(), out[v].coeffs());
  }
  return out;
}

void assemble_affine_source(const CollisionModel& model, const Space& space,
                            std::span<const double> rho, std::span<double> out) {
  if (const auto* a = std::get_if<AdvDiff>(&model)) {
    const double A = a->A;
    collocate(space, rho, rho, out, [A](double r, double) { return A * r; });
  } else if (const auto* b = std::get_if<Burgers>(&model)) {
    const double C = b->C;
    collocate(space, rho, rho, out, [C](double r, double) { return C * r * r; });
  } else {
    for (auto& x : out) x = 0.0;
  }
}

}  // namespace apdg
