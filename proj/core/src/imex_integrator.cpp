#include "apdg/imex_integrator.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "apdg/errors.hpp"

namespace apdg {

namespace {

DoubleButcherTableau from_rows(int s, std::vector<double> at, std::vector<double> a) {
  DoubleButcherTableau t;
  t.s = s;
  t.explicit_a = std::move(at);
  t.implicit_a = std::move(a);
  t.explicit_b.assign(t.explicit_a.end() - s, t.explicit_a.end());
  t.implicit_b.assign(t.implicit_a.end() - s, t.implicit_a.end());
  t.explicit_c.assign(s, 0.0);
  t.implicit_c.assign(s, 0.0);
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < i; ++j) t.explicit_c[i] += t.at(i, j);
    for (int j = 0; j <= i; ++j) t.implicit_c[i] += t.a(i, j);
  }
  return t;
}

void copy(std::span<const double> from, std::span<double> to) {
  std::copy(from.begin(), from.end(), to.begin());
}

}  // namespace

DoubleButcherTableau tableau(int order) {
  switch (order) {
    case 1:
      return from_rows(2, {0, 0, 1, 0}, {0, 0, 0, 1});
    case 2: {
      const double g = 1.0 - 1.0 / std::sqrt(2.0);
      const double d = 1.0 - 1.0 / (2.0 * g);
      return from_rows(3, {0, 0, 0, g, 0, 0, d, 1 - d, 0}, {0, 0, 0, 0, g, 0, 0, 1 - g, g});
    }
    case 3:
      return from_rows(5,
                       {0, 0, 0, 0, 0,                                  //
                        1.0 / 2, 0, 0, 0, 0,                            //
                        11.0 / 18, 1.0 / 18, 0, 0, 0,                   //
                        5.0 / 6, -5.0 / 6, 1.0 / 2, 0, 0,               //
                        1.0 / 4, 7.0 / 4, 3.0 / 4, -7.0 / 4, 0},
                       {0, 0, 0, 0, 0,                                  //
                        0, 1.0 / 2, 0, 0, 0,                            //
                        0, 1.0 / 6, 1.0 / 2, 0, 0,                      //
                        0, -1.0 / 2, 1.0 / 2, 1.0 / 2, 0,               //
                        0, 3.0 / 2, -3.0 / 2, 1.0 / 2, 1.0 / 2});
    default:
      throw ConfigError("unsupported IMEX order " + std::to_string(order));
  }
}

bool check_gsa(const DoubleButcherTableau& t, double tol) {
  const int s = t.s;
  if (s < 1) return false;
  const auto sz = static_cast<std::size_t>(s);
  if (t.explicit_a.size() != sz * sz || t.implicit_a.size() != sz * sz) return false;
  if (t.explicit_b.size() != sz || t.implicit_b.size() != sz) return false;
  if (t.explicit_c.size() != sz || t.implicit_c.size() != sz) return false;
  for (int i = 0; i < s; ++i) {
    for (int j = i; j < s; ++j) {
      if (t.at(i, j) != 0.0) return false;
      if (j > i && t.a(i, j) != 0.0) return false;
    }
  }
  if (std::abs(t.explicit_c[s - 1] - 1.0) > tol || std::abs(t.implicit_c[s - 1] - 1.0) > tol) {
    return false;
  }
  for (int j = 0; j < s; ++j) {
    if (std::abs(t.a(s - 1, j) - t.implicit_b[j]) > tol) return false;
    if (std::abs(t.at(s - 1, j) - t.explicit_b[j]) > tol) return false;
  }
  return true;
}

DtConstants default_dt_constants(int order) {
  switch (order) {
    case 1:
      return {0.5, 0.25};
    case 2:
      return {0.5, 0.01};
    case 3:
      return {0.25, 0.006};
    default:
      throw ConfigError("unsupported IMEX order " + std::to_string(order));
  }
}

SchemeConfig make_scheme(int order, CollisionModel model, double epsilon, FluxChoice flux,
                         BoundaryCondition bc) {
  const auto c = default_dt_constants(order);
  return SchemeConfig{order, flux, bc, model, epsilon, c.c_hyper, c.c_diff};
}

double compute_dt(const SchemeConfig& cfg, double dx) {
  if (!(dx > 0.0)) throw ConfigError("compute_dt: dx must be positive");
  return cfg.c_hyper * cfg.epsilon * dx + cfg.c_diff * dx * dx;
}

void solve_stage_velocity(const CollisionModel& model, const Space& space, Velocity v,
                          std::span<const double> rho, std::span<const double> r1,
                          const double* dp, double a, double b, std::span<double> g,
                          long& clamps) {
  const Basis& basis = space.basis;
  const int n = space.mesh.n_elements();
  const int nl = basis.size();
  const double half = 0.5 * space.mesh.dx();
  const auto ref_mass = basis.mass_diagonal();
  const double vv = value(v);
  auto rhs = [&](int k) { return a * r1[k] + (dp ? b * vv * dp[k] : 0.0); };

  double c = 1.0;
  if (const auto* p = std::get_if<Porous>(&model)) {
    c = p->K;
    if (p->m != 0.0) {
      const double K = p->K, m = p->m;
      if (basis.kind() == BasisKind::NodalGauss) {
        // Multiplied through by rho^{-m}: well posed at rho = 0, where g = 0.
        for (int i = 0; i < n; ++i) {
          for (int j = 0; j < nl; ++j) {
            const int k = i * nl + j;
            double r = rho[k];
            if (r < 0.0) {
              r = 0.0;
              ++clamps;
            }
            const double w = std::pow(r, -m);
            const double val = w * rhs(k) / (half * ref_mass[j]) / (a * w + b * K);
            if (!std::isfinite(val)) throw NumericalBreakdown("non-finite stage value", i);
            g[k] = val;
          }
        }
        return;
      }
      const auto& rule = basis.volume_rule();
      const auto vals = basis.volume_values();
      const int nq = static_cast<int>(rule.size());
      Eigen::MatrixXd mat(nl, nl);
      Eigen::VectorXd rv(nl);
      for (int i = 0; i < n; ++i) {
        mat.setZero();
        for (int q = 0; q < nq; ++q) {
          const double* phi = vals.data() + q * nl;
          double r = 0.0;
          for (int l = 0; l < nl; ++l) r += phi[l] * rho[i * nl + l];
          if (r <= 0.0) {
            throw DegenerateError("modal porous stage solve needs rho > 0 (element " +
                                  std::to_string(i) + "); use the nodal basis");
          }
          const double w = b * half * rule.weights[q] * K * std::pow(r, m);
          for (int j = 0; j < nl; ++j) {
            for (int l = 0; l < nl; ++l) mat(j, l) += w * phi[j] * phi[l];
          }
        }
        for (int j = 0; j < nl; ++j) {
          mat(j, j) += a * half * ref_mass[j];
          rv(j) = rhs(i * nl + j);
        }
        Eigen::LLT<Eigen::MatrixXd> llt(mat);
        if (llt.info() != Eigen::Success) throw NumericalBreakdown("singular stage block", i);
        const Eigen::VectorXd sol = llt.solve(rv);
        for (int j = 0; j < nl; ++j) {
          if (!std::isfinite(sol(j))) throw NumericalBreakdown("non-finite stage value", i);
          g[i * nl + j] = sol(j);
        }
      }
      return;
    }
  }
  const double denom = a + b * c;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < nl; ++j) {
      const int k = i * nl + j;
      g[k] = rhs(k) / (half * ref_mass[j] * denom);
    }
  }
}

VelocityPair<DGField> implicit_stage_solve(const CollisionModel& model, const DGField& rho_stage,
                                           const VelocityPair<Residual>& rhs, double factor,
                                           long* clamp_count) {
  if (!(factor > 0.0)) throw ConfigError("implicit_stage_solve: factor must be positive");
  const SpacePtr& sp = rho_stage.space_ptr();
  if (!rhs.plus.same_space(rho_stage) || !rhs.minus.same_space(rho_stage)) {
    throw ConfigError("implicit_stage_solve: fields live on different spaces");
  }
  std::vector<double> affine(rho_stage.coeffs().size());
  assemble_affine_source(model, *sp, rho_stage.coeffs(), affine);
  VelocityPair<DGField> out{DGField(sp), DGField(sp)};
  long clamps = 0;
  for (Velocity v : kVelocities) {
    solve_stage_velocity(model, *sp, v, rho_stage.coeffs(), rhs[v].coeffs(), affine.data(), 1.0,
                         factor, out[v].coeffs(), clamps);
  }
  if (clamp_count) *clamp_count += clamps;
  return out;
}

ImexStepper::ImexStepper(SpacePtr space, const SchemeConfig& cfg)
    : ImexStepper(space, cfg, tableau(cfg.order)) {}

ImexStepper::ImexStepper(SpacePtr space, const SchemeConfig& cfg, DoubleButcherTableau t)
    : space_(std::move(space)),
      cfg_(cfg),
      tab_(std::move(t)),
      ops_(space_, cfg.flux, cfg.bc),
      rho_l_(space_),
      g_l_{DGField(space_), DGField(space_)} {
  validate(cfg_.model, cfg_.epsilon);
  if (!check_gsa(tab_)) throw ConfigError("tableau is not globally stiffly accurate");
  for (int l = 1; l < tab_.s; ++l) {
    if (tab_.a(l, l) == 0.0) throw ConfigError("only the first implicit stage may be explicit");
  }
  if (tab_.a(0, 0) == 0.0) {
    for (int l = 1; l < tab_.s; ++l) need_first_stiff_ = need_first_stiff_ || tab_.a(l, 0) != 0.0;
  }
  if (!(cfg_.c_hyper >= 0.0 && cfg_.c_diff >= 0.0 && cfg_.c_hyper + cfg_.c_diff > 0.0)) {
    throw ConfigError("time-step constants must be nonnegative and not both zero");
  }

  mass_ = element_mass_diagonal(*space_);
  const std::size_t size = rho_l_.coeffs().size();
  auto pair = [size] {
    return VelocityPair<std::vector<double>>{std::vector<double>(size),
                                             std::vector<double>(size)};
  };
  rho_n_.resize(size);
  mg_n_ = pair();
  rn_ = pair();
  ah_.assign(tab_.s, std::vector<double>(size));
  for (int l = 0; l < tab_.s; ++l) {
    ex_.push_back(pair());
    im_.push_back(pair());
  }
  dp_.resize(size);
  scratch_.resize(size);
  scratch2_.resize(size);
}

void ImexStepper::stage_solve(int l, double dt_a) {
  const double eps2 = cfg_.epsilon * cfg_.epsilon;
  const std::size_t size = dp_.size();
  const int nl = space_->basis.size();
  ops_.dh_form(rho_l_.coeffs(), dp_);
  if (!std::holds_alternative<Porous>(cfg_.model)) {
    assemble_affine_source(cfg_.model, *space_, rho_l_.coeffs(), scratch_);
    for (std::size_t k = 0; k < size; ++k) dp_[k] += scratch_[k];
  }
  for (Velocity v : kVelocities) {
    auto g = g_l_[v].coeffs();
    const auto& rn = rn_[v];
    solve_stage_velocity(cfg_.model, *space_, v, rho_l_.coeffs(), rn, dp_.data(), eps2, dt_a, g,
                         clamps_);
    // Stiff derivative recovered from the stage equation M g = rn + dt_a K.
    auto& im = im_[l][v];
    for (std::size_t k = 0; k < size; ++k) im[k] = (mass_[k % nl] * g[k] - rn[k]) / dt_a;
  }
}

void ImexStepper::step(KineticState& state, double dt) {
  if (!(dt > 0.0)) throw ConfigError("step: dt must be positive");
  for (const DGField* f : {&state.rho, &state.g_plus, &state.g_minus}) {
    const Space& sp = f->space();
    if (!(sp.mesh == space_->mesh) || sp.basis.degree() != space_->basis.degree() ||
        sp.basis.kind() != space_->basis.kind()) {
      throw ConfigError("step: state lives on a different space");
    }
  }
  if (state.epsilon != cfg_.epsilon) throw ConfigError("step: state epsilon differs from config");
  const double eps = cfg_.epsilon;
  const int s = tab_.s;
  const int nl = space_->basis.size();
  const std::size_t size = rho_n_.size();

  copy(state.rho.coeffs(), rho_n_);
  for (Velocity v : kVelocities) {
    const auto g = (v == Velocity::Plus ? state.g_plus : state.g_minus).coeffs();
    for (std::size_t k = 0; k < size; ++k) mg_n_[v][k] = mass_[k % nl] * g[k];
  }

  for (int l = 0; l < s; ++l) {
    auto rho = rho_l_.coeffs();
    copy(rho_n_, rho);
    for (int j = 0; j < l; ++j) {
      const double c = dt * tab_.at(l, j);
      if (c == 0.0) continue;
      const auto& r = ah_[j];
      for (std::size_t k = 0; k < size; ++k) rho[k] -= c * r[k] / mass_[k % nl];
    }
    for (Velocity v : kVelocities) {
      auto& rn = rn_[v];
      rn = mg_n_[v];
      for (int j = 0; j < l; ++j) {
        const double ce = dt * tab_.at(l, j);
        const double ci = dt * tab_.a(l, j);
        const auto& e = ex_[j][v];
        const auto& im = im_[j][v];
        if (ce != 0.0) {
          for (std::size_t k = 0; k < size; ++k) rn[k] -= ce * e[k];
        }
        if (ci != 0.0) {
          for (std::size_t k = 0; k < size; ++k) rn[k] += ci * im[k];
        }
      }
    }

    const double all = tab_.a(l, l);
    if (all == 0.0) {
      copy(state.g_plus.coeffs(), g_l_.plus.coeffs());
      copy(state.g_minus.coeffs(), g_l_.minus.coeffs());
      if (need_first_stiff_) {
        ops_.dh_form(rho, dp_);
        for (Velocity v : kVelocities) {
          s1_form(cfg_.model, *space_, v, rho, g_l_[v].coeffs(), scratch_);
          auto& im = im_[l][v];
          for (std::size_t k = 0; k < size; ++k) {
            im[k] = (value(v) * dp_[k] - scratch_[k]) / (eps * eps);
          }
        }
      }
    } else {
      stage_solve(l, dt * all);
    }

    if (observer_) observer_(StageView{l, rho_l_, g_l_.plus, g_l_.minus});

    if (l == s - 1) break;
    const auto gp = g_l_.plus.coeffs();
    const auto gm = g_l_.minus.coeffs();
    for (std::size_t k = 0; k < size; ++k) scratch_[k] = v_moment(gp[k], gm[k]);
    ops_.q_form(scratch_, ah_[l]);
    auto& ex = ex_[l];
    ops_.bhv_form(gp, gm, ex.plus, ex.minus);
    const bool burgers = std::holds_alternative<Burgers>(cfg_.model);
    for (Velocity v : kVelocities) {
      auto& e = ex[v];
      for (std::size_t k = 0; k < size; ++k) e[k] /= eps;
      if (burgers) {
        s2_form(cfg_.model, *space_, v, g_l_[v].coeffs(), scratch2_);
        for (std::size_t k = 0; k < size; ++k) e[k] += scratch2_[k];
      }
    }
  }

  copy(rho_l_.coeffs(), state.rho.coeffs());
  copy(g_l_.plus.coeffs(), state.g_plus.coeffs());
  copy(g_l_.minus.coeffs(), state.g_minus.coeffs());
}

long ImexStepper::advance_to(KineticState& state, double T, const StepObserver& on_step) {
  if (!(T > 0.0)) throw ConfigError("advance_to: T must be positive");
  const double dt = compute_dt(cfg_, space_->mesh.dx());
  const long n = std::max(1L, static_cast<long>(std::ceil(T / dt * (1.0 - 1e-12))));
  for (long k = 0; k < n; ++k) {
    const double h = k == n - 1 ? T - static_cast<double>(n - 1) * dt : dt;
    step(state, h);
    if (on_step) on_step(state, k == n - 1 ? T : static_cast<double>(k + 1) * dt, k + 1);
  }
  return n;
}

KineticState step(const KineticState& state, const SchemeConfig& cfg,
                  const DoubleButcherTableau& t, double dt) {
  SchemeConfig c = cfg;
  c.epsilon = state.epsilon;
  ImexStepper stepper(state.rho.space_ptr(), c, t);
  KineticState out = state;
  stepper.step(out, dt);
  return out;
}

}  // namespace apdg
