#include "apdg/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "apdg/dg_operators.hpp"
#include "apdg/errors.hpp"

namespace apdg {

DGField reconstruct_j(const KineticState& state) {
  if (!state.g_plus.same_space(state.g_minus)) throw ConfigError("fields on different spaces");
  DGField j(state.g_plus.space_ptr());
  auto jc = j.coeffs();
  for (std::size_t k = 0; k < jc.size(); ++k) {
    jc[k] = v_moment(state.g_plus.coeffs()[k], state.g_minus.coeffs()[k]);
  }
  return j;
}

double discrete_energy(const KineticState& state, const CollisionModel& model) {
  double A = 0.0;
  if (std::holds_alternative<Burgers>(model)) {
    throw ConfigError("discrete_energy: no energy functional for the Burgers model");
  }
  if (const auto* a = std::get_if<AdvDiff>(&model)) A = a->A;
  const double eps = state.epsilon;
  const double weight = 1.0 - eps * eps * A * A;
  if (!(weight > 0.0)) throw ConfigError("discrete_energy: requires |eps A| < 1");

  const DGField j = reconstruct_j(state);
  const Space& sp = state.rho.space();
  const auto rule = gauss_legendre(sp.basis.degree() + 4);
  const double half = 0.5 * sp.mesh.dx();
  double e = 0.0;
  for (int i = 0; i < sp.mesh.n_elements(); ++i) {
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double r = state.rho.evaluate_reference(i, rule.points[q]);
      const double jj = j.evaluate_reference(i, rule.points[q]);
      const double d = jj - A * r;
      e += half * rule.weights[q] * (weight * r * r + eps * eps * d * d);
    }
  }
  return 0.5 * e;
}

double total_mass(const DGField& rho) {
  const Basis& b = rho.space().basis;
  // int phi_j = sum over the volume rule; exact for P^k.
  const auto& rule = b.volume_rule();
  std::vector<double> integral(b.size(), 0.0);
  const auto vals = b.volume_values();
  for (std::size_t q = 0; q < rule.size(); ++q) {
    for (int j = 0; j < b.size(); ++j) integral[j] += rule.weights[q] * vals[q * b.size() + j];
  }
  const double half = 0.5 * rho.space().mesh.dx();
  double s = 0.0;
  for (int i = 0; i < rho.n_elements(); ++i) {
    for (int j = 0; j < b.size(); ++j) s += half * integral[j] * rho(i, j);
  }
  return s;
}

double max_mean_g(const KineticState& state) {
  double mx = 0.0;
  const auto gp = state.g_plus.coeffs();
  const auto gm = state.g_minus.coeffs();
  for (std::size_t k = 0; k < gp.size(); ++k) {
    mx = std::max(mx, std::abs(velocity_average(gp[k], gm[k])));
  }
  return mx;
}

std::vector<std::optional<double>> order_from_errors(
    const std::vector<std::pair<int, double>>& errors) {
  std::vector<std::optional<double>> out;
  for (std::size_t i = 1; i < errors.size(); ++i) {
    if (errors[i].first != 2 * errors[i - 1].first) {
      throw ConfigError("order_from_errors: successive meshes must double");
    }
    const double a = errors[i - 1].second, b = errors[i].second;
    if (a > 0.0 && b > 0.0 && std::isfinite(a) && std::isfinite(b)) {
      out.emplace_back(std::log2(a / b));
    } else {
      out.emplace_back(std::nullopt);
    }
  }
  return out;
}

void RunMetrics::record(const KineticState& state, const CollisionModel& model, double t) {
  time.push_back(t);
  mass.push_back(total_mass(state.rho));
  max_mean_g.push_back(apdg::max_mean_g(state));
  if (!std::holds_alternative<Burgers>(model)) energy.push_back(discrete_energy(state, model));
}

}  // namespace apdg
