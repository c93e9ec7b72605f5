#pragma once

// Derived quantities and verification metrics.

#include <optional>
#include <utility>
#include <vector>

#include "apdg/kinetic_models.hpp"
#include "apdg/state.hpp"

namespace apdg {

/// j_h = <v g_h> = (g_plus - g_minus) / 2, coefficientwise.
DGField reconstruct_j(const KineticState& state);

/// 1/2 int (rho^2 + eps^2 j^2) for Porous, and
/// 1/2 int [(1 - eps^2 A^2) rho^2 + eps^2 (j - A rho)^2] for AdvDiff.
/// Throws ConfigError for Burgers or |eps A| >= 1.
double discrete_energy(const KineticState& state, const CollisionModel& model);

/// int rho_h dx.
double total_mass(const DGField& rho);

/// max over elements and basis coefficients of |<g_h>|.
double max_mean_g(const KineticState& state);

/// Orders log2(e_{i-1} / e_i) for meshes that double. An entry is empty when
/// either error is not positive. Throws ConfigError if a mesh ratio is not 2.
std::vector<std::optional<double>> order_from_errors(
    const std::vector<std::pair<int, double>>& errors);

struct RunMetrics {
  std::vector<double> time;
  std::vector<double> mass;
  std::vector<double> energy;  // empty for models without an energy
  std::vector<double> max_mean_g;
  double l1_rho = 0.0;
  double l1_j = 0.0;

  void record(const KineticState& state, const CollisionModel& model, double t);
};

}  // namespace apdg
