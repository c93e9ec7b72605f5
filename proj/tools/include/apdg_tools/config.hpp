#pragma once

// Flat key = value experiment description, one file per run.

#include <filesystem>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "apdg/dg_operators.hpp"
#include "apdg/kinetic_models.hpp"
#include "apdg/mesh_basis.hpp"

namespace apdg::tools {

enum class ExperimentKind { Converge, Riemann, ApCheck };

enum class ExactKind { None, Telegraph, AdvDiff, AdvDiffRiemann, RuijgrokWu, Barenblatt };

/// Integral: sum of int |e| dx. DomainMean: the same divided by x_max - x_min.
enum class ErrorNorm { Integral, DomainMean };

/// Initial data for runs that are not started from an exact solution.
enum class InitialKind { Exact, Riemann, Sine, Constant };

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Converge;
  CollisionModel model = Porous{};
  double epsilon = 1.0;
  FluxChoice flux = AltLeftRight{};
  int order = 1;
  int degree = 0;
  BasisKind basis = BasisKind::ModalLegendre;
  std::vector<int> meshes;
  double x_min = -std::numbers::pi;
  double x_max = std::numbers::pi;
  double T = 1.0;
  BoundaryCondition bc = Periodic{};
  std::filesystem::path output = ".";
  std::string name;  // file stem, defaults to the experiment kind

  ExactKind exact = ExactKind::None;
  InitialKind initial = InitialKind::Exact;
  double rho_left = 1.0, rho_right = 1.0;
  double j_left = 0.0, j_right = 0.0;
  double x_jump = 0.0;
  bool maxwellian = false;
  double rho_minus = 1.0, rho_plus = 2.0, xi0 = 0.0;  // Ruijgrok-Wu states
  double amplitude = 1.0;                              // Sine and Constant data

  int reference_N = 0;  // 0: no reference run
  int reference_order = 3;
  std::optional<double> c_hyper;
  std::optional<double> c_diff;
  ErrorNorm error_norm = ErrorNorm::Integral;
  double support_tol = 1e-3;
  /// ap-check: start g from the limiting q of the initial rho.
  bool well_prepared = true;
};

/// Throws ConfigError on unknown keys, malformed values or violated invariants.
ExperimentConfig parse_config(const std::filesystem::path& path);
ExperimentConfig parse_config_string(const std::string& text);

/// ExactSolution of the configured exact kind; nullopt for ExactKind::None.
std::optional<ExactSolution> exact_solution(const ExperimentConfig& cfg);

/// Initial (rho, j) profile of a run.
InitialProfile initial_profile(const ExperimentConfig& cfg);

std::string to_string(ExperimentKind kind);

}  // namespace apdg::tools
