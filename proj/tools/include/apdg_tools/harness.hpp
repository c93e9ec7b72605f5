#pragma once

// Experiment drivers behind the command-line tool. Each run_* function is pure
// computation; the write_* functions render its result as CSV.

#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <vector>

#include "apdg/imex_integrator.hpp"
#include "apdg/limiting_ldg.hpp"
#include "apdg/state.hpp"
#include "apdg_tools/config.hpp"

namespace apdg::tools {

/// Worker count: APDG_THREADS if set to a positive integer, else the hardware count.
int thread_count();

/// Runs body(i) for i in [0, n) on thread_count() workers. The first exception
/// by index is rethrown after all workers finish.
void parallel_for(int n, const std::function<void(int)>& body);

/// SchemeConfig of the experiment at the given order, with c_hyper and c_diff
/// overrides applied.
SchemeConfig scheme_for(const ExperimentConfig& cfg, int order);

SpacePtr space_for(const ExperimentConfig& cfg, int n_elements, int degree);

struct RunResult {
  int N = 0;
  int order = 1;
  int degree = 0;
  double dx = 0.0;
  double dt = 0.0;
  long steps = 0;
  std::optional<KineticState> state;
  double l1_rho = 0.0;  // against the exact solution at T, NaN without one
  double l1_j = 0.0;
  double max_mean_g = 0.0;     // over all steps
  double max_mass_drift = 0.0; // relative, over all steps
  long clamps = 0;
};

/// One kinetic run of the experiment on N elements.
RunResult run_kinetic(const ExperimentConfig& cfg, int N, int order, int degree);

/// The configured error norm of u - ref.
double error_norm(const ExperimentConfig& cfg, const DGField& u, const PointFunction& ref);

struct ConvergeRow {
  int N;
  double l1_rho;
  std::optional<double> order_rho;
  double l1_j;
  std::optional<double> order_j;
  double max_mass_drift = 0.0;
  double max_mean_g = 0.0;
};

std::vector<ConvergeRow> run_converge(const ExperimentConfig& cfg);
void write_converge_csv(const std::vector<ConvergeRow>& rows, std::ostream& out);

struct RiemannRow {
  int N;
  double dx;
  double l1_ref_rho;    // NaN without a reference run
  double l1_ref_j;
  double l1_exact_rho;  // NaN without an exact solution
  double l1_exact_j;
  double overshoot;     // spurious excursion above and below the data range
  double support_left;  // outermost cells with mean rho above support_tol
  double support_right;
};

struct RiemannResult {
  std::vector<RunResult> runs;
  std::optional<RunResult> reference;
  std::vector<RiemannRow> summary;
};

RiemannResult run_riemann(const ExperimentConfig& cfg);

/// Sum of the excursions of rho above max(data) and below min(data), sampled
/// densely in every element. The data range is given by lo and hi.
double overshoot(const DGField& rho, double lo, double hi);

/// Values of rho and j at k+1 equispaced interior points of each element.
void write_profile_csv(const KineticState& state, std::ostream& out);
void write_riemann_summary_csv(const std::vector<RiemannRow>& rows, std::ostream& out);

struct ApRow {
  int N;
  long steps;
  double l1_rho_diff;
  double l1_rho;       // l1 norm of the kinetic rho
  double relative;     // l1_rho_diff / l1_rho
  double l1_q_j_diff;  // kinetic j against the limiting q
};

std::vector<ApRow> run_ap_check(const ExperimentConfig& cfg);
void write_ap_csv(const std::vector<ApRow>& rows, std::ostream& out);

/// Writes a gnuplot script plotting rho and j from profile CSVs. Files whose
/// stem ends in "_ref" are drawn as solid reference lines. Throws Error for a
/// missing or empty CSV without writing the script.
void emit_plot_script(const std::vector<std::filesystem::path>& csvs,
                      const std::filesystem::path& script);

/// Runs the experiment and writes its CSV files into cfg.output. Returns the
/// paths written.
std::vector<std::filesystem::path> run_experiment(const ExperimentConfig& cfg);

}  // namespace apdg::tools
