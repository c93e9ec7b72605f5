#include "apdg_tools/harness.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <string>
#include <thread>

#include "apdg/diagnostics.hpp"
#include "apdg/errors.hpp"

namespace apdg::tools {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string sci(double v) { return fmt::format("{:.11e}", v); }

std::string opt_sci(const std::optional<double>& v) { return v ? sci(*v) : std::string(); }

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw Error("cannot write " + p.string());
  return out;
}

PointFunction evaluator(const DGField& u) {
  return [&u](double x) { return u.evaluate(x); };
}

}  // namespace

int thread_count() {
  if (const char* env = std::getenv("APDG_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(int n, const std::function<void(int)>& body) {
  const int workers = std::min(n, thread_count());
  std::vector<std::exception_ptr> errors(std::max(n, 0));
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (int i = w; i < n; i += workers) {
          try {
            body(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

SchemeConfig scheme_for(const ExperimentConfig& cfg, int order) {
  SchemeConfig s = make_scheme(order, cfg.model, cfg.epsilon, cfg.flux, cfg.bc);
  if (cfg.c_hyper) s.c_hyper = *cfg.c_hyper;
  if (cfg.c_diff) s.c_diff = *cfg.c_diff;
  return s;
}

SpacePtr space_for(const ExperimentConfig& cfg, int n_elements, int degree) {
  return make_space(Mesh1D(cfg.x_min, cfg.x_max, n_elements), degree, cfg.basis);
}

double error_norm(const ExperimentConfig& cfg, const DGField& u, const PointFunction& ref) {
  const double e = l1_error(u, ref);
  return cfg.error_norm == ErrorNorm::DomainMean ? e / (cfg.x_max - cfg.x_min) : e;
}

RunResult run_kinetic(const ExperimentConfig& cfg, int N, int order, int degree) {
  auto space = space_for(cfg, N, degree);
  const SchemeConfig scheme = scheme_for(cfg, order);
  KineticState state = initial_state(initial_profile(cfg), space, cfg.epsilon);

  ImexStepper stepper(space, scheme);
  const double m0 = total_mass(state.rho);
  const double scale = std::max(l1_norm(state.rho), std::numeric_limits<double>::min());
  RunResult r;
  r.N = N;
  r.order = order;
  r.degree = degree;
  r.dx = space->mesh.dx();
  r.dt = compute_dt(scheme, r.dx);
  r.max_mean_g = max_mean_g(state);
  const bool periodic = std::holds_alternative<Periodic>(cfg.bc);
  r.steps = stepper.advance_to(state, cfg.T, [&](const KineticState& s, double, long) {
    r.max_mean_g = std::max(r.max_mean_g, max_mean_g(s));
    if (periodic) {
      r.max_mass_drift = std::max(r.max_mass_drift, std::abs(total_mass(s.rho) - m0) / scale);
    }
  });
  r.clamps = stepper.clamp_count();

  if (const auto sol = exact_solution(cfg)) {
    const double T = cfg.T;
    const DGField j = reconstruct_j(state);
    r.l1_rho = error_norm(cfg, state.rho, [&](double x) { return exact_eval(*sol, x, T).rho; });
    r.l1_j = error_norm(cfg, j, [&](double x) { return exact_eval(*sol, x, T).j; });
  } else {
    r.l1_rho = kNaN;
    r.l1_j = kNaN;
  }
  r.state = std::move(state);
  return r;
}

std::vector<ConvergeRow> run_converge(const ExperimentConfig& cfg) {
  if (!exact_solution(cfg)) throw ConfigError("converge: no exact solution configured");
  const int n = static_cast<int>(cfg.meshes.size());
  std::vector<ConvergeRow> rows(n);
  parallel_for(n, [&](int i) {
    const auto r = run_kinetic(cfg, cfg.meshes[i], cfg.order, cfg.degree);
    rows[i] = ConvergeRow{r.N,           r.l1_rho,       std::nullopt, r.l1_j, std::nullopt,
                          r.max_mass_drift, r.max_mean_g};
  });
  std::vector<std::pair<int, double>> er, ej;
  for (const auto& row : rows) {
    er.emplace_back(row.N, row.l1_rho);
    ej.emplace_back(row.N, row.l1_j);
  }
  const auto orho = order_from_errors(er);
  const auto oj = order_from_errors(ej);
  for (int i = 1; i < n; ++i) {
    rows[i].order_rho = orho[i - 1];
    rows[i].order_j = oj[i - 1];
  }
  return rows;
}

void write_converge_csv(const std::vector<ConvergeRow>& rows, std::ostream& out) {
  out << "N,L1_rho,order_rho,L1_j,order_j\n";
  for (const auto& r : rows) {
    fmt::print(out, "{},{},{},{},{}\n", r.N, sci(r.l1_rho), opt_sci(r.order_rho), sci(r.l1_j),
               opt_sci(r.order_j));
  }
}

double overshoot(const DGField& rho, double lo, double hi) {
  constexpr int kSamples = 16;
  const auto& mesh = rho.space().mesh;
  double above = 0.0, below = 0.0;
  for (int i = 0; i < mesh.n_elements(); ++i) {
    for (int p = 0; p <= kSamples; ++p) {
      const double xi = -1.0 + 2.0 * p / kSamples;
      const double v = rho.evaluate_reference(i, xi);
      above = std::max(above, v - hi);
      below = std::max(below, lo - v);
    }
  }
  return above + below;
}

RiemannResult run_riemann(const ExperimentConfig& cfg) {
  RiemannResult res;
  const int n = static_cast<int>(cfg.meshes.size());
  const int jobs = n + (cfg.reference_N > 0 ? 1 : 0);
  std::vector<std::optional<RunResult>> runs(jobs);
  parallel_for(jobs, [&](int i) {
    if (i < n) {
      runs[i] = run_kinetic(cfg, cfg.meshes[i], cfg.order, cfg.degree);
    } else {
      runs[i] = run_kinetic(cfg, cfg.reference_N, cfg.reference_order, cfg.reference_order - 1);
    }
  });
  for (int i = 0; i < n; ++i) res.runs.push_back(std::move(*runs[i]));
  if (cfg.reference_N > 0) res.reference = std::move(*runs[n]);

  const auto profile = initial_profile(cfg);
  const double lo = std::min(profile.rho(cfg.x_min), profile.rho(cfg.x_max));
  const double hi = std::max(profile.rho(cfg.x_min), profile.rho(cfg.x_max));

  for (const auto& r : res.runs) {
    RiemannRow row{r.N, r.dx, kNaN, kNaN, r.l1_rho, r.l1_j, 0.0, 0.0, 0.0};
    const KineticState& s = *r.state;
    if (res.reference) {
      const KineticState& ref = *res.reference->state;
      // Integrated on the finer mesh, so the reference quadrature resolves the coarse jumps.
      const DGField j = reconstruct_j(s);
      const DGField jref = reconstruct_j(ref);
      row.l1_ref_rho = error_norm(cfg, ref.rho, evaluator(s.rho));
      row.l1_ref_j = error_norm(cfg, jref, evaluator(j));
    }
    row.overshoot = overshoot(s.rho, lo, hi);
    const auto& mesh = s.rho.space().mesh;
    int first = -1, last = -1;
    for (int i = 0; i < mesh.n_elements(); ++i) {
      if (s.rho.mean(i) > cfg.support_tol) {
        if (first < 0) first = i;
        last = i;
      }
    }
    row.support_left = first < 0 ? kNaN : mesh.element_left(first);
    row.support_right = last < 0 ? kNaN : mesh.element_right(last);
    res.summary.push_back(row);
  }
  return res;
}

void write_profile_csv(const KineticState& state, std::ostream& out) {
  const auto& mesh = state.rho.space().mesh;
  const int np = state.rho.space().basis.size();
  const DGField j = reconstruct_j(state);
  out << "x,rho,j\n";
  for (int i = 0; i < mesh.n_elements(); ++i) {
    for (int p = 0; p < np; ++p) {
      const double xi = -1.0 + (2.0 * p + 1.0) / np;
      fmt::print(out, "{},{},{}\n", sci(mesh.to_physical(i, xi)),
                 sci(state.rho.evaluate_reference(i, xi)), sci(j.evaluate_reference(i, xi)));
    }
  }
}

void write_riemann_summary_csv(const std::vector<RiemannRow>& rows, std::ostream& out) {
  out << "N,dx,L1_ref_rho,L1_ref_j,L1_exact_rho,L1_exact_j,overshoot,support_left,support_right\n";
  for (const auto& r : rows) {
    fmt::print(out, "{},{},{},{},{},{},{},{},{}\n", r.N, sci(r.dx), sci(r.l1_ref_rho),
               sci(r.l1_ref_j), sci(r.l1_exact_rho), sci(r.l1_exact_j), sci(r.overshoot),
               sci(r.support_left), sci(r.support_right));
  }
}

std::vector<ApRow> run_ap_check(const ExperimentConfig& cfg) {
  if (!(cfg.epsilon <= 1e-6)) throw ConfigError("ap-check: epsilon must be <= 1e-6");
  const int n = static_cast<int>(cfg.meshes.size());
  std::vector<ApRow> rows(n);
  parallel_for(n, [&](int i) {
    const int N = cfg.meshes[i];
    auto space = space_for(cfg, N, cfg.degree);
    const SchemeConfig scheme = scheme_for(cfg, cfg.order);
    const auto profile = initial_profile(cfg);

    KineticState kin = initial_state(profile, space, cfg.epsilon);
    LdgStepper ldg(space, cfg.model, cfg.flux, cfg.bc, tableau(cfg.order));
    LDGState lim = ldg.initial(kin.rho);
    if (cfg.well_prepared) {
      kin.g_plus = lim.q;
      kin.g_minus = lim.q;
      kin.g_minus *= -1.0;
    }

    ImexStepper stepper(space, scheme);
    const long steps = stepper.advance_to(kin, cfg.T);
    ldg.advance_to(lim, cfg.T, compute_dt(scheme, space->mesh.dx()));

    const DGField j = reconstruct_j(kin);
    ApRow row;
    row.N = N;
    row.steps = steps;
    row.l1_rho_diff = l1_error(kin.rho, evaluator(lim.rho));
    row.l1_rho = l1_norm(kin.rho);
    row.relative = row.l1_rho > 0.0 ? row.l1_rho_diff / row.l1_rho : row.l1_rho_diff;
    row.l1_q_j_diff = l1_error(j, evaluator(lim.q));
    rows[i] = row;
  });
  return rows;
}

void write_ap_csv(const std::vector<ApRow>& rows, std::ostream& out) {
  out << "N,steps,L1_rho_diff,L1_rho,relative,L1_q_j_diff\n";
  for (const auto& r : rows) {
    fmt::print(out, "{},{},{},{},{},{}\n", r.N, r.steps, sci(r.l1_rho_diff), sci(r.l1_rho),
               sci(r.relative), sci(r.l1_q_j_diff));
  }
}

void emit_plot_script(const std::vector<std::filesystem::path>& csvs,
                      const std::filesystem::path& script) {
  if (csvs.empty()) throw ConfigError("plot: no CSV files given");
  for (const auto& p : csvs) {
    std::ifstream in(p);
    if (!in) throw Error("plot: cannot open " + p.string());
    std::string header, row;
    std::getline(in, header);
    if (header.rfind("x,rho,j", 0) != 0) throw Error("plot: " + p.string() + " is not a profile CSV");
    bool has_row = false;
    while (std::getline(in, row)) {
      if (!row.empty()) {
        has_row = true;
        break;
      }
    }
    if (!has_row) throw Error("plot: " + p.string() + " has no data rows");
  }

  std::string body;
  body += "set datafile separator ','\n";
  body += "set terminal pngcairo size 1200,500\n";
  body += fmt::format("set output '{}'\n", script.stem().string() + ".png");
  body += "set key outside right\n";
  body += "set multiplot layout 1,2\n";
  for (const auto& [col, label] : {std::pair{2, "rho"}, std::pair{3, "j"}}) {
    body += fmt::format("set title '{}'\nset xlabel 'x'\n", label);
    std::string cmd = "plot ";
    for (std::size_t i = 0; i < csvs.size(); ++i) {
      const auto stem = csvs[i].stem().string();
      const bool ref = stem.size() >= 4 && stem.ends_with("_ref");
      if (i > 0) cmd += ", \\\n     ";
      cmd += fmt::format("'{}' using 1:{} with {} title '{}'", csvs[i].string(), col,
                         ref ? "lines lw 2" : "linespoints pt 7 ps 0.5", stem);
    }
    body += cmd + "\n";
  }
  body += "unset multiplot\n";

  auto out = open_out(script);
  out << body;
  if (!out) throw Error("plot: failed writing " + script.string());
}

std::vector<std::filesystem::path> run_experiment(const ExperimentConfig& cfg) {
  std::filesystem::create_directories(cfg.output);
  std::vector<std::filesystem::path> written;
  auto path = [&](const std::string& suffix) { return cfg.output / (cfg.name + suffix + ".csv"); };

  switch (cfg.kind) {
    case ExperimentKind::Converge: {
      const auto rows = run_converge(cfg);
      written.push_back(path(""));
      auto out = open_out(written.back());
      write_converge_csv(rows, out);
      break;
    }
    case ExperimentKind::Riemann: {
      const auto res = run_riemann(cfg);
      for (const auto& r : res.runs) {
        written.push_back(path(fmt::format("_N{}", r.N)));
        auto out = open_out(written.back());
        write_profile_csv(*r.state, out);
      }
      if (res.reference) {
        written.push_back(path("_ref"));
        auto out = open_out(written.back());
        write_profile_csv(*res.reference->state, out);
      }
      written.push_back(path("_summary"));
      auto out = open_out(written.back());
      write_riemann_summary_csv(res.summary, out);
      break;
    }
    case ExperimentKind::ApCheck: {
      const auto rows = run_ap_check(cfg);
      written.push_back(path(""));
      auto out = open_out(written.back());
      write_ap_csv(rows, out);
      break;
    }
  }
  return written;
}

}  // namespace apdg::tools
