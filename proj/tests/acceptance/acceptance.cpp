// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <fmt/format.h>

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "apdg/diagnostics.hpp"
#include "apdg/imex_integrator.hpp"
#include "apdg_tools/config.hpp"
#include "apdg_tools/harness.hpp"

using namespace apdg;
using namespace apdg::tools;

namespace {

struct Check {
  bool ok = true;
  std::vector<std::string> lines;

  void expect(bool cond, std::string what) {
    ok = ok && cond;
    lines.push_back(fmt::format("    [{}] {}", cond ? "ok" : "FAIL", what));
  }
};

int failures = 0;

void criterion(int id, const std::string& title, const std::function<void(Check&)>& body) {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.expect(false, fmt::format("exception: {}", e.what()));
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  fmt::print("criterion {:2d} {}: {} ({:.1f} s)\n", id, c.ok ? "PASS" : "FAIL", title, secs);
  for (const auto& l : c.lines) fmt::print("{}\n", l);
  std::fflush(stdout);
  if (!c.ok) ++failures;
}

std::string eps_key(double eps) { return fmt::format("{:g}", eps); }

// Stable explicit constants at eps = O(1) and 1e-2 for DG2 and DG3.
std::string c_hyper_line(int order, double eps) {
  if (eps < 1e-3 || order == 1) return "";
  return order == 2 ? "c_hyper = 0.25\n" : "c_hyper = 0.1\n";
}

// A missing order compares false against every tolerance.
double order_of(const ConvergeRow& r) {
  return r.order_rho ? *r.order_rho : std::numeric_limits<double>::quiet_NaN();
}

std::string meshes_line() { return "meshes = 10 20 40 80 160\n"; }

struct Study {
  std::vector<ConvergeRow> rows;
};

double max_mass_drift_seen = 0.0;
double max_mean_g_seen = 0.0;

Study converge(const std::string& text) {
  const auto cfg = parse_config_string(text);
  Study s;
  s.rows = run_converge(cfg);
  for (const auto& r : s.rows) {
    if (std::holds_alternative<Periodic>(cfg.bc)) {
      max_mass_drift_seen = std::max(max_mass_drift_seen, r.max_mass_drift);
    }
    max_mean_g_seen = std::max(max_mean_g_seen, r.max_mean_g);
  }
  return s;
}

std::string telegraph_cfg(int order, double eps, const std::string& flux) {
  return fmt::format(
      "kind = converge\nmodel = telegraph\nepsilon = {}\nflux = {}\norder = {}\n{}T = 1\n"
      "bc = periodic\nexact = telegraph\nerror_norm = mean\n{}",
      eps_key(eps), flux, order, meshes_line(), c_hyper_line(order, eps));
}

std::string burgers_cfg(int order, double eps) {
  return fmt::format(
      "kind = converge\nmodel = burgers\nC = 0.5\nepsilon = {}\nflux = lr\norder = {}\n{}"
      "x_min = -40\nx_max = 40\nT = 1\nbc = inflow\nexact = rw-shock\nrho_minus = 1\n"
      "rho_plus = 2\nerror_norm = mean\n{}",
      eps_key(eps), order, meshes_line(), c_hyper_line(order, eps));
}

// Hand-assembled first-order step on two periodic P0 cells of the heat model.
Eigen::VectorXd dense_first_order_step(const Eigen::Vector2d& rho, const Eigen::Vector2d& gp,
                                       const Eigen::Vector2d& gm, double dx, double dt,
                                       double eps) {
  Eigen::Matrix2d back, fwd;  // u_i - u_{i-1} and u_i - u_{i+1} on two cells
  back << 1, -1, -1, 1;
  fwd << 1, -1, -1, 1;
  const Eigen::Vector2d q = 0.5 * (gp - gm);
  const Eigen::Vector2d mean = 0.5 * (back * gp + fwd * gm);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(6, 6);
  Eigen::VectorXd b(6);
  A.block(0, 0, 2, 2) = dx * Eigen::Matrix2d::Identity();
  b.segment(0, 2) = dx * rho - dt * back * q;
  const double s = dt / (eps * eps);
  for (int v : {1, -1}) {
    const int G = v > 0 ? 2 : 4;
    const Eigen::Vector2d bv = (v > 0 ? back * gp : fwd * gm) - mean;
    A.block(G, G, 2, 2) = dx * (1.0 + s) * Eigen::Matrix2d::Identity();
    A.block(G, 0, 2, 2) = -s * v * fwd;
    b.segment(G, 2) = dx * (v > 0 ? gp : gm) - (dt / eps) * bv;
  }
  return A.fullPivLu().solve(b);
}

}  // namespace

int main() {
  const double paper_tele[3][3] = {
      {2.00e-3, 2.17e-3, 2.18e-3},  // DG1, eps = 0.5, 1e-2, 1e-6
      {4.46e-6, 1.85e-5, 1.85e-5},
      {1.44e-8, 6.09e-8, 6.09e-8},
  };
  const double eps_list[3] = {0.5, 1e-2, 1e-6};

  criterion(1, "tableau GSA and row sums", [](Check& c) {
    for (int p = 1; p <= 3; ++p) {
      const auto t = tableau(p);
      double worst = 0.0;
      for (int i = 0; i < t.s; ++i) {
        double ce = 0.0, ci = 0.0;
        for (int j = 0; j < t.s; ++j) {
          ce += t.at(i, j);
          ci += t.a(i, j);
        }
        worst = std::max({worst, std::abs(ce - t.explicit_c[i]), std::abs(ci - t.implicit_c[i])});
      }
      c.expect(check_gsa(t, 0.0), fmt::format("order {} exactly GSA", p));
      c.expect(worst <= 1e-15, fmt::format("order {} row-sum defect {:.2e} <= 1e-15", p, worst));
    }
  });

  criterion(2, "telegraph convergence, alternating flux", [&](Check& c) {
    for (int p = 1; p <= 3; ++p) {
      for (int e = 0; e < 3; ++e) {
        const auto s = converge(telegraph_cfg(p, eps_list[e], "lr"));
        const auto& last = s.rows.back();
        const double ref = paper_tele[p - 1][e];
        c.expect(std::abs(order_of(last) - p) <= 0.15,
                 fmt::format("DG{} eps={:g}: order {:.3f}, want {} +- 0.15", p, eps_list[e],
                             order_of(last), p));
        c.expect(last.l1_rho <= 2.0 * ref && last.l1_rho >= 0.5 * ref,
                 fmt::format("DG{} eps={:g}: L1(rho) N=160 {:.3e}, paper {:.2e}", p,
                             eps_list[e], last.l1_rho, ref));
      }
    }
  });

  criterion(3, "telegraph central flux parity", [&](Check& c) {
    const double want[3] = {1.0, 1.0, 3.0};
    for (int p = 1; p <= 3; ++p) {
      const auto s = converge(telegraph_cfg(p, 1e-6, "central"));
      const double o = order_of(s.rows.back());
      c.expect(std::abs(o - want[p - 1]) <= 0.2,
               fmt::format("DG{} central eps=1e-6: order {:.3f}, want {} +- 0.2 (L1 {:.3e})", p,
                           o, want[p - 1], s.rows.back().l1_rho));
    }
  });

  criterion(4, "Burgers smooth shock convergence", [&](Check& c) {
    for (int p = 1; p <= 3; ++p) {
      for (double eps : eps_list) {
        const auto s = converge(burgers_cfg(p, eps));
        const auto& last = s.rows.back();
        c.expect(std::abs(order_of(last) - p) <= 0.2,
                 fmt::format("DG{} eps={:g}: order {:.3f}, want {} +- 0.2 (L1 {:.3e})", p, eps,
                             order_of(last), p, last.l1_rho));
        if (p == 3 && eps == 1e-6) {
          c.expect(last.l1_rho <= 2.0 * 6.29e-7 && last.l1_rho >= 6.29e-7 / 2.0,
                   fmt::format("DG3 eps=1e-6 N=160: L1(rho) {:.3e}, paper 6.29e-07",
                               last.l1_rho));
        }
      }
    }
  });

  criterion(5, "advection-diffusion limit accuracy", [&](Check& c) {
    const auto s = converge(
        "kind = converge\nmodel = advdiff\nA = 1\nepsilon = 1e-6\nflux = lr\norder = 3\n" +
        meshes_line() + "T = 0.1\nbc = periodic\nexact = advdiff\nerror_norm = mean\n");
    const auto& last = s.rows.back();
    c.expect(last.l1_rho <= 2.0 * 1.50e-7 && last.l1_rho >= 1.50e-7 / 2.0,
             fmt::format("DG3 N=160: L1(rho) {:.3e}, paper 1.50e-07", last.l1_rho));
    c.expect(std::abs(order_of(last) - 3.0) <= 0.15,
             fmt::format("DG3 order {:.3f}, want 3 +- 0.15", order_of(last)));
  });

  criterion(6, "AP equivalence of kinetic and limiting solvers", [](Check& c) {
    struct Model {
      const char* name;
      const char* extra;
    };
    // The porous limit diffuses with 2 rho <= 6 here, so its explicit constant is scaled down.
    const Model models[] = {{"telegraph", ""},
                            {"porous", "K = 0.5\nm = -1\nbasis = nodal\n"},
                            {"advdiff", "A = 1\n"},
                            {"burgers", "C = 0.5\n"}};
    const double c_diff[] = {0.25, 0.01, 0.006};
    double worst = 0.0;
    for (const auto& m : models) {
      for (const char* flux : {"lr", "rl", "central"}) {
        for (int p = 1; p <= 3; ++p) {
          std::string text = fmt::format(
              "kind = ap-check\nmodel = {}\n{}epsilon = 1e-6\nflux = {}\norder = {}\n"
              "meshes = 40\nT = 0.1\nbc = periodic\ninitial = sine\namplitude = 1\n",
              m.name, m.extra, flux, p);
          if (std::string(m.name) == "porous") {
            text += fmt::format("c_diff = {:g}\n", c_diff[p - 1] / 6.0);
          }
          const auto rows = run_ap_check(parse_config_string(text));
          const double rel = rows[0].relative;
          worst = std::max(worst, rel);
          if (!(rel <= 1e-5)) {
            c.expect(false, fmt::format("{} {} DG{}: relative {:.3e}", m.name, flux, p, rel));
          }
        }
      }
    }
    c.expect(worst <= 1e-5,
             fmt::format("36 runs, worst relative L1 difference {:.3e} <= 1e-5", worst));
  });

  criterion(7, "conservation and constraint invariants", [](Check& c) {
    c.expect(max_mass_drift_seen <= 1e-12,
             fmt::format("periodic runs of criteria 2-5: max relative mass drift {:.3e}",
                         max_mass_drift_seen));
    c.expect(max_mean_g_seen <= 1e-11,
             fmt::format("runs of criteria 2-5: max |<g_h>| {:.3e}", max_mean_g_seen));
    std::mt19937 gen(11);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k <= 3; ++k) {
      auto space = make_space(Mesh1D(-1.0, 1.0, 17), k);
      DGField gp(space), gm(space);
      for (auto& x : gp.coeffs()) x = d(gen);
      for (auto& x : gm.coeffs()) x = d(gen);
      for (const auto& bc : {BoundaryCondition{Periodic{}},
                             BoundaryCondition{InflowOutflow{1.0, 0.3, 2.0, -0.7}}}) {
        const auto r = apply_bhv(gp, gm, bc);
        for (std::size_t i = 0; i < r.plus.coeffs().size(); ++i) {
          worst = std::max(worst, std::abs(velocity_average(r.plus.coeffs()[i],
                                                            r.minus.coeffs()[i])));
        }
      }
    }
    c.expect(worst <= 1e-14, fmt::format("apply_bhv velocity average max {:.3e}", worst));
  });

  criterion(8, "two-cell P0 step against a dense solve", [](Check& c) {
    for (double eps : {1.0, 0.1, 1e-6}) {
      auto space = make_space(Mesh1D(0.0, 2.0, 2), 0);
      KineticState s{DGField(space), DGField(space), DGField(space), eps};
      const Eigen::Vector2d rho(1.0, 3.0), gp(0.5, -0.2), gm(-0.5, 0.2);
      for (int i = 0; i < 2; ++i) {
        s.rho(i, 0) = rho(i);
        s.g_plus(i, 0) = gp(i);
        s.g_minus(i, 0) = gm(i);
      }
      const double dt = 0.3;
      const auto x = dense_first_order_step(rho, gp, gm, 1.0, dt, eps);
      const auto out = step(s, make_scheme(1, telegraph(), eps), tableau(1), dt);
      double worst = 0.0;
      for (int i = 0; i < 2; ++i) {
        worst = std::max({worst, std::abs(out.rho(i, 0) - x(i)),
                          std::abs(out.g_plus(i, 0) - x(2 + i)),
                          std::abs(out.g_minus(i, 0) - x(4 + i))});
      }
      c.expect(worst <= 1e-12, fmt::format("eps={:g}: max difference {:.3e}", eps, worst));
    }
  });

  criterion(9, "Barenblatt front and refinement", [](Check& c) {
    const double R = barenblatt_radius(3.0);
    for (const char* setup : {"order = 2\n", "order = 3\n"}) {
      const auto cfg = parse_config_string(
          std::string("kind = riemann\nmodel = porous\nK = 0.5\nm = -1\nepsilon = 1e-6\n"
                      "flux = central\nbasis = nodal\nmeshes = 24 48\nx_min = -6\nx_max = 6\n"
                      "T = 3\nbc = inflow\nexact = barenblatt\n") +
          setup);
      const auto res = run_riemann(cfg);
      const auto& coarse = res.summary[0];
      const auto& fine = res.summary[1];
      c.expect(std::abs(coarse.support_right - R) <= coarse.dx &&
                   std::abs(-coarse.support_left - R) <= coarse.dx,
               fmt::format("DG{} dx=0.5: support [{:.3f}, {:.3f}], R(3) = {:.4f}", cfg.order,
                           coarse.support_left, coarse.support_right, R));
      c.expect(fine.l1_exact_rho < coarse.l1_exact_rho,
               fmt::format("DG{}: L1 error {:.3e} (dx=0.5) -> {:.3e} (dx=0.25)", cfg.order,
                           coarse.l1_exact_rho, fine.l1_exact_rho));
    }
  });

  criterion(10, "Riemann self-convergence and oscillation control", [](Check& c) {
    // DG3 is stable with the central flux at eps = 0.7 only below c_hyper 0.1.
    auto riemann = [](double eps, const std::string& flux, int order, const std::string& meshes,
                      const std::string& extra) {
      return run_riemann(parse_config_string(fmt::format(
          "kind = riemann\nmodel = telegraph\nepsilon = {}\nflux = {}\norder = {}\n"
          "meshes = {}\nx_min = -1\nx_max = 1\nT = {}\nbc = inflow\ninitial = riemann\n"
          "rho_left = 2\nrho_right = 1\n{}{}",
          eps_key(eps), flux, order, meshes, eps < 1e-3 ? 0.04 : 0.25,
          eps < 1e-3 ? "" : "c_hyper = 0.05\n", extra)));
    };
    for (double eps : {1e-6, 0.7}) {
      for (const char* flux : {"lr", "central"}) {
        const auto res = riemann(eps, flux, 3, "20 40", "reference_N = 500\nreference_order = 3\n");
        const double d1 = res.summary[0].l1_ref_rho, d2 = res.summary[1].l1_ref_rho;
        c.expect(d1 / d2 >= 2.0,
                 fmt::format("eps={} {}: distance to dx=0.004 reference {:.3e} (dx=0.1) -> "
                             "{:.3e} (dx=0.05), ratio {:.2f} >= 2",
                             eps_key(eps), flux, d1, d2, d1 / d2));
      }
    }
    for (const char* flux : {"lr", "central"}) {
      double osc[2] = {0.0, 0.0};
      for (int p = 2; p <= 3; ++p) osc[p - 2] = riemann(0.7, flux, p, "40", "").summary[0].overshoot;
      c.expect(osc[1] <= osc[0],
               fmt::format("eps=0.7 {} dx=0.05: overshoot DG3 {:.3e} <= DG2 {:.3e}", flux, osc[1],
                           osc[0]));
    }
  });

  fmt::print("{} criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
