#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "apdg/dg_operators.hpp"
#include "apdg/errors.hpp"

using namespace apdg;

namespace {

constexpr double kPi = std::numbers::pi;

DGField random_field(const SpacePtr& space, std::mt19937& gen) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  DGField u(space);
  for (auto& c : u.coeffs()) c = d(gen);
  return u;
}

DGField cells(const SpacePtr& space, std::vector<double> values) {
  DGField u(space);
  for (std::size_t i = 0; i < values.size(); ++i) u(static_cast<int>(i), 0) = values[i];
  return u;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

const FluxChoice kFluxes[] = {AltLeftRight{}, AltRightLeft{}, Central{}, PorousSplit{0.3}};

}  // namespace

TEST(VelocityMoments, Examples) {
  EXPECT_DOUBLE_EQ(velocity_average(2.5, -2.5), 0.0);
  EXPECT_DOUBLE_EQ(v_moment(2.5, -2.5), 2.5);
  EXPECT_DOUBLE_EQ(velocity_average(3.0, 3.0), 3.0);
  EXPECT_DOUBLE_EQ(v_moment(3.0, 3.0), 0.0);
  EXPECT_DOUBLE_EQ(velocity_average(5.0, 1.0), 3.0);
  EXPECT_DOUBLE_EQ(v_moment(5.0, 1.0), 2.0);
}

TEST(ApplyAh, EvenGGivesZero) {
  std::mt19937 gen(1);
  auto space = make_space(Mesh1D(0.0, 1.0, 6), 2);
  auto g = random_field(space, gen);
  for (const auto& flux : kFluxes) {
    const auto r = apply_ah(g, g, flux, Periodic{});
    for (double c : r.coeffs()) EXPECT_EQ(c, 0.0);
  }
}

TEST(ApplyAh, PiecewiseConstantLeftRight) {
  auto space = make_space(Mesh1D(0.0, 1.0, 4), 0);
  const std::vector<double> q = {1.0, 4.0, -2.0, 0.5};
  auto gp = cells(space, q);
  auto gm = gp;
  gm *= -1.0;
  const auto r = apply_ah(gp, gm, AltLeftRight{}, Periodic{});
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(r(i, 0), q[i] - q[(i + 3) % 4], 1e-15);
}

TEST(ApplyAh, ConservativeForEveryFlux) {
  std::mt19937 gen(2);
  for (int k = 1; k <= 3; ++k) {
    auto space = make_space(Mesh1D(-1.0, 2.0, 9), k);
    auto gp = random_field(space, gen);
    auto gm = random_field(space, gen);
    for (const auto& flux : kFluxes) {
      const auto r = apply_ah(gp, gm, flux, Periodic{});
      // phi = 1 is the first modal function in every element.
      double total = 0.0;
      for (int i = 0; i < 9; ++i) total += r(i, 0);
      EXPECT_NEAR(total, 0.0, 1e-14);
    }
  }
}

TEST(ApplyAh, InflowGhostIsBoundaryFlux) {
  auto space = make_space(Mesh1D(0.0, 1.0, 3), 0);
  auto gp = cells(space, {1.0, 1.0, 1.0});
  auto gm = cells(space, {-1.0, -1.0, -1.0});
  const auto r = apply_ah(gp, gm, AltLeftRight{}, InflowOutflow{0.0, 3.0, 0.0, 1.0});
  // q = 1 inside, ghost q = 3 on the left enters element 0 through qhat = q^-.
  EXPECT_NEAR(r(0, 0), 1.0 - 3.0, 1e-15);
  EXPECT_NEAR(r(1, 0), 0.0, 1e-15);
  EXPECT_NEAR(r(2, 0), 0.0, 1e-15);
}

TEST(ApplyDh, ConstantsHaveZeroGradient) {
  for (int k = 0; k <= 3; ++k) {
    auto space = make_space(Mesh1D(0.0, 1.0, 5), k);
    auto c = project_l2([](double) { return 2.7; }, space);
    for (const auto& flux : {FluxChoice{AltLeftRight{}}, FluxChoice{AltRightLeft{}},
                             FluxChoice{Central{}}}) {
      const auto r = apply_dh(c, flux, Periodic{});
      for (double v : r.coeffs()) EXPECT_NEAR(v, 0.0, 1e-14);
    }
  }
}

// With [psi] = psi^+ - psi^-, the test function of element i jumps by +1 at its left
// interface and by -1 at its right one, so the residual is rhohat_{i-1/2} - rhohat_{i+1/2}.
TEST(ApplyDh, PiecewiseConstantHandComputation) {
  auto space = make_space(Mesh1D(0.0, 1.0, 5), 0);
  const std::vector<double> rho = {1.0, 3.0, -2.0, 0.5, 4.0};
  auto u = cells(space, rho);
  const auto lr = apply_dh(u, AltLeftRight{}, Periodic{});
  const auto rl = apply_dh(u, AltRightLeft{}, Periodic{});
  const auto ce = apply_dh(u, Central{}, Periodic{});
  for (int i = 0; i < 5; ++i) {
    const double left = rho[(i + 4) % 5], mid = rho[i], right = rho[(i + 1) % 5];
    EXPECT_NEAR(lr(i, 0), mid - right, 1e-15);
    EXPECT_NEAR(rl(i, 0), left - mid, 1e-15);
    EXPECT_NEAR(ce(i, 0), 0.5 * (left - right), 1e-15);
  }
}

TEST(ApplyDh, ConsistentWithTheDerivative) {
  // M^{-1} d_h(rho) approximates -rho_x at order k for the alternating fluxes.
  for (int k = 1; k <= 3; ++k) {
    double prev = 0.0;
    for (int N : {20, 40}) {
      auto space = make_space(Mesh1D(-kPi, kPi, N), k);
      auto rho = project_l2([](double x) { return std::sin(x); }, space);
      const auto d = apply_dh(rho, AltLeftRight{}, Periodic{}).apply_mass_inverse();
      const double e = l1_error(d, [](double x) { return -std::cos(x); });
      if (N == 40) EXPECT_GT(prev / e, std::pow(2.0, k) * 0.8);
      prev = e;
    }
  }
}

TEST(Operators, AdjointPairingOfAhAndDh) {
  std::mt19937 gen(3);
  for (int k = 0; k <= 3; ++k) {
    auto space = make_space(Mesh1D(-1.0, 1.0, 7), k);
    auto rho = random_field(space, gen);
    auto q = random_field(space, gen);
    for (const auto& flux : kFluxes) {
      if (k == 0 && std::holds_alternative<PorousSplit>(flux)) continue;
      DGOperators ops(space, flux, Periodic{});
      const auto ah = ops.apply_rh(q);
      const auto dh = ops.apply_dh(rho);
      // a_h(q, rho) = d_h(rho, q) for the paired fluxes.
      EXPECT_NEAR(dot(rho.coeffs(), ah.coeffs()), dot(q.coeffs(), dh.coeffs()), 1e-13);
    }
  }
}

TEST(Operators, FluxConsistencyForContinuousFields) {
  auto space = make_space(Mesh1D(0.0, 2.0, 4), 1);
  auto u = project_l2([](double x) { return 3.0 * x - 1.0; }, space);
  const BoundaryCondition bc = InflowOutflow{-1.0, 0.0, 5.0, 0.0};
  const auto ref = apply_dh(u, AltLeftRight{}, bc);
  for (const auto& flux : {FluxChoice{AltRightLeft{}}, FluxChoice{Central{}},
                           FluxChoice{PorousSplit{1.0}}}) {
    const auto r = apply_dh(u, flux, bc);
    for (std::size_t i = 0; i < r.coeffs().size(); ++i) {
      EXPECT_NEAR(r.coeffs()[i], ref.coeffs()[i], 1e-14);
    }
  }
}

TEST(PorousSplit, InterfaceAssignmentAndRejections) {
  auto space = make_space(Mesh1D(-2.0, 2.0, 4), 1);
  DGOperators ops(space, PorousSplit{0.0}, InflowOutflow{});
  // Interfaces at -2, -1 use right-left, 0, 1, 2 left-right.
  EXPECT_EQ(ops.weights(0).w_plus, 1.0);
  EXPECT_EQ(ops.weights(1).w_plus, 1.0);
  EXPECT_EQ(ops.weights(2).w_minus, 1.0);
  EXPECT_EQ(ops.weights(4).w_minus, 1.0);
  EXPECT_THROW(DGOperators(space, PorousSplit{5.0}, Periodic{}), ConfigError);
  auto p0 = make_space(Mesh1D(-2.0, 2.0, 4), 0);
  EXPECT_THROW(DGOperators(p0, PorousSplit{0.0}, Periodic{}), ConfigError);
  DGField g(space);
  EXPECT_THROW(apply_ah(g, g, PorousSplit{-3.0}, Periodic{}), ConfigError);
}

TEST(ApplyDhUpwind, Examples) {
  auto space = make_space(Mesh1D(0.0, 1.0, 4), 0);
  const double dx = 0.25;
  const std::vector<double> h = {1.0, 2.0, 4.0, -1.0};
  auto u = cells(space, h);
  const auto d = apply_Dh_upwind(u, u, Periodic{});
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(d.plus(i, 0), (h[i] - h[(i + 3) % 4]) / dx, 1e-13);
    EXPECT_NEAR(d.minus(i, 0), (h[i] - h[(i + 1) % 4]) / dx, 1e-13);
  }
  auto c = cells(space, {2.0, 2.0, 2.0, 2.0});
  const auto z = apply_Dh_upwind(c, c, Periodic{});
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(z.plus(i, 0), 0.0);
    EXPECT_EQ(z.minus(i, 0), 0.0);
  }
}

TEST(ApplyDhUpwind, ApproximatesTransport) {
  double prev_p = 0.0, prev_m = 0.0;
  for (int N : {40, 80}) {
    auto space = make_space(Mesh1D(-kPi, kPi, N), 2);
    auto g = project_l2([](double x) { return std::sin(x); }, space);
    const auto d = apply_Dh_upwind(g, g, Periodic{});
    const double ep = l1_error(d.plus, [](double x) { return std::cos(x); });
    const double em = l1_error(d.minus, [](double x) { return -std::cos(x); });
    EXPECT_LT(ep, 5e-3);
    EXPECT_LT(em, 5e-3);
    if (N == 80) {
      EXPECT_GT(prev_p / ep, 3.2);
      EXPECT_GT(prev_m / em, 3.2);
    }
    prev_p = ep;
    prev_m = em;
  }
}

TEST(ApplyBhv, VelocityAverageVanishes) {
  std::mt19937 gen(4);
  for (int k = 0; k <= 3; ++k) {
    auto space = make_space(Mesh1D(0.0, 3.0, 8), k);
    auto gp = random_field(space, gen);
    auto gm = random_field(space, gen);
    for (const BoundaryCondition& bc :
         {BoundaryCondition{Periodic{}}, BoundaryCondition{InflowOutflow{1.0, 2.0, 0.5, -1.0}}}) {
      const auto b = apply_bhv(gp, gm, bc);
      for (std::size_t i = 0; i < b.plus.coeffs().size(); ++i) {
        EXPECT_NEAR(velocity_average(b.plus.coeffs()[i], b.minus.coeffs()[i]), 0.0, 1e-14);
      }
    }
  }
}

TEST(ApplyBhv, PiecewiseConstantOddG) {
  auto space = make_space(Mesh1D(0.0, 1.0, 5), 0);
  const std::vector<double> h = {1.0, 2.0, 4.0, -1.0, 0.0};
  auto gp = cells(space, h);
  auto gm = gp;
  gm *= -1.0;
  const auto b = apply_bhv(gp, gm, Periodic{});
  for (int i = 0; i < 5; ++i) {
    // mass dx times (2 h_i - h_{i-1} - h_{i+1}) / (2 dx)
    EXPECT_NEAR(b.plus(i, 0), 0.5 * (2 * h[i] - h[(i + 4) % 5] - h[(i + 1) % 5]), 1e-14);
  }
  DGField zero(space);
  const auto z = apply_bhv(zero, zero, Periodic{});
  for (double c : z.plus.coeffs()) EXPECT_EQ(c, 0.0);
}

TEST(AssembleSources, Examples) {
  auto space = make_space(Mesh1D(0.0, 1.0, 3), 1);
  std::mt19937 gen(5);
  auto rho = project_l2([](double) { return 2.0; }, space);
  auto g = random_field(space, gen);
  auto gm = g;
  gm *= -1.0;
  KineticState s{rho, g, gm, 1.0};
  const auto heat = assemble_s1(Porous{1.0, 0.0}, s);
  const auto mg = g.apply_mass();
  for (std::size_t i = 0; i < mg.coeffs().size(); ++i) {
    EXPECT_NEAR(heat.plus.coeffs()[i], mg.coeffs()[i], 1e-15);
  }

  DGField zero(space);
  KineticState s0{rho, zero, zero, 1.0};
  const auto ad = assemble_s1(AdvDiff{1.0}, s0);
  const auto m2 = project_l2([](double) { return -2.0; }, space).apply_mass();
  for (std::size_t i = 0; i < m2.coeffs().size(); ++i) {
    EXPECT_NEAR(ad.plus.coeffs()[i], m2.coeffs()[i], 1e-15);
  }

  auto two = project_l2([](double) { return 2.0; }, space);
  auto mtwo = project_l2([](double) { return -2.0; }, space);
  KineticState sb{rho, two, mtwo, 1.0};
  const auto s2 = assemble_s2(Burgers{0.5}, sb);
  for (std::size_t i = 0; i < s2.plus.coeffs().size(); ++i) {
    EXPECT_NEAR(velocity_average(s2.plus.coeffs()[i], s2.minus.coeffs()[i]), 0.0, 1e-15);
  }
  EXPECT_NEAR(s2.plus(0, 0), 2.0 * space->mesh.dx(), 1e-14);
}

TEST(AssembleSources, NodalCollocationAtNodes) {
  auto space = make_space(Mesh1D(0.0, 1.0, 2), 2, BasisKind::NodalGauss);
  auto rho = project_l2([](double x) { return 1.0 + x; }, space);
  auto g = project_l2([](double x) { return 0.5 - x; }, space);
  auto gm = g;
  gm *= -1.0;
  KineticState s{rho, g, gm, 1.0};
  const Porous model{0.5, -1.0};
  const auto r = assemble_s1(model, s);
  const auto mass = element_mass_diagonal(*space);
  for (int i = 0; i < 2; ++i) {
    for (int p = 0; p < 3; ++p) {
      const double expect = mass[p] * 0.5 * g(i, p) / rho(i, p);
      EXPECT_NEAR(r.plus(i, p), expect, 1e-14);
    }
  }
}
