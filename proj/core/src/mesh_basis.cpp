#include "apdg/mesh_basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "apdg/errors.hpp"

namespace apdg {

Mesh1D::Mesh1D(double x_min, double x_max, int n_elements)
    : x_min_(x_min), x_max_(x_max), n_(n_elements), dx_(0.0) {
  if (n_elements < 1) {
    throw ConfigError("Mesh1D: n_elements must be >= 1");
  }
  if (!(x_max > x_min) || !std::isfinite(x_min) || !std::isfinite(x_max)) {
    throw ConfigError("Mesh1D: require finite x_min < x_max");
  }
  dx_ = (x_max - x_min) / n_elements;
}

double Mesh1D::interface_coordinate(int interface) const noexcept {
  if (interface == n_) return x_max_;
  return x_min_ + interface * dx_;
}

int Mesh1D::locate(double x) const noexcept {
  const auto i = static_cast<int>(std::floor((x - x_min_) / dx_));
  return std::clamp(i, 0, n_ - 1);
}

double Mesh1D::to_reference(int element, double x) const noexcept {
  return 2.0 * (x - element_center(element)) / dx_;
}

double Mesh1D::to_physical(int element, double xi) const noexcept {
  return element_center(element) + 0.5 * dx_ * xi;
}

double legendre(int degree, double xi) {
  if (degree == 0) return 1.0;
  double p_prev = 1.0;
  double p = xi;
  for (int n = 1; n < degree; ++n) {
    const double p_next = ((2 * n + 1) * xi * p - n * p_prev) / (n + 1);
    p_prev = p;
    p = p_next;
  }
  return p;
}

double legendre_derivative(int degree, double xi) {
  // P'_{n+1} = P'_{n-1} + (2n+1) P_n
  if (degree == 0) return 0.0;
  double d_prev = 0.0;  // P'_0
  double d = 1.0;       // P'_1
  for (int n = 1; n < degree; ++n) {
    const double d_next = d_prev + (2 * n + 1) * legendre(n, xi);
    d_prev = d;
    d = d_next;
  }
  return d;
}

QuadratureRule gauss_legendre(int n_points) {
  if (n_points < 1) throw ConfigError("gauss_legendre: need at least one point");
  QuadratureRule rule;
  rule.points.resize(n_points);
  rule.weights.resize(n_points);
  rule.exact_degree = 2 * n_points - 1;
  for (int i = 0; i < n_points; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n_points + 0.5));
    for (int it = 0; it < 100; ++it) {
      const double dx = legendre(n_points, x) / legendre_derivative(n_points, x);
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre_derivative(n_points, x);
    rule.points[n_points - 1 - i] = x;
    rule.weights[n_points - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

Basis::Basis(int degree, BasisKind kind)
    : degree_(degree), kind_(kind), nodes_(), volume_rule_(), source_rule_() {
  if (degree < 0) throw ConfigError("Basis: degree must be >= 0");
  const int n = size();
  nodes_ = gauss_legendre(n);
  volume_rule_ = gauss_legendre(n + 1);
  source_rule_ = kind == BasisKind::ModalLegendre ? volume_rule_ : nodes_;

  left_.resize(n);
  right_.resize(n);
  mass_.resize(n);
  for (int j = 0; j < n; ++j) {
    left_[j] = value(j, -1.0);
    right_[j] = value(j, 1.0);
    mass_[j] = kind == BasisKind::ModalLegendre ? 2.0 / (2 * j + 1) : nodes_.weights[j];
  }

  stiffness_.assign(n * n, 0.0);
  for (std::size_t q = 0; q < volume_rule_.size(); ++q) {
    const double xi = volume_rule_.points[q];
    const double w = volume_rule_.weights[q];
    for (int i = 0; i < n; ++i) {
      const double di = derivative(i, xi);
      for (int j = 0; j < n; ++j) stiffness_[i * n + j] += w * di * value(j, xi);
    }
  }

  auto tabulate = [&](const QuadratureRule& rule) {
    std::vector<double> table(rule.size() * n);
    for (std::size_t p = 0; p < rule.size(); ++p) {
      for (int j = 0; j < n; ++j) table[p * n + j] = value(j, rule.points[p]);
    }
    return table;
  };
  volume_values_ = tabulate(volume_rule_);
  source_values_ = tabulate(source_rule_);
}

double Basis::value(int j, double xi) const {
  if (kind_ == BasisKind::ModalLegendre) return legendre(j, xi);
  const auto& x = nodes_.points;
  double v = 1.0;
  for (int m = 0; m < size(); ++m) {
    if (m != j) v *= (xi - x[m]) / (x[j] - x[m]);
  }
  return v;
}

double Basis::derivative(int j, double xi) const {
  if (kind_ == BasisKind::ModalLegendre) return legendre_derivative(j, xi);
  const auto& x = nodes_.points;
  double sum = 0.0;
  for (int l = 0; l < size(); ++l) {
    if (l == j) continue;
    double term = 1.0 / (x[j] - x[l]);
    for (int m = 0; m < size(); ++m) {
      if (m != j && m != l) term *= (xi - x[m]) / (x[j] - x[m]);
    }
    sum += term;
  }
  return sum;
}

std::vector<double> modal_to_nodal(int degree, std::span<const double> modal) {
  const auto nodes = gauss_legendre(degree + 1);
  std::vector<double> nodal(degree + 1, 0.0);
  for (int p = 0; p <= degree; ++p) {
    for (int j = 0; j <= degree; ++j) nodal[p] += modal[j] * legendre(j, nodes.points[p]);
  }
  return nodal;
}

std::vector<double> nodal_to_modal(int degree, std::span<const double> nodal) {
  // Discrete orthogonality of P_j under the (k+1)-point rule.
  const auto nodes = gauss_legendre(degree + 1);
  std::vector<double> modal(degree + 1, 0.0);
  for (int j = 0; j <= degree; ++j) {
    double s = 0.0;
    for (int p = 0; p <= degree; ++p) {
      s += nodes.weights[p] * nodal[p] * legendre(j, nodes.points[p]);
    }
    modal[j] = 0.5 * (2 * j + 1) * s;
  }
  return modal;
}

SpacePtr make_space(const Mesh1D& mesh, int degree, BasisKind kind) {
  return std::make_shared<const Space>(Space{mesh, Basis(degree, kind)});
}

CoefficientArray::CoefficientArray(SpacePtr space) : space_(std::move(space)) {
  if (!space_) throw ConfigError("CoefficientArray: null space");
  coeffs_.assign(static_cast<std::size_t>(n_elements()) * n_local(), 0.0);
}

bool CoefficientArray::same_space(const CoefficientArray& other) const noexcept {
  if (space_ == other.space_) return true;
  return space_->mesh == other.space_->mesh &&
         space_->basis.degree() == other.space_->basis.degree() &&
         space_->basis.kind() == other.space_->basis.kind();
}

double DGField::evaluate_reference(int element, double xi) const {
  const auto& basis = space_->basis;
  const auto c = this->element(element);
  double u = 0.0;
  for (int j = 0; j < n_local(); ++j) u += c[j] * basis.value(j, xi);
  return u;
}

double DGField::evaluate(double x) const {
  const auto& mesh = space_->mesh;
  const int i = mesh.locate(x);
  return evaluate_reference(i, mesh.to_reference(i, x));
}

double DGField::left_trace(int element) const {
  const auto c = this->element(element);
  const auto tr = space_->basis.left_traces();
  double u = 0.0;
  for (int j = 0; j < n_local(); ++j) u += c[j] * tr[j];
  return u;
}

double DGField::right_trace(int element) const {
  const auto c = this->element(element);
  const auto tr = space_->basis.right_traces();
  double u = 0.0;
  for (int j = 0; j < n_local(); ++j) u += c[j] * tr[j];
  return u;
}

double DGField::mean(int element) const {
  const auto c = this->element(element);
  const auto m = space_->basis.mass_diagonal();
  if (space_->basis.kind() == BasisKind::ModalLegendre) return c[0];
  double s = 0.0;
  for (int j = 0; j < n_local(); ++j) s += m[j] * c[j];
  return 0.5 * s;
}

std::vector<double> element_mass_diagonal(const Space& space) {
  const auto m = space.basis.mass_diagonal();
  std::vector<double> out(m.begin(), m.end());
  for (auto& v : out) v *= 0.5 * space.mesh.dx();
  return out;
}

Residual DGField::apply_mass() const {
  Residual r(space_);
  const auto m = element_mass_diagonal(*space_);
  const int n = n_local();
  for (std::size_t idx = 0; idx < coeffs_.size(); ++idx) r.coeffs()[idx] = m[idx % n] * coeffs_[idx];
  return r;
}

DGField Residual::apply_mass_inverse() const {
  DGField u(space_);
  const auto m = element_mass_diagonal(*space_);
  const int n = n_local();
  for (std::size_t idx = 0; idx < coeffs_.size(); ++idx) u.coeffs()[idx] = coeffs_[idx] / m[idx % n];
  return u;
}

namespace {

template <class T>
void check_same(const T& a, const T& b) {
  if (!a.same_space(b)) throw ConfigError("coefficient arrays live on different spaces");
}

}  // namespace

DGField& DGField::operator+=(const DGField& other) {
  check_same(*this, other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

DGField& DGField::operator-=(const DGField& other) {
  check_same(*this, other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

DGField& DGField::operator*=(double s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

Residual& Residual::operator+=(const Residual& other) {
  check_same(*this, other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

Residual& Residual::operator-=(const Residual& other) {
  check_same(*this, other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

Residual& Residual::operator*=(double s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

DGField operator+(DGField a, const DGField& b) { return a += b; }
DGField operator-(DGField a, const DGField& b) { return a -= b; }
DGField operator*(double s, DGField a) { return a *= s; }
Residual operator+(Residual a, const Residual& b) { return a += b; }
Residual operator-(Residual a, const Residual& b) { return a -= b; }

DGField project_l2(const PointFunction& f, const SpacePtr& space,
                   std::span<const double> breakpoints) {
  DGField u(space);
  const auto& mesh = space->mesh;
  const auto& basis = space->basis;
  const auto& rule = basis.volume_rule();
  const auto mass = basis.mass_diagonal();
  const int n = basis.size();

  std::vector<double> cuts;
  std::vector<double> acc(n);
  for (int i = 0; i < mesh.n_elements(); ++i) {
    const double a = mesh.element_left(i);
    const double b = mesh.element_right(i);
    cuts.assign({-1.0});
    for (double x : breakpoints) {
      if (x > a && x < b) cuts.push_back(mesh.to_reference(i, x));
    }
    cuts.push_back(1.0);
    std::sort(cuts.begin(), cuts.end());

    std::fill(acc.begin(), acc.end(), 0.0);
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
      const double lo = cuts[s];
      const double hi = cuts[s + 1];
      const double half = 0.5 * (hi - lo);
      for (std::size_t q = 0; q < rule.size(); ++q) {
        const double xi = lo + half * (rule.points[q] + 1.0);
        const double x = mesh.to_physical(i, xi);
        const double fx = f(x);
        if (!std::isfinite(fx)) {
          throw EvaluationError("project_l2: non-finite value at x = " + std::to_string(x));
        }
        const double w = rule.weights[q] * half * fx;
        for (int j = 0; j < n; ++j) acc[j] += w * basis.value(j, xi);
      }
    }
    for (int j = 0; j < n; ++j) u(i, j) = acc[j] / mass[j];
  }
  return u;
}

double l1_error(const DGField& u, const PointFunction& ref) {
  const auto& mesh = u.space().mesh;
  const auto& basis = u.space().basis;
  const auto rule = gauss_legendre(basis.degree() + 4);
  const int n = basis.size();

  std::vector<double> table(rule.size() * n);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    for (int j = 0; j < n; ++j) table[q * n + j] = basis.value(j, rule.points[q]);
  }

  double total = 0.0;
  for (int i = 0; i < mesh.n_elements(); ++i) {
    const auto c = u.element(i);
    double local = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      double uh = 0.0;
      for (int j = 0; j < n; ++j) uh += c[j] * table[q * n + j];
      const double r = ref(mesh.to_physical(i, rule.points[q]));
      if (!std::isfinite(r)) throw EvaluationError("l1_error: non-finite reference value");
      local += rule.weights[q] * std::abs(uh - r);
    }
    total += 0.5 * mesh.dx() * local;
  }
  return total;
}

double l1_norm(const DGField& u) {
  return l1_error(u, [](double) { return 0.0; });
}

TracePair trace_values(const DGField& u, int interface, const TraceClosure& closure) {
  const int n = u.n_elements();
  if (interface < 0 || interface > n) {
    throw ConfigError("trace_values: interface index out of range");
  }
  auto outer = [&](bool left_end) -> double {
    if (std::holds_alternative<PeriodicWrap>(closure)) {
      return left_end ? u.right_trace(n - 1) : u.left_trace(0);
    }
    if (const auto* g = std::get_if<GhostTraces>(&closure)) {
      return left_end ? g->left : g->right;
    }
    throw MissingGhostError("trace_values: boundary interface " + std::to_string(interface) +
                            " requested without a boundary closure");
  };
  TracePair t{};
  t.minus = interface > 0 ? u.right_trace(interface - 1) : outer(true);
  t.plus = interface < n ? u.left_trace(interface) : outer(false);
  return t;
}

}  // namespace apdg
