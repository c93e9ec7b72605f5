#pragma once

// Uniform 1-D meshes, element-local polynomial bases, quadrature and
// piecewise-polynomial fields.

#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace apdg {

class Mesh1D {
 public:
  Mesh1D(double x_min, double x_max, int n_elements);

  double x_min() const noexcept { return x_min_; }
  double x_max() const noexcept { return x_max_; }
  int n_elements() const noexcept { return n_; }
  int n_interfaces() const noexcept { return n_ + 1; }
  double dx() const noexcept { return dx_; }

  double element_left(int i) const noexcept { return x_min_ + i * dx_; }
  double element_right(int i) const noexcept { return x_min_ + (i + 1) * dx_; }
  double element_center(int i) const noexcept { return x_min_ + (i + 0.5) * dx_; }
  /// Coordinate of interface I, 0 <= I <= n_elements.
  double interface_coordinate(int interface) const noexcept;

  /// Element containing x; points outside the domain clamp to the end elements.
  int locate(double x) const noexcept;
  double to_reference(int element, double x) const noexcept;
  double to_physical(int element, double xi) const noexcept;

  bool operator==(const Mesh1D&) const = default;

 private:
  double x_min_;
  double x_max_;
  int n_;
  double dx_;
};

struct QuadratureRule {
  std::vector<double> points;   // reference coordinates in [-1, 1]
  std::vector<double> weights;
  int exact_degree = 0;

  std::size_t size() const noexcept { return points.size(); }
};

/// n-point Gauss-Legendre rule, exact for polynomials of degree 2n-1.
QuadratureRule gauss_legendre(int n_points);

double legendre(int degree, double xi);
double legendre_derivative(int degree, double xi);

enum class BasisKind { ModalLegendre, NodalGauss };

/// Reference-element basis of P^k with tabulated values at the rules used by
/// the weak forms.
///
/// Both kinds have a diagonal reference mass matrix: Legendre polynomials are
/// orthogonal, and Lagrange polynomials at the k+1 Gauss points are orthogonal
/// under the (k+1)-point rule, which integrates their products exactly.
///
/// Two rules are carried: the volume rule (k+2 Gauss points) used for every
/// linear weak-form integral, and the source rule used to collocate nonlinear
/// local terms. The source rule is the volume rule for the modal kind and the
/// k+1 nodes themselves for the nodal kind.
class Basis {
 public:
  Basis(int degree, BasisKind kind);

  int degree() const noexcept { return degree_; }
  int size() const noexcept { return degree_ + 1; }
  BasisKind kind() const noexcept { return kind_; }

  double value(int j, double xi) const;
  double derivative(int j, double xi) const;

  const QuadratureRule& volume_rule() const noexcept { return volume_rule_; }
  const QuadratureRule& source_rule() const noexcept { return source_rule_; }
  /// The k+1 Gauss points (interpolation nodes of the nodal kind).
  const std::vector<double>& nodes() const noexcept { return nodes_.points; }

  double left_trace(int j) const noexcept { return left_[j]; }
  double right_trace(int j) const noexcept { return right_[j]; }
  std::span<const double> left_traces() const noexcept { return left_; }
  std::span<const double> right_traces() const noexcept { return right_; }

  /// Diagonal of the reference mass matrix, int phi_j^2 dxi.
  std::span<const double> mass_diagonal() const noexcept { return mass_; }

  /// stiffness(i, j) = int phi_j * dphi_i/dxi dxi, row-major.
  double stiffness(int i, int j) const noexcept { return stiffness_[i * size() + j]; }
  std::span<const double> stiffness_matrix() const noexcept { return stiffness_; }

  /// Values phi_j at source-rule point p, stored [p * size() + j].
  std::span<const double> source_values() const noexcept { return source_values_; }
  /// Values phi_j at volume-rule point q, stored [q * size() + j].
  std::span<const double> volume_values() const noexcept { return volume_values_; }

 private:
  int degree_;
  BasisKind kind_;
  QuadratureRule nodes_;
  QuadratureRule volume_rule_;
  QuadratureRule source_rule_;
  std::vector<double> left_;
  std::vector<double> right_;
  std::vector<double> mass_;
  std::vector<double> stiffness_;
  std::vector<double> source_values_;
  std::vector<double> volume_values_;
};

/// Converts element-local Legendre coefficients to values at the k+1 Gauss
/// nodes, and back.
std::vector<double> modal_to_nodal(int degree, std::span<const double> modal);
std::vector<double> nodal_to_modal(int degree, std::span<const double> nodal);

struct Space {
  Mesh1D mesh;
  Basis basis;
};

using SpacePtr = std::shared_ptr<const Space>;

SpacePtr make_space(const Mesh1D& mesh, int degree, BasisKind kind = BasisKind::ModalLegendre);

/// Element-major coefficient storage shared by fields and weak-form residuals.
class CoefficientArray {
 public:
  explicit CoefficientArray(SpacePtr space);

  const Space& space() const noexcept { return *space_; }
  const SpacePtr& space_ptr() const noexcept { return space_; }
  int n_elements() const noexcept { return space_->mesh.n_elements(); }
  int n_local() const noexcept { return space_->basis.size(); }

  double& operator()(int element, int j) noexcept { return coeffs_[element * n_local() + j]; }
  double operator()(int element, int j) const noexcept {
    return coeffs_[element * n_local() + j];
  }

  std::span<double> coeffs() noexcept { return coeffs_; }
  std::span<const double> coeffs() const noexcept { return coeffs_; }
  std::span<double> element(int i) noexcept {
    return std::span<double>(coeffs_).subspan(i * n_local(), n_local());
  }
  std::span<const double> element(int i) const noexcept {
    return std::span<const double>(coeffs_).subspan(i * n_local(), n_local());
  }

  bool same_space(const CoefficientArray& other) const noexcept;

 protected:
  SpacePtr space_;
  std::vector<double> coeffs_;
};

class Residual;

/// A function of U_h^k: one polynomial of degree k per element.
class DGField : public CoefficientArray {
 public:
  explicit DGField(SpacePtr space) : CoefficientArray(std::move(space)) {}

  double evaluate(double x) const;
  double evaluate_reference(int element, double xi) const;
  double left_trace(int element) const;
  double right_trace(int element) const;
  /// Cell mean of element i.
  double mean(int element) const;

  Residual apply_mass() const;

  DGField& operator+=(const DGField& other);
  DGField& operator-=(const DGField& other);
  DGField& operator*=(double s);
};

/// Weak-form values tested against every basis function, before the mass
/// inverse is applied.
class Residual : public CoefficientArray {
 public:
  explicit Residual(SpacePtr space) : CoefficientArray(std::move(space)) {}

  DGField apply_mass_inverse() const;

  Residual& operator+=(const Residual& other);
  Residual& operator-=(const Residual& other);
  Residual& operator*=(double s);
};

DGField operator+(DGField a, const DGField& b);
DGField operator-(DGField a, const DGField& b);
DGField operator*(double s, DGField a);
Residual operator+(Residual a, const Residual& b);
Residual operator-(Residual a, const Residual& b);

/// Element mass diagonal on a physical element, (dx/2) * reference mass.
std::vector<double> element_mass_diagonal(const Space& space);

using PointFunction = std::function<double(double)>;

/// Element-wise L2 projection onto P^k using the volume rule. Elements that
/// contain one of the breakpoints are integrated piecewise so that functions
/// with jumps at the breakpoints are projected without aliasing.
DGField project_l2(const PointFunction& f, const SpacePtr& space,
                   std::span<const double> breakpoints = {});

/// Sum over elements of int |u - ref| dx with a (k+4)-point Gauss rule.
double l1_error(const DGField& u, const PointFunction& ref);

/// Integral of |u| with the same rule as l1_error.
double l1_norm(const DGField& u);

struct PeriodicWrap {};
struct GhostTraces {
  double left;   // u^- at the first interface
  double right;  // u^+ at the last interface
};
/// How the two domain-end interfaces obtain their outer trace.
using TraceClosure = std::variant<std::monostate, PeriodicWrap, GhostTraces>;

struct TracePair {
  double minus;
  double plus;

  double jump() const noexcept { return plus - minus; }
  double average() const noexcept { return 0.5 * (plus + minus); }
};

/// Left and right limits of u at interface I (0..n_elements). Throws
/// MissingGhostError for an end interface when the closure is empty.
TracePair trace_values(const DGField& u, int interface, const TraceClosure& closure = {});

}  // namespace apdg
