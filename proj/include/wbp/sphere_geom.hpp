#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "wbp/estimate.hpp"
#include "wbp/random.hpp"

namespace wbp {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// A point of the unit sphere S^{n-1}.
class Direction {
 public:
  /// Throws DomainError unless | ||coords|| - 1 | <= 1e-12.
  explicit Direction(Vec coords);

  /// Normalizes a nonzero vector.
  static Direction from_vector(const Vec& v);

  /// Coordinate unit vector e_{axis+1} (axis is zero-based).
  static Direction unit(int n, int axis);

  const Vec& coords() const noexcept { return coords_; }
  int dim() const noexcept { return static_cast<int>(coords_.size()); }
  double operator[](int k) const { return coords_[k]; }
  Direction operator-() const;

 private:
  struct Trusted {};
  Direction(Vec coords, Trusted) : coords_(std::move(coords)) {}
  Vec coords_;
};

/// An element of G_{n,i} represented by an orthonormal n x i frame.
class SubspaceFrame {
 public:
  /// Throws DomainError unless n >= 2, 1 <= i <= n-1 and columns are orthonormal within 1e-12.
  explicit SubspaceFrame(Mat columns);

  /// Orthonormalizes the columns of a full-rank spanning set.
  static SubspaceFrame span(const Mat& spanning);
  /// span(e_{a+1} : a in axes), zero-based axes.
  static SubspaceFrame coordinate(int n, const std::vector<int>& axes);
  /// The hyperplane orthogonal to `normal`.
  static SubspaceFrame hyperplane(const Direction& normal);

  int n() const noexcept { return static_cast<int>(columns_.rows()); }
  int i() const noexcept { return static_cast<int>(columns_.cols()); }
  const Mat& columns() const noexcept { return columns_; }

  Mat projector() const { return columns_ * columns_.transpose(); }
  Vec project(const Vec& x) const { return columns_ * (columns_.transpose() * x); }
  bool same_subspace(const SubspaceFrame& other, double tol = 1e-10) const;

  /// Unit normal of a hyperplane (i = n-1), determined up to sign.
  Direction normal() const;

 private:
  Mat columns_;
};

/// An element of SO(n).
class Rotation {
 public:
  /// Throws DomainError unless ||R^T R - I||_max <= 1e-12 and |det R - 1| <= 1e-10.
  explicit Rotation(Mat matrix);
  static Rotation identity(int n) { return Rotation(Mat::Identity(n, n)); }

  const Mat& matrix() const noexcept { return matrix_; }
  int n() const noexcept { return static_cast<int>(matrix_.rows()); }

  Direction apply(const Direction& d) const;
  SubspaceFrame apply(const SubspaceFrame& f) const;
  Rotation operator*(const Rotation& other) const;
  Rotation inverse() const;

 private:
  Mat matrix_;
};

enum class QuadratureKind { product_rule, monte_carlo };

/// Weighted nodes on S^{dim-1}.
struct SphereQuadrature {
  int dim = 0;
  std::vector<Direction> nodes;
  std::vector<double> weights;
  QuadratureKind kind = QuadratureKind::product_rule;
  std::optional<std::uint64_t> seed;
  int level = 0;

  std::size_t size() const noexcept { return nodes.size(); }
  double total_weight() const;

  /// Integral of f; Monte Carlo rules attach a standard error.
  Estimate integrate(const std::function<double(const Direction&)>& f) const;
};

/// sigma_{n-1} = 2 pi^{n/2} / Gamma(n/2), the area of S^{n-1}.
double unit_sphere_area(int n);

/// A rotation r with r e_n = theta, built from at most two Householder reflections.
Rotation rotation_to_pole(const Direction& theta);

Direction random_direction(RandomSource& rng, int n);

/// Uniform (SO(n)-invariant) random i-dimensional subspace.
SubspaceFrame random_subspace(RandomSource& rng, int n, int i);

/// Haar-distributed element of SO(n).
Rotation haar_rotation(RandomSource& rng, int n);

/// Haar-distributed element of the stabilizer of e_n, i.e. SO(n-1) embedded in SO(n).
Rotation random_rotation_fixing_pole(RandomSource& rng, int n);

/// Product rule exact for polynomials of degree <= 2*level (dim <= 5).
SphereQuadrature product_sphere_quadrature(int m, int level);

/// `samples` uniform nodes with equal weights sigma_{m-1}/samples.
SphereQuadrature monte_carlo_sphere_quadrature(int m, std::size_t samples, RandomSource& rng);

/// Dispatches on kind; `size` is the level for product rules and the node count for Monte Carlo.
SphereQuadrature sphere_quadrature(int m, int size, QuadratureKind kind, RandomSource* rng = nullptr);

/// Maps a rule on S^{i-1} into the subsphere S^{n-1} ∩ xi.
SphereQuadrature subsphere_nodes(const SubspaceFrame& xi, const SphereQuadrature& q);

/// Geodesic distance from theta to the great subsphere S^{n-1} ∩ xi.
double distance_to_subsphere(const Direction& theta, const SubspaceFrame& xi);

double geodesic_distance(const Direction& a, const Direction& b);

/// Deterministic low-discrepancy directions (Halton points pushed through the normal quantile).
std::vector<Direction> quasi_uniform_directions(int n, std::size_t count);

}  // namespace wbp
