#include "wbp/sphere_geom.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <numbers>

#include "wbp/error.hpp"
#include "wbp/quadrature.hpp"

namespace wbp {

namespace {

constexpr double kUnitTol = 1e-12;

Mat gaussian_matrix(RandomSource& rng, int rows, int cols) {
  Mat g(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) g(r, c) = rng.normal();
  return g;
}

Mat householder(const Vec& v) {
  const int n = static_cast<int>(v.size());
  return Mat::Identity(n, n) - (2.0 / v.squaredNorm()) * (v * v.transpose());
}

}  // namespace

// ---------------------------------------------------------------- Direction

Direction::Direction(Vec coords) : coords_(std::move(coords)) {
  if (coords_.size() < 1) throw DomainError("Direction: empty coordinate vector");
  if (std::abs(coords_.norm() - 1.0) > kUnitTol) throw DomainError("Direction: coordinates are not a unit vector");
}

Direction Direction::from_vector(const Vec& v) {
  const double norm = v.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw DomainError("Direction: cannot normalize a zero or non-finite vector");
  return Direction(v / norm, Trusted{});
}

Direction Direction::unit(int n, int axis) {
  if (axis < 0 || axis >= n) throw DomainError("Direction::unit: axis out of range");
  return Direction(Vec::Unit(n, axis), Trusted{});
}

Direction Direction::operator-() const { return Direction(-coords_, Trusted{}); }

// ------------------------------------------------------------ SubspaceFrame

SubspaceFrame::SubspaceFrame(Mat columns) : columns_(std::move(columns)) {
  const auto n = columns_.rows();
  const auto i = columns_.cols();
  if (n < 2) throw DomainError("SubspaceFrame: ambient dimension must be at least 2");
  if (i < 1 || i > n - 1) throw DomainError("SubspaceFrame: subspace dimension must lie in [1, n-1]");
  const double defect = (columns_.transpose() * columns_ - Mat::Identity(i, i)).cwiseAbs().maxCoeff();
  if (defect > kUnitTol) throw DomainError("SubspaceFrame: columns are not orthonormal");
}

SubspaceFrame SubspaceFrame::span(const Mat& spanning) {
  Eigen::HouseholderQR<Mat> qr(spanning);
  const Mat r = qr.matrixQR().topRows(spanning.cols()).triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < spanning.cols(); ++k)
    if (std::abs(r(k, k)) < 1e-12 * std::max(1.0, spanning.norm()))
      throw DomainError("SubspaceFrame::span: spanning set is rank deficient");
  Mat q = qr.householderQ() * Mat::Identity(spanning.rows(), spanning.cols());
  return SubspaceFrame(std::move(q));
}

SubspaceFrame SubspaceFrame::coordinate(int n, const std::vector<int>& axes) {
  Mat cols = Mat::Zero(n, static_cast<Eigen::Index>(axes.size()));
  for (std::size_t k = 0; k < axes.size(); ++k) {
    if (axes[k] < 0 || axes[k] >= n) throw DomainError("SubspaceFrame::coordinate: axis out of range");
    cols(axes[k], static_cast<Eigen::Index>(k)) = 1.0;
  }
  return SubspaceFrame(std::move(cols));
}

SubspaceFrame SubspaceFrame::hyperplane(const Direction& normal) {
  const int n = normal.dim();
  // r e_n = normal, so the remaining columns of r span the complement.
  const Rotation r = rotation_to_pole(normal);
  Mat cols = r.matrix().leftCols(n - 1);
  return SubspaceFrame(std::move(cols));
}

bool SubspaceFrame::same_subspace(const SubspaceFrame& other, double tol) const {
  if (other.n() != n() || other.i() != i()) return false;
  return (projector() - other.projector()).cwiseAbs().maxCoeff() <= tol;
}

Direction SubspaceFrame::normal() const {
  if (i() != n() - 1) throw DomainError("SubspaceFrame::normal: only hyperplanes have a unit normal");
  const Mat complement = Mat::Identity(n(), n()) - projector();
  Eigen::Index best = 0;
  complement.colwise().squaredNorm().maxCoeff(&best);
  return Direction::from_vector(complement.col(best));
}

// ----------------------------------------------------------------- Rotation

Rotation::Rotation(Mat matrix) : matrix_(std::move(matrix)) {
  const auto n = matrix_.rows();
  if (n < 1 || matrix_.cols() != n) throw DomainError("Rotation: matrix must be square");
  const double defect = (matrix_.transpose() * matrix_ - Mat::Identity(n, n)).cwiseAbs().maxCoeff();
  if (defect > kUnitTol) throw DomainError("Rotation: matrix is not orthogonal");
  if (std::abs(matrix_.determinant() - 1.0) > 1e-10) throw DomainError("Rotation: determinant is not +1");
}

Direction Rotation::apply(const Direction& d) const { return Direction::from_vector(matrix_ * d.coords()); }

SubspaceFrame Rotation::apply(const SubspaceFrame& f) const { return SubspaceFrame(matrix_ * f.columns()); }

Rotation Rotation::operator*(const Rotation& other) const { return Rotation(matrix_ * other.matrix_); }

Rotation Rotation::inverse() const { return Rotation(matrix_.transpose()); }

// ------------------------------------------------------------ quadrature

double SphereQuadrature::total_weight() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

Estimate SphereQuadrature::integrate(const std::function<double(const Direction&)>& f) const {
  if (kind == QuadratureKind::monte_carlo) {
    MeanAccumulator acc;
    for (const auto& node : nodes) acc.add(f(node));
    return acc.estimate(total_weight());
  }
  Estimate e;
  for (std::size_t k = 0; k < nodes.size(); ++k) e.value += weights[k] * f(nodes[k]);
  e.samples = nodes.size();
  return e;
}

// ------------------------------------------------------------ operations

double unit_sphere_area(int n) {
  if (n < 1) throw DomainError("unit_sphere_area: dimension must be at least 1");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

Rotation rotation_to_pole(const Direction& theta) {
  const int n = theta.dim();
  const Vec& t = theta.coords();
  const Vec en = Vec::Unit(n, n - 1);
  if (n == 1) {
    if (t[0] < 0) throw DomainError("rotation_to_pole: SO(1) cannot map e_1 to -e_1");
    return Rotation::identity(1);
  }
  if (t[n - 1] < 0.0) {
    // H maps e_n to theta; the extra flip of e_1 restores det = +1 and fixes e_n.
    Mat m = householder(en - t);
    m.col(0) *= -1.0;
    return Rotation(std::move(m));
  }
  // H(e_n + theta) maps e_n to -theta; H(theta) then maps -theta to theta.
  const Mat first = householder(en + t);
  const Mat second = householder(t);
  return Rotation(second * first);
}

Direction random_direction(RandomSource& rng, int n) {
  Vec g(n);
  for (int k = 0; k < n; ++k) g[k] = rng.normal();
  return Direction::from_vector(g);
}

SubspaceFrame random_subspace(RandomSource& rng, int n, int i) {
  if (n < 2 || i < 1 || i > n - 1) throw DomainError("random_subspace: need 1 <= i <= n-1");
  Eigen::HouseholderQR<Mat> qr(gaussian_matrix(rng, n, i));
  Mat q = qr.householderQ() * Mat::Identity(n, i);
  return SubspaceFrame(std::move(q));
}

Rotation haar_rotation(RandomSource& rng, int n) {
  if (n < 1) throw DomainError("haar_rotation: dimension must be positive");
  if (n == 1) return Rotation::identity(1);
  Eigen::HouseholderQR<Mat> qr(gaussian_matrix(rng, n, n));
  Mat q = qr.householderQ();
  const Mat& r = qr.matrixQR();
  for (int k = 0; k < n; ++k)
    if (r(k, k) < 0.0) q.col(k) *= -1.0;
  if (q.determinant() < 0.0) q.col(n - 1) *= -1.0;
  return Rotation(std::move(q));
}

Rotation random_rotation_fixing_pole(RandomSource& rng, int n) {
  if (n < 2) throw DomainError("random_rotation_fixing_pole: need n >= 2");
  if (n == 2) return Rotation::identity(2);
  Mat m = Mat::Identity(n, n);
  m.topLeftCorner(n - 1, n - 1) = haar_rotation(rng, n - 1).matrix();
  return Rotation(std::move(m));
}

namespace {

// Product rule in coordinates: returns nodes as columns plus weights.
void product_rule(int m, int level, std::vector<Vec>& nodes, std::vector<double>& weights) {
  nodes.clear();
  weights.clear();
  if (m == 1) {
    nodes = {Vec::Constant(1, -1.0), Vec::Constant(1, 1.0)};
    weights = {1.0, 1.0};
    return;
  }
  if (m == 2) {
    const int count = 2 * level + 2;
    for (int k = 0; k < count; ++k) {
      const double phi = 2.0 * std::numbers::pi * k / count;
      Vec v(2);
      v << std::cos(phi), std::sin(phi);
      nodes.push_back(v);
      weights.push_back(2.0 * std::numbers::pi / count);
    }
    return;
  }
  std::vector<Vec> sub_nodes;
  std::vector<double> sub_weights;
  product_rule(m - 1, level, sub_nodes, sub_weights);
  const Rule1D axis = gauss_gegenbauer(level + 1, 0.5 * (m - 3));
  nodes.reserve(axis.nodes.size() * sub_nodes.size());
  for (std::size_t a = 0; a < axis.nodes.size(); ++a) {
    const double t = axis.nodes[a];
    const double s = std::sqrt(std::max(0.0, 1.0 - t * t));
    for (std::size_t b = 0; b < sub_nodes.size(); ++b) {
      Vec v(m);
      v.head(m - 1) = s * sub_nodes[b];
      v[m - 1] = t;
      nodes.push_back(std::move(v));
      weights.push_back(axis.weights[a] * sub_weights[b]);
    }
  }
}

}  // namespace

SphereQuadrature product_sphere_quadrature(int m, int level) {
  if (m < 1) throw DomainError("sphere quadrature: dimension must be positive");
  if (level < 0) throw DomainError("sphere quadrature: level must be nonnegative");
  if (m > 5) throw UnsupportedError("product-rule quadrature is only available on spheres S^{m-1} with m <= 5");
  std::vector<Vec> raw;
  SphereQuadrature q;
  product_rule(m, level, raw, q.weights);
  q.dim = m;
  q.level = level;
  q.kind = QuadratureKind::product_rule;
  q.nodes.reserve(raw.size());
  for (auto& v : raw) q.nodes.push_back(Direction::from_vector(v));
  return q;
}

SphereQuadrature monte_carlo_sphere_quadrature(int m, std::size_t samples, RandomSource& rng) {
  if (m < 1) throw DomainError("sphere quadrature: dimension must be positive");
  if (samples < 1) throw DomainError("sphere quadrature: Monte Carlo rule needs at least one node");
  if (m == 1) return product_sphere_quadrature(1, 0);
  SphereQuadrature q;
  q.dim = m;
  q.kind = QuadratureKind::monte_carlo;
  q.seed = rng.seed();
  q.level = static_cast<int>(samples);
  const double w = unit_sphere_area(m) / static_cast<double>(samples);
  q.nodes.reserve(samples);
  for (std::size_t k = 0; k < samples; ++k) q.nodes.push_back(random_direction(rng, m));
  q.weights.assign(samples, w);
  return q;
}

SphereQuadrature sphere_quadrature(int m, int size, QuadratureKind kind, RandomSource* rng) {
  if (kind == QuadratureKind::product_rule) return product_sphere_quadrature(m, size);
  if (rng == nullptr) throw DomainError("sphere_quadrature: Monte Carlo rules need a random source");
  return monte_carlo_sphere_quadrature(m, static_cast<std::size_t>(size), *rng);
}

SphereQuadrature subsphere_nodes(const SubspaceFrame& xi, const SphereQuadrature& q) {
  if (q.dim != xi.i()) throw DomainError("subsphere_nodes: quadrature dimension must equal the subspace dimension");
  SphereQuadrature out;
  out.dim = xi.n();
  out.kind = q.kind;
  out.seed = q.seed;
  out.level = q.level;
  out.weights = q.weights;
  out.nodes.reserve(q.nodes.size());
  for (const auto& node : q.nodes) out.nodes.push_back(Direction::from_vector(xi.columns() * node.coords()));
  return out;
}

double distance_to_subsphere(const Direction& theta, const SubspaceFrame& xi) {
  if (theta.dim() != xi.n()) throw DomainError("distance_to_subsphere: dimension mismatch");
  const Vec inside = xi.columns().transpose() * theta.coords();
  const Vec outside = theta.coords() - xi.columns() * inside;
  return std::atan2(outside.norm(), inside.norm());
}

double geodesic_distance(const Direction& a, const Direction& b) {
  if (a.dim() != b.dim()) throw DomainError("geodesic_distance: dimension mismatch");
  return std::atan2((a.coords() - b.coords() * a.coords().dot(b.coords())).norm(), a.coords().dot(b.coords()));
}

std::vector<Direction> quasi_uniform_directions(int n, std::size_t count) {
  static constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  if (n < 1 || n > static_cast<int>(std::size(kPrimes))) throw DomainError("quasi_uniform_directions: unsupported dimension");
  std::vector<Direction> out;
  out.reserve(count);
  for (std::size_t idx = 1; out.size() < count; ++idx) {
    Vec g(n);
    for (int k = 0; k < n; ++k) {
      // Radical inverse of idx in base p.
      const int p = kPrimes[k];
      double inv = 1.0 / p, f = inv, u = 0.0;
      for (std::size_t j = idx; j > 0; j /= p) {
        u += f * static_cast<double>(j % p);
        f *= inv;
      }
      g[k] = std::sqrt(2.0) * boost::math::erf_inv(2.0 * u - 1.0);
    }
    if (g.norm() > 1e-8) out.push_back(Direction::from_vector(g));
  }
  return out;
}

}  // namespace wbp
