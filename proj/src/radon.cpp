#include "wbp/radon.hpp"

#include <cmath>

#include "wbp/error.hpp"

namespace wbp {

GrassmannFunction hyperplane_function(int n, std::function<double(const Direction&)> of_normal) {
  GrassmannFunction phi;
  phi.n = n;
  phi.i = n - 1;
  phi.eval = [f = std::move(of_normal)](const SubspaceFrame& xi) { return f(xi.normal()); };
  return phi;
}

void check_parity(const SphereFunction& f, std::size_t probes, double tol) {
  if (f.parity == Parity::general) return;
  const double sign = f.parity == Parity::even ? 1.0 : -1.0;
  for (const auto& t : quasi_uniform_directions(f.n, probes)) {
    const double a = f(t);
    const double b = f(-t);
    if (std::abs(a - sign * b) > tol * std::max(1.0, std::abs(a))) throw ParityError("function violates its declared parity");
  }
}

void DiscreteMeasure::add(SubspaceFrame xi, double mass) {
  if (!(mass >= 0.0) || !std::isfinite(mass)) throw DomainError("DiscreteMeasure: masses must be nonnegative and finite");
  if (!atoms_.empty() && (atoms_.front().first.n() != xi.n() || atoms_.front().first.i() != xi.i()))
    throw DomainError("DiscreteMeasure: atoms must share (n, i)");
  atoms_.emplace_back(std::move(xi), mass);
}

double DiscreteMeasure::total_mass() const {
  double s = 0.0;
  for (const auto& a : atoms_) s += a.second;
  return s;
}

SubspaceFrame reference_subspace(int n, int i) {
  std::vector<int> axes;
  for (int k = n - i; k < n; ++k) axes.push_back(k);
  return SubspaceFrame::coordinate(n, axes);
}

double radon(const SphereFunction& f, const SubspaceFrame& xi, const SphereQuadrature& q) {
  if (f.n != xi.n()) throw DomainError("radon: function and subspace dimensions differ");
  if (q.dim != xi.i()) throw DomainError("radon: quadrature must live on S^{i-1}");
  const Mat& F = xi.columns();
  double s = 0.0;
  for (std::size_t k = 0; k < q.nodes.size(); ++k) s += q.weights[k] * f(Direction::from_vector(F * q.nodes[k].coords()));
  return s;
}

SubspaceFrame random_subspace_through(const Direction& theta, int i, RandomSource& rng) {
  const int n = theta.dim();
  const Mat r = rotation_to_pole(theta).matrix() * random_rotation_fixing_pole(rng, n).matrix();
  return SubspaceFrame(r.rightCols(i));
}

Estimate dual_radon(const GrassmannFunction& phi, const Direction& theta, std::size_t rotations,
                    const RandomSource& rng) {
  if (rotations < 1) throw DomainError("dual_radon: need at least one rotation");
  if (phi.n != theta.dim()) throw DomainError("dual_radon: dimension mismatch");
  const Mat pole = rotation_to_pole(theta).matrix();
  const int n = phi.n;
  const int i = phi.i;
  return monte_carlo(rotations, rng, [&](RandomSource& r) {
    const Mat m = pole * random_rotation_fixing_pole(r, n).matrix();
    return phi(SubspaceFrame(m.rightCols(i)));
  });
}

double measure_pairing(const DiscreteMeasure& mu, const SphereFunction& f, const SphereQuadrature& q) {
  double s = 0.0;
  int i = 0;
  for (const auto& [xi, mass] : mu.atoms()) {
    s += mass * radon(f, xi, q);
    i = xi.i();
  }
  if (mu.atoms().empty()) return 0.0;
  return unit_sphere_area(f.n) / unit_sphere_area(i) * s;
}

Estimate grassmann_mean(const GrassmannFunction& phi, std::size_t samples, const RandomSource& rng) {
  return monte_carlo(samples, rng, [&](RandomSource& r) { return phi(random_subspace(r, phi.n, phi.i)); });
}

DualityReport duality_residual(const SphereFunction& f, const GrassmannFunction& phi, const SphereQuadrature& q,
                               std::size_t samples, const RandomSource& rng) {
  if (f.n != phi.n) throw DomainError("duality_residual: dimension mismatch");
  const int n = phi.n;
  const int i = phi.i;
  DualityReport out;
  const double inv_area_i = 1.0 / unit_sphere_area(i);
  out.lhs = monte_carlo(
      samples, rng.derive(0),
      [&](RandomSource& r) {
        const SubspaceFrame xi = random_subspace(r, n, i);
        return radon(f, xi, q) * phi(xi);
      },
      inv_area_i);
  out.rhs = monte_carlo(samples, rng.derive(1), [&](RandomSource& r) {
    const Direction t = random_direction(r, n);
    return f(t) * phi(random_subspace_through(t, i, r));
  });
  out.residual = std::abs(out.lhs.value - out.rhs.value);
  out.combined_error = combine_errors(out.lhs.std_error, out.rhs.std_error);
  out.verdict = classify_le(3.0 * out.combined_error - out.residual, 0.0, 1e-12);
  return out;
}

GrassmannFunction random_smooth_grassmann(int n, int i, RandomSource& rng) {
  Mat a(n, n), b(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      a(r, c) = rng.normal();
      b(r, c) = rng.normal();
    }
  a = 0.5 * (a + a.transpose()).eval();
  b = 0.5 * (b + b.transpose()).eval();
  const double c0 = 1.0 + rng.uniform();
  const double c1 = 0.3 * rng.normal();
  GrassmannFunction phi;
  phi.n = n;
  phi.i = i;
  phi.eval = [a, b, c0, c1](const SubspaceFrame& xi) {
    const Mat& f = xi.columns();
    const double ta = (f.transpose() * a * f).trace();
    const double tb = (f.transpose() * b * f).trace();
    return c0 + ta + c1 * tb * tb;
  };
  return phi;
}

}  // namespace wbp
