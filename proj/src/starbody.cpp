#include "wbp/starbody.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include "wbp/error.hpp"

namespace wbp {

std::string to_string(BodyKind kind) {
  switch (kind) {
    case BodyKind::ball: return "ball";
    case BodyKind::ellipsoid: return "ellipsoid";
    case BodyKind::lp_ball: return "lp-ball";
    case BodyKind::harmonic_perturbed: return "harmonic-perturbed";
    case BodyKind::revolution: return "revolution";
    case BodyKind::from_b: return "from-b";
    case BodyKind::custom: return "custom";
  }
  return "ball";
}

namespace {

const std::vector<Direction>& probe_directions(int n) {
  static thread_local std::vector<std::vector<Direction>> cache(8);
  auto& dirs = cache.at(static_cast<std::size_t>(n));
  if (dirs.empty()) dirs = quasi_uniform_directions(n, 1000);
  return dirs;
}

}  // namespace

StarBody::StarBody(int n, RadialFn rho, BodyKind kind, bool smooth, std::string description)
    : n_(n), rho_(std::move(rho)), kind_(kind), smooth_(smooth), description_(std::move(description)) {
  if (n < 2 || n > 7) throw DomainError("StarBody: dimension must lie in [2, 7]");
  for (const auto& theta : probe_directions(n)) {
    const double a = rho_(theta);
    const double b = rho_(-theta);
    if (!(a > 0.0) || !std::isfinite(a)) {
      std::ostringstream os;
      os << description_ << ": radial function " << a << " is not positive at a probe direction";
      throw InvalidParametersError(os.str());
    }
    if (std::abs(a - b) > 1e-12 * std::max(1.0, a)) throw InvalidParametersError(description_ + ": radial function is not even");
  }
}

double StarBody::radial(const Direction& theta) const {
  if (theta.dim() != n_) throw DomainError("StarBody::radial: direction dimension mismatch");
  const double r = rho_(theta);
  if (!(r > 0.0) || !std::isfinite(r)) throw InvalidBodyError(description_ + ": radial function is not positive");
  return r;
}

StarBody make_ball(int n, double radius) {
  if (!(radius > 0.0)) throw InvalidParametersError("ball: radius must be positive");
  std::ostringstream os;
  os << "ball(R=" << radius << ")";
  return StarBody(n, [radius](const Direction&) { return radius; }, BodyKind::ball, true, os.str());
}

StarBody make_ellipsoid(const std::vector<double>& semi_axes) {
  const int n = static_cast<int>(semi_axes.size());
  Vec inv2(n);
  std::ostringstream os;
  os << "ellipsoid(";
  for (int k = 0; k < n; ++k) {
    if (!(semi_axes[k] > 0.0)) throw InvalidParametersError("ellipsoid: semi-axes must be positive");
    inv2[k] = 1.0 / (semi_axes[k] * semi_axes[k]);
    os << (k ? "," : "") << semi_axes[k];
  }
  os << ")";
  return StarBody(
      n, [inv2](const Direction& t) { return 1.0 / std::sqrt(t.coords().cwiseAbs2().dot(inv2)); }, BodyKind::ellipsoid,
      true, os.str());
}

StarBody make_lp_ball(int n, double p) {
  if (!(p >= 1.0)) throw InvalidParametersError("lp-ball: p must be at least 1");
  std::ostringstream os;
  os << "lp-ball(p=" << p << ")";
  return StarBody(
      n,
      [p](const Direction& t) {
        double s = 0.0;
        for (int k = 0; k < t.dim(); ++k) s += std::pow(std::abs(t[k]), p);
        return std::pow(s, -1.0 / p);
      },
      BodyKind::lp_ball, p == 2.0 || (std::fmod(p, 2.0) == 0.0), os.str());
}

StarBody make_harmonic_perturbed(int n, std::function<double(const Direction&)> h, double m, std::string description) {
  if (!(m >= 1.0)) throw InvalidParametersError("harmonic-perturbed: exponent m must be at least 1");
  return StarBody(
      n,
      [h = std::move(h), m](const Direction& t) {
        const double base = 1.0 + h(t);
        return base > 0.0 ? std::pow(base, 1.0 / m) : -1.0;
      },
      BodyKind::harmonic_perturbed, true, std::move(description));
}

StarBody make_revolution(int n, std::function<double(double)> profile, std::string description) {
  return StarBody(
      n,
      [profile = std::move(profile)](const Direction& t) {
        const double c = std::clamp(t[t.dim() - 1], -1.0, 1.0);
        return profile(std::acos(c));
      },
      BodyKind::revolution, true, std::move(description));
}

StarBody make_from_b(const Weight& u, int i, std::function<double(const Direction&)> b, std::string description) {
  return StarBody(
      u.n, [u, i, b = std::move(b)](const Direction& t) { return invert_b(b(t), u, t, i); }, BodyKind::from_b,
      u.smooth, std::move(description));
}

Estimate weighted_volume(const StarBody& body, const Weight& v, const SphereQuadrature& q) {
  if (q.dim != body.n()) throw DomainError("weighted_volume: quadrature dimension mismatch");
  const int n = body.n();
  return q.integrate([&](const Direction& t) { return radial_moment(v, t, n - 1, body.radial(t)); });
}

Estimate weighted_volume_mc(const StarBody& body, const Weight& v, std::size_t samples, const RandomSource& rng) {
  const int n = body.n();
  return monte_carlo(
      samples, rng,
      [&](RandomSource& r) {
        const Direction t = random_direction(r, n);
        return radial_moment(v, t, n - 1, body.radial(t));
      },
      unit_sphere_area(n));
}

double invert_b(double b, const Weight& u, const Direction& theta, int i) {
  if (!(b > 0.0) || !std::isfinite(b)) throw DomainError("invert_b: target must be positive and finite");
  if (u.degree) {
    const double e = i + *u.degree;
    const double scale = u(theta.coords());
    if (!(e > 0.0)) throw IntegrabilityError("invert_b: r^{i-1} u is not integrable at the origin");
    if (!(scale > 0.0)) throw DomainError("invert_b: u vanishes along theta");
    const double rho = std::pow(e * b / scale, 1.0 / e);
    if (!(rho <= kRadiusCap)) throw DivergenceError("invert_b: solution exceeds the radius cap");
    return rho;
  }
  const auto moment = [&](double rho) { return radial_moment(u, theta, i - 1, rho); };
  const double u1 = u(theta.coords());
  double hi = u1 > 0.0 && std::isfinite(u1) ? std::pow(i * b / u1, 1.0 / i) : 1.0;
  double lo = 0.0;
  while (moment(hi) < b) {
    lo = hi;
    hi *= 2.0;
    if (hi > kRadiusCap) throw DivergenceError("invert_b: no bracket below the radius cap");
  }
  // Safeguarded Newton: derivative is hi^{i-1} u(hi theta).
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double fx = moment(x) - b;
    if (fx > 0.0) hi = x; else lo = x;
    if (hi - lo <= 1e-13 * hi) break;
    const double slope = std::pow(x, i - 1) * u.at(theta, x);
    double next = slope > 0.0 ? x - fx / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-13 * x) {
      x = next;
      break;
    }
    x = next;
  }
  return x;
}

ConvexityVerdict is_convex_sampled(const StarBody& body, std::size_t pairs, double tol, const RandomSource& rng) {
  const int n = body.n();
  ConvexityVerdict out;
  out.pairs = pairs;
  const std::size_t chunks = (pairs + kMonteCarloChunk - 1) / kMonteCarloChunk;
  struct Worst {
    double excess = -1.0;
    std::optional<Direction> a, b;
  };
  std::vector<Worst> worst(chunks);
  parallel_chunks(chunks, [&](std::size_t c) {
    RandomSource local = rng.derive(c);
    const std::size_t end = std::min(pairs, (c + 1) * kMonteCarloChunk);
    for (std::size_t s = c * kMonteCarloChunk; s < end; ++s) {
      const Direction a = random_direction(local, n);
      Direction b = a;
      if (s % 2 == 0) {
        b = random_direction(local, n);
      } else {
        const double sep = 1e-3 * std::pow(500.0, local.uniform());
        Vec tangent = random_direction(local, n).coords();
        tangent -= tangent.dot(a.coords()) * a.coords();
        if (tangent.norm() < 1e-12) continue;
        tangent.normalize();
        b = Direction::from_vector(std::cos(sep) * a.coords() + std::sin(sep) * tangent);
      }
      const Vec z = 0.5 * (body.radial(a) * a.coords() + body.radial(b) * b.coords());
      const double norm = z.norm();
      if (norm < 1e-14) continue;
      const double excess = norm / body.radial(Direction::from_vector(z)) - 1.0;
      if (excess > worst[c].excess) worst[c] = Worst{excess, a, b};
    }
  });
  Worst best;
  for (const auto& w : worst)
    if (w.excess > best.excess) best = w;
  out.excess = best.excess;
  if (best.excess > tol) {
    out.pass = false;
    out.witness_a = best.a;
    out.witness_b = best.b;
  }
  return out;
}

void write_radial_csv(std::ostream& out, const StarBody& body, const std::vector<Direction>& directions) {
  for (int k = 1; k <= body.n(); ++k) out << "x" << k << ",";
  out << "rho\n";
  out.precision(17);
  for (const auto& d : directions) {
    for (int k = 0; k < d.dim(); ++k) out << d[k] << ",";
    out << body.radial(d) << "\n";
  }
}

}  // namespace wbp
