#include "wbp/weights.hpp"

#include <cmath>
#include <sstream>

#include "wbp/error.hpp"
#include "wbp/expression.hpp"
#include "wbp/quadrature.hpp"
#include "wbp/starbody.hpp"

namespace wbp {

std::string to_string(WeightKind kind) {
  switch (kind) {
    case WeightKind::power: return "power";
    case WeightKind::wgamma: return "wgamma";
    case WeightKind::product: return "product";
    case WeightKind::custom: return "custom";
  }
  return "custom";
}

Weight make_power_weight(int n, double alpha) {
  Weight w;
  w.n = n;
  w.kind = WeightKind::power;
  w.degree = alpha;
  if (alpha == 0.0) {
    w.eval = [](const Vec&) { return 1.0; };
  } else if (alpha == 1.0) {
    w.eval = [](const Vec& x) { return x.norm(); };
  } else {
    w.eval = [alpha](const Vec& x) { return std::pow(x.norm(), alpha); };
  }
  std::ostringstream os;
  os << "|x|^" << alpha;
  w.description = os.str();
  return w;
}

Weight make_wgamma(int n, int i, double gamma) {
  if (!(gamma > 0.0)) throw DomainError("make_wgamma: gamma must be positive");
  if (n < 2 || i < 1 || i > n - 1) throw DomainError("make_wgamma: need 1 <= i <= n-1");
  const double exponent = gamma + i - n;
  Weight w;
  w.n = n;
  w.kind = WeightKind::wgamma;
  w.degree = 0.0;
  w.smooth = exponent == 0.0 || (exponent >= 2.0 && std::fmod(exponent, 2.0) == 0.0);
  w.eval = [exponent](const Vec& x) {
    if (exponent == 0.0) return 1.0;
    const double r2 = x.squaredNorm();
    const double last = x[x.size() - 1];
    const double s2 = std::max(0.0, 1.0 - last * last / r2);
    return std::pow(s2, 0.5 * exponent);
  };
  std::ostringstream os;
  os << "(|x'|/|x|)^" << exponent;
  w.description = os.str();
  return w;
}

Weight make_product(const Weight& a, const Weight& b) {
  if (a.n != b.n) throw DomainError("make_product: weights live in different dimensions");
  Weight w;
  w.n = a.n;
  w.kind = WeightKind::product;
  if (a.degree && b.degree) w.degree = *a.degree + *b.degree;
  w.smooth = a.smooth && b.smooth;
  w.eval = [ea = a.eval, eb = b.eval](const Vec& x) { return ea(x) * eb(x); };
  w.description = "(" + a.description + ")*(" + b.description + ")";
  return w;
}

Weight make_custom(int n, const std::string& expression, std::optional<double> degree) {
  const Expression e = Expression::parse(expression, n);
  Weight w;
  w.n = n;
  w.kind = WeightKind::custom;
  w.degree = degree;
  w.smooth = false;
  w.eval = [e](const Vec& x) { return e(x); };
  w.description = expression;
  return w;
}

Weight scale_weight(const Weight& w, double factor) {
  if (!(factor > 0.0)) throw DomainError("scale_weight: factor must be positive");
  Weight s = w;
  s.eval = [e = w.eval, factor](const Vec& x) { return factor * e(x); };
  std::ostringstream os;
  os << factor << "*(" << w.description << ")";
  s.description = os.str();
  return s;
}

double radial_moment(const Weight& w, const Direction& theta, double p, double rho) {
  if (!(rho >= 0.0)) throw DomainError("radial_moment: radius must be nonnegative");
  if (rho == 0.0) return 0.0;
  if (w.degree) {
    const double e = p + 1.0 + *w.degree;
    if (!(e > 0.0)) throw IntegrabilityError("radial moment diverges at the origin");
    const double value = w(theta.coords()) * std::pow(rho, e) / e;
    if (!std::isfinite(value)) throw IntegrabilityError("radial moment is not finite");
    return value;
  }
  const Vec& t = theta.coords();
  return integrate_endpoint_singular([&](double r) { return std::pow(r, p) * w(r * t); }, 0.0, rho);
}

WeightPair::WeightPair(Weight u_, Weight v_, int n_, int i_) : u(std::move(u_)), v(std::move(v_)), n(n_), i(i_) {
  if (n < 2 || i < 1 || i > n - 1) throw DomainError("WeightPair: need 1 <= i <= n-1");
  if (u.n != n || v.n != n) throw DomainError("WeightPair: weight dimension differs from n");
}

namespace {

void fail_with(ConditionVerdict& c, std::string detail, const Direction& theta, double r1 = 0.0, double r2 = 0.0) {
  if (!c.pass) return;
  c.pass = false;
  c.detail = std::move(detail);
  c.witness_direction = theta;
  c.witness_r1 = r1;
  c.witness_r2 = r2;
}

std::vector<double> geometric_grid(int count, double lo, double hi) {
  std::vector<double> g(count);
  const double step = count > 1 ? std::log(hi / lo) / (count - 1) : 0.0;
  for (int k = 0; k < count; ++k) g[k] = lo * std::exp(step * k);
  return g;
}

}  // namespace

Admissibility check_conditions(const WeightPair& pair, int probe_dirs, int r_grid, const StarBody* body) {
  Admissibility out;
  out.probe_dirs = probe_dirs;
  out.r_grid = r_grid;
  const int n = pair.n;
  const int i = pair.i;
  const auto dirs = quasi_uniform_directions(n, static_cast<std::size_t>(probe_dirs));
  const auto base_grid = geometric_grid(r_grid, 1e-4, 1e2);

  // (a): local integrability of |x|^{i-n} u(x) near the origin.
  if (pair.u.degree) {
    if (!(*pair.u.degree > -i)) {
      std::ostringstream os;
      os << "homogeneity degree " << *pair.u.degree << " <= -i = " << -i << ": |x|^{i-n} u(x) not locally integrable";
      fail_with(out.a, os.str(), dirs.front());
    }
  }

  const std::size_t integrability_probes = std::min<std::size_t>(dirs.size(), 32);
  for (std::size_t d = 0; d < dirs.size(); ++d) {
    const Direction& theta = dirs[d];
    std::vector<double> grid = base_grid;
    if (body) {
      grid.push_back(body->radial(theta));
      std::sort(grid.begin(), grid.end());
    }
    double prev_ratio = 0.0;
    double prev_r = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double r = grid[k];
      const double u = pair.u.at(theta, r);
      const double u_neg = pair.u.at(-theta, r);
      const double v = pair.v.at(theta, r);
      const double v_neg = pair.v.at(-theta, r);
      if (!(u > 0.0) || !std::isfinite(u)) fail_with(out.a, "u is not positive and finite", theta, r);
      if (std::abs(u - u_neg) > 1e-12 * std::max(1.0, std::abs(u))) fail_with(out.a, "u is not even", theta, r);
      if (!(v >= 0.0) || !std::isfinite(v)) fail_with(out.b, "v is negative or not finite", theta, r);
      if (std::abs(v - v_neg) > 1e-12 * std::max(1.0, std::abs(v))) fail_with(out.b, "v is not even", theta, r);
      if (!(u > 0.0)) continue;
      const double ratio = std::pow(r, n - i) * v / u;
      if (k > 0 && std::isfinite(ratio) && std::isfinite(prev_ratio) &&
          ratio < prev_ratio - kMonotoneTolerance * std::max(1.0, std::abs(prev_ratio))) {
        std::ostringstream os;
        os << "r^{n-i} v/u decreases from " << prev_ratio << " at r=" << prev_r << " to " << ratio << " at r=" << r;
        fail_with(out.c, os.str(), theta, prev_r, r);
      }
      prev_ratio = ratio;
      prev_r = r;
    }
    if (!pair.u.degree && d < integrability_probes && out.a.pass) {
      try {
        radial_moment(pair.u, theta, i - 1, 1.0);
      } catch (const IntegrabilityError&) {
        fail_with(out.a, "integral of r^{i-1} u(r theta) over [0,1] is not finite", theta);
      }
    }
  }
  if (out.a.pass) out.a.detail = "probed";
  if (out.b.pass) out.b.detail = "probed (continuity in r not proven)";
  if (out.c.pass) out.c.detail = "probed";
  return out;
}

double b_function(const Weight& u, const StarBody& body, const Direction& theta, int i) {
  return radial_moment(u, theta, i - 1, body.radial(theta));
}

double comparison_function(const WeightPair& pair, const StarBody& body, const Direction& theta) {
  const double rho = body.radial(theta);
  const double u = pair.u.at(theta, rho);
  if (!(u > 0.0)) throw DivisionError("comparison_function: u vanishes at the boundary point");
  return std::pow(rho, pair.n - pair.i) * pair.v.at(theta, rho) / u;
}

}  // namespace wbp
