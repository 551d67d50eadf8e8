#include "wbp/harmonic.hpp"

#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "wbp/error.hpp"
#include "wbp/quadrature.hpp"

namespace wbp {

std::vector<double> normalized_gegenbauer_all(int n, int max_degree, double t) {
  if (n < 2) throw DomainError("normalized_gegenbauer: need n >= 2");
  const double lambda = 0.5 * (n - 2);
  std::vector<double> g(static_cast<std::size_t>(max_degree) + 1);
  g[0] = 1.0;
  if (max_degree >= 1) g[1] = t;
  for (int k = 2; k <= max_degree; ++k)
    g[k] = (2.0 * t * (k + lambda - 1.0) * g[k - 1] - (k - 1.0) * g[k - 2]) / (k + 2.0 * lambda - 1.0);
  return g;
}

double normalized_gegenbauer(int n, int k, double t) { return normalized_gegenbauer_all(n, k, t)[k]; }

std::vector<double> real_spherical_harmonics(int max_degree, const Direction& theta) {
  if (theta.dim() != 3) throw DomainError("real_spherical_harmonics: directions must lie on S^2");
  const int L = max_degree;
  const double t = std::clamp(theta[2], -1.0, 1.0);
  const double s = std::sqrt(std::max(0.0, 1.0 - t * t));
  const double phi = std::atan2(theta[1], theta[0]);
  std::vector<double> y(static_cast<std::size_t>((L + 1) * (L + 1)));

  // p[l][m] = sqrt((2l+1)/(4 pi) (l-m)!/(l+m)!) P_l^m(t), no Condon–Shortley phase.
  std::vector<double> pmm(L + 1);
  pmm[0] = std::sqrt(0.25 / std::numbers::pi);
  for (int m = 1; m <= L; ++m) pmm[m] = std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s * pmm[m - 1];

  for (int m = 0; m <= L; ++m) {
    const double c = m == 0 ? 1.0 : std::numbers::sqrt2 * std::cos(m * phi);
    const double sn = std::numbers::sqrt2 * std::sin(m * phi);
    double p_prev = 0.0;
    double p = pmm[m];
    for (int l = m; l <= L; ++l) {
      if (l == m + 1) {
        p_prev = p;
        p = std::sqrt(2.0 * m + 3.0) * t * pmm[m];
      } else if (l > m + 1) {
        const double ll = l;
        const double a = std::sqrt((4.0 * ll * ll - 1.0) / (ll * ll - m * m));
        const double b = std::sqrt(((ll - 1.0) * (ll - 1.0) - m * m) / (4.0 * (ll - 1.0) * (ll - 1.0) - 1.0));
        const double next = a * (t * p - b * p_prev);
        p_prev = p;
        p = next;
      }
      y[harmonic_index(l, m)] = c * p;
      if (m > 0) y[harmonic_index(l, -m)] = sn * p;
    }
  }
  return y;
}

double zonal_norm2(int n, int k) {
  const double a = 0.5 * (n - 3);
  const Rule1D rule = gauss_gegenbauer(k + 1, a);
  double s = 0.0;
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
    const double g = normalized_gegenbauer(n, k, rule.nodes[j]);
    s += rule.weights[j] * g * g;
  }
  return s / gegenbauer_weight_mass(a);
}

double HarmonicExpansion::profile(double t) const {
  if (basis != Basis::zonal) throw DomainError("HarmonicExpansion::profile: only zonal expansions have a profile");
  const auto g = normalized_gegenbauer_all(n, max_degree, t);
  double s = 0.0;
  for (int k = 0; k <= max_degree; ++k) s += coeffs[k] * g[k];
  return s;
}

double HarmonicExpansion::operator()(const Direction& theta) const { return synthesize(*this, theta); }

double HarmonicExpansion::energy(int lo, int hi, int parity) const {
  double s = 0.0;
  for (int l = std::max(lo, 0); l <= std::min(hi, max_degree); ++l) {
    if (parity >= 0 && l % 2 != parity) continue;
    if (basis == Basis::zonal) {
      s += coeffs[l] * coeffs[l] * zonal_norm2(n, l);
    } else {
      for (int m = -l; m <= l; ++m) s += coeffs[harmonic_index(l, m)] * coeffs[harmonic_index(l, m)];
    }
  }
  return basis == Basis::zonal ? s : s / (4.0 * std::numbers::pi);
}

double synthesize(const HarmonicExpansion& e, const Direction& theta) {
  if (theta.dim() != e.n) throw DomainError("synthesize: dimension mismatch");
  if (e.basis == Basis::zonal) return e.profile(std::clamp(theta.coords().dot(e.axis), -1.0, 1.0));
  const auto y = real_spherical_harmonics(e.max_degree, theta);
  double s = 0.0;
  for (std::size_t j = 0; j < y.size(); ++j) s += e.coeffs[j] * y[j];
  return s;
}

HarmonicExpansion analyze(const SphereFunction& f, int max_degree) {
  if (f.n != 3) throw DomainError("analyze: full harmonic analysis is only available on S^2");
  if (max_degree < 0 || max_degree > 64) throw DomainError("analyze: degree must lie in [0, 64]");
  const int L = max_degree;
  // Oversampled grid: exact on degree <= L, and aliasing of any higher-degree content is reduced.
  const Rule1D lat = gauss_legendre(2 * L + 2);
  const int nphi = 2 * L + 2;
  HarmonicExpansion e;
  e.n = 3;
  e.basis = Basis::full_s2;
  e.max_degree = L;
  e.coeffs.assign(static_cast<std::size_t>((L + 1) * (L + 1)), 0.0);
  e.axis = Vec::Unit(3, 2);
  for (std::size_t a = 0; a < lat.nodes.size(); ++a) {
    const double t = lat.nodes[a];
    const double s = std::sqrt(std::max(0.0, 1.0 - t * t));
    for (int b = 0; b < nphi; ++b) {
      const double phi = 2.0 * std::numbers::pi * b / nphi;
      Vec x(3);
      x << s * std::cos(phi), s * std::sin(phi), t;
      const Direction theta = Direction::from_vector(x);
      const double w = lat.weights[a] * 2.0 * std::numbers::pi / nphi * f(theta);
      const auto y = real_spherical_harmonics(L, theta);
      for (std::size_t j = 0; j < y.size(); ++j) e.coeffs[j] += w * y[j];
    }
  }
  return e;
}

HarmonicExpansion zonal_analyze(const std::function<double(double)>& profile, int n, int max_degree, int points) {
  if (n < 3) throw DomainError("zonal_analyze: need n >= 3");
  if (max_degree < 0) throw DomainError("zonal_analyze: degree must be nonnegative");
  const double a = 0.5 * (n - 3);
  const Rule1D rule = gauss_gegenbauer(points > 0 ? points : max_degree + 48, a);
  HarmonicExpansion e;
  e.n = n;
  e.basis = Basis::zonal;
  e.max_degree = max_degree;
  e.coeffs.assign(static_cast<std::size_t>(max_degree) + 1, 0.0);
  e.axis = Vec::Unit(n, n - 1);
  std::vector<double> norms(static_cast<std::size_t>(max_degree) + 1, 0.0);
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
    const auto g = normalized_gegenbauer_all(n, max_degree, rule.nodes[j]);
    const double fw = rule.weights[j] * profile(rule.nodes[j]);
    for (int k = 0; k <= max_degree; ++k) {
      e.coeffs[k] += fw * g[k];
      norms[k] += rule.weights[j] * g[k] * g[k];
    }
  }
  for (int k = 0; k <= max_degree; ++k) e.coeffs[k] /= norms[k];
  return e;
}

double funk_multiplier(int n, int k) {
  if (n < 3) throw DomainError("funk_multiplier: need n >= 3");
  if (k < 0 || k % 2 != 0) throw DomainError("funk_multiplier: degree must be even and nonnegative");
  // Average of G_k(<eta, e_n>) over unit eta orthogonal to e_1: <eta, e_n> has density
  // proportional to (1 - t^2)^{(n-4)/2} on [-1, 1]. The average equals lambda_k G_k(0).
  const double a = 0.5 * (n - 4);
  const Rule1D rule = gauss_gegenbauer(k / 2 + 2, a);
  double s = 0.0;
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) s += rule.weights[j] * normalized_gegenbauer(n, k, rule.nodes[j]);
  return s / gegenbauer_weight_mass(a) / normalized_gegenbauer(n, k, 0.0);
}

namespace {

void check_even(const HarmonicExpansion& g) {
  const double odd = g.odd_energy();
  if (odd > 1e-8) {
    std::ostringstream os;
    os << "odd-part energy " << odd << " exceeds 1e-8";
    throw ParityError(os.str());
  }
}

HarmonicExpansion divide_by_multipliers(const HarmonicExpansion& g, double cond_cap, double extra_factor,
                                        double& max_amp) {
  HarmonicExpansion out = g;
  max_amp = 0.0;
  for (int l = 0; l <= g.max_degree; ++l) {
    if (l % 2 == 1) {
      if (g.basis == Basis::zonal) out.coeffs[l] = 0.0;
      else
        for (int m = -l; m <= l; ++m) out.coeffs[harmonic_index(l, m)] = 0.0;
      continue;
    }
    const double lambda = extra_factor * funk_multiplier(g.n, l);
    const double amp = 1.0 / std::abs(lambda);
    if (amp > cond_cap) {
      std::ostringstream os;
      os << "degree " << l << " amplification " << amp << " exceeds cond_cap " << cond_cap;
      throw ConditioningError(os.str());
    }
    max_amp = std::max(max_amp, amp);
    if (g.basis == Basis::zonal) out.coeffs[l] /= lambda;
    else
      for (int m = -l; m <= l; ++m) out.coeffs[harmonic_index(l, m)] /= lambda;
  }
  return out;
}

}  // namespace

FunkInversion funk_invert(const HarmonicExpansion& g, double cond_cap) {
  check_even(g);
  FunkInversion out;
  out.phi = divide_by_multipliers(g, cond_cap, 1.0, out.max_amplification);
  return out;
}

FunkInversion funk_invert(const SphereFunction& g, int max_degree, double cond_cap) {
  if (g.n != 3) throw UnsupportedError("full-basis inversion needs n = 3; use the zonal form for n = 4, 5");
  const int wide = std::min(64, 2 * max_degree);
  const HarmonicExpansion full = analyze(g, std::max(wide, max_degree));
  check_even(full);
  HarmonicExpansion head = full;
  head.max_degree = max_degree;
  head.coeffs.resize(static_cast<std::size_t>((max_degree + 1) * (max_degree + 1)));
  FunkInversion out = funk_invert(head, cond_cap);
  out.tail_energy = full.energy(max_degree + 1, full.max_degree);
  return out;
}

FunkInversion funk_invert_zonal(const std::function<double(double)>& profile, int n, int max_degree, double cond_cap,
                                const Vec& axis) {
  const int wide = std::max(2 * max_degree, max_degree + 2);
  const HarmonicExpansion full = zonal_analyze(profile, n, wide);
  check_even(full);
  HarmonicExpansion head = full;
  head.max_degree = max_degree;
  head.coeffs.resize(static_cast<std::size_t>(max_degree) + 1);
  if (axis.size() > 0) {
    if (axis.size() != n) throw DomainError("funk_invert_zonal: axis dimension mismatch");
    head.axis = axis.normalized();
  }
  FunkInversion out = funk_invert(head, cond_cap);
  out.tail_energy = full.energy(max_degree + 1, full.max_degree);
  return out;
}

HarmonicExpansion hyperplane_radon_inverse(const HarmonicExpansion& g1, double cond_cap) {
  check_even(g1);
  double amp = 0.0;
  return divide_by_multipliers(g1, cond_cap, unit_sphere_area(g1.n - 1), amp);
}

GrassmannFunction as_hyperplane_function(const HarmonicExpansion& e) {
  return hyperplane_function(e.n, [e](const Direction& normal) { return synthesize(e, normal); });
}

SphereFunction as_sphere_function(const HarmonicExpansion& e) {
  SphereFunction f;
  f.n = e.n;
  f.eval = [e](const Direction& t) { return synthesize(e, t); };
  f.parity = e.odd_energy() == 0.0 ? Parity::even : Parity::general;
  return f;
}

void write_expansion_csv(std::ostream& out, const HarmonicExpansion& e) {
  out << "degree,order,coefficient\n";
  out.precision(17);
  for (int l = 0; l <= e.max_degree; ++l) {
    if (e.basis == Basis::zonal) {
      out << l << ",0," << e.coeffs[l] << "\n";
    } else {
      for (int m = -l; m <= l; ++m) out << l << "," << m << "," << e.coeffs[harmonic_index(l, m)] << "\n";
    }
  }
}

HarmonicExpansion read_expansion_csv(std::istream& in, int n, Basis basis) {
  HarmonicExpansion e;
  e.n = n;
  e.basis = basis;
  e.axis = Vec::Unit(n, n - 1);
  std::string line;
  if (!std::getline(in, line) || line.rfind("degree,order,coefficient", 0) != 0)
    throw DomainError("read_expansion_csv: missing header row");
  std::vector<std::tuple<int, int, double>> rows;
  int max_degree = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string a, b, c;
    if (!std::getline(row, a, ',') || !std::getline(row, b, ',') || !std::getline(row, c))
      throw DomainError("read_expansion_csv: malformed row '" + line + "'");
    const int l = std::stoi(a);
    const int m = std::stoi(b);
    if (l < 0 || std::abs(m) > l || (basis == Basis::zonal && m != 0))
      throw DomainError("read_expansion_csv: invalid (degree, order) in row '" + line + "'");
    rows.emplace_back(l, m, std::stod(c));
    max_degree = std::max(max_degree, l);
  }
  e.max_degree = max_degree;
  e.coeffs.assign(basis == Basis::zonal ? max_degree + 1 : (max_degree + 1) * (max_degree + 1), 0.0);
  for (const auto& [l, m, v] : rows) e.coeffs[basis == Basis::zonal ? l : harmonic_index(l, m)] = v;
  return e;
}

SphereFunction random_even_band_limited(int n, int max_degree, RandomSource& rng) {
  if (n == 3) {
    HarmonicExpansion e;
    e.n = 3;
    e.basis = Basis::full_s2;
    e.max_degree = max_degree;
    e.axis = Vec::Unit(3, 2);
    e.coeffs.assign(static_cast<std::size_t>((max_degree + 1) * (max_degree + 1)), 0.0);
    for (int l = 0; l <= max_degree; l += 2)
      for (int m = -l; m <= l; ++m) e.coeffs[static_cast<std::size_t>(harmonic_index(l, m))] = rng.normal() / (1.0 + l);
    SphereFunction f = as_sphere_function(e);
    f.parity = Parity::even;
    return f;
  }
  std::vector<std::pair<Vec, std::vector<double>>> terms;
  for (int t = 0; t < 2 * max_degree + 1; ++t) {
    std::vector<double> c(static_cast<std::size_t>(max_degree + 1), 0.0);
    for (int l = 0; l <= max_degree; l += 2) c[static_cast<std::size_t>(l)] = rng.normal() / (1.0 + l);
    terms.emplace_back(random_direction(rng, n).coords(), std::move(c));
  }
  return SphereFunction{n,
                        [terms, n, max_degree](const Direction& t) {
                          double s = 0.0;
                          for (const auto& [axis, c] : terms) {
                            const auto g = normalized_gegenbauer_all(n, max_degree, t.coords().dot(axis));
                            for (int l = 0; l <= max_degree; l += 2)
                              s += c[static_cast<std::size_t>(l)] * g[static_cast<std::size_t>(l)];
                          }
                          return s;
                        },
                        Parity::even};
}

}  // namespace wbp
