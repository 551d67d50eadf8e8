#include "wbp/bp_engine.hpp"

#include <array>
#include <atomic>
#include <cmath>
#include <numbers>
#include <sstream>

#include "wbp/error.hpp"
#include "wbp/quadrature.hpp"

namespace wbp {

namespace {

std::vector<SubspaceFrame> sample_subspaces(int n, int i, int count, const RandomSource& rng) {
  RandomSource r = rng;
  std::vector<SubspaceFrame> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) out.push_back(random_subspace(r, n, i));
  return out;
}

int coarse_level(int level) { return std::max(1, level - 2); }

/// Integrals over S^{n-1} of K jointly evaluated channels, per the volume rule.
template <std::size_t K, class F>
std::array<Estimate, K> sphere_integrals(int n, const VolumeRule& rule, const RandomSource& rng, F&& f) {
  std::array<Estimate, K> out{};
  if (rule.kind == QuadratureKind::monte_carlo) {
    std::array<double, K> scale;
    scale.fill(unit_sphere_area(n));
    return monte_carlo<K>(
        rule.samples, rng, [&](RandomSource& r) { return f(random_direction(r, n)); }, scale);
  }
  const auto sum = [&](int level) {
    const auto q = product_sphere_quadrature(n, level);
    std::array<double, K> s{};
    for (std::size_t j = 0; j < q.nodes.size(); ++j) {
      const auto v = f(q.nodes[j]);
      for (std::size_t k = 0; k < K; ++k) s[k] += q.weights[j] * v[k];
    }
    return std::pair{s, q.size()};
  };
  const auto [fine, count] = sum(rule.level);
  const auto coarse = sum(coarse_level(rule.level)).first;
  for (std::size_t k = 0; k < K; ++k) {
    out[k].value = fine[k];
    out[k].std_error = std::abs(fine[k] - coarse[k]);
    out[k].samples = count;
    out[k].error_kind = Estimate::ErrorKind::quadrature_refinement;
  }
  return out;
}

struct SectionPair {
  SectionSample sample;
  Estimate margin;  // V_u(L∩xi) - V_u(K∩xi), refinement error of the difference itself
};

SectionPair compare_sections(const StarBody& k, const StarBody& l, const Weight& u, const SubspaceFrame& xi,
                             const SphereQuadrature& fine, const SphereQuadrature& coarse) {
  const double kf = section_volume(k, u, xi, fine), kc = section_volume(k, u, xi, coarse);
  const double lf = section_volume(l, u, xi, fine), lc = section_volume(l, u, xi, coarse);
  const auto make = [&](double value, double err) {
    Estimate e;
    e.value = value;
    e.std_error = err;
    e.samples = fine.size();
    e.error_kind = Estimate::ErrorKind::quadrature_refinement;
    return e;
  };
  SectionPair out;
  out.sample.frame = xi.columns();
  out.sample.k = make(kf, std::abs(kf - kc));
  out.sample.l = make(lf, std::abs(lf - lc));
  out.margin = make(lf - kf, std::abs((lf - kf) - (lc - kc)));
  return out;
}

Verdict aggregate(const std::vector<Verdict>& vs) {
  bool any_indeterminate = false;
  for (Verdict v : vs) {
    if (v == Verdict::fails) return Verdict::fails;
    if (v == Verdict::indeterminate) any_indeterminate = true;
  }
  return any_indeterminate ? Verdict::indeterminate : Verdict::holds;
}

// Residuals inside 3 standard errors hold, beyond 6 fail, in between stay open.
Verdict residual_verdict(double residual, double se, double tol) {
  if (residual <= 3 * se + tol) return Verdict::holds;
  if (residual > 6 * se + tol) return Verdict::fails;
  return Verdict::indeterminate;
}

double roundoff(double scale) { return 1e-10 * std::max(1.0, std::abs(scale)); }

Estimate sum_estimates(const Estimate& a, const Estimate& b, double b_factor) {
  Estimate e;
  e.value = a.value + b_factor * b.value;
  e.std_error = combine_errors(a.std_error, b_factor * b.std_error);
  e.samples = std::max(a.samples, b.samples);
  e.error_kind = Estimate::ErrorKind::monte_carlo;
  return e;
}

}  // namespace

double section_volume(const StarBody& body, const Weight& u, const SubspaceFrame& xi, const SphereQuadrature& q) {
  if (body.n() != xi.n()) throw DomainError("section_volume: body and subspace dimensions differ");
  const int i = xi.i();
  const SphereFunction b{body.n(), [&](const Direction& t) { return b_function(u, body, t, i); }, Parity::even};
  return radon(b, xi, q);
}

// ------------------------------------------------------------------ implication

ImplicationReport check_implication(const StarBody& k, const StarBody& l, const WeightPair& pair,
                                    const ImplicationOptions& options, const RandomSource& rng) {
  const int n = pair.n;
  const int i = pair.i;
  if (k.n() != n || l.n() != n) throw DomainError("check_implication: body dimension differs from n");
  ImplicationReport rep;
  rep.n = n;
  rep.i = i;
  rep.seed = rng.seed();
  rep.section_level = options.section_level;
  rep.admissibility = check_conditions(pair, options.probe_dirs, 200);
  if (!rep.admissibility.all_pass()) rep.notes.push_back("weights fail conditions (a)-(c): only diagnostics reported");
  if (!k.smooth() || !l.smooth()) rep.notes.push_back("body smoothness is by constructor kind only; curvature is not checked");

  // Sections.
  const auto fine = product_sphere_quadrature(i, options.section_level);
  const auto coarse = product_sphere_quadrature(i, coarse_level(options.section_level));
  const auto subspaces = sample_subspaces(n, i, options.n_xi, rng.derive(0));
  std::vector<Verdict> verdicts;
  rep.min_section_margin = std::numeric_limits<double>::infinity();
  for (const auto& xi : subspaces) {
    auto [s, m] = compare_sections(k, l, pair.u, xi, fine, coarse);
    const double margin = m.value;
    s.verdict = classify_le(margin, m.std_error, roundoff(s.l.value));
    rep.min_section_margin = std::min(rep.min_section_margin, margin);
    verdicts.push_back(s.verdict);
    rep.sections.push_back(std::move(s));
  }
  rep.hypothesis = aggregate(verdicts);

  // Volumes and proof diagnostics.
  std::atomic<bool> have_ak{true};
  const auto channels = [&](const Direction& t) {
    const double rk = k.radial(t);
    const double rl = l.radial(t);
    const double fk = radial_moment(pair.v, t, n - 1, rk);
    const double fl = radial_moment(pair.v, t, n - 1, rl);
    const double bk = radial_moment(pair.u, t, i - 1, rk);
    const double bl = radial_moment(pair.u, t, i - 1, rl);
    double ak = 0.0;
    if (have_ak) {
      try {
        ak = comparison_function(pair, k, t);
      } catch (const DivisionError&) {
        have_ak = false;
      }
    }
    return std::array<double, 7>{fk, fl, fl - fk, ak * bk, ak * bl, ak * (bl - bk), (fl - ak * bl) - (fk - ak * bk)};
  };
  const auto est = sphere_integrals<7>(n, options.volume, rng.derive(1), channels);
  rep.volumes.k = est[0];
  rep.volumes.l = est[1];
  rep.volumes.difference = est[2];
  rep.volumes.verdict = classify_le(est[2].value, est[2].std_error, roundoff(est[1].value));
  rep.conclusion = rep.admissibility.all_pass() ? rep.volumes.verdict : Verdict::not_applicable;
  rep.reversal = rep.hypothesis == Verdict::holds && rep.conclusion == Verdict::fails;

  if (have_ak) {
    rep.int_ak_bk = est[3];
    rep.int_ak_bl = est[4];
    if (options.representation_verified && rep.hypothesis == Verdict::holds)
      rep.eeq1 = classify_le(est[5].value, est[5].std_error, roundoff(est[4].value));
    rep.eeq2_margin = est[6];
    rep.eeq2 = classify_le(est[6].value, est[6].std_error, roundoff(est[1].value));
    rep.eeq2_min_pointwise = std::numeric_limits<double>::infinity();
    for (const auto& t : quasi_uniform_directions(n, 2000)) rep.eeq2_min_pointwise = std::min(rep.eeq2_min_pointwise, channels(t)[6]);
  } else {
    rep.eeq2 = Verdict::not_applicable;
    rep.notes.push_back("u vanishes on the boundary of K: comparison function undefined, eeq diagnostics skipped");
  }
  if (rep.reversal) rep.notes.push_back("reversal: sections of K are dominated but V_v(K) > V_v(L)");
  return rep;
}

// --------------------------------------------------------------- representation

std::vector<SphereFunction> default_test_functions(int n, int count) {
  std::vector<SphereFunction> out;
  const auto axes = quasi_uniform_directions(n, static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j) {
    const int degree = 2 * (j % 3);
    const Vec axis = axes[static_cast<std::size_t>(j)].coords();
    out.push_back(SphereFunction{
        n, [n, degree, axis](const Direction& t) { return normalized_gegenbauer(n, degree, t.coords().dot(axis)); },
        Parity::even});
  }
  return out;
}

RepresentationReport verify_representation(const SphereFunction& a_target, const DiscreteMeasure& mu, int i,
                                           const std::vector<SphereFunction>& test_fns, int sphere_level,
                                           int subsphere_level) {
  if (test_fns.empty()) throw DomainError("verify_representation: need at least one test function");
  const int n = a_target.n;
  RepresentationReport rep;
  rep.measure = true;
  rep.probes = static_cast<int>(test_fns.size());
  const auto qs = product_sphere_quadrature(n, sphere_level);
  const auto qi = product_sphere_quadrature(i, subsphere_level);
  const double factor = unit_sphere_area(n) / unit_sphere_area(i);
  const std::size_t atoms = mu.atoms().size();
  rep.min_phi = std::numeric_limits<double>::infinity();
  for (const auto& [xi, mass] : mu.atoms()) rep.min_phi = std::min(rep.min_phi, mass);
  std::vector<Verdict> verdicts;
  for (const auto& f : test_fns) {
    const double lhs = qs.integrate([&](const Direction& t) { return a_target(t) * f(t); }).value;
    // Treat the atoms as a sample: their spread gives an error bar when they are random.
    MeanAccumulator acc;
    for (const auto& [xi, mass] : mu.atoms()) acc.add(factor * mass * radon(f, xi, qi) * static_cast<double>(atoms));
    const Estimate rhs = acc.estimate();
    const double residual = std::abs(lhs - rhs.value);
    if (residual >= rep.max_residual) {
      rep.max_residual = residual;
      rep.residual_error = rhs.std_error;
      rep.relative_residual = residual / std::max(1e-300, std::abs(lhs));
    }
    verdicts.push_back(residual_verdict(residual, rhs.std_error, 1e-9 * std::max(1.0, std::abs(lhs))));
  }
  rep.verdict = aggregate(verdicts);
  return rep;
}

RepresentationReport verify_representation(const SphereFunction& a_target, const GrassmannFunction& phi, int probes,
                                           std::size_t rotations, const RandomSource& rng,
                                           std::size_t phi_samples) {
  RepresentationReport rep;
  rep.probes = probes;
  rep.rotations = rotations;
  const auto dirs = quasi_uniform_directions(a_target.n, static_cast<std::size_t>(probes));
  std::vector<Verdict> verdicts;
  double worst_z = -1.0;
  for (std::size_t p = 0; p < dirs.size(); ++p) {
    const Estimate d = dual_radon(phi, dirs[p], rotations, rng.derive(p));
    const double target = a_target(dirs[p]);
    const double residual = std::abs(target - d.value);
    const double tol = 1e-12 * std::max(1.0, std::abs(target));
    verdicts.push_back(residual_verdict(residual, d.std_error, tol));
    const double z = residual / std::max(d.std_error, 1e-300);
    if (residual > rep.max_residual) {
      rep.max_residual = residual;
      rep.relative_residual = residual / std::max(1e-300, std::abs(target));
    }
    if (z > worst_z) {
      worst_z = z;
      rep.residual_error = d.std_error;
    }
  }
  rep.verdict = aggregate(verdicts);
  const int n = phi.n;
  const int i = phi.i;
  RandomSource r = rng.derive(dirs.size() + 1);
  rep.min_phi = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < phi_samples; ++s) rep.min_phi = std::min(rep.min_phi, phi(random_subspace(r, n, i)));
  rep.phi_negative_somewhere = rep.min_phi < 0.0;
  return rep;
}

// -------------------------------------------------------------------- lemma

LemmaResult lemma_check(const std::function<double(double)>& alpha, const std::function<double(double)>& beta, double a,
                        double b, int n, int i, double tol) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("lemma_check: a and b must be positive");
  LemmaResult out;
  const double top = std::max(a, b);
  const auto ratio = [&](double r) { return std::pow(r, n - i) * alpha(r) / beta(r); };
  double prev = ratio(top * 1e-6);
  const int grid = 400;
  for (int k = 1; k <= grid; ++k) {
    const double r = top * std::pow(1e-6, 1.0 - static_cast<double>(k) / grid);
    const double cur = ratio(r);
    if (!(cur >= prev - kMonotoneTolerance * std::max(1.0, std::abs(prev)))) {
      std::ostringstream os;
      os << "r^{n-i} alpha/beta decreases near r = " << r;
      out.precondition_ok = false;
      out.pass = false;
      out.detail = os.str();
      return out;
    }
    prev = cur;
  }
  const double c = std::pow(a, n - i) * alpha(a) / beta(a);
  const auto first = [&](double r) { return std::pow(r, n - 1) * alpha(r); };
  const auto second = [&](double r) { return c * std::pow(r, i - 1) * beta(r); };
  // The signed integrand can vanish identically, where a relative tolerance never converges; a
  // constant offset of the size of its parts turns the tolerance into an absolute one.
  const double level =
      (integrate_adaptive(first, 0.0, top, 1e-10) + integrate_adaptive(second, 0.0, top, 1e-10)) / top + 1e-300;
  const auto signed_integral = [&](double x, double y) {
    if (x == y) return 0.0;
    return integrate_adaptive([&](double r) { return first(r) - second(r) + level; }, x, y, 1e-12) - level * (y - x);
  };
  out.lhs = signed_integral(0.0, a);
  out.rhs = signed_integral(0.0, b);
  // The difference is integrated on its own: subtracting the two sides would cancel badly when they agree.
  const double gap = signed_integral(a, b);
  out.pass = gap >= -tol;
  if (!out.pass) out.detail = "left side exceeds right side";
  return out;
}

// ---------------------------------------------------------------- counterexample

CounterexampleResult build_counterexample(const StarBody& l, const WeightPair& pair, const GrassmannFunction& phi,
                                          const CounterexampleParams& params, const RandomSource& rng,
                                          const std::string& phi_description) {
  const int n = pair.n;
  const int i = pair.i;
  if (i != n - 1) throw UnsupportedError("build_counterexample: only hyperplane sections (i = n-1) are supported");
  if (phi.n != n || phi.i != i) throw DomainError("build_counterexample: phi lives on a different Grassmannian");
  if (l.n() != n) throw DomainError("build_counterexample: body dimension differs from n");
  const Admissibility adm = check_conditions(pair, 128, 200, &l);
  if (!adm.all_pass()) throw DomainError("build_counterexample: weights fail conditions (a)-(c)");

  CounterexampleResult res;
  res.n = n;
  res.i = i;
  res.seed = rng.seed();
  res.base_body = l.description();
  res.weights = "u=" + pair.u.description + ", v=" + pair.v.description;
  res.phi_description = phi_description;
  if (!l.smooth()) res.notes.push_back("base body smoothness not established by its constructor");
  res.notes.push_back("curvature of the base body is not checked");

  const auto phi_at = [&](const Vec& eta) { return phi(SubspaceFrame::hyperplane(Direction::from_vector(eta))); };

  // 1. Hyperplane xi_0 minimizing phi: grid search, then a shrinking compass search.
  Vec eta0;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& d : quasi_uniform_directions(n, static_cast<std::size_t>(params.cap_grid))) {
    const double v = phi_at(d.coords());
    if (v < best) {
      best = v;
      eta0 = d.coords();
    }
  }
  for (double step = 0.1; step > 1e-7;) {
    const Mat basis = rotation_to_pole(Direction::from_vector(eta0)).matrix().leftCols(n - 1);
    bool moved = false;
    for (int k = 0; k < n - 1 && !moved; ++k)
      for (double sgn : {1.0, -1.0}) {
        const Vec trial = (eta0 + sgn * step * basis.col(k)).normalized();
        const double v = phi_at(trial);
        if (v < best) {
          best = v;
          eta0 = trial;
          moved = true;
          break;
        }
      }
    if (!moved) step *= 0.5;
  }
  res.phi_min = best;
  res.cap_center = eta0;
  if (!(best < 0.0)) throw NoNegativeRegionError("phi is nonnegative at every probed hyperplane");

  // Largest delta on the schedule with phi < 0 on the cap of hyperplanes whose normal is within delta of eta_0.
  {
    RandomSource cap_rng = rng.derive(1);
    const Mat basis = rotation_to_pole(Direction::from_vector(eta0)).matrix().leftCols(n - 1);
    double found = 0.0;
    for (double delta = params.delta_max; delta >= params.delta_min * (1 - 1e-12); delta *= params.delta_factor) {
      bool negative = true;
      for (int p = 0; p < params.cap_probes && negative; ++p) {
        Vec tangent = basis * Vec::NullaryExpr(n - 1, [&] { return cap_rng.normal(); });
        tangent.normalize();
        const double s = p % 4 == 0 ? delta : delta * std::pow(cap_rng.uniform(), 1.0 / (n - 1));
        negative = phi_at(std::cos(s) * eta0 + std::sin(s) * tangent) < 0.0;
      }
      if (negative) {
        found = delta;
        break;
      }
    }
    if (found == 0.0) throw NoNegativeRegionError("phi is not negative on any cap of radius >= delta_min");
    res.cap_radius = found;
  }

  // 2. Bump power m by pilot signal-to-noise of E_G[g_1 phi], from a separate stream.
  const double area_ratio = unit_sphere_area(n) / unit_sphere_area(i);
  std::vector<int> candidates;
  for (int m = 1; 2 * m <= params.max_degree; ++m) candidates.push_back(m);
  std::vector<MeanAccumulator> pilot(candidates.size());
  MeanAccumulator phi_mean;
  {
    RandomSource pr = rng.derive(2);
    for (std::size_t s = 0; s < params.pilot_samples; ++s) {
      const Direction eta = random_direction(pr, n);
      const double f = phi_at(eta.coords());
      const double t2 = std::pow(eta.coords().dot(eta0), 2);
      phi_mean.add(f);
      double power = 1.0;
      int done = 0;
      for (std::size_t c = 0; c < candidates.size(); ++c) {
        for (; done < candidates[c]; ++done) power *= t2;
        pilot[c].add(-power * f);
      }
    }
  }
  double best_snr = -std::numeric_limits<double>::infinity();
  double signal = 0.0;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const Estimate e = pilot[c].estimate();
    const double snr = e.std_error > 0.0 ? e.value / e.std_error : 0.0;
    if (e.value > 0.0 && snr > best_snr) {
      best_snr = snr;
      res.bump_power = candidates[c];
      signal = e.value;
    }
  }
  if (res.bump_power == 0) throw ConstructionFailedError("no bump power gives a positive pilot estimate of int g_1 phi");
  res.bump_floor = params.floor_fraction * signal / std::max(phi_mean.mean(), 1e-12);

  // 3. g_1 on hyperplanes and g = R^{-1} g_1.
  const int m = res.bump_power;
  const double floor = res.bump_floor;
  HarmonicExpansion g1 = zonal_analyze([&](double t) { return -(std::pow(t, 2 * m) + floor); }, n, 2 * m, 2 * m + 2);
  g1.axis = eta0;
  res.g = hyperplane_radon_inverse(g1, params.cond_cap);
  for (int s = 0; s <= 4000; ++s) res.g_max_abs = std::max(res.g_max_abs, std::abs(res.g.profile(-1.0 + s / 2000.0)));

  const auto g1_at = [&](const Vec& eta) { return -(std::pow(eta.dot(eta0), 2 * m) + floor); };
  res.neg_integral = monte_carlo(
      params.samples, rng.derive(3),
      [&](RandomSource& r) {
        const Direction eta = random_direction(r, n);
        return g1_at(eta.coords()) * phi_at(eta.coords());
      },
      area_ratio);
  const auto a_l = [&](const Direction& t) { return comparison_function(pair, l, t); };
  res.neg_integral_direct = monte_carlo(
      params.samples, rng.derive(4),
      [&](RandomSource& r) {
        const Direction t = random_direction(r, n);
        return a_l(t) * res.g(t);
      },
      unit_sphere_area(n));
  if (!(res.neg_integral.value > 3 * res.neg_integral.std_error)) {
    std::ostringstream os;
    os << "int g_1 phi estimate " << res.neg_integral.value << " is not positive by 3 standard errors ("
       << res.neg_integral.std_error << ")";
    throw ConstructionFailedError(os.str());
  }

  // 4-5. Epsilon from positivity of b_K, halved until the sampled convexity probe passes.
  // Copies: the lambda outlives this call inside K.
  const auto b_l = [u = pair.u, l, i](const Direction& t) { return b_function(u, l, t, i); };
  double min_b = std::numeric_limits<double>::infinity();
  for (const auto& t : quasi_uniform_directions(n, 1000)) min_b = std::min(min_b, b_l(t));
  double eps = std::min(params.eps0, 0.5 * min_b / res.g_max_abs) * params.epsilon_scale;
  const HarmonicExpansion g = res.g;
  for (int h = 0;; ++h) {
    std::optional<StarBody> candidate;
    try {
      candidate.emplace(make_from_b(
          pair.u, i, [b_l, g, eps](const Direction& t) { return b_l(t) + eps * g(t); }, "K: b_K = b_L + eps g"));
    } catch (const Error&) {
      candidate.reset();
    }
    bool convex = false;
    if (candidate) {
      const auto cv = is_convex_sampled(*candidate, params.convexity_pairs, params.convexity_tol, rng.derive(5));
      convex = cv.pass;
      res.convexity_excess = cv.excess;
    }
    res.epsilon = eps;
    res.halvings = h;
    if (candidate) res.k = candidate;
    if (convex || h >= params.max_halvings) {
      res.convex = convex;
      break;
    }
    eps *= 0.5;
  }
  if (!res.k) throw ConstructionFailedError("b_L + eps g is not positive for any tried epsilon");
  res.convexity_failed = !res.convex;
  if (res.convexity_failed) res.notes.push_back("convexity probe never passed; K is certified as a star body only");
  res.base_convex = is_convex_sampled(l, params.convexity_pairs, params.convexity_tol, rng.derive(6)).pass;
  const StarBody& k = *res.k;

  // 6. Certificate: sections, volumes, and the b identity.
  const auto fine = product_sphere_quadrature(i, params.section_level);
  const auto coarse = product_sphere_quadrature(i, coarse_level(params.section_level));
  auto subspaces = sample_subspaces(n, i, params.n_xi, rng.derive(7));
  subspaces.push_back(SubspaceFrame::hyperplane(Direction::from_vector(eta0)));
  std::vector<Verdict> verdicts;
  res.max_section_difference = -std::numeric_limits<double>::infinity();
  for (const auto& xi : subspaces) {
    auto [s, m] = compare_sections(k, l, pair.u, xi, fine, coarse);
    const double diff = -m.value;
    s.verdict = classify_le(m.value, m.std_error, roundoff(s.l.value) * 1e-2);
    res.max_section_difference = std::max(res.max_section_difference, diff);
    res.section_identity_residual =
        std::max(res.section_identity_residual, std::abs(diff - eps * g1_at(xi.normal().coords())));
    verdicts.push_back(s.verdict);
    res.sections.push_back(std::move(s));
  }
  res.sections_verdict = aggregate(verdicts);

  const auto pointwise = [&](const Direction& t) {
    const double rk = k.radial(t);
    const double rl = l.radial(t);
    const double fk = radial_moment(pair.v, t, n - 1, rk);
    const double fl = radial_moment(pair.v, t, n - 1, rl);
    const double db = radial_moment(pair.u, t, i - 1, rk) - radial_moment(pair.u, t, i - 1, rl);
    const double a = a_l(t);
    return std::array<double, 3>{fk - fl - a * db, fk - fl, a * db};
  };
  const double area = unit_sphere_area(n);
  const auto vol = monte_carlo<3>(
      params.samples, rng.derive(8), [&](RandomSource& r) { return pointwise(random_direction(r, n)); },
      {area, area, area});
  res.lemma_term = vol[0];
  res.volume_difference_direct = vol[1];
  res.volume_difference = sum_estimates(vol[0], res.neg_integral, eps);
  res.volume_verdict = classify_lt(res.volume_difference.value, res.volume_difference.std_error, 0.0);
  res.eeeq1_margin = res.neg_integral;
  res.eeeq1_margin.value *= eps;
  res.eeeq1_margin.std_error *= eps;
  res.lemma_min_pointwise = std::numeric_limits<double>::infinity();
  for (const auto& t : quasi_uniform_directions(n, 2000)) res.lemma_min_pointwise = std::min(res.lemma_min_pointwise, pointwise(t)[0]);

  for (const auto& t : quasi_uniform_directions(n, 200)) {
    const double expected = b_l(t) + eps * g(t);
    res.b_identity_residual = std::max(res.b_identity_residual, std::abs(b_function(pair.u, k, t, i) - expected));
  }
  const SphereFunction a_fn{n, a_l, Parity::even};
  res.representation_residual = verify_representation(a_fn, phi, 16, 2000, rng.derive(9), 0).max_residual;
  return res;
}

// -------------------------------------------------------------------- w_gamma

double wgamma_constant(int n, int i, double gamma) {
  if (!(gamma > 0.0)) throw DomainError("wgamma_constant: gamma must be positive");
  if (n < 3 || i < 1 || i > n - 1) throw DomainError("wgamma_constant: need n >= 3 and 1 <= i <= n-1");
  const double num = unit_sphere_area(n - 1) * std::tgamma(0.5 * (i - 1 + gamma));
  const double den = std::pow(std::numbers::pi, 0.5 * (i - 1)) * unit_sphere_area(n - i) * std::tgamma(0.5 * gamma);
  return num / den;
}

GrassmannFunction make_mgamma(int n, int i, double gamma) {
  const double c = wgamma_constant(n, i, gamma);
  const double exponent = gamma + i - n;
  GrassmannFunction m;
  m.n = n;
  m.i = i;
  m.eval = [c, exponent, n](const SubspaceFrame& xi) {
    const Vec en = Vec::Unit(n, n - 1);
    const double sin_d = (en - xi.project(en)).norm();
    return exponent == 0.0 ? c : c * std::pow(sin_d, exponent);
  };
  return m;
}

// ------------------------------------------------------------------ scenarios

Verdict ScenarioOutcome::overall() const {
  std::vector<Verdict> vs;
  for (const auto& [name, v] : verdicts)
    if (v != Verdict::not_applicable) vs.push_back(v);
  return aggregate(vs);
}

StarBody random_test_body(int n, RandomSource& rng) {
  if (rng.uniform() < 0.5) {
    std::vector<double> axes(static_cast<std::size_t>(n));
    for (auto& a : axes) a = 0.6 + 0.9 * rng.uniform();
    return make_ellipsoid(axes);
  }
  // Ball perturbed by an even quadratic form: rho = (1 + theta^T A theta)^{1/2}, A with eigenvalues in (-0.5, 0.8).
  Mat g(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) g(r, c) = rng.normal();
  Eigen::HouseholderQR<Mat> qr(g);
  const Mat q = qr.householderQ();
  Vec ev(n);
  for (int k = 0; k < n; ++k) ev[k] = -0.5 + 1.3 * rng.uniform();
  const Mat a = q * ev.asDiagonal() * q.transpose();
  std::ostringstream os;
  os << "perturbed ball (quadratic, eigenvalues";
  for (int k = 0; k < n; ++k) os << " " << ev[k];
  os << ")";
  return make_harmonic_perturbed(
      n, [a](const Direction& t) { return t.coords().dot(a * t.coords()); }, 2.0, os.str());
}

StarBody linear_image(const StarBody& body, const Vec& diagonal) {
  const Vec inv = diagonal.cwiseInverse();
  // x in A K iff A^{-1} x in K: rho_{AK}(theta) = rho_K(A^{-1}theta / |A^{-1}theta|) / |A^{-1}theta|.
  return StarBody(
      body.n(),
      [body, inv](const Direction& t) {
        const Vec y = inv.cwiseProduct(t.coords());
        const double norm = y.norm();
        return body.radial(Direction::from_vector(y)) / norm;
      },
      body.kind(), body.smooth(), "diag image of " + body.description());
}

StarBody scaled(const StarBody& body, double factor) {
  std::ostringstream os;
  os << factor << " * " << body.description();
  return StarBody(
      body.n(), [body, factor](const Direction& t) { return factor * body.radial(t); }, body.kind(), body.smooth(),
      os.str());
}

namespace {

double section_scaling_exponent(const WeightPair& pair) {
  if (!pair.u.degree) throw UnsupportedError("random pair generation needs a homogeneous u");
  return pair.i + *pair.u.degree;
}

void tally(RandomPairSummary& s, ImplicationReport rep) {
  if (rep.hypothesis != Verdict::holds) ++s.hypothesis_failures;
  switch (rep.conclusion) {
    case Verdict::holds: ++s.holds; break;
    case Verdict::fails: ++s.fails; break;
    default: ++s.indeterminate; break;
  }
  s.reports.push_back(std::move(rep));
}

}  // namespace

RandomPairSummary random_dominating_pairs(const WeightPair& pair, const RandomPairOptions& options,
                                          const RandomSource& rng) {
  const int n = pair.n, i = pair.i;
  const double e = section_scaling_exponent(pair);
  const StarBody k = make_ball(n, 1.0);
  const auto q = product_sphere_quadrature(i, options.section_level);
  RandomPairSummary out;
  for (int t = 0; t < options.trials; ++t) {
    RandomSource trial = rng.derive(static_cast<std::uint64_t>(t));
    RandomSource body_rng = trial.derive(100);
    const StarBody l0 = random_test_body(n, body_rng);
    const RandomSource check_rng = trial.derive(200);
    double worst = 0.0;
    for (const auto& xi : sample_subspaces(n, i, options.n_xi, check_rng.derive(0)))
      worst = std::max(worst, section_volume(k, pair.u, xi, q) / section_volume(l0, pair.u, xi, q));
    const StarBody l = scaled(l0, std::pow(worst, 1.0 / e) * (1 + kPairSlack));
    ImplicationOptions io;
    io.n_xi = options.n_xi;
    io.section_level = options.section_level;
    io.volume = options.volume;
    io.probe_dirs = 64;
    tally(out, check_implication(k, l, pair, io, check_rng));
  }
  return out;
}

RandomPairSummary random_shrunk_pairs(const WeightPair& pair, const RandomPairOptions& options,
                                      const RandomSource& rng) {
  const int n = pair.n, i = pair.i;
  const double e = section_scaling_exponent(pair);
  const auto q = product_sphere_quadrature(i, options.section_level);
  RandomPairSummary out;
  for (int t = 0; t < options.trials; ++t) {
    RandomSource trial = rng.derive(static_cast<std::uint64_t>(t));
    RandomSource body_rng = trial.derive(100);
    const StarBody l = random_test_body(n, body_rng);
    Vec diag(n);
    for (int c = 0; c < n; ++c) diag[c] = 0.6 + body_rng.uniform();
    const StarBody k0 = linear_image(l, diag);
    const RandomSource check_rng = trial.derive(200);
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& xi : sample_subspaces(n, i, options.n_xi, check_rng.derive(0)))
      worst = std::min(worst, section_volume(l, pair.u, xi, q) / section_volume(k0, pair.u, xi, q));
    const StarBody k = scaled(k0, std::pow(worst, 1.0 / e) * (1 - kPairSlack));
    ImplicationOptions io;
    io.n_xi = options.n_xi;
    io.section_level = options.section_level;
    io.volume = options.volume;
    io.probe_dirs = 64;
    tally(out, check_implication(k, l, pair, io, check_rng));
  }
  return out;
}

ScenarioOutcome scenario_equal_weights(const StarBody& k, const StarBody& l, const Weight& u, int i,
                                       const ImplicationOptions& options, int probes, std::size_t rotations,
                                       const RandomSource& rng) {
  const int n = k.n();
  ScenarioOutcome out;
  out.name = "equal-weights";
  const WeightPair pair(u, u, n, i);
  const SphereFunction a_k{n, [&](const Direction& t) { return std::pow(k.radial(t), n - i); }, Parity::even};

  std::optional<GrassmannFunction> phi;
  std::string how;
  if (k.kind() == BodyKind::ball) {
    const double c = std::pow(k.radial(Direction::unit(n, 0)), n - i);
    phi = GrassmannFunction{n, i, [c](const SubspaceFrame&) { return c; }};
    how = "constant";
  } else if (i == n - 1 && n == 3) {
    phi = as_hyperplane_function(funk_invert(a_k, 16).phi);
    how = "Funk inversion at degree 16";
  }
  bool candidate = false;
  if (phi) {
    RepresentationReport rep = verify_representation(a_k, *phi, probes, rotations, rng.derive(0));
    out.verdicts.emplace_back("representation", rep.verdict);
    out.numbers.emplace_back("min_phi", rep.min_phi);
    candidate = rep.verdict == Verdict::holds && !rep.phi_negative_somewhere;
    out.notes.push_back("representation candidate: " + how);
    out.representations.push_back(rep);
  } else {
    out.verdicts.emplace_back("representation", Verdict::not_applicable);
    out.notes.push_back("no representative available for this (body, i); supply one to verify a_K = R^*mu");
  }
  out.notes.push_back(candidate ? "K is an i-intersection-body candidate (verified on the test set, not proven)"
                                : "K is not labelled an i-intersection-body candidate");
  ImplicationOptions io = options;
  io.representation_verified = candidate;
  out.implications.push_back(check_implication(k, l, pair, io, rng.derive(1)));
  out.verdicts.emplace_back("hypothesis", out.implications.back().hypothesis);
  out.verdicts.emplace_back(candidate ? "conclusion" : "conclusion (not implied)", out.implications.back().conclusion);
  if (!candidate) out.verdicts.back().second = Verdict::not_applicable;
  return out;
}

ScenarioOutcome scenario_power_weights(int n, int i, double alpha, double beta, const StarBody& k, const StarBody& l,
                                       const ImplicationOptions& options, const RandomPairOptions& pairs,
                                       const RandomSource& rng) {
  ScenarioOutcome out;
  out.name = "power-weights";
  const WeightPair pair(make_power_weight(n, alpha), make_power_weight(n, beta), n, i);
  const bool region = alpha + i > 0 && alpha + i <= beta + n;
  const Admissibility adm = check_conditions(pair, 256, 200);
  out.verdicts.emplace_back("admissible region 0 < alpha+i <= beta+n", region ? Verdict::holds : Verdict::fails);
  out.verdicts.emplace_back("probed conditions agree with region",
                            adm.all_pass() == region ? Verdict::holds : Verdict::fails);
  out.numbers.emplace_back("a_K exponent beta+n-alpha-i", beta + n - alpha - i);
  if (!region) {
    out.notes.push_back("alpha+i > beta+n lies outside the scope of the theorems");
    return out;
  }
  if (std::abs(alpha - beta - (n - i)) < 1e-12) {
    out.notes.push_back("alpha - beta = n - i: a_K = 1 = R^*1 for every body, so the implication holds for all pairs");
    const RandomPairSummary s = random_shrunk_pairs(pair, pairs, rng.derive(2));
    out.numbers.emplace_back("trials", pairs.trials);
    out.numbers.emplace_back("conclusion_holds", s.holds);
    out.numbers.emplace_back("conclusion_fails", s.fails);
    out.numbers.emplace_back("conclusion_indeterminate", s.indeterminate);
    out.verdicts.emplace_back("random pairs", s.fails > 0 ? Verdict::fails
                                               : s.indeterminate > 0 ? Verdict::indeterminate
                                                                     : Verdict::holds);
  }
  out.implications.push_back(check_implication(k, l, pair, options, rng.derive(1)));
  out.verdicts.emplace_back("hypothesis", out.implications.back().hypothesis);
  out.verdicts.emplace_back("conclusion", out.implications.back().conclusion);
  return out;
}

ScenarioOutcome scenario_homogeneous(const WeightPair& pair, const GrassmannFunction& phi, const StarBody& k,
                                     const StarBody& l, const ImplicationOptions& options, int probes,
                                     std::size_t rotations, const RandomSource& rng) {
  const int n = pair.n, i = pair.i;
  if (!pair.u.degree || !pair.v.degree) throw DomainError("homogeneous scenario: u and v must declare a degree");
  const double diff = *pair.u.degree - *pair.v.degree;
  if (std::abs(diff - (n - i)) > 1e-12) {
    std::ostringstream os;
    os << "homogeneous scenario: degrees give alpha - beta = " << diff << " but n - i = " << n - i;
    throw DomainError(os.str());
  }
  ScenarioOutcome out;
  out.name = "homogeneous";
  const SphereFunction ratio{n, [&](const Direction& t) { return pair.v(t.coords()) / pair.u(t.coords()); },
                             Parity::even};
  RepresentationReport rep = verify_representation(ratio, phi, probes, rotations, rng.derive(0));
  out.verdicts.emplace_back("v = u R^*phi", rep.verdict);
  out.numbers.emplace_back("min_phi", rep.min_phi);
  const bool positive = !rep.phi_negative_somewhere;
  out.representations.push_back(rep);
  ImplicationOptions io = options;
  io.representation_verified = rep.verdict == Verdict::holds && positive;
  out.implications.push_back(check_implication(k, l, pair, io, rng.derive(1)));
  out.verdicts.emplace_back("hypothesis", out.implications.back().hypothesis);
  out.verdicts.emplace_back("conclusion", io.representation_verified ? out.implications.back().conclusion
                                                                     : Verdict::not_applicable);
  if (!positive) out.notes.push_back("phi is negative somewhere: the implication is not implied");
  return out;
}

ScenarioOutcome scenario_wgamma(int n, int i, double gamma, int probes, std::size_t rotations, const RandomSource& rng) {
  ScenarioOutcome out;
  out.name = "wgamma-example";
  const double c = wgamma_constant(n, i, gamma);
  out.numbers.emplace_back("constant", c);
  out.numbers.emplace_back("exponent", gamma + i - n);
  const Weight w = make_wgamma(n, i, gamma);
  const SphereFunction target{n, [w](const Direction& t) { return w(t.coords()); }, Parity::even};
  RepresentationReport rep = verify_representation(target, make_mgamma(n, i, gamma), probes, rotations, rng, 2000);
  out.verdicts.emplace_back("R^*m_gamma = w_gamma", rep.verdict);
  out.numbers.emplace_back("max_residual", rep.max_residual);
  out.representations.push_back(rep);
  return out;
}

}  // namespace wbp
