#pragma once

#include <functional>
#include <optional>
#include <string>

#include "wbp/sphere_geom.hpp"

namespace wbp {

class StarBody;

enum class WeightKind { power, wgamma, product, custom };

std::string to_string(WeightKind kind);

/// A nonnegative even weight on R^n \ {0}.
struct Weight {
  int n = 0;
  std::function<double(const Vec&)> eval;
  /// Homogeneity degree d, if w(tx) = t^d w(x).
  std::optional<double> degree;
  WeightKind kind = WeightKind::custom;
  bool smooth = true;
  std::string description;

  double operator()(const Vec& x) const { return eval(x); }
  double at(const Direction& theta, double r) const { return eval(r * theta.coords()); }
};

/// |x|^alpha.
Weight make_power_weight(int n, double alpha);

/// (|x'|/|x|)^{gamma+i-n} with x' the first n-1 coordinates.
Weight make_wgamma(int n, int i, double gamma);

Weight make_product(const Weight& a, const Weight& b);

/// Weight given by an arithmetic expression (see Expression). Degree is optional metadata.
Weight make_custom(int n, const std::string& expression, std::optional<double> degree = std::nullopt);

Weight scale_weight(const Weight& w, double factor);

/// Integral of r^p w(r theta) over [0, rho]. Uses the closed form for homogeneous weights.
double radial_moment(const Weight& w, const Direction& theta, double p, double rho);

struct ConditionVerdict {
  bool pass = true;
  std::string detail;
  std::optional<Direction> witness_direction;
  double witness_r1 = 0.0;
  double witness_r2 = 0.0;
};

struct Admissibility {
  ConditionVerdict a;
  ConditionVerdict b;
  ConditionVerdict c;
  int probe_dirs = 0;
  int r_grid = 0;

  bool all_pass() const { return a.pass && b.pass && c.pass; }
};

struct WeightPair {
  Weight u;
  Weight v;
  int n = 0;
  int i = 0;

  WeightPair(Weight u, Weight v, int n, int i);
};

inline constexpr double kMonotoneTolerance = 1e-10;

/// Probes conditions (a)-(c). "Almost all theta" means every probe direction; a single failure fails.
/// When `body` is given its boundary radius is added to the r-grid of each probe direction.
Admissibility check_conditions(const WeightPair& pair, int probe_dirs = 512, int r_grid = 200,
                               const StarBody* body = nullptr);

/// b_K(theta) = integral of r^{i-1} u(r theta) over [0, rho_K(theta)].
double b_function(const Weight& u, const StarBody& body, const Direction& theta, int i);

/// a_K(theta) = rho^{n-i} v(rho theta) / u(rho theta) at rho = rho_K(theta).
double comparison_function(const WeightPair& pair, const StarBody& body, const Direction& theta);

}  // namespace wbp
