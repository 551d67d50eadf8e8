#include "wbp/estimate.hpp"

namespace wbp {

std::string to_string(Estimate::ErrorKind kind) {
  switch (kind) {
    case Estimate::ErrorKind::none: return "none";
    case Estimate::ErrorKind::monte_carlo: return "monte-carlo";
    case Estimate::ErrorKind::quadrature_refinement: return "quadrature-refinement";
  }
  return "none";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "true";
    case Verdict::fails: return "false";
    case Verdict::indeterminate: return "indeterminate";
    case Verdict::not_applicable: return "not-applicable";
  }
  return "indeterminate";
}

Verdict classify_le(double margin, double std_error, double tol) {
  const double band = 3.0 * std_error;
  if (margin < -(band + tol)) return Verdict::fails;
  if (margin > band) return Verdict::holds;
  if (band <= tol && margin >= -tol) return Verdict::holds;
  return Verdict::indeterminate;
}

Verdict classify_lt(double margin, double std_error, double tol) {
  const double band = 3.0 * std_error;
  if (margin > band + tol) return Verdict::holds;
  if (margin < -band || (band <= tol && margin <= tol)) return Verdict::fails;
  return Verdict::indeterminate;
}

}  // namespace wbp
