#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "cul/error.hpp"

namespace cul {

// =====================================================================
// Central-difference gradient checking. The error metric is
//   max_i |g_fd[i] − g_an[i]| / max(1, |g_fd[i]|, |g_an[i]|)
// which behaves like an absolute error near zero and a relative error
// for large gradients.
// =====================================================================
inline double finite_diff_check(const std::function<double(const std::vector<double>&)>& f,
                                const std::vector<double>& params,
                                const std::vector<double>& analytic_grad,
                                double h) {
  if (params.size() != analytic_grad.size()) throw ShapeError("finite_diff_check: gradient length mismatch");
  if (!(h > 0)) throw NumericError("finite_diff_check: non-positive step");
  std::vector<double> x = params;
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double orig = x[i];
    x[i] = orig + h;
    const double fp = f(x);
    x[i] = orig - h;
    const double fm = f(x);
    x[i] = orig;
    if (!std::isfinite(fp) || !std::isfinite(fm)) throw NumericError("finite_diff_check: non-finite objective");
    const double g_fd = (fp - fm) / (2.0 * h);
    const double g_an = analytic_grad[i];
    const double denom = std::max(1.0, std::max(std::fabs(g_fd), std::fabs(g_an)));
    worst = std::max(worst, std::fabs(g_fd - g_an) / denom);
  }
  return worst;
}

}  // namespace cul
