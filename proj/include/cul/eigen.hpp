#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "cul/error.hpp"
#include "cul/graph.hpp"

namespace cul {

// =====================================================================
// Eigenvector centrality: power iteration (the "Iterative" baseline)
// plus a dense Jacobi eigendecomposition used as an independent oracle.
// =====================================================================

struct ECScores {
  std::vector<double> values;  // non-negative, unit L2 norm
  int iterations_used = 0;
  bool converged = false;
  bool oscillation_detected = false;
};

// Power iteration from the uniform start vector. Stops when the L1
// difference of consecutive unit iterates drops below n·tol. Bipartite
// spectra (λ1 = −λ2) make consecutive iterates oscillate between two
// accumulation points; when the two-step difference is below threshold
// but the one-step difference is not, consecutive iterates are averaged
// (their mean lies in the dominant eigenspace) and iteration continues.
inline ECScores power_iteration_ec(const Graph& g, int max_iter = 1000, double tol = 1e-6) {
  if (g.n <= 0) throw ShapeError("power_iteration_ec: empty graph");
  if (max_iter < 1 || !(tol > 0)) throw ConfigError("power_iteration_ec: bad iteration controls");
  const std::int64_t n = g.n;
  const double threshold = static_cast<double>(n) * tol;

  std::vector<double> r(static_cast<std::size_t>(n), 1.0 / static_cast<double>(n));
  {
    const double nr = l2_norm(r);
    for (double& x : r) x /= nr;
  }
  std::vector<double> next(static_cast<std::size_t>(n));
  std::vector<double> prev;  // iterate from two steps back

  ECScores ec;
  for (int it = 1; it <= max_iter; ++it) {
    ec.iterations_used = it;
    spmv(g, r.data(), next.data());
    const double nn = l2_norm(next);
    if (!(nn > kEpsGuard)) throw ZeroNormError("power_iteration_ec: A·r vanished (edgeless graph?)");
    for (double& x : next) x /= nn;

    double d1 = 0.0;
    for (std::int64_t i = 0; i < n; ++i) d1 += std::fabs(next[i] - r[i]);
    if (d1 < threshold) {
      r.swap(next);
      ec.converged = true;
      break;
    }
    if (!prev.empty()) {
      double d2 = 0.0;
      for (std::int64_t i = 0; i < n; ++i) d2 += std::fabs(next[i] - prev[i]);
      if (d2 < threshold) {
        // Oscillation: average the two accumulation points.
        for (std::int64_t i = 0; i < n; ++i) next[i] += r[i];
        const double na = l2_norm(next);
        if (!(na > kEpsGuard)) throw ZeroNormError("power_iteration_ec: oscillation average vanished");
        for (double& x : next) x /= na;
        ec.oscillation_detected = true;
      }
    }
    prev = r;
    r.swap(next);
  }

  // Perron orientation: make the vector non-negative. Entries can carry
  // tiny negative rounding noise after the flip; clamp and renormalize.
  double sum = 0.0;
  for (double x : r) sum += x;
  if (sum < 0)
    for (double& x : r) x = -x;
  for (double& x : r) x = std::max(x, 0.0);
  const double nr = l2_norm(r);
  if (!(nr > kEpsGuard)) throw ZeroNormError("power_iteration_ec: degenerate result");
  for (double& x : r) x /= nr;
  ec.values = std::move(r);
  return ec;
}

// Rayleigh-quotient residual ‖A·x − λx‖₂ with λ = ‖A·x‖₂; small for
// converged eigenvectors.
inline double rayleigh_residual(const Graph& g, const std::vector<double>& x, double* lambda_out = nullptr) {
  std::vector<double> ax = spmv(g, x);
  const double lambda = l2_norm(ax);
  if (lambda_out) *lambda_out = lambda;
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = ax[i] - lambda * x[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

// Dense cyclic-Jacobi eigendecomposition of the adjacency matrix; an
// implementation-independent oracle for the power iteration. Refuses
// n > 512 (dense O(n³) cost guard).
inline ECScores dense_eigen_oracle(const Graph& g) {
  if (g.n > 512) throw NumericError("dense_eigen_oracle: refused, n > 512");
  const std::int64_t n = g.n;
  std::vector<double> a(static_cast<std::size_t>(n * n), 0.0);
  for (std::int64_t i = 0; i < n; ++i)
    for (const std::int32_t* p = g.neighbors_begin(i); p != g.neighbors_end(i); ++p)
      a[static_cast<std::size_t>(i * n + *p)] = 1.0;
  std::vector<double> v(static_cast<std::size_t>(n * n), 0.0);
  for (std::int64_t i = 0; i < n; ++i) v[static_cast<std::size_t>(i * n + i)] = 1.0;

  auto off_norm = [&]() {
    double s = 0.0;
    for (std::int64_t p = 0; p < n; ++p)
      for (std::int64_t q = p + 1; q < n; ++q) s += a[static_cast<std::size_t>(p * n + q)] * a[static_cast<std::size_t>(p * n + q)];
    return std::sqrt(2.0 * s);
  };

  int sweeps = 0;
  constexpr int kMaxSweeps = 60;
  while (off_norm() > 1e-11 && sweeps < kMaxSweeps) {
    ++sweeps;
    for (std::int64_t p = 0; p < n; ++p) {
      for (std::int64_t q = p + 1; q < n; ++q) {
        const double apq = a[static_cast<std::size_t>(p * n + q)];
        if (std::fabs(apq) < 1e-300) continue;
        const double app = a[static_cast<std::size_t>(p * n + p)];
        const double aqq = a[static_cast<std::size_t>(q * n + q)];
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::int64_t k = 0; k < n; ++k) {
          const double akp = a[static_cast<std::size_t>(k * n + p)];
          const double akq = a[static_cast<std::size_t>(k * n + q)];
          a[static_cast<std::size_t>(k * n + p)] = c * akp - s * akq;
          a[static_cast<std::size_t>(k * n + q)] = s * akp + c * akq;
        }
        for (std::int64_t k = 0; k < n; ++k) {
          const double apk = a[static_cast<std::size_t>(p * n + k)];
          const double aqk = a[static_cast<std::size_t>(q * n + k)];
          a[static_cast<std::size_t>(p * n + k)] = c * apk - s * aqk;
          a[static_cast<std::size_t>(q * n + k)] = s * apk + c * aqk;
        }
        for (std::int64_t k = 0; k < n; ++k) {
          const double vkp = v[static_cast<std::size_t>(k * n + p)];
          const double vkq = v[static_cast<std::size_t>(k * n + q)];
          v[static_cast<std::size_t>(k * n + p)] = c * vkp - s * vkq;
          v[static_cast<std::size_t>(k * n + q)] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::int64_t best = 0;
  for (std::int64_t i = 1; i < n; ++i)
    if (a[static_cast<std::size_t>(i * n + i)] > a[static_cast<std::size_t>(best * n + best)]) best = i;

  ECScores ec;
  ec.values.resize(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) ec.values[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(i * n + best)];
  double sum = 0.0;
  for (double x : ec.values) sum += x;
  if (sum < 0)
    for (double& x : ec.values) x = -x;
  for (double& x : ec.values) x = std::max(x, 0.0);
  const double nr = l2_norm(ec.values);
  if (!(nr > kEpsGuard)) throw NumericError("dense_eigen_oracle: degenerate eigenvector");
  for (double& x : ec.values) x /= nr;
  ec.iterations_used = sweeps;
  ec.converged = true;
  return ec;
}

inline double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw ShapeError("cosine_similarity: length mismatch");
  double dot = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
  const double na = l2_norm(a), nb = l2_norm(b);
  if (!(na > kEpsGuard) || !(nb > kEpsGuard)) throw ZeroNormError("cosine_similarity: zero vector");
  return dot / (na * nb);
}

}  // namespace cul
