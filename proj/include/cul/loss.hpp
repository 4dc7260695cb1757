#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "cul/error.hpp"
#include "cul/graph.hpp"
#include "cul/matrix.hpp"

namespace cul {

// =====================================================================
// Unsupervised ranking losses. The target X = A·Y is a moving target:
// recomputed from the current scores once per epoch per graph and held
// constant through the gradient (power-iteration semantics). Gradient
// flow through X exists only behind an ablation flag.
// =====================================================================

enum class LossVariant { joint, joint_l1, objective_only };

inline const char* to_string(LossVariant v) {
  switch (v) {
    case LossVariant::joint: return "joint";
    case LossVariant::joint_l1: return "joint_l1";
    case LossVariant::objective_only: return "objective_only";
  }
  return "?";
}

inline LossVariant loss_variant_from_string(const std::string& s) {
  if (s == "joint") return LossVariant::joint;
  if (s == "joint_l1" || s == "joint-l1") return LossVariant::joint_l1;
  if (s == "objective_only" || s == "objective-only" || s == "obj-only" || s == "obj_only")
    return LossVariant::objective_only;
  throw ConfigError("unknown loss variant: " + s);
}

// One-epoch frozen target. No gradient flows through the result by
// default; callers wanting the ablation use loss_grad_x below.
template <class T>
std::vector<T> compute_target_x(const Graph& g, const std::vector<T>& y) {
  return spmv(g, y);
}

template <class T>
struct LossResult {
  T value{};
  std::vector<T> grad_y;  // treating x as a constant
};

namespace detail {

template <class T>
T checked_x_norm(const std::vector<T>& x) {
  const T nx = l2_norm(x);
  if (!(static_cast<double>(nx) > kEpsGuard))
    throw ZeroNormError("loss: target X has (near-)zero norm; scores collapsed toward the zero vector");
  return nx;
}

}  // namespace detail

// L = ‖Y − X/‖X‖₂‖₂ − (k/n)·‖Y‖₂. The penalty term pushes ‖Y‖ up so the
// zero vector stops being an attractor.
template <class T>
LossResult<T> loss_joint(const std::vector<T>& y, const std::vector<T>& x, T k = T{1}) {
  if (y.size() != x.size()) throw ShapeError("loss_joint: length mismatch");
  if (!(k > T{0})) throw ConfigError("loss_joint: k must be positive");
  const std::size_t n = y.size();
  const T nx = detail::checked_x_norm(x);
  std::vector<T> diff(n);
  for (std::size_t i = 0; i < n; ++i) diff[i] = y[i] - x[i] / nx;
  const T ndiff = l2_norm(diff);
  const T ny = l2_norm(y);
  LossResult<T> r;
  r.value = ndiff - (k / static_cast<T>(n)) * ny;
  r.grad_y.assign(n, T{0});
  const T dguard = std::max(ndiff, static_cast<T>(kEpsGuard));
  const T yguard = std::max(ny, static_cast<T>(kEpsGuard));
  const T c = k / static_cast<T>(n);
  for (std::size_t i = 0; i < n; ++i) r.grad_y[i] = diff[i] / dguard - c * y[i] / yguard;
  return r;
}

// L1 first term Σ|Yᵢ − X̂ᵢ|; the norm penalty stays L2. Subgradient 0 at
// exact zeros of the first term.
template <class T>
LossResult<T> loss_joint_l1(const std::vector<T>& y, const std::vector<T>& x, T k = T{1}) {
  if (y.size() != x.size()) throw ShapeError("loss_joint_l1: length mismatch");
  if (!(k > T{0})) throw ConfigError("loss_joint_l1: k must be positive");
  const std::size_t n = y.size();
  const T nx = detail::checked_x_norm(x);
  const T ny = l2_norm(y);
  LossResult<T> r;
  r.grad_y.assign(n, T{0});
  T first{0};
  const T c = k / static_cast<T>(n);
  const T yguard = std::max(ny, static_cast<T>(kEpsGuard));
  for (std::size_t i = 0; i < n; ++i) {
    const T d = y[i] - x[i] / nx;
    first += std::abs(d);
    const T s = d > T{0} ? T{1} : (d < T{0} ? T{-1} : T{0});
    r.grad_y[i] = s - c * y[i] / yguard;
  }
  r.value = first - c * ny;
  return r;
}

// L = ‖Y − X/‖X‖₂‖₂ alone. Minimizing this by itself drives Y toward
// the zero vector (the fixed point Y = X̂ shrinks under gradient steps
// with no norm floor), which is exactly what the joint variants fix.
template <class T>
LossResult<T> loss_objective_only(const std::vector<T>& y, const std::vector<T>& x) {
  if (y.size() != x.size()) throw ShapeError("loss_objective_only: length mismatch");
  const std::size_t n = y.size();
  const T nx = detail::checked_x_norm(x);
  std::vector<T> diff(n);
  for (std::size_t i = 0; i < n; ++i) diff[i] = y[i] - x[i] / nx;
  const T ndiff = l2_norm(diff);
  LossResult<T> r;
  r.value = ndiff;
  r.grad_y.assign(n, T{0});
  const T dguard = std::max(ndiff, static_cast<T>(kEpsGuard));
  for (std::size_t i = 0; i < n; ++i) r.grad_y[i] = diff[i] / dguard;
  return r;
}

template <class T>
LossResult<T> loss_eval(LossVariant v, const std::vector<T>& y, const std::vector<T>& x, T k = T{1}) {
  switch (v) {
    case LossVariant::joint: return loss_joint(y, x, k);
    case LossVariant::joint_l1: return loss_joint_l1(y, x, k);
    case LossVariant::objective_only: return loss_objective_only(y, x);
  }
  throw ConfigError("loss_eval: bad variant");
}

// ∂L/∂X for the gradient-through-X ablation. With X̂ = X/‖X‖ and
// g = ∂L/∂X̂ (= dir for L2 first term, sign pattern for L1):
// ∂L/∂X = (g − X̂(X̂·g))/‖X‖. The training loop scatters this through
// A via spmv (A symmetric).
template <class T>
std::vector<T> loss_grad_x(LossVariant v, const std::vector<T>& y, const std::vector<T>& x, T /*k*/ = T{1}) {
  if (y.size() != x.size()) throw ShapeError("loss_grad_x: length mismatch");
  const std::size_t n = y.size();
  const T nx = detail::checked_x_norm(x);
  std::vector<T> xhat(n), diff(n);
  for (std::size_t i = 0; i < n; ++i) {
    xhat[i] = x[i] / nx;
    diff[i] = y[i] - xhat[i];
  }
  std::vector<T> g(n);
  if (v == LossVariant::joint_l1) {
    for (std::size_t i = 0; i < n; ++i) g[i] = -(diff[i] > T{0} ? T{1} : (diff[i] < T{0} ? T{-1} : T{0}));
  } else {
    const T ndiff = std::max(l2_norm(diff), static_cast<T>(kEpsGuard));
    for (std::size_t i = 0; i < n; ++i) g[i] = -diff[i] / ndiff;
  }
  T proj{0};
  for (std::size_t i = 0; i < n; ++i) proj += xhat[i] * g[i];
  std::vector<T> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = (g[i] - xhat[i] * proj) / nx;
  return out;
}

// MSE against fixed labels for the supervised baseline, with gradient.
template <class T>
LossResult<T> loss_mse(const std::vector<T>& y, const std::vector<T>& labels) {
  if (y.size() != labels.size()) throw ShapeError("loss_mse: length mismatch");
  const std::size_t n = y.size();
  if (n == 0) throw ShapeError("loss_mse: empty input");
  LossResult<T> r;
  r.grad_y.assign(n, T{0});
  T acc{0};
  const T inv = T{1} / static_cast<T>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const T d = y[i] - labels[i];
    acc += d * d;
    r.grad_y[i] = T{2} * inv * d;
  }
  r.value = acc * inv;
  return r;
}

}  // namespace cul
