#pragma once

#include <cmath>
#include <cstdint>

#include "cul/matrix.hpp"

namespace cul {

// =====================================================================
// Adam optimizer state, one instance per parameter tensor.
// =====================================================================
template <class T>
struct AdamState {
  Matrix<T> m;  // first moment
  Matrix<T> v;  // second moment
  std::int64_t t = 0;
  T lr = static_cast<T>(1e-3);
  T beta1 = static_cast<T>(0.9);
  T beta2 = static_cast<T>(0.999);
  T eps = static_cast<T>(1e-8);

  static AdamState like(const Matrix<T>& param, T lr_in) {
    AdamState s;
    s.m = Matrix<T>(param.rows, param.cols);
    s.v = Matrix<T>(param.rows, param.cols);
    s.lr = lr_in;
    return s;
  }
};

// Standard Adam with bias correction; updates param and state in place.
template <class T>
void adam_step(Matrix<T>& param, const Matrix<T>& grad, AdamState<T>& state) {
  if (!param.same_shape(grad) || !param.same_shape(state.m)) throw ShapeError("adam_step: shape mismatch");
  state.t += 1;
  const T b1 = state.beta1, b2 = state.beta2;
  const T bc1 = T{1} - static_cast<T>(std::pow(static_cast<double>(b1), static_cast<double>(state.t)));
  const T bc2 = T{1} - static_cast<T>(std::pow(static_cast<double>(b2), static_cast<double>(state.t)));
  T* __restrict p = param.data.data();
  T* __restrict m = state.m.data.data();
  T* __restrict v = state.v.data.data();
  const T* __restrict g = grad.data.data();
  const std::size_t n = param.data.size();
  for (std::size_t i = 0; i < n; ++i) {
    m[i] = b1 * m[i] + (T{1} - b1) * g[i];
    v[i] = b2 * v[i] + (T{1} - b2) * g[i] * g[i];
    const T mhat = m[i] / bc1;
    const T vhat = v[i] / bc2;
    p[i] -= state.lr * mhat / (std::sqrt(vhat) + state.eps);
  }
}

}  // namespace cul
