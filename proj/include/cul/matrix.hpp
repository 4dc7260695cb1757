#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "cul/error.hpp"
#include "cul/rng.hpp"

namespace cul {

// Norm denominators below this guard are treated as zero.
inline constexpr double kEpsGuard = 1e-12;

// =====================================================================
// Dense row-major matrix. Doubles are the test-mode default; float is
// available for inference benchmarking.
// =====================================================================
template <class T>
struct Matrix {
  std::int64_t rows = 0;
  std::int64_t cols = 0;
  std::vector<T> data;

  Matrix() = default;
  Matrix(std::int64_t r, std::int64_t c) : rows(r), cols(c), data(static_cast<std::size_t>(r * c), T{0}) {
    if (r < 0 || c < 0) throw ShapeError("Matrix: negative dimension");
  }

  static Matrix zeros(std::int64_t r, std::int64_t c) { return Matrix(r, c); }

  static Matrix identity(std::int64_t n) {
    Matrix m(n, n);
    for (std::int64_t i = 0; i < n; ++i) m.at(i, i) = T{1};
    return m;
  }

  // Row-major literal, e.g. Matrix<double>::from({{1,2},{3,4}}).
  static Matrix from(std::initializer_list<std::initializer_list<T>> v) {
    Matrix m(static_cast<std::int64_t>(v.size()), v.size() ? static_cast<std::int64_t>(v.begin()->size()) : 0);
    std::int64_t i = 0;
    for (const auto& r : v) {
      if (static_cast<std::int64_t>(r.size()) != m.cols) throw ShapeError("Matrix::from: ragged rows");
      std::int64_t j = 0;
      for (const T& x : r) m.at(i, j++) = x;
      ++i;
    }
    return m;
  }

  T* row(std::int64_t i) { return data.data() + i * cols; }
  const T* row(std::int64_t i) const { return data.data() + i * cols; }
  T& at(std::int64_t i, std::int64_t j) { return data[static_cast<std::size_t>(i * cols + j)]; }
  const T& at(std::int64_t i, std::int64_t j) const { return data[static_cast<std::size_t>(i * cols + j)]; }

  bool same_shape(const Matrix& o) const { return rows == o.rows && cols == o.cols; }

  void fill(T v) { std::fill(data.begin(), data.end(), v); }
};

template <class T>
void require_shape(bool ok, const std::string& what) {
  if (!ok) throw ShapeError(what);
}

template <class T>
bool all_finite(const Matrix<T>& m) {
  for (const T& x : m.data)
    if (!std::isfinite(static_cast<double>(x))) return false;
  return true;
}

template <class T>
void assert_finite(const Matrix<T>& m, const char* what) {
  if (!all_finite(m)) throw NumericError(std::string("non-finite values in ") + what);
}

// ---------------------------------------------------------------------
// Products. The i-k-j loop order keeps the accumulation order of the
// naive triple loop (deterministic) while letting the inner j loop
// vectorize; each output element is summed over k in ascending order.
// ---------------------------------------------------------------------
template <class T>
Matrix<T> matmul(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols != b.rows) throw ShapeError("matmul: inner dimensions differ");
  Matrix<T> out(a.rows, b.cols);
  const std::int64_t n = a.rows, kk = a.cols, m = b.cols;
  for (std::int64_t i = 0; i < n; ++i) {
    T* __restrict o = out.row(i);
    const T* __restrict ai = a.row(i);
    for (std::int64_t k = 0; k < kk; ++k) {
      const T aik = ai[k];
      if (aik == T{0}) continue;
      const T* __restrict bk = b.row(k);
      for (std::int64_t j = 0; j < m; ++j) o[j] += aik * bk[j];
    }
  }
  return out;
}

// aᵀ·b without materializing the transpose; accumulation over rows of a
// in ascending order (deterministic).
template <class T>
Matrix<T> matmul_tn(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows != b.rows) throw ShapeError("matmul_tn: row counts differ");
  Matrix<T> out(a.cols, b.cols);
  const std::int64_t n = a.rows, r = a.cols, m = b.cols;
  for (std::int64_t i = 0; i < n; ++i) {
    const T* __restrict ai = a.row(i);
    const T* __restrict bi = b.row(i);
    for (std::int64_t k = 0; k < r; ++k) {
      const T aik = ai[k];
      if (aik == T{0}) continue;
      T* __restrict ok = out.row(k);
      for (std::int64_t j = 0; j < m; ++j) ok[j] += aik * bi[j];
    }
  }
  return out;
}

template <class T>
Matrix<T> transpose(const Matrix<T>& a) {
  Matrix<T> out(a.cols, a.rows);
  for (std::int64_t i = 0; i < a.rows; ++i)
    for (std::int64_t j = 0; j < a.cols; ++j) out.at(j, i) = a.at(i, j);
  return out;
}

// a·bᵀ, used for grad·Wᵀ style backward products (b is small).
template <class T>
Matrix<T> matmul_nt(const Matrix<T>& a, const Matrix<T>& b) {
  return matmul(a, transpose(b));
}

// ---------------------------------------------------------------------
// Activations
// ---------------------------------------------------------------------
template <class T>
Matrix<T> leaky_relu(const Matrix<T>& x, T slope) {
  if (slope < T{0}) throw NumericError("leaky_relu: negative slope");
  Matrix<T> out = x;
  for (T& v : out.data) v = v >= T{0} ? v : slope * v;
  return out;
}

// grad ⊙ LeakyReLU'(pre); the derivative at 0 is taken as 1.
template <class T>
Matrix<T> leaky_relu_backward(const Matrix<T>& pre, const Matrix<T>& grad, T slope) {
  if (!pre.same_shape(grad)) throw ShapeError("leaky_relu_backward: shape mismatch");
  Matrix<T> out = grad;
  for (std::size_t idx = 0; idx < out.data.size(); ++idx)
    if (pre.data[idx] < T{0}) out.data[idx] *= slope;
  return out;
}

// ---------------------------------------------------------------------
// Norms
// ---------------------------------------------------------------------
template <class T>
T l2_norm(const T* x, std::int64_t n) {
  T s{0};
  for (std::int64_t i = 0; i < n; ++i) s += x[i] * x[i];
  return std::sqrt(s);
}

template <class T>
T l2_norm(const std::vector<T>& x) {
  return l2_norm(x.data(), static_cast<std::int64_t>(x.size()));
}

// Unit-normalize; norms at or below the epsilon guard are a hard error.
// Row-wise uses in the encoders handle zero rows locally instead.
template <class T>
std::vector<T> l2_normalize(const std::vector<T>& x) {
  const T n = l2_norm(x);
  if (!(static_cast<double>(n) > kEpsGuard)) throw ZeroNormError("l2_normalize: zero-norm vector");
  std::vector<T> out = x;
  for (T& v : out) v /= n;
  return out;
}

// ---------------------------------------------------------------------
// Initialization
// ---------------------------------------------------------------------
// Glorot-uniform: entries in ±sqrt(6/(rows+cols)), drawn row-major so the
// layout is part of the determinism contract.
template <class T = double>
Matrix<T> glorot_init(std::int64_t rows, std::int64_t cols, Rng& rng) {
  if (rows <= 0 || cols <= 0) throw ShapeError("glorot_init: non-positive dims");
  const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
  Matrix<T> m(rows, cols);
  for (T& v : m.data) v = static_cast<T>(rng.uniform(-limit, limit));
  return m;
}

template <class Src, class Dst>
Matrix<Dst> cast_matrix(const Matrix<Src>& a) {
  Matrix<Dst> out(a.rows, a.cols);
  for (std::size_t i = 0; i < a.data.size(); ++i) out.data[i] = static_cast<Dst>(a.data[i]);
  return out;
}

}  // namespace cul
