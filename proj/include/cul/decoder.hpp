#pragma once

#include <cstdint>
#include <vector>

#include "cul/error.hpp"
#include "cul/matrix.hpp"
#include "cul/rng.hpp"

namespace cul {

// =====================================================================
// Score decoder: a per-node MLP mapping embeddings to one scalar.
// Hidden layers use LeakyReLU(0.01); the final layer is linear so
// scores can take any sign before ranking.
// =====================================================================

inline constexpr double kDecoderSlope = 0.01;
inline const std::vector<int> kDecoderHiddenDims = {128, 64, 32};

template <class T>
struct DecoderParams {
  std::vector<Matrix<T>> w;  // layer weights, last maps to width 1
  std::vector<Matrix<T>> b;  // 1×width biases

  std::vector<Matrix<T>*> param_list() {
    std::vector<Matrix<T>*> out;
    for (std::size_t i = 0; i < w.size(); ++i) {
      out.push_back(&w[i]);
      out.push_back(&b[i]);
    }
    return out;
  }
  std::vector<const Matrix<T>*> param_list() const {
    std::vector<const Matrix<T>*> out;
    for (std::size_t i = 0; i < w.size(); ++i) {
      out.push_back(&w[i]);
      out.push_back(&b[i]);
    }
    return out;
  }
};

template <class T>
DecoderParams<T> zeros_like(const DecoderParams<T>& p) {
  DecoderParams<T> g = p;
  for (auto& m : g.w) m.fill(T{0});
  for (auto& m : g.b) m.fill(T{0});
  return g;
}

// Glorot weights in layer order, zero biases.
template <class T = double>
DecoderParams<T> init_decoder(int in_dim, Rng& rng, const std::vector<int>& hidden_dims = kDecoderHiddenDims) {
  if (in_dim < 1) throw ShapeError("init_decoder: bad input dim");
  DecoderParams<T> p;
  int prev = in_dim;
  for (int hd : hidden_dims) {
    if (hd < 1) throw ShapeError("init_decoder: bad hidden dim");
    p.w.push_back(glorot_init<T>(prev, hd, rng));
    p.b.push_back(Matrix<T>(1, hd));
    prev = hd;
  }
  p.w.push_back(glorot_init<T>(prev, 1, rng));
  p.b.push_back(Matrix<T>(1, 1));
  return p;
}

template <class T>
struct DecoderCache {
  std::vector<Matrix<T>> input;  // per-layer inputs
  std::vector<Matrix<T>> pre;    // per-layer pre-activations
};

// Returns an n×1 score column.
template <class T>
Matrix<T> decoder_forward(const Matrix<T>& z, const DecoderParams<T>& p, DecoderCache<T>& cache) {
  if (p.w.empty() || p.w.size() != p.b.size()) throw ShapeError("decoder_forward: malformed params");
  const std::size_t layers = p.w.size();
  cache.input.assign(layers, {});
  cache.pre.assign(layers, {});
  Matrix<T> h = z;
  for (std::size_t l = 0; l < layers; ++l) {
    if (h.cols != p.w[l].rows) throw ShapeError("decoder_forward: layer shape mismatch");
    cache.input[l] = h;
    Matrix<T> pre = matmul(h, p.w[l]);
    for (std::int64_t i = 0; i < pre.rows; ++i) {
      T* r = pre.row(i);
      const T* bias = p.b[l].row(0);
      for (std::int64_t c = 0; c < pre.cols; ++c) r[c] += bias[c];
    }
    cache.pre[l] = pre;
    h = (l + 1 == layers) ? pre : leaky_relu(pre, static_cast<T>(kDecoderSlope));
  }
  if (h.cols != 1) throw ShapeError("decoder_forward: final layer must have width 1");
  return h;
}

template <class T>
Matrix<T> decoder_forward(const Matrix<T>& z, const DecoderParams<T>& p) {
  DecoderCache<T> cache;
  return decoder_forward(z, p, cache);
}

// Gradients wrt all decoder params plus the embedding input.
template <class T>
Matrix<T> decoder_backward(const DecoderParams<T>& p, const DecoderCache<T>& cache, const Matrix<T>& grad_y,
                           DecoderParams<T>& grads) {
  const std::size_t layers = p.w.size();
  Matrix<T> d = grad_y;
  for (std::size_t li = layers; li-- > 0;) {
    if (li + 1 < layers) d = leaky_relu_backward(cache.pre[li], d, static_cast<T>(kDecoderSlope));
    grads.w[li] = matmul_tn(cache.input[li], d);
    Matrix<T> db(1, d.cols);
    for (std::int64_t i = 0; i < d.rows; ++i) {
      const T* r = d.row(i);
      for (std::int64_t c = 0; c < d.cols; ++c) db.at(0, c) += r[c];
    }
    grads.b[li] = std::move(db);
    d = matmul_nt(d, p.w[li]);
  }
  return d;  // gradient wrt z
}

}  // namespace cul
