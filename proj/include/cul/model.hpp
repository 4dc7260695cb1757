#pragma once

#include <chrono>
#include <cstdint>
#include <vector>

#include "cul/decoder.hpp"
#include "cul/encoder.hpp"
#include "cul/error.hpp"
#include "cul/graph.hpp"
#include "cul/matrix.hpp"
#include "cul/rng.hpp"

namespace cul {

// =====================================================================
// Full scoring model: two-layer graph encoder into a per-node MLP
// decoder emitting one scalar score per node.
// =====================================================================

template <class T>
struct CulModel {
  EncoderParams<T> enc;
  DecoderParams<T> dec;

  std::vector<Matrix<T>*> param_list() {
    std::vector<Matrix<T>*> out = enc.param_list();
    for (auto* m : dec.param_list()) out.push_back(m);
    return out;
  }
  std::vector<const Matrix<T>*> param_list() const {
    std::vector<const Matrix<T>*> out = enc.param_list();
    for (auto* m : dec.param_list()) out.push_back(m);
    return out;
  }
};

template <class T>
CulModel<T> zeros_like(const CulModel<T>& m) {
  return {zeros_like(m.enc), zeros_like(m.dec)};
}

// Encoder weights first, then decoder, single RNG stream: the draw
// order is part of the reproducibility contract.
template <class T = double>
CulModel<T> init_model(EncoderKind kind, int feat_dim, int emb_dim, Rng& rng,
                       const std::vector<int>& hidden_dims = kDecoderHiddenDims) {
  CulModel<T> m;
  m.enc = init_encoder<T>(kind, feat_dim, emb_dim, rng);
  m.dec = init_decoder<T>(emb_dim, rng, hidden_dims);
  return m;
}

// The only node feature is the degree scalar.
template <class T = double>
Matrix<T> build_features(const Graph& g) {
  Matrix<T> f(g.n, 1);
  for (std::int64_t i = 0; i < g.n; ++i) f.at(i, 0) = static_cast<T>(g.degrees[i]);
  return f;
}

template <class T>
struct ModelCache {
  EncoderCache<T> enc;
  DecoderCache<T> dec;
};

template <class T>
std::vector<T> model_forward(const Graph& g, const Matrix<T>& features, const CulModel<T>& m,
                             ModelCache<T>& cache) {
  Matrix<T> z = encoder_forward(g, features, m.enc, cache.enc);
  Matrix<T> y = decoder_forward(z, m.dec, cache.dec);
  return std::vector<T>(y.data.begin(), y.data.end());
}

template <class T>
std::vector<T> model_forward(const Graph& g, const Matrix<T>& features, const CulModel<T>& m) {
  ModelCache<T> cache;
  return model_forward(g, features, m, cache);
}

// Gradients for every parameter given dL/dY.
template <class T>
CulModel<T> model_backward(const Graph& g, const CulModel<T>& m, const ModelCache<T>& cache,
                           const std::vector<T>& grad_y) {
  Matrix<T> gy(static_cast<std::int64_t>(grad_y.size()), 1);
  for (std::size_t i = 0; i < grad_y.size(); ++i) gy.data[i] = grad_y[i];
  CulModel<T> grads;
  grads.enc = zeros_like(m.enc);
  grads.dec = zeros_like(m.dec);
  Matrix<T> dz = decoder_backward(m.dec, cache.dec, gy, grads.dec);
  grads.enc = encoder_backward(g, m.enc, cache.enc, dz);
  return grads;
}

template <class T>
struct InferResult {
  std::vector<T> scores;
  double seconds = 0.0;  // forward pass only; degree features precomputed
};

// One forward pass with wall time. Feature construction (a copy of the
// precomputed degree array) stays outside the timed region, as does
// everything about loading the graph.
//
// Scores estimate the dominant eigenvector, whose canonical
// representative is the non-negative one; the trained Y lands on either
// sign of that direction depending on initialization, so the global
// sign is normalized the same way power_iteration_ec normalizes its
// iterate. model_forward stays raw.
template <class T>
InferResult<T> infer_scores(const CulModel<T>& m, const Graph& g) {
  const Matrix<T> features = build_features<T>(g);
  ModelCache<T> cache;
  const auto t0 = std::chrono::steady_clock::now();
  InferResult<T> r;
  r.scores = model_forward(g, features, m, cache);
  T total = T{0};
  for (const T& v : r.scores) total += v;
  if (total < T{0})
    for (T& v : r.scores) v = -v;
  const auto t1 = std::chrono::steady_clock::now();
  r.seconds = std::chrono::duration<double>(t1 - t0).count();
  return r;
}

template <class Dst, class Src>
CulModel<Dst> cast_model(const CulModel<Src>& m) {
  CulModel<Dst> out;
  out.enc.kind = m.enc.kind;
  out.enc.feat_dim = m.enc.feat_dim;
  out.enc.emb_dim = m.enc.emb_dim;
  for (const auto& w : m.enc.w) out.enc.w.push_back(cast_matrix<Src, Dst>(w));
  out.enc.gat.resize(m.enc.gat.size());
  for (std::size_t l = 0; l < m.enc.gat.size(); ++l)
    for (const auto& h : m.enc.gat[l])
      out.enc.gat[l].push_back({cast_matrix<Src, Dst>(h.w), cast_matrix<Src, Dst>(h.a)});
  for (const auto& w : m.dec.w) out.dec.w.push_back(cast_matrix<Src, Dst>(w));
  for (const auto& b : m.dec.b) out.dec.b.push_back(cast_matrix<Src, Dst>(b));
  return out;
}

}  // namespace cul
