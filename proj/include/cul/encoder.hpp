#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "cul/error.hpp"
#include "cul/graph.hpp"
#include "cul/matrix.hpp"
#include "cul/rng.hpp"

namespace cul {

// =====================================================================
// The three neighborhood-aggregation layers (GCN, GraphSAGE, GAT), each
// with a hand-derived backward pass, stacked two deep.
// =====================================================================

enum class EncoderKind { gcn, sage, gat };

inline const char* to_string(EncoderKind k) {
  switch (k) {
    case EncoderKind::gcn: return "gcn";
    case EncoderKind::sage: return "sage";
    case EncoderKind::gat: return "gat";
  }
  return "?";
}

inline EncoderKind encoder_kind_from_string(const std::string& s) {
  if (s == "gcn") return EncoderKind::gcn;
  if (s == "sage") return EncoderKind::sage;
  if (s == "gat") return EncoderKind::gat;
  throw ConfigError("unknown encoder kind: " + s);
}

inline constexpr int kEncoderLayers = 2;       // aggregation depth K
inline constexpr int kGatHeadsLayer0 = 4;      // concatenated on layer 0
inline constexpr double kEncoderSlope = 0.2;   // LeakyReLU slope for SAGE/GAT activations and GAT attention

template <class T>
struct GatHeadParams {
  Matrix<T> w;  // d_in × d_head
  Matrix<T> a;  // 1 × 2·d_head attention vector
};

// Unified parameter container. GCN and SAGE use `w` (two matrices);
// GAT uses `gat` (per-layer head lists). Parameter traversal order is
// part of the determinism contract: w0, w1 for GCN/SAGE; per layer then
// per head (w, a) for GAT.
template <class T>
struct EncoderParams {
  EncoderKind kind = EncoderKind::gcn;
  int feat_dim = 1;
  int emb_dim = 128;
  std::vector<Matrix<T>> w;
  std::vector<std::vector<GatHeadParams<T>>> gat;

  std::vector<Matrix<T>*> param_list() {
    std::vector<Matrix<T>*> out;
    for (auto& m : w) out.push_back(&m);
    for (auto& layer : gat)
      for (auto& h : layer) {
        out.push_back(&h.w);
        out.push_back(&h.a);
      }
    return out;
  }
  std::vector<const Matrix<T>*> param_list() const {
    std::vector<const Matrix<T>*> out;
    for (auto& m : w) out.push_back(&m);
    for (auto& layer : gat)
      for (auto& h : layer) {
        out.push_back(&h.w);
        out.push_back(&h.a);
      }
    return out;
  }
};

template <class T>
EncoderParams<T> zeros_like(const EncoderParams<T>& p) {
  EncoderParams<T> g = p;
  for (auto& m : g.w) m.fill(T{0});
  for (auto& layer : g.gat)
    for (auto& h : layer) {
      h.w.fill(T{0});
      h.a.fill(T{0});
    }
  return g;
}

// Glorot weights, drawn in traversal order.
template <class T = double>
EncoderParams<T> init_encoder(EncoderKind kind, int feat_dim, int emb_dim, Rng& rng) {
  if (feat_dim < 1 || emb_dim < 1) throw ShapeError("init_encoder: bad dims");
  EncoderParams<T> p;
  p.kind = kind;
  p.feat_dim = feat_dim;
  p.emb_dim = emb_dim;
  switch (kind) {
    case EncoderKind::gcn:
      p.w.push_back(glorot_init<T>(feat_dim, emb_dim, rng));
      p.w.push_back(glorot_init<T>(emb_dim, emb_dim, rng));
      break;
    case EncoderKind::sage:
      p.w.push_back(glorot_init<T>(2 * feat_dim, emb_dim, rng));
      p.w.push_back(glorot_init<T>(2 * emb_dim, emb_dim, rng));
      break;
    case EncoderKind::gat: {
      if (emb_dim % kGatHeadsLayer0 != 0) throw ShapeError("init_encoder: emb_dim must divide into GAT heads");
      const int dh = emb_dim / kGatHeadsLayer0;
      p.gat.resize(2);
      for (int h = 0; h < kGatHeadsLayer0; ++h)
        p.gat[0].push_back({glorot_init<T>(feat_dim, dh, rng), glorot_init<T>(1, 2 * dh, rng)});
      p.gat[1].push_back({glorot_init<T>(emb_dim, emb_dim, rng), glorot_init<T>(1, 2 * emb_dim, rng)});
      break;
    }
  }
  return p;
}

// ---------------------------------------------------------------------
// GCN: H = D̂^{-1/2}(A+I)D̂^{-1/2} · Q · W with D̂ii = degree(i)+1.
// No bias and no activation; the decoder supplies nonlinearity.
// ---------------------------------------------------------------------

// Â·M for the self-loop-normalized adjacency; symmetric, so it is its
// own adjoint in the backward pass.
template <class T>
Matrix<T> gcn_norm_spmm(const Graph& g, const Matrix<T>& m) {
  if (m.rows != g.n) throw ShapeError("gcn_norm_spmm: row count mismatch");
  std::vector<T> s(static_cast<std::size_t>(g.n));
  for (std::int64_t i = 0; i < g.n; ++i)
    s[static_cast<std::size_t>(i)] = T{1} / std::sqrt(static_cast<T>(g.degrees[i] + 1));
  Matrix<T> tmp = m;
  for (std::int64_t i = 0; i < g.n; ++i) {
    T* r = tmp.row(i);
    for (std::int64_t c = 0; c < tmp.cols; ++c) r[c] *= s[static_cast<std::size_t>(i)];
  }
  Matrix<T> acc = spmm(g, tmp);
  for (std::int64_t i = 0; i < g.n; ++i) {
    T* o = acc.row(i);
    const T* ti = tmp.row(i);
    const T si = s[static_cast<std::size_t>(i)];
    for (std::int64_t c = 0; c < acc.cols; ++c) o[c] = si * (o[c] + ti[c]);
  }
  return acc;
}

template <class T>
Matrix<T> gcn_forward(const Graph& g, const Matrix<T>& q, const Matrix<T>& w) {
  if (q.cols != w.rows) throw ShapeError("gcn_forward: shape mismatch");
  return matmul(gcn_norm_spmm(g, q), w);
}

// ---------------------------------------------------------------------
// GraphSAGE with the full-neighborhood mean aggregator:
//   h_v = LeakyReLU(W·[q_v ‖ mean_{u∈N(v)} q_u]), then row-wise L2
// normalization (zero rows stay zero; isolated nodes use a zero mean).
// ---------------------------------------------------------------------
template <class T>
struct SageLayerCache {
  Matrix<T> concat;   // [q ‖ mean]
  Matrix<T> pre;      // concat·W
  Matrix<T> act;      // LeakyReLU(pre)
  std::vector<T> rnorm;
  Matrix<T> out;      // act row-normalized
};

template <class T>
Matrix<T> sage_neighbor_mean(const Graph& g, const Matrix<T>& q) {
  Matrix<T> m = spmm(g, q);
  for (std::int64_t i = 0; i < g.n; ++i) {
    const std::int32_t d = g.degrees[i];
    if (d == 0) continue;  // rows of spmm are already zero
    T* r = m.row(i);
    const T inv = T{1} / static_cast<T>(d);
    for (std::int64_t c = 0; c < m.cols; ++c) r[c] *= inv;
  }
  return m;
}

template <class T>
Matrix<T> sage_forward_cached(const Graph& g, const Matrix<T>& q, const Matrix<T>& w, SageLayerCache<T>& cache) {
  if (q.rows != g.n || 2 * q.cols != w.rows) throw ShapeError("sage_forward: shape mismatch");
  Matrix<T> mean = sage_neighbor_mean(g, q);
  cache.concat = Matrix<T>(g.n, 2 * q.cols);
  for (std::int64_t i = 0; i < g.n; ++i) {
    T* c = cache.concat.row(i);
    const T* qi = q.row(i);
    const T* mi = mean.row(i);
    for (std::int64_t j = 0; j < q.cols; ++j) c[j] = qi[j];
    for (std::int64_t j = 0; j < q.cols; ++j) c[q.cols + j] = mi[j];
  }
  cache.pre = matmul(cache.concat, w);
  cache.act = leaky_relu(cache.pre, static_cast<T>(kEncoderSlope));
  cache.out = cache.act;
  cache.rnorm.assign(static_cast<std::size_t>(g.n), T{0});
  for (std::int64_t i = 0; i < g.n; ++i) {
    T* r = cache.out.row(i);
    const T nr = l2_norm(r, cache.out.cols);
    cache.rnorm[static_cast<std::size_t>(i)] = nr;
    if (static_cast<double>(nr) > kEpsGuard)
      for (std::int64_t c = 0; c < cache.out.cols; ++c) r[c] /= nr;
    else
      for (std::int64_t c = 0; c < cache.out.cols; ++c) r[c] = T{0};
  }
  return cache.out;
}

template <class T>
Matrix<T> sage_forward(const Graph& g, const Matrix<T>& q, const Matrix<T>& w) {
  SageLayerCache<T> cache;
  return sage_forward_cached(g, q, w, cache);
}

// Backward through normalize → LeakyReLU → linear → mean-aggregate.
template <class T>
Matrix<T> sage_backward_cached(const Graph& g, const Matrix<T>& q, const Matrix<T>& w,
                               const SageLayerCache<T>& cache, const Matrix<T>& grad_out, Matrix<T>& grad_w) {
  // d/dx of x/‖x‖ applied per row: (g − (g·x̂)x̂)/‖x‖; zero rows pass zero.
  Matrix<T> d_act(grad_out.rows, grad_out.cols);
  for (std::int64_t i = 0; i < grad_out.rows; ++i) {
    const T nr = cache.rnorm[static_cast<std::size_t>(i)];
    T* da = d_act.row(i);
    if (!(static_cast<double>(nr) > kEpsGuard)) continue;
    const T* go = grad_out.row(i);
    const T* oi = cache.out.row(i);
    T dot{0};
    for (std::int64_t c = 0; c < grad_out.cols; ++c) dot += go[c] * oi[c];
    for (std::int64_t c = 0; c < grad_out.cols; ++c) da[c] = (go[c] - dot * oi[c]) / nr;
  }
  Matrix<T> d_pre = leaky_relu_backward(cache.pre, d_act, static_cast<T>(kEncoderSlope));
  grad_w = matmul_tn(cache.concat, d_pre);
  Matrix<T> d_concat = matmul_nt(d_pre, w);
  // Split the concat gradient: self part plus mean-aggregation part.
  const std::int64_t din = q.cols;
  Matrix<T> d_q(q.rows, din);
  Matrix<T> d_mean(q.rows, din);
  for (std::int64_t i = 0; i < q.rows; ++i) {
    const T* dc = d_concat.row(i);
    T* dq = d_q.row(i);
    T* dm = d_mean.row(i);
    for (std::int64_t c = 0; c < din; ++c) dq[c] = dc[c];
    for (std::int64_t c = 0; c < din; ++c) dm[c] = dc[din + c];
  }
  // mean_i = (1/deg_i)·Σ_{j∈N(i)} q_j  ⇒  dq_j += Σ_{i∈N(j)} dmean_i/deg_i.
  for (std::int64_t i = 0; i < q.rows; ++i) {
    const std::int32_t d = g.degrees[i];
    if (d == 0) continue;
    T* dm = d_mean.row(i);
    const T inv = T{1} / static_cast<T>(d);
    for (std::int64_t c = 0; c < din; ++c) dm[c] *= inv;
  }
  Matrix<T> scattered = spmm(g, d_mean);
  for (std::size_t idx = 0; idx < d_q.data.size(); ++idx) d_q.data[idx] += scattered.data[idx];
  return d_q;
}

// ---------------------------------------------------------------------
// GAT. Attention logits e_ij = LeakyReLU(aᵀ[Wh_i ‖ Wh_j], slope 0.2)
// are row-softmaxed over N(i) ∪ {i} (self-attention included); each
// head output is LeakyReLU(Σ_j α_ij W h_j, slope 0.2). Heads are
// concatenated on layer 0; layer 1 has a single head.
// ---------------------------------------------------------------------

// Sorted closed neighborhoods N(i) ∪ {i} in one flat array.
struct ClosedAdj {
  std::vector<std::int64_t> offsets;  // n+1
  std::vector<std::int32_t> idx;
};

inline ClosedAdj build_closed_adj(const Graph& g) {
  ClosedAdj c;
  c.offsets.assign(static_cast<std::size_t>(g.n) + 1, 0);
  for (std::int64_t i = 0; i < g.n; ++i) c.offsets[i + 1] = c.offsets[i] + g.degrees[i] + 1;
  c.idx.resize(static_cast<std::size_t>(c.offsets[g.n]));
  for (std::int64_t i = 0; i < g.n; ++i) {
    std::int64_t at = c.offsets[i];
    bool placed = false;
    for (const std::int32_t* p = g.neighbors_begin(i); p != g.neighbors_end(i); ++p) {
      if (!placed && static_cast<std::int64_t>(*p) > i) {
        c.idx[static_cast<std::size_t>(at++)] = static_cast<std::int32_t>(i);
        placed = true;
      }
      c.idx[static_cast<std::size_t>(at++)] = *p;
    }
    if (!placed) c.idx[static_cast<std::size_t>(at++)] = static_cast<std::int32_t>(i);
  }
  return c;
}

template <class T>
struct GatHeadCache {
  Matrix<T> s;            // q·W
  std::vector<T> u;       // aᵀ_left · s_i
  std::vector<T> vright;  // aᵀ_right · s_j
  std::vector<T> logits;  // raw t_ij before the attention LeakyReLU
  std::vector<T> alpha;   // softmax coefficients, flat per closed edge
  Matrix<T> zpre;         // Σ α_ij s_j before the output LeakyReLU
};

// Attention coefficients alone, exposed so tests can pin them; alpha is
// flat over the closed adjacency rows.
template <class T>
std::vector<T> gat_attention(const Graph& g, const ClosedAdj& closed, const Matrix<T>& h,
                             const Matrix<T>& w, const Matrix<T>& a, GatHeadCache<T>* cache = nullptr) {
  if (h.cols != w.rows) throw ShapeError("gat_attention: shape mismatch");
  const std::int64_t dh = w.cols;
  if (a.rows != 1 || a.cols != 2 * dh) throw ShapeError("gat_attention: attention vector must be 1×2d'");
  Matrix<T> s = matmul(h, w);
  std::vector<T> u(static_cast<std::size_t>(g.n)), vright(static_cast<std::size_t>(g.n));
  for (std::int64_t i = 0; i < g.n; ++i) {
    const T* si = s.row(i);
    T ul{0}, vr{0};
    for (std::int64_t c = 0; c < dh; ++c) {
      ul += a.at(0, c) * si[c];
      vr += a.at(0, dh + c) * si[c];
    }
    u[static_cast<std::size_t>(i)] = ul;
    vright[static_cast<std::size_t>(i)] = vr;
  }
  std::vector<T> logits(closed.idx.size());
  std::vector<T> alpha(closed.idx.size());
  const T slope = static_cast<T>(kEncoderSlope);
  for (std::int64_t i = 0; i < g.n; ++i) {
    const std::int64_t lo = closed.offsets[i], hi = closed.offsets[i + 1];
    T mx = -std::numeric_limits<T>::infinity();
    for (std::int64_t e = lo; e < hi; ++e) {
      const T t = u[static_cast<std::size_t>(i)] + vright[static_cast<std::size_t>(closed.idx[e])];
      logits[static_cast<std::size_t>(e)] = t;
      const T act = t >= T{0} ? t : slope * t;
      mx = std::max(mx, act);
    }
    T denom{0};
    for (std::int64_t e = lo; e < hi; ++e) {
      const T t = logits[static_cast<std::size_t>(e)];
      const T act = t >= T{0} ? t : slope * t;
      const T ex = std::exp(act - mx);
      alpha[static_cast<std::size_t>(e)] = ex;
      denom += ex;
    }
    for (std::int64_t e = lo; e < hi; ++e) alpha[static_cast<std::size_t>(e)] /= denom;
  }
  if (cache) {
    cache->s = std::move(s);
    cache->u = std::move(u);
    cache->vright = std::move(vright);
    cache->logits = std::move(logits);
    cache->alpha = alpha;
  }
  return alpha;
}

template <class T>
std::vector<T> gat_attention(const Graph& g, const Matrix<T>& h, const Matrix<T>& w, const Matrix<T>& a) {
  const ClosedAdj closed = build_closed_adj(g);
  return gat_attention(g, closed, h, w, a);
}

// One attention head: out = LeakyReLU(Σ_j α_ij s_j).
template <class T>
Matrix<T> gat_head_forward(const Graph& g, const ClosedAdj& closed, const Matrix<T>& h,
                           const GatHeadParams<T>& p, GatHeadCache<T>& cache) {
  gat_attention(g, closed, h, p.w, p.a, &cache);
  const std::int64_t dh = p.w.cols;
  cache.zpre = Matrix<T>(g.n, dh);
  for (std::int64_t i = 0; i < g.n; ++i) {
    T* z = cache.zpre.row(i);
    for (std::int64_t e = closed.offsets[i]; e < closed.offsets[i + 1]; ++e) {
      const T al = cache.alpha[static_cast<std::size_t>(e)];
      const T* sj = cache.s.row(closed.idx[static_cast<std::size_t>(e)]);
      for (std::int64_t c = 0; c < dh; ++c) z[c] += al * sj[c];
    }
  }
  return leaky_relu(cache.zpre, static_cast<T>(kEncoderSlope));
}

// Multi-head layer: concatenated head outputs.
template <class T>
Matrix<T> gat_forward(const Graph& g, const ClosedAdj& closed, const Matrix<T>& h,
                      const std::vector<GatHeadParams<T>>& heads, std::vector<GatHeadCache<T>>& caches) {
  if (heads.empty()) throw ShapeError("gat_forward: no heads");
  caches.assign(heads.size(), {});
  const std::int64_t dh = heads[0].w.cols;
  Matrix<T> out(g.n, dh * static_cast<std::int64_t>(heads.size()));
  for (std::size_t head = 0; head < heads.size(); ++head) {
    if (heads[head].w.cols != dh) throw ShapeError("gat_forward: heads disagree on width");
    Matrix<T> ho = gat_head_forward(g, closed, h, heads[head], caches[head]);
    for (std::int64_t i = 0; i < g.n; ++i) {
      const T* src = ho.row(i);
      T* dst = out.row(i) + static_cast<std::int64_t>(head) * dh;
      for (std::int64_t c = 0; c < dh; ++c) dst[c] = src[c];
    }
  }
  return out;
}

template <class T>
Matrix<T> gat_forward(const Graph& g, const Matrix<T>& h, const std::vector<GatHeadParams<T>>& heads) {
  const ClosedAdj closed = build_closed_adj(g);
  std::vector<GatHeadCache<T>> caches;
  return gat_forward(g, closed, h, heads, caches);
}

// Backward for one head; accumulates into grad (same shapes as params)
// and returns the gradient wrt the layer input h.
template <class T>
Matrix<T> gat_head_backward(const Graph& g, const ClosedAdj& closed, const Matrix<T>& h,
                            const GatHeadParams<T>& p, const GatHeadCache<T>& cache,
                            const Matrix<T>& grad_head_out, GatHeadParams<T>& grad) {
  const std::int64_t dh = p.w.cols;
  const T slope = static_cast<T>(kEncoderSlope);
  Matrix<T> dz = leaky_relu_backward(cache.zpre, grad_head_out, slope);
  Matrix<T> ds(g.n, dh);
  std::vector<T> du(static_cast<std::size_t>(g.n), T{0});
  std::vector<T> dvr(static_cast<std::size_t>(g.n), T{0});
  std::vector<T> dalpha;
  for (std::int64_t i = 0; i < g.n; ++i) {
    const std::int64_t lo = closed.offsets[i], hi = closed.offsets[i + 1];
    dalpha.assign(static_cast<std::size_t>(hi - lo), T{0});
    const T* dzi = dz.row(i);
    T sigma{0};
    for (std::int64_t e = lo; e < hi; ++e) {
      const std::int32_t j = closed.idx[static_cast<std::size_t>(e)];
      const T* sj = cache.s.row(j);
      T d{0};
      for (std::int64_t c = 0; c < dh; ++c) d += dzi[c] * sj[c];
      dalpha[static_cast<std::size_t>(e - lo)] = d;
      sigma += cache.alpha[static_cast<std::size_t>(e)] * d;
      // z_i = Σ α_ij s_j contributes α_ij·dz_i to ds_j.
      T* dsj = ds.row(j);
      const T al = cache.alpha[static_cast<std::size_t>(e)];
      for (std::int64_t c = 0; c < dh; ++c) dsj[c] += al * dzi[c];
    }
    for (std::int64_t e = lo; e < hi; ++e) {
      const std::int32_t j = closed.idx[static_cast<std::size_t>(e)];
      const T de = cache.alpha[static_cast<std::size_t>(e)] * (dalpha[static_cast<std::size_t>(e - lo)] - sigma);
      const T t = cache.logits[static_cast<std::size_t>(e)];
      const T dt = de * (t >= T{0} ? T{1} : slope);
      du[static_cast<std::size_t>(i)] += dt;
      dvr[static_cast<std::size_t>(j)] += dt;
    }
  }
  // u_i = a_left·s_i and vright_j = a_right·s_j.
  if (grad.a.rows != 1 || grad.a.cols != 2 * dh) grad.a = Matrix<T>(1, 2 * dh);
  for (std::int64_t k = 0; k < g.n; ++k) {
    const T* sk = cache.s.row(k);
    T* dsk = ds.row(k);
    const T duk = du[static_cast<std::size_t>(k)];
    const T dvk = dvr[static_cast<std::size_t>(k)];
    for (std::int64_t c = 0; c < dh; ++c) {
      grad.a.at(0, c) += duk * sk[c];
      grad.a.at(0, dh + c) += dvk * sk[c];
      dsk[c] += duk * p.a.at(0, c) + dvk * p.a.at(0, dh + c);
    }
  }
  grad.w = matmul_tn(h, ds);
  return matmul_nt(ds, p.w);
}

// ---------------------------------------------------------------------
// Two-layer encoder over all kinds.
// ---------------------------------------------------------------------
template <class T>
struct EncoderCache {
  ClosedAdj closed;                                        // GAT support
  std::array<Matrix<T>, kEncoderLayers> input;             // per-layer inputs
  std::array<Matrix<T>, kEncoderLayers> gcn_p;             // Â·q per layer
  std::array<SageLayerCache<T>, kEncoderLayers> sage;
  std::array<std::vector<GatHeadCache<T>>, kEncoderLayers> gat;
};

template <class T>
Matrix<T> encoder_forward(const Graph& g, const Matrix<T>& features, const EncoderParams<T>& p,
                          EncoderCache<T>& cache) {
  if (features.rows != g.n || features.cols != p.feat_dim) throw ShapeError("encoder_forward: feature shape mismatch");
  if (p.kind == EncoderKind::gat && cache.closed.offsets.empty()) cache.closed = build_closed_adj(g);
  Matrix<T> h = features;
  for (int layer = 0; layer < kEncoderLayers; ++layer) {
    cache.input[layer] = h;
    switch (p.kind) {
      case EncoderKind::gcn: {
        cache.gcn_p[layer] = gcn_norm_spmm(g, h);
        h = matmul(cache.gcn_p[layer], p.w[layer]);
        break;
      }
      case EncoderKind::sage: {
        h = sage_forward_cached(g, h, p.w[layer], cache.sage[layer]);
        break;
      }
      case EncoderKind::gat: {
        h = gat_forward(g, cache.closed, h, p.gat[layer], cache.gat[layer]);
        break;
      }
    }
  }
  return h;
}

template <class T>
Matrix<T> encoder_forward(const Graph& g, const Matrix<T>& features, const EncoderParams<T>& p) {
  EncoderCache<T> cache;
  return encoder_forward(g, features, p, cache);
}

// Reverse-mode gradients for all encoder parameters; returns grads in a
// container shaped like the params. The gradient wrt features is
// computed internally (layer chaining) but not exposed: features are
// graph-derived constants.
template <class T>
EncoderParams<T> encoder_backward(const Graph& g, const EncoderParams<T>& p, const EncoderCache<T>& cache,
                                  const Matrix<T>& grad_z) {
  EncoderParams<T> grads = zeros_like(p);
  Matrix<T> d = grad_z;
  for (int layer = kEncoderLayers - 1; layer >= 0; --layer) {
    switch (p.kind) {
      case EncoderKind::gcn: {
        // out = (Â·q)·w  ⇒  dw = (Â·q)ᵀ·d, dq = Â·(d·wᵀ).
        grads.w[layer] = matmul_tn(cache.gcn_p[layer], d);
        if (layer > 0) d = gcn_norm_spmm(g, matmul_nt(d, p.w[layer]));
        break;
      }
      case EncoderKind::sage: {
        d = sage_backward_cached(g, cache.input[layer], p.w[layer], cache.sage[layer], d, grads.w[layer]);
        break;
      }
      case EncoderKind::gat: {
        const auto& heads = p.gat[layer];
        const std::int64_t dh = heads[0].w.cols;
        Matrix<T> dnext(g.n, cache.input[layer].cols);
        for (std::size_t hh = 0; hh < heads.size(); ++hh) {
          Matrix<T> slice(g.n, dh);
          for (std::int64_t i = 0; i < g.n; ++i) {
            const T* src = d.row(i) + static_cast<std::int64_t>(hh) * dh;
            T* dst = slice.row(i);
            for (std::int64_t c = 0; c < dh; ++c) dst[c] = src[c];
          }
          Matrix<T> dh_in = gat_head_backward(g, cache.closed, cache.input[layer], heads[hh],
                                              cache.gat[layer][hh], slice, grads.gat[layer][hh]);
          for (std::size_t idx = 0; idx < dnext.data.size(); ++idx) dnext.data[idx] += dh_in.data[idx];
        }
        d = std::move(dnext);
        break;
      }
    }
  }
  return grads;
}

}  // namespace cul
