#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cul/adam.hpp"
#include "cul/checkpoint.hpp"
#include "cul/eigen.hpp"
#include "cul/error.hpp"
#include "cul/graph.hpp"
#include "cul/loss.hpp"
#include "cul/model.hpp"
#include "cul/rng.hpp"

namespace cul {

// =====================================================================
// Training. One graph is one minibatch (full-batch gradients); the
// target X = A·Y is recomputed from the current scores each time a
// graph is visited and treated as a constant unless the
// gradient-through-X ablation is switched on.
// =====================================================================

enum class TrainMode { cul, csl };

inline const char* to_string(TrainMode m) { return m == TrainMode::cul ? "cul" : "csl"; }

inline TrainMode train_mode_from_string(const std::string& s) {
  if (s == "cul") return TrainMode::cul;
  if (s == "csl") return TrainMode::csl;
  throw ConfigError("unknown training mode: " + s);
}

struct TrainConfig {
  EncoderKind encoder = EncoderKind::gcn;
  TrainMode mode = TrainMode::cul;
  LossVariant loss = LossVariant::joint;
  double k = 1.0;
  int epochs = 150;
  double lr = 1e-3;
  std::uint64_t seed = 0;
  int emb_dim = 128;
  std::vector<int> hidden_dims = kDecoderHiddenDims;
  bool shuffle = false;         // seed-driven epoch order when true
  bool grad_through_x = false;  // ablation: let gradients flow into A·Y
  std::vector<std::string> train_graphs;  // path metadata, used by the CLI layer
  std::vector<std::string> eval_graphs;
};

inline void validate_train_config(const TrainConfig& cfg) {
  if (cfg.epochs < 1) throw ConfigError("train: epochs must be >= 1");
  if (!(cfg.lr > 0.0)) throw ConfigError("train: lr must be positive");
  if (cfg.loss != LossVariant::objective_only && !(cfg.k > 0.0)) throw ConfigError("train: k must be positive");
  if (cfg.emb_dim < 1) throw ConfigError("train: emb_dim must be >= 1");
}

struct TrainResult {
  Checkpoint checkpoint;
  std::vector<double> loss_history;  // per-epoch mean over training graphs
  double final_y_norm = 0.0;         // mean ‖Y‖₂ over graphs at the last epoch
};

namespace detail {

// Shared loop body for both modes. `per_graph_loss` maps (graph index,
// scores) → LossResult with gradient wrt the scores.
template <class LossFn>
TrainResult train_loop(const TrainConfig& cfg, const std::vector<Graph>& graphs, LossFn&& per_graph_loss) {
  validate_train_config(cfg);
  if (graphs.empty()) throw ConfigError("train: need at least one training graph");

  // Stream 1 initializes parameters, stream 2 drives the optional
  // shuffle, so toggling the shuffle never changes the init.
  Rng root(cfg.seed);
  Rng init_rng = root.split(1);
  Rng shuffle_rng = root.split(2);
  CulModel<double> model = init_model<double>(cfg.encoder, 1, cfg.emb_dim, init_rng, cfg.hidden_dims);

  std::vector<Matrix<double>*> params = model.param_list();
  std::vector<AdamState<double>> opt;
  opt.reserve(params.size());
  for (const auto* p : params) opt.push_back(AdamState<double>::like(*p, cfg.lr));

  std::vector<Matrix<double>> features;
  features.reserve(graphs.size());
  for (const auto& g : graphs) features.push_back(build_features<double>(g));
  std::vector<ModelCache<double>> caches(graphs.size());

  TrainResult result;
  result.loss_history.assign(static_cast<std::size_t>(cfg.epochs), 0.0);
  std::vector<double> final_norms(graphs.size(), 0.0);

  std::vector<std::size_t> order(graphs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (cfg.shuffle)
      for (std::size_t i = order.size(); i-- > 1;)
        std::swap(order[i], order[shuffle_rng.uniform_int(static_cast<std::uint64_t>(i) + 1)]);
    double epoch_loss = 0.0;
    for (std::size_t oi = 0; oi < order.size(); ++oi) {
      const std::size_t gi = order[oi];
      const Graph& g = graphs[gi];
      std::vector<double> y = model_forward(g, features[gi], model, caches[gi]);
      LossResult<double> lr_res;
      try {
        lr_res = per_graph_loss(gi, g, y);
      } catch (const ZeroNormError& e) {
        throw ZeroNormError("epoch " + std::to_string(epoch + 1) + "/" + std::to_string(cfg.epochs) +
                            ", graph " + std::to_string(gi) + ": " + e.what());
      }
      epoch_loss += lr_res.value;
      CulModel<double> grads = model_backward(g, model, caches[gi], lr_res.grad_y);
      std::vector<Matrix<double>*> gparams = grads.param_list();
      for (std::size_t pi = 0; pi < params.size(); ++pi) adam_step(*params[pi], *gparams[pi], opt[pi]);
      if (epoch + 1 == cfg.epochs) final_norms[gi] = l2_norm(y);
    }
    result.loss_history[static_cast<std::size_t>(epoch)] = epoch_loss / static_cast<double>(graphs.size());
  }

  double norm_acc = 0.0;
  for (double v : final_norms) norm_acc += v;
  result.final_y_norm = norm_acc / static_cast<double>(graphs.size());

  result.checkpoint.version = kFormatVersion;
  result.checkpoint.model = std::move(model);
  result.checkpoint.meta.seed = cfg.seed;
  result.checkpoint.meta.epochs = cfg.epochs;
  result.checkpoint.meta.mode = to_string(cfg.mode);
  result.checkpoint.meta.loss = cfg.mode == TrainMode::csl ? "mse" : to_string(cfg.loss);
  result.checkpoint.meta.k = cfg.k;
  result.checkpoint.meta.final_loss = result.loss_history.back();
  return result;
}

}  // namespace detail

// Unsupervised training against the per-epoch moving target X = A·Y.
inline TrainResult train_cul(const TrainConfig& cfg, const std::vector<Graph>& graphs) {
  if (cfg.mode != TrainMode::cul) throw ConfigError("train_cul: config mode is not cul");
  const double k = cfg.k;
  const LossVariant variant = cfg.loss;
  const bool through_x = cfg.grad_through_x;
  return detail::train_loop(cfg, graphs, [&](std::size_t, const Graph& g, const std::vector<double>& y) {
    std::vector<double> x = compute_target_x(g, y);
    LossResult<double> r = loss_eval(variant, y, x, k);
    if (through_x) {
      std::vector<double> gx = loss_grad_x(variant, y, x, k);
      std::vector<double> scattered = spmv(g, gx);
      for (std::size_t i = 0; i < r.grad_y.size(); ++i) r.grad_y[i] += scattered[i];
    }
    return r;
  });
}

// Supervised baseline: MSE against unit-norm power-iteration scores,
// computed once per graph up front.
inline TrainResult train_csl(const TrainConfig& cfg, const std::vector<Graph>& graphs) {
  if (cfg.mode != TrainMode::csl) throw ConfigError("train_csl: config mode is not csl");
  std::vector<std::vector<double>> labels;
  labels.reserve(graphs.size());
  for (const auto& g : graphs) labels.push_back(power_iteration_ec(g).values);
  return detail::train_loop(cfg, graphs, [&](std::size_t gi, const Graph&, const std::vector<double>& y) {
    return loss_mse(y, labels[gi]);
  });
}

inline TrainResult train(const TrainConfig& cfg, const std::vector<Graph>& graphs) {
  return cfg.mode == TrainMode::cul ? train_cul(cfg, graphs) : train_csl(cfg, graphs);
}

}  // namespace cul
