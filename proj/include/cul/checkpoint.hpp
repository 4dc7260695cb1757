#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "cul/error.hpp"
#include "cul/matrix.hpp"
#include "cul/model.hpp"
#include "cul/version.hpp"

namespace cul {

// =====================================================================
// Versioned JSON checkpoints. Numbers are emitted with shortest
// round-trip precision, so save → load → infer reproduces scores
// bit-identically.
// =====================================================================

struct CheckpointMeta {
  std::uint64_t seed = 0;
  int epochs = 0;
  std::string mode = "cul";  // "cul" or "csl"
  std::string loss = "joint";
  double k = 1.0;
  double final_loss = 0.0;
};

struct Checkpoint {
  int version = kFormatVersion;
  CulModel<double> model;
  CheckpointMeta meta;
};

namespace detail {

inline nlohmann::json matrix_to_json(const Matrix<double>& m) {
  return {{"rows", m.rows}, {"cols", m.cols}, {"data", m.data}};
}

inline Matrix<double> matrix_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
    throw ArtifactError("checkpoint: malformed matrix entry");
  const std::int64_t r = j.at("rows").get<std::int64_t>();
  const std::int64_t c = j.at("cols").get<std::int64_t>();
  const auto data = j.at("data").get<std::vector<double>>();
  if (r < 0 || c < 0 || static_cast<std::size_t>(r * c) != data.size())
    throw ArtifactError("checkpoint: matrix shape disagrees with data length");
  Matrix<double> m(r, c);
  m.data = data;
  return m;
}

}  // namespace detail

// Shape and finiteness invariants; throws ArtifactError on violation.
inline void validate_checkpoint(const Checkpoint& c) {
  const auto& e = c.model.enc;
  auto check_finite = [](const Matrix<double>& m, const char* what) {
    if (!all_finite(m)) throw ArtifactError(std::string("checkpoint: non-finite values in ") + what);
  };
  switch (e.kind) {
    case EncoderKind::gcn:
      if (e.w.size() != 2 || e.w[0].rows != e.feat_dim || e.w[0].cols != e.emb_dim ||
          e.w[1].rows != e.emb_dim || e.w[1].cols != e.emb_dim)
        throw ArtifactError("checkpoint: encoder shapes inconsistent");
      break;
    case EncoderKind::sage:
      if (e.w.size() != 2 || e.w[0].rows != 2 * e.feat_dim || e.w[0].cols != e.emb_dim ||
          e.w[1].rows != 2 * e.emb_dim || e.w[1].cols != e.emb_dim)
        throw ArtifactError("checkpoint: encoder shapes inconsistent");
      break;
    case EncoderKind::gat: {
      if (e.gat.size() != 2 || e.gat[0].size() != static_cast<std::size_t>(kGatHeadsLayer0) ||
          e.gat[1].size() != 1 || e.emb_dim % kGatHeadsLayer0 != 0)
        throw ArtifactError("checkpoint: encoder head layout inconsistent");
      const std::int64_t dh = e.emb_dim / kGatHeadsLayer0;
      for (const auto& h : e.gat[0])
        if (h.w.rows != e.feat_dim || h.w.cols != dh || h.a.rows != 1 || h.a.cols != 2 * dh)
          throw ArtifactError("checkpoint: encoder shapes inconsistent");
      const auto& h1 = e.gat[1][0];
      if (h1.w.rows != e.emb_dim || h1.w.cols != e.emb_dim || h1.a.rows != 1 || h1.a.cols != 2 * e.emb_dim)
        throw ArtifactError("checkpoint: encoder shapes inconsistent");
      break;
    }
  }
  for (const auto* m : c.model.param_list()) check_finite(*m, "parameters");
  const auto& d = c.model.dec;
  if (d.w.empty() || d.w.size() != d.b.size()) throw ArtifactError("checkpoint: decoder layer lists inconsistent");
  std::int64_t prev = e.emb_dim;
  for (std::size_t l = 0; l < d.w.size(); ++l) {
    if (d.w[l].rows != prev || d.b[l].rows != 1 || d.b[l].cols != d.w[l].cols)
      throw ArtifactError("checkpoint: decoder shapes inconsistent");
    prev = d.w[l].cols;
  }
  if (prev != 1) throw ArtifactError("checkpoint: decoder must end in a single score column");
}

inline nlohmann::json checkpoint_to_json(const Checkpoint& c) {
  nlohmann::json j;
  j["version"] = c.version;
  j["encoder_kind"] = to_string(c.model.enc.kind);
  j["feat_dim"] = c.model.enc.feat_dim;
  j["emb_dim"] = c.model.enc.emb_dim;
  nlohmann::json enc;
  enc["w"] = nlohmann::json::array();
  for (const auto& m : c.model.enc.w) enc["w"].push_back(detail::matrix_to_json(m));
  enc["gat"] = nlohmann::json::array();
  for (const auto& layer : c.model.enc.gat) {
    nlohmann::json jl = nlohmann::json::array();
    for (const auto& h : layer)
      jl.push_back({{"w", detail::matrix_to_json(h.w)}, {"a", detail::matrix_to_json(h.a)}});
    enc["gat"].push_back(jl);
  }
  j["encoder"] = enc;
  nlohmann::json dec;
  dec["w"] = nlohmann::json::array();
  dec["b"] = nlohmann::json::array();
  for (const auto& m : c.model.dec.w) dec["w"].push_back(detail::matrix_to_json(m));
  for (const auto& m : c.model.dec.b) dec["b"].push_back(detail::matrix_to_json(m));
  j["decoder"] = dec;
  j["meta"] = {{"seed", c.meta.seed},       {"epochs", c.meta.epochs}, {"mode", c.meta.mode},
               {"loss", c.meta.loss},       {"k", c.meta.k},           {"final_loss", c.meta.final_loss},
               {"tool_version", kToolVersion}};
  return j;
}

inline Checkpoint checkpoint_from_json(const nlohmann::json& j) {
  Checkpoint c;
  if (!j.is_object() || !j.contains("version")) throw ArtifactError("checkpoint: missing version tag");
  c.version = j.at("version").get<int>();
  if (c.version != kFormatVersion)
    throw ArtifactError("checkpoint: unsupported format version " + std::to_string(c.version));
  try {
    c.model.enc.kind = encoder_kind_from_string(j.at("encoder_kind").get<std::string>());
  } catch (const ConfigError& e) {
    throw ArtifactError(std::string("checkpoint: ") + e.what());
  }
  c.model.enc.feat_dim = j.at("feat_dim").get<int>();
  c.model.enc.emb_dim = j.at("emb_dim").get<int>();
  const auto& enc = j.at("encoder");
  for (const auto& m : enc.at("w")) c.model.enc.w.push_back(detail::matrix_from_json(m));
  for (const auto& layer : enc.at("gat")) {
    std::vector<GatHeadParams<double>> heads;
    for (const auto& h : layer)
      heads.push_back({detail::matrix_from_json(h.at("w")), detail::matrix_from_json(h.at("a"))});
    c.model.enc.gat.push_back(std::move(heads));
  }
  const auto& dec = j.at("decoder");
  for (const auto& m : dec.at("w")) c.model.dec.w.push_back(detail::matrix_from_json(m));
  for (const auto& m : dec.at("b")) c.model.dec.b.push_back(detail::matrix_from_json(m));
  const auto& meta = j.at("meta");
  c.meta.seed = meta.at("seed").get<std::uint64_t>();
  c.meta.epochs = meta.at("epochs").get<int>();
  c.meta.mode = meta.at("mode").get<std::string>();
  c.meta.loss = meta.at("loss").get<std::string>();
  c.meta.k = meta.at("k").get<double>();
  c.meta.final_loss = meta.at("final_loss").get<double>();
  validate_checkpoint(c);
  return c;
}

inline void save_checkpoint(const std::string& path, const Checkpoint& c) {
  validate_checkpoint(c);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open checkpoint for writing: " + path);
  out << checkpoint_to_json(c).dump(2) << '\n';
  if (!out) throw IoError("failed writing checkpoint: " + path);
}

inline Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ArtifactError(std::string("checkpoint: invalid JSON: ") + e.what());
  }
  return checkpoint_from_json(j);
}

}  // namespace cul
