#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "cul/error.hpp"
#include "cul/graph.hpp"
#include "cul/rng.hpp"

namespace cul {

enum class GraphKind { scale_free, barabasi_albert, powerlaw_cluster };

inline const char* to_string(GraphKind k) {
  switch (k) {
    case GraphKind::scale_free: return "sf";
    case GraphKind::barabasi_albert: return "ba";
    case GraphKind::powerlaw_cluster: return "pl";
  }
  return "?";
}

inline GraphKind graph_kind_from_string(const std::string& s) {
  if (s == "sf" || s == "scale-free" || s == "scale_free") return GraphKind::scale_free;
  if (s == "ba" || s == "barabasi-albert" || s == "barabasi_albert") return GraphKind::barabasi_albert;
  if (s == "pl" || s == "powerlaw-cluster" || s == "powerlaw_cluster") return GraphKind::powerlaw_cluster;
  throw ConfigError("unknown graph kind: " + s);
}

struct GeneratorSpec {
  GraphKind kind = GraphKind::barabasi_albert;
  std::int64_t n = 1000;
  std::int64_t m = 4;     // attachment count (BA/PL)
  double p = 0.05;        // triangle probability (PL)
  std::uint64_t seed = 0;
};

namespace detail {

// m distinct targets drawn uniformly from a multiset of node ids (the
// preferential-attachment trick: multiplicity equals degree). Shared by
// the BA and PL generators so that PL with p=0 consumes the random
// stream identically to BA and yields the same edge set.
inline std::vector<std::int32_t> sample_distinct_targets(const std::vector<std::int32_t>& repeated,
                                                         std::int64_t m, Rng& rng) {
  std::vector<std::int32_t> out;
  out.reserve(static_cast<std::size_t>(m));
  while (static_cast<std::int64_t>(out.size()) < m) {
    const std::int32_t cand = repeated[rng.uniform_int(repeated.size())];
    if (std::find(out.begin(), out.end(), cand) == out.end()) out.push_back(cand);
  }
  return out;
}

}  // namespace detail

// Preferential attachment from m isolated seed nodes; node m attaches to
// all of them, later nodes sample m distinct targets by degree.
inline Graph generate_barabasi_albert(std::int64_t n, std::int64_t m, Rng rng) {
  std::vector<std::pair<std::int32_t, std::int32_t>> edges;
  edges.reserve(static_cast<std::size_t>((n - m) * m));
  std::vector<std::int32_t> repeated;
  repeated.reserve(static_cast<std::size_t>(2 * (n - m) * m));
  std::vector<std::int32_t> targets(static_cast<std::size_t>(m));
  for (std::int64_t i = 0; i < m; ++i) targets[static_cast<std::size_t>(i)] = static_cast<std::int32_t>(i);
  for (std::int64_t source = m; source < n; ++source) {
    const std::int32_t s32 = static_cast<std::int32_t>(source);
    for (const std::int32_t t : targets) {
      edges.emplace_back(s32, t);
      repeated.push_back(t);
    }
    repeated.insert(repeated.end(), static_cast<std::size_t>(m), s32);
    if (source + 1 < n) targets = detail::sample_distinct_targets(repeated, m, rng);
  }
  return build_graph(n, std::move(edges));
}

// Holme–Kim powerlaw-cluster model: after each preferential attachment,
// each remaining link closes a triangle with probability p (a random
// neighbor of the last preferential target not yet linked), falling back
// to preferential attachment otherwise. p=0 reduces exactly to BA.
inline Graph generate_powerlaw_cluster(std::int64_t n, std::int64_t m, double p, Rng rng) {
  std::vector<std::pair<std::int32_t, std::int32_t>> edges;
  std::vector<std::vector<std::int32_t>> adj(static_cast<std::size_t>(n));
  std::vector<std::int32_t> repeated;
  repeated.reserve(static_cast<std::size_t>(2 * (n - m) * m));
  auto connected = [&adj](std::int32_t u, std::int32_t v) {
    const auto& a = adj[static_cast<std::size_t>(u)];
    return std::find(a.begin(), a.end(), v) != a.end();
  };
  auto add_edge = [&](std::int32_t u, std::int32_t v) {
    edges.emplace_back(u, v);
    adj[static_cast<std::size_t>(u)].push_back(v);
    adj[static_cast<std::size_t>(v)].push_back(u);
  };
  std::vector<std::int32_t> targets(static_cast<std::size_t>(m));
  for (std::int64_t i = 0; i < m; ++i) targets[static_cast<std::size_t>(i)] = static_cast<std::int32_t>(i);
  std::vector<std::int32_t> candidates;
  for (std::int64_t source = m; source < n; ++source) {
    const std::int32_t s32 = static_cast<std::int32_t>(source);
    std::int32_t anchor = targets[0];
    add_edge(s32, anchor);
    repeated.push_back(anchor);
    for (std::int64_t k = 1; k < m; ++k) {
      // The p==0 short-circuit keeps the random stream identical to BA.
      if (p > 0.0 && rng.uniform() < p) {
        candidates.clear();
        for (const std::int32_t nb : adj[static_cast<std::size_t>(anchor)])
          if (nb != s32 && !connected(s32, nb)) candidates.push_back(nb);
        if (!candidates.empty()) {
          const std::int32_t v = candidates[rng.uniform_int(candidates.size())];
          add_edge(s32, v);
          repeated.push_back(v);
          continue;
        }
      }
      const std::int32_t v = targets[static_cast<std::size_t>(k)];
      if (!connected(s32, v)) add_edge(s32, v);
      repeated.push_back(v);
      anchor = v;
    }
    repeated.insert(repeated.end(), static_cast<std::size_t>(m), s32);
    if (source + 1 < n) targets = detail::sample_distinct_targets(repeated, m, rng);
  }
  return build_graph(n, std::move(edges));
}

// Directed scale-free preferential attachment (alpha/beta/gamma mixture
// over a seed triangle), symmetrized to a simple undirected graph.
// In/out choices decompose as degree-proportional vs uniform so each
// draw is O(1) instead of a linear scan.
inline Graph generate_scale_free(std::int64_t n, double alpha, double beta, double gamma,
                                 double delta_in, double delta_out, Rng rng) {
  if (n < 3) throw ConfigError("scale-free generator needs n >= 3");
  if (alpha < 0 || beta < 0 || gamma < 0 || std::fabs(alpha + beta + gamma - 1.0) > 1e-9)
    throw ConfigError("scale-free generator: alpha + beta + gamma must equal 1");
  std::vector<std::pair<std::int32_t, std::int32_t>> arcs = {{0, 1}, {1, 2}, {2, 0}};
  std::vector<std::int32_t> heads = {1, 2, 0};  // multiplicity = in-degree
  std::vector<std::int32_t> tails = {0, 1, 2};  // multiplicity = out-degree
  std::int64_t nv = 3;
  auto choose_in = [&]() -> std::int32_t {
    const double total = static_cast<double>(arcs.size()) + delta_in * static_cast<double>(nv);
    if (rng.uniform() * total < static_cast<double>(arcs.size()))
      return heads[rng.uniform_int(heads.size())];
    return static_cast<std::int32_t>(rng.uniform_int(static_cast<std::uint64_t>(nv)));
  };
  auto choose_out = [&]() -> std::int32_t {
    const double total = static_cast<double>(arcs.size()) + delta_out * static_cast<double>(nv);
    if (rng.uniform() * total < static_cast<double>(arcs.size()))
      return tails[rng.uniform_int(tails.size())];
    return static_cast<std::int32_t>(rng.uniform_int(static_cast<std::uint64_t>(nv)));
  };
  while (nv < n) {
    const double r = rng.uniform();
    std::int32_t v, w;
    if (r < alpha) {
      w = choose_in();
      v = static_cast<std::int32_t>(nv++);
    } else if (r < alpha + beta) {
      v = choose_out();
      w = choose_in();
    } else {
      v = choose_out();
      w = static_cast<std::int32_t>(nv++);
    }
    arcs.emplace_back(v, w);
    tails.push_back(v);
    heads.push_back(w);
  }
  return build_graph(nv, std::move(arcs));
}

// Overload taking an explicit stream so callers can derive independent
// per-graph streams from one seed.
inline Graph generate(const GeneratorSpec& spec, Rng rng) {
  if (spec.n <= 0) throw ConfigError("generate: n must be positive");
  switch (spec.kind) {
    case GraphKind::barabasi_albert:
      if (spec.m < 1 || spec.n <= spec.m) throw ConfigError("generate: need n > m >= 1");
      return generate_barabasi_albert(spec.n, spec.m, rng);
    case GraphKind::powerlaw_cluster:
      if (spec.m < 1 || spec.n <= spec.m) throw ConfigError("generate: need n > m >= 1");
      if (spec.p < 0.0 || spec.p > 1.0) throw ConfigError("generate: need 0 <= p <= 1");
      return generate_powerlaw_cluster(spec.n, spec.m, spec.p, rng);
    case GraphKind::scale_free:
      return generate_scale_free(spec.n, 0.41, 0.54, 0.05, 0.2, 0.0, rng);
  }
  throw ConfigError("generate: unknown kind");
}

inline Graph generate(const GeneratorSpec& spec) { return generate(spec, Rng(spec.seed)); }

}  // namespace cul
