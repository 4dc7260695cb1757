#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "cul/error.hpp"
#include "cul/matrix.hpp"

namespace cul {

// =====================================================================
// Undirected simple graph in CSR form. Each edge is stored in both
// directions; column indices are strictly ascending within a row.
// Immutable after construction and safe to share across threads.
// =====================================================================
struct Graph {
  std::int64_t n = 0;
  std::vector<std::int64_t> row_offsets;  // length n+1
  std::vector<std::int32_t> col_indices;  // length 2|E|
  std::vector<std::int32_t> degrees;      // length n

  std::int64_t num_nodes() const { return n; }
  std::int64_t num_edges() const { return static_cast<std::int64_t>(col_indices.size()) / 2; }
  std::int32_t degree(std::int64_t v) const { return degrees[static_cast<std::size_t>(v)]; }

  const std::int32_t* neighbors_begin(std::int64_t v) const { return col_indices.data() + row_offsets[v]; }
  const std::int32_t* neighbors_end(std::int64_t v) const { return col_indices.data() + row_offsets[v + 1]; }

  // Neighbor rows are sorted, so membership is a binary search.
  bool has_edge(std::int32_t u, std::int32_t v) const {
    return std::binary_search(neighbors_begin(u), neighbors_end(u), v);
  }
};

// Builds a CSR graph from an undirected edge list. Self-loops and
// duplicate edges are dropped; endpoints must lie in [0, n).
inline Graph build_graph(std::int64_t n, std::vector<std::pair<std::int32_t, std::int32_t>> edges) {
  if (n <= 0) throw ParseError("build_graph: empty graph");
  std::vector<std::pair<std::int32_t, std::int32_t>> canon;
  canon.reserve(edges.size());
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n) throw ShapeError("build_graph: endpoint out of range");
    if (u == v) continue;
    canon.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(canon.begin(), canon.end());
  canon.erase(std::unique(canon.begin(), canon.end()), canon.end());

  Graph g;
  g.n = n;
  g.degrees.assign(static_cast<std::size_t>(n), 0);
  for (auto [u, v] : canon) {
    ++g.degrees[static_cast<std::size_t>(u)];
    ++g.degrees[static_cast<std::size_t>(v)];
  }
  g.row_offsets.assign(static_cast<std::size_t>(n) + 1, 0);
  for (std::int64_t i = 0; i < n; ++i) g.row_offsets[i + 1] = g.row_offsets[i] + g.degrees[i];
  g.col_indices.assign(static_cast<std::size_t>(g.row_offsets[n]), 0);
  std::vector<std::int64_t> cursor(g.row_offsets.begin(), g.row_offsets.end() - 1);
  // canon is sorted by (u,v), so per-row insertions stay ascending for u;
  // the v-side rows receive ascending u values as well.
  for (auto [u, v] : canon) g.col_indices[static_cast<std::size_t>(cursor[u]++)] = v;
  for (auto [u, v] : canon) g.col_indices[static_cast<std::size_t>(cursor[v]++)] = u;
  for (std::int64_t i = 0; i < n; ++i)
    std::sort(g.col_indices.begin() + g.row_offsets[i], g.col_indices.begin() + g.row_offsets[i + 1]);
  return g;
}

// Structural invariants: symmetry, sortedness, no self-loops, degree array.
inline void validate_graph(const Graph& g) {
  if (g.n <= 0 || g.row_offsets.size() != static_cast<std::size_t>(g.n) + 1)
    throw ShapeError("validate_graph: bad offsets");
  for (std::int64_t i = 0; i < g.n; ++i) {
    if (g.row_offsets[i + 1] - g.row_offsets[i] != g.degrees[i]) throw ShapeError("validate_graph: degree mismatch");
    const std::int32_t* b = g.neighbors_begin(i);
    const std::int32_t* e = g.neighbors_end(i);
    for (const std::int32_t* p = b; p != e; ++p) {
      if (*p < 0 || *p >= g.n) throw ShapeError("validate_graph: index out of range");
      if (*p == i) throw ShapeError("validate_graph: self-loop");
      if (p + 1 != e && *(p + 1) <= *p) throw ShapeError("validate_graph: row not strictly ascending");
      // symmetry: find i in row *p
      const std::int32_t* rb = g.neighbors_begin(*p);
      const std::int32_t* re = g.neighbors_end(*p);
      if (!std::binary_search(rb, re, static_cast<std::int32_t>(i)))
        throw ShapeError("validate_graph: asymmetric edge");
    }
  }
}

// ---------------------------------------------------------------------
// Edge-list files: two whitespace-separated non-negative integers per
// line; `#` or `%` lines are comments. Node ids are compacted to 0..n−1
// by ascending original id.
// ---------------------------------------------------------------------
inline Graph load_edge_list(const std::string& path, bool restrict_lcc = false);

inline void save_edge_list(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("save_edge_list: cannot open " + path);
  for (std::int64_t u = 0; u < g.n; ++u)
    for (const std::int32_t* p = g.neighbors_begin(u); p != g.neighbors_end(u); ++p)
      if (*p > u) out << u << ' ' << *p << '\n';
  if (!out) throw IoError("save_edge_list: write failure on " + path);
}

// Largest connected component, re-compacted by ascending original id.
// Ties go to the component containing the smallest node id.
inline Graph largest_component(const Graph& g) {
  std::vector<std::int32_t> comp(static_cast<std::size_t>(g.n), -1);
  std::int32_t ncomp = 0;
  std::vector<std::int64_t> size;
  std::vector<std::int32_t> stack;
  for (std::int64_t s = 0; s < g.n; ++s) {
    if (comp[s] != -1) continue;
    stack.push_back(static_cast<std::int32_t>(s));
    comp[s] = ncomp;
    std::int64_t c = 0;
    while (!stack.empty()) {
      const std::int32_t u = stack.back();
      stack.pop_back();
      ++c;
      for (const std::int32_t* p = g.neighbors_begin(u); p != g.neighbors_end(u); ++p)
        if (comp[*p] == -1) {
          comp[*p] = ncomp;
          stack.push_back(*p);
        }
    }
    size.push_back(c);
    ++ncomp;
  }
  std::int32_t best = 0;
  for (std::int32_t c = 1; c < ncomp; ++c)
    if (size[c] > size[best]) best = c;

  std::vector<std::int32_t> remap(static_cast<std::size_t>(g.n), -1);
  std::int32_t next = 0;
  for (std::int64_t v = 0; v < g.n; ++v)
    if (comp[v] == best) remap[v] = next++;
  std::vector<std::pair<std::int32_t, std::int32_t>> edges;
  for (std::int64_t u = 0; u < g.n; ++u) {
    if (comp[u] != best) continue;
    for (const std::int32_t* p = g.neighbors_begin(u); p != g.neighbors_end(u); ++p)
      if (*p > u) edges.emplace_back(remap[u], remap[*p]);
  }
  if (next == 0 || edges.empty()) throw ParseError("largest_component: empty graph");
  return build_graph(next, std::move(edges));
}

inline Graph load_edge_list(const std::string& path, bool restrict_lcc) {
  std::ifstream in(path);
  if (!in) throw IoError("load_edge_list: cannot open " + path);
  std::vector<std::pair<std::int64_t, std::int64_t>> raw;
  std::string line;
  std::int64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos) continue;
    if (line[pos] == '#' || line[pos] == '%') continue;
    std::istringstream ls(line);
    std::int64_t u, v;
    if (!(ls >> u >> v) || u < 0 || v < 0) {
      throw ParseError("load_edge_list: malformed line " + std::to_string(lineno) + " in " + path);
    }
    std::string trail;
    if (ls >> trail) throw ParseError("load_edge_list: trailing tokens on line " + std::to_string(lineno) + " in " + path);
    raw.emplace_back(u, v);
  }
  // Compact ids ascending.
  std::vector<std::int64_t> ids;
  ids.reserve(raw.size() * 2);
  for (auto [u, v] : raw) {
    ids.push_back(u);
    ids.push_back(v);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  if (ids.size() > (std::size_t{1} << 31)) throw ParseError("load_edge_list: too many nodes");
  std::vector<std::pair<std::int32_t, std::int32_t>> edges;
  edges.reserve(raw.size());
  auto compact = [&ids](std::int64_t x) {
    return static_cast<std::int32_t>(std::lower_bound(ids.begin(), ids.end(), x) - ids.begin());
  };
  for (auto [u, v] : raw)
    if (u != v) edges.emplace_back(compact(u), compact(v));
  if (ids.empty() || edges.empty()) throw ParseError("load_edge_list: empty graph in " + path);
  Graph g = build_graph(static_cast<std::int64_t>(ids.size()), std::move(edges));
  if (restrict_lcc) g = largest_component(g);
  return g;
}

// ---------------------------------------------------------------------
// Sparse products. out[i] = Σ_{j∈N(i)} x[j], neighbors visited in
// ascending id order (deterministic summation).
// ---------------------------------------------------------------------
template <class T>
void spmv(const Graph& g, const T* x, T* out) {
  for (std::int64_t i = 0; i < g.n; ++i) {
    T acc{0};
    const std::int32_t* p = g.neighbors_begin(i);
    const std::int32_t* e = g.neighbors_end(i);
    for (; p != e; ++p) acc += x[*p];
    out[i] = acc;
  }
}

template <class T>
std::vector<T> spmv(const Graph& g, const std::vector<T>& x) {
  if (static_cast<std::int64_t>(x.size()) != g.n) throw ShapeError("spmv: length mismatch");
  std::vector<T> out(static_cast<std::size_t>(g.n));
  spmv(g, x.data(), out.data());
  return out;
}

// Row-parallel variant for benchmarks. Rows are computed independently,
// so results match the sequential mode bit-for-bit; no such promise is
// made for future scheduling changes, per the concurrency contract.
template <class T>
std::vector<T> spmv_parallel(const Graph& g, const std::vector<T>& x, int jobs) {
  if (static_cast<std::int64_t>(x.size()) != g.n) throw ShapeError("spmv: length mismatch");
  std::vector<T> out(static_cast<std::size_t>(g.n));
  if (jobs <= 1 || g.n < 4096) {
    spmv(g, x.data(), out.data());
    return out;
  }
  std::vector<std::thread> threads;
  const std::int64_t chunk = (g.n + jobs - 1) / jobs;
  for (int t = 0; t < jobs; ++t) {
    const std::int64_t lo = t * chunk, hi = std::min<std::int64_t>(g.n, lo + chunk);
    if (lo >= hi) break;
    threads.emplace_back([&, lo, hi] {
      for (std::int64_t i = lo; i < hi; ++i) {
        T acc{0};
        for (const std::int32_t* p = g.neighbors_begin(i); p != g.neighbors_end(i); ++p) acc += x[*p];
        out[static_cast<std::size_t>(i)] = acc;
      }
    });
  }
  for (auto& th : threads) th.join();
  return out;
}

// out_i = Σ_{j∈N(i)} h_j (row-wise sparse × dense).
template <class T>
Matrix<T> spmm(const Graph& g, const Matrix<T>& h) {
  if (h.rows != g.n) throw ShapeError("spmm: row count mismatch");
  Matrix<T> out(h.rows, h.cols);
  const std::int64_t d = h.cols;
  for (std::int64_t i = 0; i < g.n; ++i) {
    T* __restrict o = out.row(i);
    for (const std::int32_t* p = g.neighbors_begin(i); p != g.neighbors_end(i); ++p) {
      const T* __restrict hj = h.row(*p);
      for (std::int64_t c = 0; c < d; ++c) o[c] += hj[c];
    }
  }
  return out;
}

// Relabels nodes: new id of v is perm[v]. perm must be a permutation.
inline Graph permute_graph(const Graph& g, const std::vector<std::int32_t>& perm) {
  if (static_cast<std::int64_t>(perm.size()) != g.n) throw ShapeError("permute_graph: length mismatch");
  std::vector<std::pair<std::int32_t, std::int32_t>> edges;
  edges.reserve(static_cast<std::size_t>(g.num_edges()));
  for (std::int64_t u = 0; u < g.n; ++u)
    for (const std::int32_t* p = g.neighbors_begin(u); p != g.neighbors_end(u); ++p)
      if (*p > u) edges.emplace_back(perm[u], perm[*p]);
  return build_graph(g.n, std::move(edges));
}

}  // namespace cul
