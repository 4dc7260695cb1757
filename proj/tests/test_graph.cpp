#include <catch2/catch_amalgamated.hpp>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "cul/generators.hpp"
#include "cul/graph.hpp"
#include "cul/matrix.hpp"

using namespace cul;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& tag) {
  static int counter = 0;
  return fs::temp_directory_path() / ("cul_graph_test_" + tag + "_" + std::to_string(counter++) + ".edges");
}

fs::path write_file(const std::string& tag, const std::string& content) {
  const fs::path p = temp_file(tag);
  std::ofstream out(p);
  out << content;
  return p;
}

bool connected(const Graph& g) {
  if (g.n == 0) return false;
  std::vector<char> seen(static_cast<std::size_t>(g.n), 0);
  std::vector<std::int32_t> stack = {0};
  seen[0] = 1;
  std::int64_t count = 1;
  while (!stack.empty()) {
    const std::int32_t u = stack.back();
    stack.pop_back();
    for (const std::int32_t* p = g.neighbors_begin(u); p != g.neighbors_end(u); ++p)
      if (!seen[static_cast<std::size_t>(*p)]) {
        seen[static_cast<std::size_t>(*p)] = 1;
        ++count;
        stack.push_back(*p);
      }
  }
  return count == g.n;
}

// Global clustering: 3·triangles / open-or-closed wedges.
double transitivity(const Graph& g) {
  std::int64_t tri3 = 0, wedges = 0;
  for (std::int64_t u = 0; u < g.n; ++u) {
    const std::int64_t d = g.degrees[u];
    wedges += d * (d - 1) / 2;
    for (const std::int32_t* p = g.neighbors_begin(u); p != g.neighbors_end(u); ++p)
      for (const std::int32_t* q = p + 1; q != g.neighbors_end(u); ++q)
        if (g.has_edge(*p, *q)) ++tri3;
  }
  return wedges == 0 ? 0.0 : static_cast<double>(tri3) / static_cast<double>(wedges);
}

}  // namespace

TEST_CASE("build_graph canonicalizes edges into sorted CSR") {
  Graph g = build_graph(3, {{0, 1}, {1, 2}, {2, 0}});
  REQUIRE(g.n == 3);
  REQUIRE(g.num_edges() == 3);
  REQUIRE(g.row_offsets == std::vector<std::int64_t>{0, 2, 4, 6});
  for (std::int64_t i = 0; i < 3; ++i) REQUIRE(g.degrees[i] == 2);
  REQUIRE_NOTHROW(validate_graph(g));

  // duplicates, reversals, and self-loops are dropped
  Graph h = build_graph(3, {{0, 1}, {1, 0}, {0, 0}, {1, 2}, {1, 2}});
  REQUIRE(h.num_edges() == 2);
  REQUIRE(h.degree(1) == 2);
  REQUIRE(h.degree(0) == 1);
  REQUIRE_NOTHROW(validate_graph(h));
}

TEST_CASE("build_graph rejects out-of-range endpoints") {
  REQUIRE_THROWS_AS(build_graph(2, {{0, 5}}), ShapeError);
  REQUIRE_THROWS_AS(build_graph(2, {{-1, 0}}), ShapeError);
}

TEST_CASE("edge list parsing handles comments, blanks, and compaction") {
  const fs::path p = write_file("parse",
                                "# comment line\n"
                                "% matrix-market style comment\n"
                                "\n"
                                "10 5\n"
                                "  5   20 \n"
                                "20 10\n");
  Graph g = load_edge_list(p.string());
  REQUIRE(g.n == 3);  // ids 5, 10, 20 compacted in ascending order
  REQUIRE(g.num_edges() == 3);
  for (std::int64_t i = 0; i < 3; ++i) REQUIRE(g.degree(i) == 2);
  fs::remove(p);
}

TEST_CASE("edge list parse errors carry line numbers") {
  const fs::path bad = write_file("bad", "1 2\n3 oops\n");
  try {
    load_edge_list(bad.string());
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  fs::remove(bad);

  const fs::path trailing = write_file("trailing", "1 2 3\n");
  REQUIRE_THROWS_AS(load_edge_list(trailing.string()), ParseError);
  fs::remove(trailing);

  const fs::path negative = write_file("negative", "-1 2\n");
  REQUIRE_THROWS_AS(load_edge_list(negative.string()), ParseError);
  fs::remove(negative);

  const fs::path empty = write_file("empty", "# nothing\n");
  REQUIRE_THROWS_AS(load_edge_list(empty.string()), ParseError);
  fs::remove(empty);

  REQUIRE_THROWS_AS(load_edge_list("/nonexistent/path/x.edges"), IoError);
}

TEST_CASE("save and load roundtrip preserves the graph") {
  Rng rng(17);
  Graph g = generate_barabasi_albert(60, 3, rng);
  const fs::path p = temp_file("roundtrip");
  save_edge_list(g, p.string());
  Graph h = load_edge_list(p.string());
  REQUIRE(g.n == h.n);
  REQUIRE(g.row_offsets == h.row_offsets);
  REQUIRE(g.col_indices == h.col_indices);
  fs::remove(p);
}

TEST_CASE("largest_component keeps the biggest piece and recompacts") {
  // triangle {0,1,2} plus disjoint edge {3,4}
  Graph g = build_graph(5, {{0, 1}, {1, 2}, {2, 0}, {3, 4}});
  Graph lcc = largest_component(g);
  REQUIRE(lcc.n == 3);
  REQUIRE(lcc.num_edges() == 3);
  REQUIRE(connected(lcc));

  const fs::path p = temp_file("lcc");
  save_edge_list(g, p.string());
  Graph h = load_edge_list(p.string(), true);
  REQUIRE(h.n == 3);
  fs::remove(p);
}

TEST_CASE("spmv equals dense multiply exactly") {
  Rng rng(23);
  Graph g = generate_barabasi_albert(48, 3, rng);
  std::vector<double> x(static_cast<std::size_t>(g.n));
  for (auto& v : x) v = rng.uniform(0.1, 1.0);
  std::vector<double> sparse = spmv(g, x);
  // dense row sums in the same ascending-j order; adding zero terms
  // does not perturb the accumulation
  for (std::int64_t i = 0; i < g.n; ++i) {
    double acc = 0.0;
    for (std::int64_t j = 0; j < g.n; ++j)
      if (g.has_edge(static_cast<std::int32_t>(i), static_cast<std::int32_t>(j)))
        acc += x[static_cast<std::size_t>(j)];
    REQUIRE(sparse[static_cast<std::size_t>(i)] == acc);
  }
  std::vector<double> wrong(static_cast<std::size_t>(g.n) + 1, 0.0);
  REQUIRE_THROWS_AS(spmv(g, wrong), ShapeError);
}

TEST_CASE("parallel spmv is bitwise identical to sequential") {
  Rng rng(31);
  Graph g = generate_barabasi_albert(5000, 4, rng);
  std::vector<double> x(static_cast<std::size_t>(g.n));
  for (auto& v : x) v = rng.uniform(-1.0, 1.0);
  std::vector<double> seq = spmv(g, x);
  for (int jobs : {2, 3, 8}) {
    std::vector<double> par = spmv_parallel(g, x, jobs);
    REQUIRE(std::memcmp(seq.data(), par.data(), seq.size() * sizeof(double)) == 0);
  }
}

TEST_CASE("spmm matches per-column spmv") {
  Rng rng(37);
  Graph g = generate_barabasi_albert(40, 2, rng);
  Matrix<double> h(g.n, 5);
  for (auto& v : h.data) v = rng.uniform(-1.0, 1.0);
  Matrix<double> out = spmm(g, h);
  for (std::int64_t c = 0; c < 5; ++c) {
    std::vector<double> col(static_cast<std::size_t>(g.n));
    for (std::int64_t i = 0; i < g.n; ++i) col[static_cast<std::size_t>(i)] = h.at(i, c);
    std::vector<double> ref = spmv(g, col);
    for (std::int64_t i = 0; i < g.n; ++i) REQUIRE(out.at(i, c) == ref[static_cast<std::size_t>(i)]);
  }
}

TEST_CASE("permute_graph relabels consistently") {
  Rng rng(41);
  Graph g = generate_barabasi_albert(30, 2, rng);
  std::vector<std::int32_t> perm(static_cast<std::size_t>(g.n));
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<std::int32_t>(i);
  for (std::size_t i = perm.size(); i-- > 1;)
    std::swap(perm[i], perm[rng.uniform_int(static_cast<std::uint64_t>(i) + 1)]);
  Graph pg = permute_graph(g, perm);
  REQUIRE_NOTHROW(validate_graph(pg));
  REQUIRE(pg.num_edges() == g.num_edges());
  for (std::int64_t u = 0; u < g.n; ++u) {
    REQUIRE(pg.degree(perm[static_cast<std::size_t>(u)]) == g.degree(static_cast<std::int32_t>(u)));
    for (const std::int32_t* p = g.neighbors_begin(u); p != g.neighbors_end(u); ++p)
      REQUIRE(pg.has_edge(perm[static_cast<std::size_t>(u)], perm[static_cast<std::size_t>(*p)]));
  }
}

TEST_CASE("preferential attachment graph has the exact edge count") {
  for (std::int64_t m : {1, 3, 4}) {
    Rng rng(5 + static_cast<std::uint64_t>(m));
    Graph g = generate_barabasi_albert(50, m, rng);
    REQUIRE(g.n == 50);
    REQUIRE(g.num_edges() == (50 - m) * m);
    REQUIRE(connected(g));
    REQUIRE_NOTHROW(validate_graph(g));
  }
}

TEST_CASE("generators are deterministic given the seed") {
  GeneratorSpec spec;
  spec.n = 120;
  spec.m = 3;
  spec.seed = 99;
  for (GraphKind kind : {GraphKind::barabasi_albert, GraphKind::powerlaw_cluster, GraphKind::scale_free}) {
    spec.kind = kind;
    Graph a = generate(spec);
    Graph b = generate(spec);
    REQUIRE(a.row_offsets == b.row_offsets);
    REQUIRE(a.col_indices == b.col_indices);
  }
}

TEST_CASE("triangle-step generator with p=0 reduces to plain preferential attachment") {
  Rng r1(77), r2(77);
  Graph ba = generate_barabasi_albert(200, 4, r1);
  Graph pl = generate_powerlaw_cluster(200, 4, 0.0, r2);
  REQUIRE(ba.row_offsets == pl.row_offsets);
  REQUIRE(ba.col_indices == pl.col_indices);
}

TEST_CASE("triangle step raises clustering and never exceeds the edge budget") {
  Rng r1(123), r2(123);
  Graph ba = generate_barabasi_albert(400, 3, r1);
  Graph pl = generate_powerlaw_cluster(400, 3, 0.9, r2);
  REQUIRE(pl.num_edges() <= (400 - 3) * 3);
  REQUIRE(connected(pl));
  CHECK(transitivity(pl) > transitivity(ba) + 0.05);
}

TEST_CASE("scale-free mixture generator yields a simple connected graph") {
  Rng rng(7);
  Graph g = generate_scale_free(300, 0.41, 0.54, 0.05, 0.2, 0.0, rng);
  REQUIRE(g.n == 300);
  REQUIRE_NOTHROW(validate_graph(g));
  REQUIRE(connected(g));
  // heavy-tailed: some hub collects far more than the mean degree
  std::int32_t dmax = 0;
  for (std::int64_t i = 0; i < g.n; ++i) dmax = std::max(dmax, g.degrees[i]);
  CHECK(dmax >= 20);
  REQUIRE_THROWS_AS(generate_scale_free(2, 0.41, 0.54, 0.05, 0.2, 0.0, Rng(1)), ConfigError);
}

TEST_CASE("generator spec validation") {
  GeneratorSpec spec;
  spec.kind = GraphKind::barabasi_albert;
  spec.n = 3;
  spec.m = 4;
  REQUIRE_THROWS_AS(generate(spec), ConfigError);
  spec.kind = GraphKind::powerlaw_cluster;
  spec.n = 10;
  spec.m = 2;
  spec.p = 1.5;
  REQUIRE_THROWS_AS(generate(spec), ConfigError);
  REQUIRE_THROWS_AS(graph_kind_from_string("nope"), ConfigError);
  REQUIRE(graph_kind_from_string("ba") == GraphKind::barabasi_albert);
  REQUIRE(graph_kind_from_string("powerlaw_cluster") == GraphKind::powerlaw_cluster);
}
