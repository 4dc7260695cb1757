#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "cul/generators.hpp"
#include "cul/graph.hpp"
#include "cul/metrics.hpp"
#include "cul/rng.hpp"
#include "cul/training.hpp"

namespace {

// Independent overlap oracle built on std::set.
double overlap_oracle(const std::vector<double>& pred, const std::vector<double>& truth, double pct) {
  const std::size_t n = pred.size();
  const std::size_t m = static_cast<std::size_t>(std::ceil(static_cast<double>(n) * pct / 100.0));
  auto top = [&](const std::vector<double>& s) {
    std::vector<std::int32_t> ids(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = static_cast<std::int32_t>(i);
    std::stable_sort(ids.begin(), ids.end(), [&](std::int32_t a, std::int32_t b) {
      if (s[static_cast<std::size_t>(a)] != s[static_cast<std::size_t>(b)])
        return s[static_cast<std::size_t>(a)] > s[static_cast<std::size_t>(b)];
      return a < b;
    });
    return std::set<std::int32_t>(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(m));
  };
  const std::set<std::int32_t> p = top(pred);
  const std::set<std::int32_t> t = top(truth);
  std::size_t inter = 0;
  for (std::int32_t id : p) inter += t.count(id);
  return static_cast<double>(inter) / static_cast<double>(m);
}

// Pair-counting U statistic, the textbook definition.
double pair_count_u(const std::vector<double>& a, const std::vector<double>& b) {
  double u = 0.0;
  for (double x : a)
    for (double y : b) {
      if (x < y)
        u += 1.0;
      else if (x == y)
        u += 0.5;
    }
  return u;
}

// Exact one-sided p by enumerating every assignment of the pooled
// values into a group of size n1; independent of ranks entirely.
double brute_force_p(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> pooled(a);
  pooled.insert(pooled.end(), b.begin(), b.end());
  const std::size_t n = pooled.size(), n1 = a.size();
  const double u_obs = pair_count_u(a, b);
  double hits = 0.0, all = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != n1) continue;
    std::vector<double> ga, gb;
    for (std::size_t i = 0; i < n; ++i) (mask >> i & 1u ? ga : gb).push_back(pooled[i]);
    all += 1.0;
    if (pair_count_u(ga, gb) <= u_obs + 1e-9) hits += 1.0;
  }
  return hits / all;
}

}  // namespace

TEST_CASE("rank_nodes orders by score with id tie-break") {
  std::vector<double> s = {0.3, 0.9, 0.1};
  std::vector<std::int32_t> r = cul::rank_nodes(s);
  CHECK(r == std::vector<std::int32_t>{1, 0, 2});

  std::vector<double> equal(5, 2.5);
  CHECK(cul::rank_nodes(equal) == std::vector<std::int32_t>{0, 1, 2, 3, 4});

  std::vector<double> ties = {1.0, 3.0, 3.0, 0.0};
  CHECK(cul::rank_nodes(ties) == std::vector<std::int32_t>{1, 2, 0, 3});

  std::vector<double> bad = {1.0, std::nan("")};
  CHECK_THROWS_AS(cul::rank_nodes(bad), cul::NumericError);

  // Output is always a permutation.
  cul::Rng rng(1);
  std::vector<double> rand(40);
  for (auto& x : rand) x = rng.uniform(-1.0, 1.0);
  std::vector<std::int32_t> p = cul::rank_nodes(rand);
  std::sort(p.begin(), p.end());
  for (std::size_t i = 0; i < p.size(); ++i) CHECK(p[i] == static_cast<std::int32_t>(i));
}

TEST_CASE("top_n_percent hand values") {
  std::vector<double> v(100);
  for (std::size_t i = 0; i < 100; ++i) v[i] = static_cast<double>(100 - i);
  CHECK(cul::top_n_percent(v, v, 10.0) == 1.0);

  // Predicted top-10 = ids 0..9, true top-10 = ids 5..14: overlap 5.
  std::vector<double> truth(100);
  for (std::size_t i = 0; i < 100; ++i) truth[i] = (i >= 5 && i < 15) ? 1000.0 - static_cast<double>(i) : -static_cast<double>(i);
  CHECK(cul::top_n_percent(v, truth, 10.0) == 0.5);

  // n=7 at 20% keeps m = ⌈1.4⌉ = 2.
  std::vector<double> p7(7, 0.0), t7(7, 0.0);
  p7[3] = 10.0;
  p7[5] = 9.0;
  t7[5] = 10.0;
  t7[6] = 9.0;
  CHECK(cul::top_n_percent(p7, t7, 20.0) == 0.5);

  // n=20 at 15%: m must be exactly 3, not a float-ceiling 4. The rank-4
  // ids disagree, so any off-by-one in m drops the accuracy below 1.
  std::vector<double> p20(20, 0.0), t20(20, 0.0);
  for (int i = 0; i < 3; ++i) {
    p20[static_cast<std::size_t>(i)] = 100.0 - i;
    t20[static_cast<std::size_t>(i)] = 100.0 - i;
  }
  p20[3] = 50.0;
  t20[19] = 50.0;
  CHECK(cul::top_n_percent(p20, t20, 15.0) == 1.0);

  CHECK(cul::top_n_percent(v, truth, 100.0) == 1.0);  // whole graph always matches itself

  std::vector<double> shorter = {1.0, 2.0};
  CHECK_THROWS_AS(cul::top_n_percent(v, shorter, 10.0), cul::ShapeError);
  CHECK_THROWS_AS(cul::top_n_percent(v, v, 0.0), cul::ConfigError);
  CHECK_THROWS_AS(cul::top_n_percent(v, v, -5.0), cul::ConfigError);
  CHECK_THROWS_AS(cul::top_n_percent(v, v, 100.5), cul::ConfigError);
  std::vector<double> empty;
  CHECK_THROWS_AS(cul::top_n_percent(empty, empty, 10.0), cul::ShapeError);
}

TEST_CASE("top_n_percent agrees with a set-based oracle") {
  cul::Rng rng(2);
  const double pcts[] = {5.0, 10.0, 15.0, 20.0, 33.3, 50.0, 100.0};
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform_int(50));
    std::vector<double> pred(n), truth(n);
    for (auto& x : pred) x = static_cast<double>(rng.uniform_int(12));  // ties likely
    for (auto& x : truth) x = rng.uniform(-1.0, 1.0);
    const double pct = pcts[rng.uniform_int(7)];
    INFO("rep " << rep << " n " << n << " pct " << pct);
    CHECK(cul::top_n_percent(pred, truth, pct) == overlap_oracle(pred, truth, pct));
  }
}

TEST_CASE("top_n_percent is invariant under strictly increasing transforms") {
  cul::Rng rng(3);
  std::vector<double> pred(60), truth(60);
  for (auto& x : pred) x = rng.uniform(-2.0, 2.0);
  for (auto& x : truth) x = rng.uniform(-2.0, 2.0);
  for (const double pct : {10.0, 25.0}) {
    const double base = cul::top_n_percent(pred, truth, pct);
    std::vector<double> scaled(pred), shifted(pred), cubed(pred);
    for (auto& x : scaled) x *= 2.0;
    for (auto& x : shifted) x += 10.0;
    for (auto& x : cubed) x = x * x * x;
    CHECK(cul::top_n_percent(scaled, truth, pct) == base);
    CHECK(cul::top_n_percent(shifted, truth, pct) == base);
    CHECK(cul::top_n_percent(cubed, truth, pct) == base);
  }
}

TEST_CASE("mann-whitney hand values") {
  // Every a below every b: U₁ = n₁n₂.
  cul::MwuResult r = cul::mann_whitney_u(std::vector<double>{1, 2}, std::vector<double>{3, 4});
  CHECK(r.u1 == 4.0);
  CHECK(r.exact);
  CHECK(r.p_one_sided == Catch::Approx(1.0).margin(1e-12));

  cul::MwuResult r2 = cul::mann_whitney_u(std::vector<double>{3, 4}, std::vector<double>{1, 2});
  CHECK(r2.u1 == 0.0);
  CHECK(r2.p_one_sided == Catch::Approx(1.0 / 6.0).margin(1e-12));

  cul::MwuResult r3 = cul::mann_whitney_u(std::vector<double>{1, 3}, std::vector<double>{2, 4});
  CHECK(r3.u1 == 3.0);

  // Complete separation over 20 assignments: p = 1/20.
  cul::MwuResult hi = cul::mann_whitney_u(std::vector<double>{5, 6, 7}, std::vector<double>{1, 2, 3});
  CHECK(hi.u1 == 0.0);
  CHECK(hi.exact);
  CHECK(hi.p_one_sided == Catch::Approx(0.05).margin(1e-12));
  cul::MwuResult lo = cul::mann_whitney_u(std::vector<double>{1, 2, 3}, std::vector<double>{5, 6, 7});
  CHECK(lo.u1 == 9.0);
  CHECK(lo.p_one_sided == Catch::Approx(1.0).margin(1e-12));

  // Swapping the samples complements the statistic.
  CHECK(hi.u1 + lo.u1 == 9.0);

  cul::MwuResult deg = cul::mann_whitney_u(std::vector<double>{2, 2}, std::vector<double>{2, 2, 2});
  CHECK(deg.degenerate);
  CHECK(deg.p_one_sided == 0.5);
  CHECK(deg.u1 == 3.0);  // all midranks equal, U sits at its mean

  std::vector<double> empty;
  CHECK_THROWS_AS(cul::mann_whitney_u(empty, std::vector<double>{1.0}), cul::ShapeError);
  CHECK_THROWS_AS(cul::mann_whitney_u(std::vector<double>{std::nan("")}, std::vector<double>{1.0}),
                  cul::NumericError);
}

TEST_CASE("mann-whitney statistic equals pair counting") {
  cul::Rng rng(4);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t n1 = 1 + static_cast<std::size_t>(rng.uniform_int(6));
    const std::size_t n2 = 1 + static_cast<std::size_t>(rng.uniform_int(6));
    std::vector<double> a(n1), b(n2);
    for (auto& x : a) x = static_cast<double>(rng.uniform_int(5));  // heavy ties
    for (auto& x : b) x = static_cast<double>(rng.uniform_int(5));
    cul::MwuResult r = cul::mann_whitney_u(a, b);
    INFO("rep " << rep);
    CHECK(r.u1 == Catch::Approx(pair_count_u(a, b)).margin(1e-9));
  }
}

TEST_CASE("mann-whitney exact p matches subset enumeration") {
  cul::Rng rng(5);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t n1 = 2 + static_cast<std::size_t>(rng.uniform_int(4));
    const std::size_t n2 = 2 + static_cast<std::size_t>(rng.uniform_int(4));
    std::vector<double> a(n1), b(n2);
    for (auto& x : a) x = static_cast<double>(rng.uniform_int(6));
    for (auto& x : b) x = static_cast<double>(rng.uniform_int(6));
    bool allsame = true;
    for (double x : a) allsame = allsame && x == a[0];
    for (double x : b) allsame = allsame && x == a[0];
    if (allsame) continue;
    cul::MwuResult r = cul::mann_whitney_u(a, b);
    REQUIRE(r.exact);
    INFO("rep " << rep << " n1 " << n1 << " n2 " << n2);
    CHECK(r.p_one_sided == Catch::Approx(brute_force_p(a, b)).margin(1e-9));
  }
}

TEST_CASE("mann-whitney normal approximation matches reference values") {
  // References computed with an independent statistics package
  // (asymptotic method, continuity correction, tie correction).
  std::vector<double> a1 = {1.2, 3.4, 2.2, 5.1, 0.4, 2.2, 7.8, 3.3, 4.0, 2.6};
  std::vector<double> b1 = {2.0, 2.2, 0.9, 4.4, 3.3, 6.1, 0.2, 1.5};
  cul::MwuResult r1 = cul::mann_whitney_u(a1, b1);
  CHECK_FALSE(r1.exact);
  CHECK_FALSE(r1.degenerate);
  CHECK(r1.u1 == Catch::Approx(30.5).margin(1e-12));
  CHECK(r1.p_one_sided == Catch::Approx(0.21135106759763167).margin(1e-12));

  cul::MwuResult r1s = cul::mann_whitney_u(b1, a1);
  CHECK(r1s.u1 == Catch::Approx(49.5).margin(1e-12));
  CHECK(r1s.p_one_sided == Catch::Approx(0.813488361698938).margin(1e-12));

  std::vector<double> a2(12), b2(9);
  for (std::size_t i = 0; i < 12; ++i) a2[i] = static_cast<double>(i + 1);
  for (std::size_t i = 0; i < 9; ++i) b2[i] = static_cast<double>(i) + 0.5;
  cul::MwuResult r2 = cul::mann_whitney_u(a2, b2);
  CHECK_FALSE(r2.exact);
  CHECK(r2.u1 == Catch::Approx(36.0).margin(1e-12));
  CHECK(r2.p_one_sided == Catch::Approx(0.10681036515452624).margin(1e-12));
}

TEST_CASE("evaluation reports are well-formed and serialize round-trip") {
  cul::TrainConfig cfg;
  cfg.emb_dim = 8;
  cfg.hidden_dims = {6, 4};
  cfg.epochs = 3;
  cfg.seed = 13;
  std::vector<cul::Graph> train_graphs;
  train_graphs.push_back(cul::generate_barabasi_albert(20, 2, cul::Rng(1)));
  cul::TrainResult tr = cul::train(cfg, train_graphs);

  std::vector<cul::Graph> eval_graphs;
  eval_graphs.push_back(cul::generate_barabasi_albert(30, 2, cul::Rng(2)));
  eval_graphs.push_back(cul::generate_powerlaw_cluster(25, 2, 0.3, cul::Rng(3)));
  std::vector<cul::EvalReport> reports =
      cul::evaluate(tr.checkpoint, eval_graphs, cul::kDefaultTopN, {"g0.edges", "g1.edges"});
  REQUIRE(reports.size() == 2);
  CHECK(reports[0].graph_id == "g0.edges");
  CHECK(reports[1].graph_id == "g1.edges");
  for (const auto& r : reports) {
    CHECK(r.method == "cul/gcn");
    CHECK(r.baseline == "power_iteration");
    CHECK(r.infer_seconds >= 0.0);
    CHECK(r.baseline_seconds >= 0.0);
    REQUIRE(r.accuracy.size() == 4);
    for (const auto& [npct, acc] : r.accuracy) {
      CHECK(npct >= 5.0);
      CHECK(acc >= 0.0);
      CHECK(acc <= 1.0);
    }
  }

  cul::EvalReport rt = cul::report_from_json(cul::report_to_json(reports[0]));
  CHECK(rt.graph_id == reports[0].graph_id);
  CHECK(rt.accuracy == reports[0].accuracy);
  CHECK(rt.infer_seconds == reports[0].infer_seconds);
  CHECK(rt.baseline_seconds == reports[0].baseline_seconds);
  CHECK(rt.method == reports[0].method);
  CHECK(rt.baseline == reports[0].baseline);
  CHECK(rt.restrict_lcc == reports[0].restrict_lcc);

  const std::string table = cul::format_report_table(reports);
  CHECK(table.find("method") != std::string::npos);
  CHECK(table.find("cul/gcn") != std::string::npos);
  CHECK(table.find("top-5%") != std::string::npos);
  CHECK(table.find("top-20%") != std::string::npos);
  CHECK(table.find("+/-") != std::string::npos);
}
