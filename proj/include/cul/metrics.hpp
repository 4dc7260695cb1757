#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "cul/checkpoint.hpp"
#include "cul/eigen.hpp"
#include "cul/error.hpp"
#include "cul/graph.hpp"
#include "cul/model.hpp"

namespace cul {

// =====================================================================
// Ranking accuracy and the rank-sum comparison test.
// =====================================================================

// Descending by score, ties broken by ascending node id so degenerate
// score vectors still rank deterministically.
template <class T>
std::vector<std::int32_t> rank_nodes(const std::vector<T>& scores) {
  for (const T& s : scores)
    if (std::isnan(static_cast<double>(s))) throw NumericError("rank_nodes: NaN score");
  std::vector<std::int32_t> ids(scores.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<std::int32_t>(i);
  std::sort(ids.begin(), ids.end(), [&](std::int32_t a, std::int32_t b) {
    const T sa = scores[static_cast<std::size_t>(a)], sb = scores[static_cast<std::size_t>(b)];
    if (sa != sb) return sa > sb;
    return a < b;
  });
  return ids;
}

// |top_m(predicted) ∩ top_m(truth)| / m with m = ⌈n·pct/100⌉.
template <class T>
double top_n_percent(const std::vector<T>& predicted, const std::vector<T>& truth, double n_pct) {
  if (predicted.size() != truth.size()) throw ShapeError("top_n_percent: length mismatch");
  if (predicted.empty()) throw ShapeError("top_n_percent: empty input");
  if (!(n_pct > 0.0) || n_pct > 100.0) throw ConfigError("top_n_percent: percentage must be in (0, 100]");
  const std::size_t n = predicted.size();
  // Multiply before dividing so integer-valued products stay exact.
  const std::size_t m = static_cast<std::size_t>(std::ceil(static_cast<double>(n) * n_pct / 100.0));
  std::vector<std::int32_t> p = rank_nodes(predicted);
  std::vector<std::int32_t> t = rank_nodes(truth);
  p.resize(m);
  t.resize(m);
  std::sort(p.begin(), p.end());
  std::sort(t.begin(), t.end());
  std::size_t overlap = 0;
  for (std::size_t i = 0, j = 0; i < m && j < m;) {
    if (p[i] == t[j]) {
      ++overlap;
      ++i;
      ++j;
    } else if (p[i] < t[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return static_cast<double>(overlap) / static_cast<double>(m);
}

struct MwuResult {
  double u1 = 0.0;         // U₁ = n₁n₂ + n₁(n₁+1)/2 − R₁ over midranks
  double p_one_sided = 0.5;  // alternative: sample A stochastically larger
  bool degenerate = false;   // every pooled value identical
  bool exact = false;        // exact permutation distribution used
};

namespace detail {

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Exact one-sided p by dynamic programming over the permutation
// distribution of the rank sum (midranks doubled to stay integral).
// p = P(R₁ ≥ r_obs), equivalent to P(U₁ ≤ u_obs).
inline double mwu_exact_p(const std::vector<double>& ranks, std::size_t n1, double r1_obs) {
  const std::size_t n = ranks.size();
  std::vector<std::int64_t> s(n);
  std::int64_t total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = std::llround(2.0 * ranks[i]);
    total += s[i];
  }
  const std::int64_t thr = std::llround(2.0 * r1_obs);
  // ways[k][sum] = number of k-subsets of the pooled ranks with that sum.
  std::vector<std::vector<double>> ways(n1 + 1, std::vector<double>(static_cast<std::size_t>(total) + 1, 0.0));
  ways[0][0] = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t kmax = std::min(n1, i + 1);
    for (std::size_t k = kmax; k >= 1; --k)
      for (std::int64_t sum = total - s[i]; sum >= 0; --sum)
        if (ways[k - 1][static_cast<std::size_t>(sum)] > 0.0)
          ways[k][static_cast<std::size_t>(sum + s[i])] += ways[k - 1][static_cast<std::size_t>(sum)];
  }
  double hits = 0.0, all = 0.0;
  for (std::int64_t sum = 0; sum <= total; ++sum) {
    all += ways[n1][static_cast<std::size_t>(sum)];
    if (sum >= thr) hits += ways[n1][static_cast<std::size_t>(sum)];
  }
  return hits / all;
}

}  // namespace detail

// Rank-sum test with midranks. Exact permutation p below sample size 8
// (when the pooled size keeps the enumeration cheap), normal
// approximation with tie correction otherwise. One-sided alternative:
// A tends to exceed B.
template <class T>
MwuResult mann_whitney_u(const std::vector<T>& a, const std::vector<T>& b) {
  if (a.empty() || b.empty()) throw ShapeError("mann_whitney_u: empty sample");
  const std::size_t n1 = a.size(), n2 = b.size(), n = n1 + n2;
  std::vector<double> pooled(n);
  for (std::size_t i = 0; i < n1; ++i) pooled[i] = static_cast<double>(a[i]);
  for (std::size_t i = 0; i < n2; ++i) pooled[n1 + i] = static_cast<double>(b[i]);
  for (double v : pooled)
    if (std::isnan(v)) throw NumericError("mann_whitney_u: NaN sample value");

  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) { return pooled[x] < pooled[y]; });

  std::vector<double> ranks(n);
  double tie_term = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && pooled[idx[j]] == pooled[idx[i]]) ++j;
    const double mid = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
    for (std::size_t k = i; k < j; ++k) ranks[idx[k]] = mid;
    const double t = static_cast<double>(j - i);
    tie_term += t * t * t - t;
    i = j;
  }

  double r1 = 0.0;
  for (std::size_t i = 0; i < n1; ++i) r1 += ranks[i];
  MwuResult res;
  res.u1 = static_cast<double>(n1) * static_cast<double>(n2) +
           static_cast<double>(n1) * static_cast<double>(n1 + 1) / 2.0 - r1;

  const bool all_equal = pooled[idx[0]] == pooled[idx[n - 1]];
  if (all_equal) {
    res.degenerate = true;
    res.p_one_sided = 0.5;
    return res;
  }

  if (std::min(n1, n2) < 8 && n <= 200) {
    res.exact = true;
    res.p_one_sided = detail::mwu_exact_p(ranks, n1, r1);
    return res;
  }

  const double nn = static_cast<double>(n1) * static_cast<double>(n2);
  const double mu = nn / 2.0;
  const double var = nn / 12.0 *
                     (static_cast<double>(n + 1) -
                      tie_term / (static_cast<double>(n) * static_cast<double>(n - 1)));
  if (!(var > 0.0)) {
    res.degenerate = true;
    res.p_one_sided = 0.5;
    return res;
  }
  // P(U ≤ u_obs) with continuity correction; small when A dominates.
  res.p_one_sided = detail::normal_cdf((res.u1 + 0.5 - mu) / std::sqrt(var));
  return res;
}

// =====================================================================
// Evaluation reports.
// =====================================================================

struct EvalReport {
  std::string graph_id;
  std::vector<std::pair<double, double>> accuracy;  // (N percentage, accuracy)
  double infer_seconds = 0.0;
  double baseline_seconds = 0.0;
  std::string method;                     // e.g. "cul/gcn"
  std::string baseline = "power_iteration";
  bool restrict_lcc = false;
};

inline const std::vector<double> kDefaultTopN = {5.0, 10.0, 15.0, 20.0};

// Truth from power iteration, predictions from a model forward pass.
inline std::vector<EvalReport> evaluate(const Checkpoint& ckpt, const std::vector<Graph>& graphs,
                                        const std::vector<double>& n_list = kDefaultTopN,
                                        const std::vector<std::string>& ids = {}, bool restrict_lcc = false) {
  std::vector<EvalReport> out;
  out.reserve(graphs.size());
  const std::string method = std::string(ckpt.meta.mode) + "/" + to_string(ckpt.model.enc.kind);
  for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
    const Graph& g = graphs[gi];
    const auto t0 = std::chrono::steady_clock::now();
    ECScores truth = power_iteration_ec(g);
    const auto t1 = std::chrono::steady_clock::now();
    InferResult<double> pred = infer_scores(ckpt.model, g);
    EvalReport r;
    r.graph_id = gi < ids.size() ? ids[gi] : "graph-" + std::to_string(gi);
    r.method = method;
    r.restrict_lcc = restrict_lcc;
    r.baseline_seconds = std::chrono::duration<double>(t1 - t0).count();
    r.infer_seconds = pred.seconds;
    for (double npct : n_list) r.accuracy.emplace_back(npct, top_n_percent(pred.scores, truth.values, npct));
    out.push_back(std::move(r));
  }
  return out;
}

inline nlohmann::json report_to_json(const EvalReport& r) {
  nlohmann::json acc = nlohmann::json::array();
  for (const auto& [npct, v] : r.accuracy) acc.push_back({{"n_pct", npct}, {"accuracy", v}});
  return {{"graph_id", r.graph_id},
          {"accuracy", acc},
          {"infer_seconds", r.infer_seconds},
          {"baseline_seconds", r.baseline_seconds},
          {"method", r.method},
          {"baseline", r.baseline},
          {"restrict_lcc", r.restrict_lcc}};
}

inline EvalReport report_from_json(const nlohmann::json& j) {
  EvalReport r;
  r.graph_id = j.at("graph_id").get<std::string>();
  for (const auto& e : j.at("accuracy"))
    r.accuracy.emplace_back(e.at("n_pct").get<double>(), e.at("accuracy").get<double>());
  r.infer_seconds = j.at("infer_seconds").get<double>();
  r.baseline_seconds = j.at("baseline_seconds").get<double>();
  r.method = j.at("method").get<std::string>();
  r.baseline = j.at("baseline").get<std::string>();
  r.restrict_lcc = j.at("restrict_lcc").get<bool>();
  return r;
}

inline nlohmann::json reports_to_json(const std::vector<EvalReport>& reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reports) arr.push_back(report_to_json(r));
  return arr;
}

// Aligned text table: one row per method, mean ± std (percent) per N
// over the reports carrying that method tag.
inline std::string format_report_table(const std::vector<EvalReport>& reports) {
  std::vector<double> ns;
  std::vector<std::string> methods;
  for (const auto& r : reports) {
    for (const auto& [npct, v] : r.accuracy) {
      (void)v;
      if (std::find(ns.begin(), ns.end(), npct) == ns.end()) ns.push_back(npct);
    }
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) methods.push_back(r.method);
  }
  std::sort(ns.begin(), ns.end());

  auto cell = [&](const std::string& method, double npct) -> std::string {
    std::vector<double> vals;
    for (const auto& r : reports) {
      if (r.method != method) continue;
      for (const auto& [p, v] : r.accuracy)
        if (p == npct) vals.push_back(v * 100.0);
    }
    if (vals.empty()) return "-";
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= static_cast<double>(vals.size());
    double var = 0.0;
    for (double v : vals) var += (v - mean) * (v - mean);
    const double sd = vals.size() > 1 ? std::sqrt(var / static_cast<double>(vals.size() - 1)) : 0.0;
    std::ostringstream os;
    os << std::fixed << std::setprecision(1) << mean << " +/- " << sd;
    return os.str();
  };

  std::size_t mw = std::string("method").size();
  for (const auto& m : methods) mw = std::max(mw, m.size());
  std::vector<std::size_t> cw(ns.size());
  std::vector<std::string> heads(ns.size());
  std::vector<std::vector<std::string>> cells(methods.size(), std::vector<std::string>(ns.size()));
  for (std::size_t c = 0; c < ns.size(); ++c) {
    std::ostringstream os;
    os << "top-" << std::defaultfloat << ns[c] << "%";
    heads[c] = os.str();
    cw[c] = heads[c].size();
    for (std::size_t r = 0; r < methods.size(); ++r) {
      cells[r][c] = cell(methods[r], ns[c]);
      cw[c] = std::max(cw[c], cells[r][c].size());
    }
  }
  std::ostringstream out;
  out << std::left << std::setw(static_cast<int>(mw + 2)) << "method";
  for (std::size_t c = 0; c < ns.size(); ++c) out << std::setw(static_cast<int>(cw[c] + 2)) << heads[c];
  out << '\n';
  for (std::size_t r = 0; r < methods.size(); ++r) {
    out << std::setw(static_cast<int>(mw + 2)) << methods[r];
    for (std::size_t c = 0; c < ns.size(); ++c) out << std::setw(static_cast<int>(cw[c] + 2)) << cells[r][c];
    out << '\n';
  }
  return out.str();
}

}  // namespace cul
