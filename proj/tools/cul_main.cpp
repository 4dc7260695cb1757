// Command-line surface: graph generation, training, evaluation,
// benchmarking, and embedding export. Exit codes: 0 success, 2 usage or
// input error, 3 numerical collapse, 4 artifact mismatch.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cul/cul.hpp"
#include "cul/manifest.hpp"

namespace fs = std::filesystem;

namespace {

std::string fmt_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string basename_of(const std::string& path) { return fs::path(path).filename().string(); }

// JSON config files map long option names (without dashes) to values;
// explicit command-line flags win. Values merge in as extra CLI tokens
// before parsing so type checks and unknown-key errors go through the
// normal option machinery.
std::string g_config_path;  // sink for the --config option on every subcommand

void attach_config(CLI::App* cmd) {
  cmd->add_option("--config", g_config_path, "JSON file of flag values; explicit flags win");
}

std::string config_scalar_token(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number()) return v.dump();
  throw cul::ConfigError("config values must be scalars or arrays of scalars");
}

// Rewrites "<sub> <flags...>" so config-file values for options absent
// from the command line are appended as ordinary tokens.
std::vector<std::string> merge_config_tokens(const std::vector<std::string>& raw) {
  std::string path;
  std::set<std::string> explicit_keys;
  for (std::size_t i = 1; i < raw.size(); ++i) {
    const std::string& tok = raw[i];
    if (tok.rfind("--", 0) != 0) continue;
    const std::size_t eq = tok.find('=');
    const std::string key = tok.substr(2, eq == std::string::npos ? std::string::npos : eq - 2);
    explicit_keys.insert(key);
    if (key == "config") {
      if (tok.find('=') != std::string::npos)
        path = tok.substr(tok.find('=') + 1);
      else if (i + 1 < raw.size())
        path = raw[i + 1];
    }
  }
  if (path.empty()) return raw;

  std::ifstream in(path);
  if (!in) throw cul::IoError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw cul::ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw cul::ConfigError("config must be a JSON object of flag values");

  std::vector<std::string> merged = raw;
  for (const auto& [key, val] : j.items()) {
    if (key == "config") throw cul::ConfigError("config files cannot nest");
    if (explicit_keys.count(key)) continue;
    if (val.is_array()) {
      merged.push_back("--" + key);
      for (const auto& e : val) merged.push_back(config_scalar_token(e));
    } else {
      merged.push_back("--" + key + "=" + config_scalar_token(val));
    }
  }
  return merged;
}

std::vector<std::string> collect_graph_paths(std::vector<std::string> paths, const std::string& dir) {
  if (!dir.empty()) {
    if (!fs::is_directory(dir)) throw cul::IoError("not a directory: " + dir);
    std::vector<std::string> found;
    for (const auto& e : fs::directory_iterator(dir))
      if (e.is_regular_file() && e.path().extension() == ".edges") found.push_back(e.path().string());
    std::sort(found.begin(), found.end());
    paths.insert(paths.end(), found.begin(), found.end());
  }
  if (paths.empty()) throw cul::ConfigError("no input graphs given (use --graphs or --graph-dir)");
  return paths;
}

std::vector<cul::Graph> load_graphs(const std::vector<std::string>& paths, bool restrict_lcc) {
  std::vector<cul::Graph> graphs;
  graphs.reserve(paths.size());
  for (const auto& p : paths) graphs.push_back(cul::load_edge_list(p, restrict_lcc));
  return graphs;
}

std::vector<double> parse_top_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw cul::ConfigError("bad --top entry: " + tok);
    }
    if (!(out.back() > 0.0) || out.back() > 100.0) throw cul::ConfigError("--top entries must lie in (0, 100]");
  }
  if (out.empty()) throw cul::ConfigError("--top list is empty");
  return out;
}

// Stripe indices over worker threads; results land by index so the
// output order never depends on scheduling. The first worker exception
// is rethrown on the calling thread after the join.
template <class Fn>
void parallel_for(std::size_t count, int jobs, Fn&& fn) {
  const int threads = std::max(1, jobs);
  if (threads == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  std::mutex err_mutex;
  std::exception_ptr err;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&, t]() {
      try {
        for (std::size_t i = static_cast<std::size_t>(t); i < count; i += static_cast<std::size_t>(threads)) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!err) err = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

struct CommonArgs {
  bool deterministic = true;
  int jobs = 1;
};

void add_common(CLI::App* cmd, CommonArgs& c) {
  cmd->add_flag("--deterministic,!--no-deterministic", c.deterministic,
                "zero timestamps and timings in written files so reruns are bit-identical");
  cmd->add_option("--jobs", c.jobs, "worker threads across independent graphs")->check(CLI::PositiveNumber);
}

cul::RunManifest make_manifest(const std::string& command, const CLI::App* cmd, int argc, char** argv,
                               const nlohmann::json& flags, std::uint64_t seed, bool deterministic,
                               const std::vector<std::string>& inputs) {
  cul::RunManifest m;
  m.command = command;
  for (int i = 0; i < argc; ++i) m.argv.push_back(argv[i]);
  m.flags = flags;
  m.seed = seed;
  m.deterministic = deterministic;
  m.timestamp = deterministic ? "" : cul::utc_timestamp();
  std::string cfg = cmd->get_config_ptr() ? cmd->get_config_ptr()->as<std::string>() : "";
  if (!cfg.empty()) cul::manifest_add_input(m, cfg);
  for (const auto& p : inputs) cul::manifest_add_input(m, p);
  return m;
}

// ---------------------------------------------------------------- generate
struct GenerateArgs {
  std::string kind = "ba";
  std::int64_t nodes = 1000;
  int m = 4;
  double p = 0.05;
  int count = 1;
  std::uint64_t seed = 0;
  std::string out = ".";
  CommonArgs common;
};

int run_generate(const GenerateArgs& a, const CLI::App* cmd, int argc, char** argv) {
  cul::GeneratorSpec spec;
  spec.kind = cul::graph_kind_from_string(a.kind);
  spec.n = a.nodes;
  spec.m = a.m;
  spec.p = a.p;
  spec.seed = a.seed;
  if (a.count < 1) throw cul::ConfigError("--count must be >= 1");
  fs::create_directories(a.out);

  std::vector<std::string> files(static_cast<std::size_t>(a.count));
  parallel_for(files.size(), a.common.jobs, [&](std::size_t i) {
    // Independent stream per index: file i has the same bytes no
    // matter what count was requested.
    cul::GeneratorSpec s = spec;
    cul::Rng rng = cul::Rng(spec.seed).split(static_cast<std::uint64_t>(i) + 1);
    cul::Graph g = cul::generate(s, rng);
    std::ostringstream name;
    name << cul::to_string(spec.kind) << "_" << spec.n << "_" << spec.seed << "_" << i << ".edges";
    const std::string path = (fs::path(a.out) / name.str()).string();
    cul::save_edge_list(g, path);
    files[i] = path;
  });

  nlohmann::json flags = {{"kind", a.kind}, {"nodes", a.nodes},   {"m", a.m},
                          {"p", a.p},       {"count", a.count},   {"seed", a.seed},
                          {"out", a.out},   {"jobs", a.common.jobs}};
  cul::RunManifest man = make_manifest("generate", cmd, argc, argv, flags, a.seed, a.common.deterministic, {});
  nlohmann::json jm = cul::manifest_to_json(man);
  jm["outputs"] = files;
  std::ofstream mf((fs::path(a.out) / "manifest.json").string(), std::ios::binary);
  if (!mf) throw cul::IoError("cannot write manifest");
  mf << jm.dump(2) << '\n';

  std::cout << "wrote " << files.size() << " graph files to " << a.out << "\n";
  return 0;
}

// ------------------------------------------------------------------- train
struct TrainArgs {
  std::string encoder = "gcn";
  std::string mode = "cul";
  std::string loss = "joint";
  double k = 1.0;
  int epochs = 150;
  double lr = 1e-3;
  std::uint64_t seed = 0;
  int dim = 128;
  std::vector<int> hidden = cul::kDecoderHiddenDims;
  bool shuffle = false;
  bool grad_through_x = false;
  bool restrict_lcc = false;
  std::vector<std::string> graphs;
  std::string graph_dir;
  std::string out = "checkpoint.json";
  std::string loss_csv;
  CommonArgs common;
};

int run_train(const TrainArgs& a, const CLI::App* cmd, int argc, char** argv) {
  cul::TrainConfig cfg;
  cfg.encoder = cul::encoder_kind_from_string(a.encoder);
  cfg.mode = cul::train_mode_from_string(a.mode);
  cfg.loss = cul::loss_variant_from_string(a.loss);
  cfg.k = a.k;
  cfg.epochs = a.epochs;
  cfg.lr = a.lr;
  cfg.seed = a.seed;
  cfg.emb_dim = a.dim;
  cfg.hidden_dims = a.hidden;
  cfg.shuffle = a.shuffle;
  cfg.grad_through_x = a.grad_through_x;
  cfg.train_graphs = collect_graph_paths(a.graphs, a.graph_dir);

  std::vector<cul::Graph> graphs = load_graphs(cfg.train_graphs, a.restrict_lcc);
  cul::TrainResult result = cul::train(cfg, graphs);

  cul::save_checkpoint(a.out, result.checkpoint);
  const std::string csv_path = a.loss_csv.empty() ? fs::path(a.out).replace_extension(".loss.csv").string()
                                                  : a.loss_csv;
  {
    std::ofstream csv(csv_path, std::ios::binary);
    if (!csv) throw cul::IoError("cannot write loss history: " + csv_path);
    csv << "epoch,loss\n";
    for (std::size_t e = 0; e < result.loss_history.size(); ++e)
      csv << (e + 1) << "," << fmt_g17(result.loss_history[e]) << "\n";
  }

  nlohmann::json flags = {{"encoder", a.encoder},
                          {"mode", a.mode},
                          {"loss", a.loss},
                          {"k", a.k},
                          {"epochs", a.epochs},
                          {"lr", a.lr},
                          {"seed", a.seed},
                          {"dim", a.dim},
                          {"hidden", a.hidden},
                          {"shuffle", a.shuffle},
                          {"grad-through-x", a.grad_through_x},
                          {"restrict-lcc", a.restrict_lcc},
                          {"graphs", cfg.train_graphs},
                          {"out", a.out},
                          {"loss-csv", csv_path},
                          {"jobs", a.common.jobs}};
  cul::RunManifest man =
      make_manifest("train", cmd, argc, argv, flags, a.seed, a.common.deterministic, cfg.train_graphs);
  cul::write_manifest(a.out + ".manifest.json", man);

  std::cout << "final loss: " << fmt_g17(result.loss_history.back()) << "\n";
  std::cout << "checkpoint: " << a.out << "\n";
  if (result.final_y_norm < 0.1)
    std::cerr << "warning: final score norm " << fmt_g17(result.final_y_norm)
              << " is near zero; scores have collapsed toward the zero vector\n";
  return 0;
}

// -------------------------------------------------------------------- eval
struct EvalArgs {
  std::string ckpt;
  std::vector<std::string> graphs;
  std::string graph_dir;
  std::string top = "5,10,15,20";
  bool table = false;
  bool oracle_self_test = false;
  std::string encoder;  // optional expected kind; mismatch is an artifact error
  bool restrict_lcc = false;
  std::string out;
  CommonArgs common;
};

int run_eval(const EvalArgs& a, const CLI::App* cmd, int argc, char** argv) {
  const std::vector<double> top = parse_top_list(a.top);
  const std::vector<std::string> paths = collect_graph_paths(a.graphs, a.graph_dir);
  std::vector<cul::Graph> graphs = load_graphs(paths, a.restrict_lcc);
  std::vector<std::string> ids;
  ids.reserve(paths.size());
  for (const auto& p : paths) ids.push_back(basename_of(p));

  std::vector<cul::EvalReport> reports(graphs.size());
  if (a.oracle_self_test) {
    // Truth scored against itself; every accuracy must come out 1.
    parallel_for(graphs.size(), a.common.jobs, [&](std::size_t gi) {
      const auto t0 = std::chrono::steady_clock::now();
      cul::ECScores truth = cul::power_iteration_ec(graphs[gi]);
      const auto t1 = std::chrono::steady_clock::now();
      cul::EvalReport r;
      r.graph_id = ids[gi];
      r.method = "oracle-self-test";
      r.baseline_seconds = std::chrono::duration<double>(t1 - t0).count();
      r.infer_seconds = r.baseline_seconds;
      r.restrict_lcc = a.restrict_lcc;
      for (double npct : top) r.accuracy.emplace_back(npct, cul::top_n_percent(truth.values, truth.values, npct));
      reports[gi] = std::move(r);
    });
  } else {
    if (a.ckpt.empty()) throw cul::ConfigError("--ckpt is required (or use --oracle-self-test)");
    cul::Checkpoint ckpt = cul::load_checkpoint(a.ckpt);
    if (!a.encoder.empty() && cul::encoder_kind_from_string(a.encoder) != ckpt.model.enc.kind)
      throw cul::ArtifactError("checkpoint encoder kind '" + std::string(cul::to_string(ckpt.model.enc.kind)) +
                               "' does not match requested '" + a.encoder + "'");
    parallel_for(graphs.size(), a.common.jobs, [&](std::size_t gi) {
      std::vector<cul::EvalReport> one =
          cul::evaluate(ckpt, {graphs[gi]}, top, {ids[gi]}, a.restrict_lcc);
      reports[gi] = std::move(one[0]);
    });
  }

  if (a.table || a.out.empty()) std::cout << cul::format_report_table(reports);
  if (!a.out.empty()) {
    std::vector<cul::EvalReport> to_write = reports;
    if (a.common.deterministic)
      for (auto& r : to_write) {
        r.infer_seconds = 0.0;
        r.baseline_seconds = 0.0;
      }
    std::ofstream out(a.out, std::ios::binary);
    if (!out) throw cul::IoError("cannot write report: " + a.out);
    out << cul::reports_to_json(to_write).dump(2) << '\n';

    nlohmann::json flags = {{"ckpt", a.ckpt},       {"graphs", paths},
                            {"top", a.top},         {"table", a.table},
                            {"oracle-self-test", a.oracle_self_test},
                            {"encoder", a.encoder}, {"restrict-lcc", a.restrict_lcc},
                            {"out", a.out},         {"jobs", a.common.jobs}};
    std::vector<std::string> inputs = paths;
    if (!a.ckpt.empty()) inputs.insert(inputs.begin(), a.ckpt);
    cul::RunManifest man = make_manifest("eval", cmd, argc, argv, flags, 0, a.common.deterministic, inputs);
    cul::write_manifest(a.out + ".manifest.json", man);
  }
  return 0;
}

// ------------------------------------------------------------------- bench
struct BenchArgs {
  std::string ckpt;
  std::vector<std::string> graphs;
  std::string graph_dir;
  int reps = 3;
  int warmup = 1;
  bool float32 = false;
  bool restrict_lcc = false;
  std::string out;
  CommonArgs common;
};

struct BenchRow {
  std::string graph_id;
  std::int64_t n = 0;
  double model_mean = 0.0, model_std = 0.0;
  double iter_mean = 0.0, iter_std = 0.0;
};

void mean_std(const std::vector<double>& v, double& mean, double& sd) {
  mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  sd = v.size() > 1 ? std::sqrt(var / static_cast<double>(v.size() - 1)) : 0.0;
}

int run_bench(const BenchArgs& a, const CLI::App* cmd, int argc, char** argv) {
  if (a.reps < 1) throw cul::ConfigError("--reps must be >= 1");
  if (a.warmup < 0) throw cul::ConfigError("--warmup must be >= 0");
  if (a.ckpt.empty()) throw cul::ConfigError("--ckpt is required");
  const std::vector<std::string> paths = collect_graph_paths(a.graphs, a.graph_dir);
  std::vector<cul::Graph> graphs = load_graphs(paths, a.restrict_lcc);
  cul::Checkpoint ckpt = cul::load_checkpoint(a.ckpt);
  cul::CulModel<float> model32;
  if (a.float32) model32 = cul::cast_model<float>(ckpt.model);

  std::vector<BenchRow> rows(graphs.size());
  parallel_for(graphs.size(), a.common.jobs, [&](std::size_t gi) {
    const cul::Graph& g = graphs[gi];
    std::vector<double> model_t, iter_t;
    for (int r = 0; r < a.warmup; ++r) {
      if (a.float32)
        cul::infer_scores(model32, g);
      else
        cul::infer_scores(ckpt.model, g);
      cul::power_iteration_ec(g);
    }
    for (int r = 0; r < a.reps; ++r) {
      if (a.float32)
        model_t.push_back(cul::infer_scores(model32, g).seconds);
      else
        model_t.push_back(cul::infer_scores(ckpt.model, g).seconds);
      const auto t0 = std::chrono::steady_clock::now();
      cul::power_iteration_ec(g);
      const auto t1 = std::chrono::steady_clock::now();
      iter_t.push_back(std::chrono::duration<double>(t1 - t0).count());
    }
    BenchRow row;
    row.graph_id = basename_of(paths[gi]);
    row.n = g.n;
    mean_std(model_t, row.model_mean, row.model_std);
    mean_std(iter_t, row.iter_mean, row.iter_std);
    rows[gi] = std::move(row);
  });

  std::printf("%-28s %10s %26s %26s %9s\n", "graph", "n", "model_s", "iterative_s", "speedup");
  for (const auto& r : rows)
    std::printf("%-28s %10lld %13.6f +/- %8.6f %13.6f +/- %8.6f %8.2fx\n", r.graph_id.c_str(),
                static_cast<long long>(r.n), r.model_mean, r.model_std, r.iter_mean, r.iter_std,
                r.model_mean > 0.0 ? r.iter_mean / r.model_mean : 0.0);

  if (!a.out.empty()) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
      const bool det = a.common.deterministic;
      arr.push_back({{"graph", r.graph_id},
                     {"n", r.n},
                     {"model_mean_s", det ? 0.0 : r.model_mean},
                     {"model_std_s", det ? 0.0 : r.model_std},
                     {"iterative_mean_s", det ? 0.0 : r.iter_mean},
                     {"iterative_std_s", det ? 0.0 : r.iter_std},
                     {"reps", a.reps},
                     {"warmup", a.warmup},
                     {"float32", a.float32}});
    }
    std::ofstream out(a.out, std::ios::binary);
    if (!out) throw cul::IoError("cannot write bench report: " + a.out);
    out << arr.dump(2) << '\n';

    nlohmann::json flags = {{"ckpt", a.ckpt},     {"graphs", paths},   {"reps", a.reps},
                            {"warmup", a.warmup}, {"float32", a.float32}, {"restrict-lcc", a.restrict_lcc},
                            {"out", a.out},       {"jobs", a.common.jobs}};
    std::vector<std::string> inputs = paths;
    inputs.insert(inputs.begin(), a.ckpt);
    cul::RunManifest man = make_manifest("bench", cmd, argc, argv, flags, 0, a.common.deterministic, inputs);
    cul::write_manifest(a.out + ".manifest.json", man);
  }
  return 0;
}

// ------------------------------------------------------ export-embeddings
struct ExportArgs {
  std::string ckpt;
  std::string graph;
  bool restrict_lcc = false;
  std::string out = "embeddings.csv";
  CommonArgs common;
};

int run_export(const ExportArgs& a, const CLI::App* cmd, int argc, char** argv) {
  if (a.ckpt.empty() || a.graph.empty()) throw cul::ConfigError("--ckpt and --graph are required");
  cul::Checkpoint ckpt = cul::load_checkpoint(a.ckpt);
  cul::Graph g = cul::load_edge_list(a.graph, a.restrict_lcc);
  cul::Matrix<double> features = cul::build_features<double>(g);
  cul::Matrix<double> z = cul::encoder_forward(g, features, ckpt.model.enc);

  std::ofstream out(a.out, std::ios::binary);
  if (!out) throw cul::IoError("cannot write embeddings: " + a.out);
  out << "node";
  for (std::int64_t c = 0; c < z.cols; ++c) out << ",e" << c;
  out << "\n";
  for (std::int64_t i = 0; i < z.rows; ++i) {
    out << i;
    const double* r = z.row(i);
    for (std::int64_t c = 0; c < z.cols; ++c) out << "," << fmt_g17(r[c]);
    out << "\n";
  }
  out.close();

  nlohmann::json flags = {{"ckpt", a.ckpt},
                          {"graph", a.graph},
                          {"restrict-lcc", a.restrict_lcc},
                          {"out", a.out}};
  cul::RunManifest man = make_manifest("export-embeddings", cmd, argc, argv, flags, 0,
                                       a.common.deterministic, {a.ckpt, a.graph});
  cul::write_manifest(a.out + ".manifest.json", man);
  std::cout << "wrote " << z.rows << " embedding rows to " << a.out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"eigenvector-centrality ranking with unsupervised graph encoders", "cul"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(cul::kToolVersion));

  GenerateArgs gen;
  CLI::App* cgen = app.add_subcommand("generate", "generate synthetic graphs as edge-list files");
  cgen->add_option("--kind", gen.kind, "graph family: ba, pl, or sf")->capture_default_str();
  cgen->add_option("--nodes", gen.nodes, "nodes per graph")->capture_default_str();
  cgen->add_option("--m", gen.m, "edges attached per new node (ba, pl)")->capture_default_str();
  cgen->add_option("--p", gen.p, "triangle probability (pl)")->capture_default_str();
  cgen->add_option("--count", gen.count, "number of graphs")->capture_default_str();
  cgen->add_option("--seed", gen.seed, "RNG seed")->capture_default_str();
  cgen->add_option("--out", gen.out, "output directory")->capture_default_str();
  add_common(cgen, gen.common);
  attach_config(cgen);

  TrainArgs tr;
  CLI::App* ctr = app.add_subcommand("train", "train a scoring model");
  ctr->add_option("--encoder", tr.encoder, "gcn, sage, or gat")->capture_default_str();
  ctr->add_option("--mode", tr.mode, "cul (unsupervised) or csl (supervised)")->capture_default_str();
  ctr->add_option("--loss", tr.loss, "joint, joint-l1, or obj-only (cul mode)")->capture_default_str();
  ctr->add_option("--k", tr.k, "norm-penalty scale")->capture_default_str();
  ctr->add_option("--epochs", tr.epochs, "training epochs")->capture_default_str();
  ctr->add_option("--lr", tr.lr, "Adam learning rate")->capture_default_str();
  ctr->add_option("--seed", tr.seed, "RNG seed")->capture_default_str();
  ctr->add_option("--dim", tr.dim, "embedding width")->capture_default_str();
  ctr->add_option("--hidden", tr.hidden, "decoder hidden widths")->capture_default_str();
  ctr->add_flag("--shuffle", tr.shuffle, "shuffle graph order each epoch (seed-driven)");
  ctr->add_flag("--grad-through-x", tr.grad_through_x, "ablation: backpropagate through the target X = A*Y");
  ctr->add_flag("--restrict-lcc", tr.restrict_lcc, "keep only the largest connected component of each graph");
  ctr->add_option("--graphs", tr.graphs, "training graph files");
  ctr->add_option("--graph-dir", tr.graph_dir, "directory of *.edges training graphs");
  ctr->add_option("--out", tr.out, "checkpoint output path")->capture_default_str();
  ctr->add_option("--loss-csv", tr.loss_csv, "loss history CSV path (default: alongside checkpoint)");
  add_common(ctr, tr.common);
  attach_config(ctr);

  EvalArgs ev;
  CLI::App* cev = app.add_subcommand("eval", "rank nodes and score top-N% accuracy against power iteration");
  cev->add_option("--ckpt", ev.ckpt, "checkpoint path");
  cev->add_option("--graphs", ev.graphs, "evaluation graph files");
  cev->add_option("--graph-dir", ev.graph_dir, "directory of *.edges evaluation graphs");
  cev->add_option("--top", ev.top, "comma-separated N percentages")->capture_default_str();
  cev->add_flag("--table", ev.table, "print the aligned mean +/- std table");
  cev->add_flag("--oracle-self-test", ev.oracle_self_test, "score the iterative baseline against itself (all 1.0)");
  cev->add_option("--encoder", ev.encoder, "expected encoder kind; mismatch with the checkpoint is an error");
  cev->add_flag("--restrict-lcc", ev.restrict_lcc, "keep only the largest connected component of each graph");
  cev->add_option("--out", ev.out, "write EvalReport JSON here");
  add_common(cev, ev.common);
  attach_config(cev);

  BenchArgs be;
  CLI::App* cbe = app.add_subcommand("bench", "time model inference against power iteration");
  cbe->add_option("--ckpt", be.ckpt, "checkpoint path");
  cbe->add_option("--graphs", be.graphs, "graph files");
  cbe->add_option("--graph-dir", be.graph_dir, "directory of *.edges graphs");
  cbe->add_option("--reps", be.reps, "timed repetitions per graph")->capture_default_str();
  cbe->add_option("--warmup", be.warmup, "untimed warm-up runs per graph")->capture_default_str();
  cbe->add_flag("--float32", be.float32, "run inference in single precision");
  cbe->add_flag("--restrict-lcc", be.restrict_lcc, "keep only the largest connected component of each graph");
  cbe->add_option("--out", be.out, "write timing JSON here");
  add_common(cbe, be.common);
  attach_config(cbe);

  ExportArgs ex;
  CLI::App* cex = app.add_subcommand("export-embeddings", "write final-layer node embeddings as CSV");
  cex->add_option("--ckpt", ex.ckpt, "checkpoint path");
  cex->add_option("--graph", ex.graph, "graph file");
  cex->add_flag("--restrict-lcc", ex.restrict_lcc, "keep only the largest connected component");
  cex->add_option("--out", ex.out, "CSV output path")->capture_default_str();
  add_common(cex, ex.common);
  attach_config(cex);

  try {
    std::vector<std::string> tokens(argv + 1, argv + argc);
    tokens = merge_config_tokens(tokens);
    std::reverse(tokens.begin(), tokens.end());
    app.parse(std::move(tokens));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const cul::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (cgen->parsed()) return run_generate(gen, cgen, argc, argv);
    if (ctr->parsed()) return run_train(tr, ctr, argc, argv);
    if (cev->parsed()) return run_eval(ev, cev, argc, argv);
    if (cbe->parsed()) return run_bench(be, cbe, argc, argv);
    if (cex->parsed()) return run_export(ex, cex, argc, argv);
  } catch (const cul::ZeroNormError& e) {
    std::cerr << "error (collapse): " << e.what() << "\n";
    return 3;
  } catch (const cul::NumericError& e) {
    std::cerr << "error (numeric): " << e.what() << "\n";
    return 3;
  } catch (const cul::ArtifactError& e) {
    std::cerr << "error (artifact): " << e.what() << "\n";
    return 4;
  } catch (const cul::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const cul::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const cul::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const cul::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
