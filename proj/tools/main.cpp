#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qosketch/bench.hpp"
#include "qosketch/checkpoint.hpp"
#include "qosketch/generate.hpp"
#include "qosketch/graph.hpp"
#include "qosketch/metrics.hpp"
#include "qosketch/oracles.hpp"
#include "qosketch/predictor.hpp"
#include "qosketch/probe.hpp"
#include "qosketch/rng.hpp"
#include "qosketch/sketch.hpp"
#include "qosketch/split_io.hpp"

namespace {

using namespace qosketch;
using nlohmann::json;

unsigned resolve_cli_threads(unsigned flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("QOSKETCH_THREADS")) {
    int parsed = std::atoi(env);
    if (parsed > 0) return static_cast<unsigned>(parsed);
  }
  return 0;  // library default: logical cores
}

EdgeFileFormat parse_format(const std::string& name) {
  if (name == "tsv") return EdgeFileFormat::tsv;
  if (name == "csv") return EdgeFileFormat::csv;
  throw std::runtime_error("unknown edge-list format: " + name);
}

Graph load_graph(const std::string& path, const std::string& format) {
  return load_edge_list(path, parse_format(format));
}

std::vector<Edge> read_pair_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open pair file " + path);
  std::vector<Edge> pairs;
  std::int64_t a, b;
  while (in >> a >> b)
    pairs.emplace_back(static_cast<node_t>(a), static_cast<node_t>(b));
  return pairs;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

// number formatting shared by the CSV/JSON writers so outputs are
// byte-stable across runs and thread counts
std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

struct TrainFileConfig {
  std::string graph_path;
  std::string format = "tsv";
  std::uint64_t split_seed = 1;
  std::string split_dir;
  bool include_valid = false;
  TrainConfig train;
  std::string out = "checkpoint.json";
};

TrainFileConfig parse_train_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  json j = json::parse(in);
  const std::set<std::string> allowed{
      "schema",     "graph",         "format",         "split_seed",
      "split_dir",  "include_valid", "dim",            "hubs",
      "hops",       "sketch_seed",   "seed",           "epochs",
      "batch_size", "lr",            "negative_ratio", "patience",
      "hidden",     "rescale_hidden", "rescale",       "shortcut_removal",
      "triangles",  "eval_k",        "out"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.contains(it.key()))
      throw std::runtime_error("config: unknown key '" + it.key() + "'");
  if (j.at("schema").get<int>() != 1)
    throw std::runtime_error("config: unsupported schema version");

  TrainFileConfig cfg;
  cfg.graph_path = j.at("graph").get<std::string>();
  if (j.contains("format")) cfg.format = j["format"].get<std::string>();
  if (j.contains("split_seed")) cfg.split_seed = j["split_seed"].get<std::uint64_t>();
  if (j.contains("split_dir")) cfg.split_dir = j["split_dir"].get<std::string>();
  if (j.contains("include_valid")) cfg.include_valid = j["include_valid"].get<bool>();
  if (j.contains("dim")) cfg.train.sketch.dim = j["dim"].get<std::size_t>();
  if (j.contains("hubs")) cfg.train.sketch.hubs = j["hubs"].get<std::size_t>();
  if (j.contains("hops")) cfg.train.sketch.hops = j["hops"].get<int>();
  if (j.contains("sketch_seed"))
    cfg.train.sketch.seed = j["sketch_seed"].get<std::uint64_t>();
  if (j.contains("seed")) cfg.train.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("epochs")) cfg.train.epochs = j["epochs"].get<int>();
  if (j.contains("batch_size")) cfg.train.batch_size = j["batch_size"].get<std::size_t>();
  if (j.contains("lr")) cfg.train.lr = j["lr"].get<double>();
  if (j.contains("negative_ratio"))
    cfg.train.negative_ratio = j["negative_ratio"].get<double>();
  if (j.contains("patience")) cfg.train.patience = j["patience"].get<int>();
  if (j.contains("hidden")) cfg.train.hidden = j["hidden"].get<std::size_t>();
  if (j.contains("rescale_hidden"))
    cfg.train.rescale_hidden = j["rescale_hidden"].get<std::size_t>();
  if (j.contains("rescale")) {
    std::string mode = j["rescale"].get<std::string>();
    if (mode == "none") cfg.train.rescale = RescaleMode::none;
    else if (mode == "fixed_fn") cfg.train.rescale = RescaleMode::fixed_fn;
    else if (mode == "learned") cfg.train.rescale = RescaleMode::learned;
    else throw std::runtime_error("config: unknown rescale mode " + mode);
  }
  if (j.contains("shortcut_removal"))
    cfg.train.shortcut_removal = j["shortcut_removal"].get<bool>();
  if (j.contains("triangles"))
    cfg.train.features.triangles = j["triangles"].get<bool>();
  if (j.contains("eval_k")) cfg.train.eval_k = j["eval_k"].get<std::size_t>();
  if (j.contains("out")) cfg.out = j["out"].get<std::string>();
  return cfg;
}

int cmd_gen(const std::string& model, std::size_t n, double p, std::size_t d,
            std::size_t m, std::uint64_t seed, const std::string& out) {
  Graph g;
  if (model == "er") g = erdos_renyi(n, p, seed);
  else if (model == "regular") g = random_regular(n, d, seed);
  else if (model == "ba") g = barabasi_albert(n, m, seed);
  else throw std::runtime_error("unknown generator model: " + model);
  std::vector<Edge> edges = g.edges();
  save_edge_list(out, edges);
  std::cout << "wrote " << edges.size() << " edges over " << g.num_nodes()
            << " nodes to " << out << '\n';
  return 0;
}

int cmd_split(const std::string& graph_path, const std::string& format,
              std::uint64_t seed, const std::string& out_dir) {
  Graph g = load_graph(graph_path, format);
  DatasetSplit split = split_edges(g, seed);
  save_split(out_dir, split);
  std::cout << "split " << g.num_edges() << " edges into "
            << split.train_pos.size() << "/" << split.valid_pos.size() << "/"
            << split.test_pos.size() << " under " << out_dir << '\n';
  return 0;
}

int cmd_estimate(const std::string& graph_path, const std::string& format,
                 std::size_t dim, std::size_t hubs, int hops,
                 std::uint64_t seed, const std::string& pairs_arg,
                 const std::string& split_dir, bool exact,
                 const std::string& out, unsigned threads) {
  Graph g = load_graph(graph_path, format);
  std::vector<Edge> pairs;
  Graph observed = g;
  if (pairs_arg == "all-test") {
    if (split_dir.empty())
      throw std::runtime_error("--pairs all-test requires --split");
    DatasetSplit split = load_split(split_dir, g);
    observed = observed_graph(g, split);
    pairs = split.test_pos;
    pairs.insert(pairs.end(), split.test_neg.begin(), split.test_neg.end());
  } else {
    pairs = read_pair_file(pairs_arg);
  }

  SketchConfig cfg;
  cfg.dim = dim;
  cfg.hubs = hubs;
  cfg.hops = hops;
  cfg.seed = seed;
  cfg.validate();

  HopNeighborhoods hops_nb = hop_neighborhoods(observed, hops, threads);
  SignatureMatrix sig = sample_signatures(cfg, observed);
  PropagatedSignatures prop = propagate_hops(sig, hops_nb, threads);

  std::vector<StructuralFeature> feats(pairs.size());
  parallel_for(pairs.size(), threads, [&](std::size_t i) {
    feats[i] = estimate_de_counts(prop, hops_nb, pairs[i].first, pairs[i].second);
  });

  std::ostringstream csv;
  csv << "u,v,p,q,estimate,exact_if_requested\n";
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    for (int p = 0; p <= hops; ++p)
      for (int q = 0; q <= hops; ++q) {
        if (p == 0 && q == 0) continue;
        csv << pairs[i].first << ',' << pairs[i].second << ',' << p << ',' << q
            << ',' << fmt(feats[i].at(p, q)) << ',';
        if (exact)
          csv << exact_de_count(observed, hops_nb, pairs[i].first,
                                pairs[i].second, p, q);
        csv << '\n';
      }
  }
  write_text(out, csv.str());
  std::cout << "wrote " << pairs.size() << " pairs to " << out << '\n';
  return 0;
}

int cmd_probe(const std::string& graph_path, const std::string& format,
              const std::string& kind_name, std::size_t trials, std::size_t dim,
              std::size_t out_dim, double sigma_node, double sigma_weight,
              std::uint64_t seed, const std::string& pair_arg,
              std::size_t num_pairs, const std::string& out, unsigned threads) {
  Graph g = load_graph(graph_path, format);
  ProbeConfig cfg;
  cfg.trials = trials;
  cfg.dim = dim;
  cfg.out_dim = out_dim;
  cfg.sigma_node = sigma_node;
  cfg.sigma_weight = sigma_weight;
  cfg.seed = seed;
  if (kind_name == "gcn") cfg.kind = ProbeKind::gcn;
  else if (kind_name == "sage") cfg.kind = ProbeKind::sage;
  else throw std::runtime_error("unknown probe kind: " + kind_name);

  std::vector<Edge> pairs;
  if (!pair_arg.empty()) {
    auto comma = pair_arg.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error("--pair expects 'u,v'");
    pairs.emplace_back(
        static_cast<node_t>(std::stoul(pair_arg.substr(0, comma))),
        static_cast<node_t>(std::stoul(pair_arg.substr(comma + 1))));
  } else {
    rng::Stream pick(seed, 0x50414952ull);
    std::set<Edge> seen;
    while (pairs.size() < num_pairs) {
      node_t u = static_cast<node_t>(pick.next_below(g.num_nodes()));
      node_t v = static_cast<node_t>(pick.next_below(g.num_nodes()));
      if (u == v || g.has_edge(u, v)) continue;
      if (!seen.insert(make_edge(u, v)).second) continue;
      pairs.push_back(make_edge(u, v));
    }
  }

  auto results = probe_expectation(cfg, g, pairs, threads);
  json report = json::array();
  for (const auto& r : results) {
    report.push_back({{"pair", {r.u, r.v}},
                      {"kind", kind_name},
                      {"empirical", r.empirical_mean},
                      {"closed_form", r.closed_form},
                      {"z", r.z_score}});
  }
  json doc{{"trials", trials}, {"dim", dim}, {"out_dim", out_dim},
           {"seed", seed},     {"results", report}};
  write_text(out, doc.dump(2) + "\n");
  std::cout << "probed " << pairs.size() << " pairs (" << kind_name << ") -> "
            << out << '\n';
  return 0;
}

int cmd_train(const std::string& config_path, const std::string& graph_override,
              std::uint64_t seed_override, bool seed_given,
              const std::string& out_override, unsigned threads) {
  TrainFileConfig cfg = parse_train_config(config_path);
  if (!graph_override.empty()) cfg.graph_path = graph_override;
  if (seed_given) cfg.train.seed = seed_override;
  if (!out_override.empty()) cfg.out = out_override;
  cfg.train.threads = threads;

  Graph g = load_graph(cfg.graph_path, cfg.format);
  DatasetSplit split = cfg.split_dir.empty()
                           ? split_edges(g, cfg.split_seed)
                           : load_split(cfg.split_dir, g);
  Graph observed = observed_graph(g, split, cfg.include_valid);
  TrainResult result = train_predictor(g, observed, split, cfg.train);
  save_checkpoint(cfg.out, result.params, cfg.train.sketch);
  std::cout << "trained " << result.params.num_params()
            << " parameters, best epoch " << result.history.best_epoch
            << ", valid hits "
            << fmt(result.history.valid_hits[result.history.best_epoch])
            << ", checkpoint " << cfg.out << '\n';
  return 0;
}

int cmd_eval(const std::string& graph_path, const std::string& format,
             const std::string& checkpoint_path, std::uint64_t split_seed,
             const std::string& split_dir, std::size_t k,
             const std::string& out, const std::string& scores_out,
             unsigned threads) {
  Graph g = load_graph(graph_path, format);
  DatasetSplit split = split_dir.empty() ? split_edges(g, split_seed)
                                         : load_split(split_dir, g);
  Graph observed = observed_graph(g, split);
  Checkpoint ck = load_checkpoint(checkpoint_path);

  std::vector<Edge> links = split.test_pos;
  links.insert(links.end(), split.test_neg.begin(), split.test_neg.end());
  std::vector<double> scores =
      score_links(observed, ck.params, ck.sketch, links, threads);
  std::span<const double> pos(scores.data(), split.test_pos.size());
  std::span<const double> neg(scores.data() + split.test_pos.size(),
                              split.test_neg.size());
  double hits = hits_at_k(pos, neg, std::min(k, neg.size()));

  json doc{{"metric", "hits@" + std::to_string(k)},
           {"value", hits},
           {"test_positives", split.test_pos.size()},
           {"test_negatives", split.test_neg.size()},
           {"checkpoint", checkpoint_path}};
  write_text(out, doc.dump(2) + "\n");
  if (!scores_out.empty()) {
    std::ostringstream csv;
    csv << "u,v,label,score\n";
    for (std::size_t i = 0; i < links.size(); ++i)
      csv << links[i].first << ',' << links[i].second << ','
          << (i < split.test_pos.size() ? 1 : 0) << ',' << fmt(scores[i]) << '\n';
    write_text(scores_out, csv.str());
  }
  std::cout << "hits@" << k << " = " << fmt(hits) << " -> " << out << '\n';
  return 0;
}

int cmd_bench_estimation(const std::string& graph_path, const std::string& format,
                         const std::vector<std::size_t>& dims,
                         const std::vector<std::size_t>& hubs_list, int hops,
                         std::size_t num_pairs, std::size_t seeds,
                         std::uint64_t seed, const std::string& out,
                         bool assert_checks, unsigned threads) {
  Graph g = load_graph(graph_path, format);
  rng::Stream pick(seed, 0x42504152ull);
  std::vector<Edge> pairs;
  std::set<Edge> seen;
  while (pairs.size() < num_pairs) {
    node_t u = static_cast<node_t>(pick.next_below(g.num_nodes()));
    node_t v = static_cast<node_t>(pick.next_below(g.num_nodes()));
    if (u == v) continue;
    if (!seen.insert(make_edge(u, v)).second) continue;
    pairs.push_back(make_edge(u, v));
  }
  std::vector<SketchConfig> sweep;
  for (std::size_t b : hubs_list)
    for (std::size_t dim : dims) {
      SketchConfig cfg;
      cfg.dim = dim;
      cfg.hubs = b;
      cfg.hops = hops;
      cfg.seed = seed;
      sweep.push_back(cfg);
    }
  auto rows = estimation_benchmark(g, sweep, pairs, seeds, threads);
  write_text(out, estimation_report_csv(rows));
  std::cout << "wrote " << rows.size() << " rows to " << out << '\n';

  if (assert_checks) {
    // the (1,1) estimate must improve monotonically with the dimension
    for (std::size_t b : hubs_list) {
      double prev = -1.0;
      for (std::size_t dim : dims) {
        for (const auto& r : rows)
          if (r.p == 1 && r.q == 1 && r.dim == dim && r.hubs == b) {
            if (prev >= 0.0 && r.mse > prev) {
              std::cerr << "assert failed: #(1,1) MSE not decreasing in dim\n";
              return 1;
            }
            prev = r.mse;
          }
      }
    }
  }
  return 0;
}

int cmd_bench_model(const std::string& graph_path, const std::string& format,
                    const std::string& model_name, const std::string& baseline,
                    std::size_t repeats, std::uint64_t seed, std::size_t k,
                    std::size_t dim, int epochs, const std::string& out_csv,
                    const std::string& out_json, bool assert_checks,
                    unsigned threads) {
  Graph g = load_graph(graph_path, format);
  auto parse_model = [](const std::string& name) {
    if (name == "cn") return BenchModel::cn;
    if (name == "aa") return BenchModel::aa;
    if (name == "ra") return BenchModel::ra;
    if (name == "structural") return BenchModel::structural;
    throw std::runtime_error("unknown model: " + name);
  };
  BenchConfig cfg;
  cfg.model = parse_model(model_name);
  cfg.repeats = repeats;
  cfg.base_seed = seed;
  cfg.k = k;
  cfg.train.sketch.dim = dim;
  cfg.train.epochs = epochs;
  BenchmarkSummary summary = run_benchmark(g, graph_path, cfg, threads);
  write_text(out_csv, summary_csv(summary));
  write_text(out_json, summary_json(summary) + "\n");
  std::cout << summary.model << ": " << fmt(summary.mean) << " +- "
            << fmt(summary.stddev) << '\n';

  if (!baseline.empty()) {
    BenchConfig base_cfg = cfg;
    base_cfg.model = parse_model(baseline);
    BenchmarkSummary base = run_benchmark(g, graph_path, base_cfg, threads);
    std::cout << base.model << ": " << fmt(base.mean) << " +- "
              << fmt(base.stddev) << '\n';
    if (assert_checks && summary.mean <= base.mean) {
      std::cerr << "assert failed: " << summary.model << " did not beat "
                << base.model << '\n';
      return 1;
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quasi-orthogonal signature sketching for link prediction"};
  app.require_subcommand(1);

  unsigned threads_flag = 0;
  app.add_option("--threads", threads_flag,
                 "worker threads (0 = logical cores; env QOSKETCH_THREADS)");

  auto* gen = app.add_subcommand("gen", "generate a synthetic graph");
  std::string gen_model = "er", gen_out = "graph.tsv";
  std::size_t gen_n = 100, gen_d = 6, gen_m = 5;
  double gen_p = 0.05;
  std::uint64_t gen_seed = 1;
  gen->add_option("--model", gen_model, "er | regular | ba");
  gen->add_option("--n", gen_n, "node count");
  gen->add_option("--p", gen_p, "edge probability (er)");
  gen->add_option("--d", gen_d, "degree (regular)");
  gen->add_option("--m", gen_m, "edges per new node (ba)");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--out", gen_out, "output edge list");

  auto* split = app.add_subcommand("split", "split edges 70-10-20");
  std::string split_graph, split_format = "tsv", split_out = "split";
  std::uint64_t split_seed = 1;
  split->add_option("--graph", split_graph, "edge-list file")->required();
  split->add_option("--format", split_format, "tsv | csv");
  split->add_option("--seed", split_seed, "split seed");
  split->add_option("--out-dir", split_out, "output directory");

  auto* est = app.add_subcommand("estimate", "estimate label counts for pairs");
  std::string est_graph, est_format = "tsv", est_pairs, est_split,
              est_out = "results.csv";
  std::size_t est_dim = 1024, est_hubs = 0;
  int est_hops = 2;
  std::uint64_t est_seed = 1;
  bool est_exact = false;
  est->add_option("--graph", est_graph, "edge-list file")->required();
  est->add_option("--format", est_format, "tsv | csv");
  est->add_option("--dim", est_dim, "signature dimension F");
  est->add_option("--hubs", est_hubs, "one-hot hub count b");
  est->add_option("--hops", est_hops, "max hop r");
  est->add_option("--seed", est_seed, "signature seed");
  est->add_option("--pairs", est_pairs, "pair file or 'all-test'")->required();
  est->add_option("--split", est_split, "split dir (for all-test)");
  est->add_flag("--exact", est_exact, "also run the exact oracle");
  est->add_option("--out", est_out, "output csv");

  auto* probe = app.add_subcommand("probe", "random-layer expectation probe");
  std::string probe_graph, probe_format = "tsv", probe_kind = "gcn",
              probe_pair, probe_out = "probe.json";
  std::size_t probe_trials = 10000, probe_dim = 8, probe_out_dim = 8,
              probe_num_pairs = 10;
  double probe_sn = 1.0, probe_sw = 1.0;
  std::uint64_t probe_seed = 1;
  probe->add_option("--graph", probe_graph, "edge-list file")->required();
  probe->add_option("--format", probe_format, "tsv | csv");
  probe->add_option("--kind", probe_kind, "gcn | sage");
  probe->add_option("--trials", probe_trials, "Monte-Carlo trials");
  probe->add_option("--dim", probe_dim, "input width F");
  probe->add_option("--out-dim", probe_out_dim, "output width F'");
  probe->add_option("--sigma-node", probe_sn, "input entry std");
  probe->add_option("--sigma-weight", probe_sw, "weight entry std");
  probe->add_option("--seed", probe_seed, "probe seed");
  probe->add_option("--pair", probe_pair, "probe one pair 'u,v'");
  probe->add_option("--num-pairs", probe_num_pairs,
                    "sample this many non-adjacent pairs");
  probe->add_option("--out", probe_out, "output json");

  auto* train = app.add_subcommand("train", "train the structural classifier");
  std::string train_config, train_graph, train_out;
  std::uint64_t train_seed = 0;
  bool train_seed_given = false;
  train->add_option("--config", train_config, "train config json")->required();
  train->add_option("--graph", train_graph, "override graph path");
  train->add_option("--seed", train_seed, "override training seed")
      ->each([&](const std::string&) { train_seed_given = true; });
  train->add_option("--out", train_out, "override checkpoint path");

  auto* eval = app.add_subcommand("eval", "evaluate a checkpoint");
  std::string eval_graph, eval_format = "tsv", eval_ckpt, eval_split,
              eval_out = "eval.json", eval_scores;
  std::uint64_t eval_seed = 1;
  std::size_t eval_k = 50;
  eval->add_option("--graph", eval_graph, "edge-list file")->required();
  eval->add_option("--format", eval_format, "tsv | csv");
  eval->add_option("--checkpoint", eval_ckpt, "checkpoint json")->required();
  eval->add_option("--split-seed", eval_seed, "re-split seed");
  eval->add_option("--split", eval_split, "split dir");
  eval->add_option("--k", eval_k, "hits@k cutoff");
  eval->add_option("--out", eval_out, "metric json");
  eval->add_option("--scores", eval_scores, "optional per-link scores csv");

  auto* bench = app.add_subcommand("bench", "benchmarks");
  std::string bench_suite = "estimation", bench_graph, bench_format = "tsv";
  std::vector<std::size_t> bench_dims{256, 512, 1024, 2048};
  std::vector<std::size_t> bench_hubs{0};
  int bench_hops = 2, bench_epochs = 30;
  std::size_t bench_pairs = 200, bench_seeds = 10, bench_repeats = 10,
              bench_k = 50, bench_dim = 256;
  std::uint64_t bench_seed = 1;
  std::string bench_model = "cn", bench_baseline, bench_out = "bench.csv",
              bench_json = "bench.json";
  bool bench_assert = false;
  bench->add_option("--suite", bench_suite, "estimation | model");
  bench->add_option("--graph", bench_graph, "edge-list file")->required();
  bench->add_option("--format", bench_format, "tsv | csv");
  bench->add_option("--dims", bench_dims, "dimension sweep");
  bench->add_option("--hubs-list", bench_hubs, "hub counts to sweep");
  bench->add_option("--hops", bench_hops, "max hop r");
  bench->add_option("--pairs", bench_pairs, "sampled pair count");
  bench->add_option("--seeds", bench_seeds, "signature seeds per config");
  bench->add_option("--repeats", bench_repeats, "split repeats (model suite)");
  bench->add_option("--k", bench_k, "hits@k cutoff");
  bench->add_option("--dim", bench_dim, "signature dim (model suite)");
  bench->add_option("--epochs", bench_epochs, "training epochs (model suite)");
  bench->add_option("--seed", bench_seed, "base seed");
  bench->add_option("--model", bench_model, "cn | aa | ra | structural");
  bench->add_option("--baseline", bench_baseline, "comparison model");
  bench->add_flag("--assert", bench_assert, "exit nonzero on failed checks");
  bench->add_option("--out", bench_out, "output csv");
  bench->add_option("--out-json", bench_json, "output json (model suite)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  unsigned threads = resolve_cli_threads(threads_flag);
  try {
    if (*gen)
      return cmd_gen(gen_model, gen_n, gen_p, gen_d, gen_m, gen_seed, gen_out);
    if (*split)
      return cmd_split(split_graph, split_format, split_seed, split_out);
    if (*est)
      return cmd_estimate(est_graph, est_format, est_dim, est_hubs, est_hops,
                          est_seed, est_pairs, est_split, est_exact, est_out,
                          threads);
    if (*probe)
      return cmd_probe(probe_graph, probe_format, probe_kind, probe_trials,
                       probe_dim, probe_out_dim, probe_sn, probe_sw, probe_seed,
                       probe_pair, probe_num_pairs, probe_out, threads);
    if (*train)
      return cmd_train(train_config, train_graph, train_seed, train_seed_given,
                       train_out, threads);
    if (*eval)
      return cmd_eval(eval_graph, eval_format, eval_ckpt, eval_seed, eval_split,
                      eval_k, eval_out, eval_scores, threads);
    if (*bench) {
      if (bench_suite == "estimation")
        return cmd_bench_estimation(bench_graph, bench_format, bench_dims,
                                    bench_hubs, bench_hops, bench_pairs,
                                    bench_seeds, bench_seed, bench_out,
                                    bench_assert, threads);
      if (bench_suite == "model")
        return cmd_bench_model(bench_graph, bench_format, bench_model,
                               bench_baseline, bench_repeats, bench_seed,
                               bench_k, bench_dim, bench_epochs, bench_out,
                               bench_json, bench_assert, threads);
      throw std::runtime_error("unknown bench suite: " + bench_suite);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
