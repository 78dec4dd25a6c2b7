#include "qosketch/graph.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <unordered_set>

#include "qosketch/rng.hpp"

namespace qosketch {

namespace {

std::uint64_t edge_key(node_t a, node_t b) {
  Edge e = make_edge(a, b);
  return (static_cast<std::uint64_t>(e.first) << 32) | e.second;
}

}  // namespace

Graph Graph::from_edges(std::size_t num_nodes, std::vector<Edge> edges) {
  for (auto& e : edges) {
    if (e.first >= num_nodes || e.second >= num_nodes)
      throw std::invalid_argument("Graph::from_edges: node id out of range");
    e = make_edge(e.first, e.second);
  }
  std::erase_if(edges, [](const Edge& e) { return e.first == e.second; });
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  Graph g;
  g.offsets_.assign(num_nodes + 1, 0);
  for (const Edge& e : edges) {
    ++g.offsets_[e.first + 1];
    ++g.offsets_[e.second + 1];
  }
  for (std::size_t v = 0; v < num_nodes; ++v) g.offsets_[v + 1] += g.offsets_[v];
  g.neighbors_.resize(2 * edges.size());
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const Edge& e : edges) {
    g.neighbors_[cursor[e.first]++] = e.second;
    g.neighbors_[cursor[e.second]++] = e.first;
  }
  for (std::size_t v = 0; v < num_nodes; ++v) {
    auto begin = g.neighbors_.begin() + g.offsets_[v];
    auto end = g.neighbors_.begin() + g.offsets_[v + 1];
    std::sort(begin, end);
  }
  return g;
}

bool Graph::has_edge(node_t u, node_t v) const {
  auto nbrs = neighbors(u);
  return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges());
  for (std::size_t v = 0; v < num_nodes(); ++v)
    for (node_t w : neighbors(static_cast<node_t>(v)))
      if (v < w) out.emplace_back(static_cast<node_t>(v), w);
  return out;
}

MaskedView::MaskedView(const Graph& base, std::span<const Edge> removed)
    : base_(&base) {
  std::unordered_map<node_t, std::unordered_set<node_t>> drop;
  for (const Edge& e : removed) {
    if (!base.has_edge(e.first, e.second))
      throw std::invalid_argument("MaskedView: edge not present in base graph");
    drop[e.first].insert(e.second);
    drop[e.second].insert(e.first);
  }
  for (const auto& [v, gone] : drop) {
    std::vector<node_t> kept;
    kept.reserve(base.degree(v) - gone.size());
    for (node_t w : base.neighbors(v))
      if (!gone.contains(w)) kept.push_back(w);
    patched_.emplace(v, std::move(kept));
  }
}

namespace {

// Parses "a b" or "a,b"; returns false on blank/comment lines.
bool parse_edge_line(const std::string& line, EdgeFileFormat format,
                     std::int64_t& a, std::int64_t& b) {
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
      ++i;
  };
  skip_ws();
  if (i >= line.size() || line[i] == '#') return false;
  auto parse_int = [&](std::int64_t& out) {
    auto [ptr, ec] = std::from_chars(line.data() + i, line.data() + line.size(), out);
    if (ec != std::errc{}) throw std::runtime_error("bad integer");
    i = static_cast<std::size_t>(ptr - line.data());
  };
  parse_int(a);
  skip_ws();
  if (format == EdgeFileFormat::csv) {
    if (i >= line.size() || line[i] != ',') throw std::runtime_error("expected ','");
    ++i;
    skip_ws();
  }
  parse_int(b);
  skip_ws();
  if (i < line.size() && line[i] != '#')
    throw std::runtime_error("trailing characters");
  return true;
}

}  // namespace

Graph load_edge_list(const std::string& path, EdgeFileFormat format,
                     LoadReport* report) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_edge_list: cannot open " + path);

  std::unordered_map<std::int64_t, node_t> dense;
  std::vector<std::int64_t> labels;
  std::vector<Edge> edges;
  std::size_t self_loops = 0, lines_parsed = 0;

  auto intern = [&](std::int64_t label) {
    auto [it, inserted] = dense.emplace(label, static_cast<node_t>(labels.size()));
    if (inserted) labels.push_back(label);
    return it->second;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::int64_t a, b;
    try {
      if (!parse_edge_line(line, format, a, b)) continue;
    } catch (const std::exception& e) {
      throw std::runtime_error("load_edge_list: " + path + ":" +
                               std::to_string(line_no) + ": " + e.what());
    }
    ++lines_parsed;
    if (a == b) {
      ++self_loops;
      // still a sighting of the node id
      intern(a);
      continue;
    }
    node_t ia = intern(a);
    node_t ib = intern(b);
    edges.emplace_back(ia, ib);
  }
  if (edges.empty())
    throw std::runtime_error("load_edge_list: " + path + " contains no edges");

  std::size_t raw = edges.size();
  Graph g = Graph::from_edges(labels.size(), std::move(edges));
  if (report) {
    report->original_ids = std::move(labels);
    report->lines_parsed = lines_parsed;
    report->self_loops_dropped = self_loops;
    report->duplicates_dropped = raw - g.num_edges();
  }
  return g;
}

void save_edge_list(const std::string& path, std::span<const Edge> edges) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_edge_list: cannot open " + path);
  for (const Edge& e : edges) out << e.first << '\t' << e.second << '\n';
  if (!out) throw std::runtime_error("save_edge_list: write failed for " + path);
}

DatasetSplit split_edges(const Graph& g, std::uint64_t seed, SplitRatios ratios) {
  std::vector<Edge> edges = g.edges();
  if (edges.size() < 10)
    throw std::invalid_argument("split_edges: graph needs at least 10 edges");

  rng::Stream stream(seed, /*stream_id=*/0x53504C4954ull);
  rng::shuffle<Edge>(edges, stream);

  const std::size_t m = edges.size();
  const std::size_t n_train = static_cast<std::size_t>(std::floor(ratios.train * m));
  const std::size_t n_valid = static_cast<std::size_t>(std::floor(ratios.valid * m));
  const std::size_t n_test = m - n_train - n_valid;

  DatasetSplit split;
  split.seed = seed;
  split.ratios = ratios;
  split.train_pos.assign(edges.begin(), edges.begin() + n_train);
  split.valid_pos.assign(edges.begin() + n_train, edges.begin() + n_train + n_valid);
  split.test_pos.assign(edges.begin() + n_train + n_valid, edges.end());
  std::sort(split.train_pos.begin(), split.train_pos.end());
  std::sort(split.valid_pos.begin(), split.valid_pos.end());
  std::sort(split.test_pos.begin(), split.test_pos.end());

  split.valid_neg = sample_negative_edges(g, n_valid, seed, /*stream_id=*/1);
  split.test_neg = sample_negative_edges(g, n_test, seed, /*stream_id=*/2);
  return split;
}

Graph observed_graph(const Graph& g, const DatasetSplit& split, bool include_valid) {
  std::vector<Edge> edges = split.train_pos;
  if (include_valid)
    edges.insert(edges.end(), split.valid_pos.begin(), split.valid_pos.end());
  return Graph::from_edges(g.num_nodes(), std::move(edges));
}

std::vector<Edge> sample_negative_edges(const Graph& g, std::size_t count,
                                        std::uint64_t seed,
                                        std::uint64_t stream_id) {
  const std::size_t n = g.num_nodes();
  if (n < 2 && count > 0)
    throw std::invalid_argument("sample_negative_edges: graph too small");
  const std::size_t max_pairs = n * (n - 1) / 2;
  if (count > max_pairs - g.num_edges())
    throw std::invalid_argument("sample_negative_edges: not enough non-edges");

  rng::Stream stream(seed, 0x4E454741ull + stream_id);  // per-purpose stream
  std::unordered_set<std::uint64_t> taken;
  std::vector<Edge> out;
  out.reserve(count);
  while (out.size() < count) {
    node_t a = static_cast<node_t>(stream.next_below(n));
    node_t b = static_cast<node_t>(stream.next_below(n));
    if (a == b || g.has_edge(a, b)) continue;
    if (!taken.insert(edge_key(a, b)).second) continue;
    out.push_back(make_edge(a, b));
  }
  return out;
}

}  // namespace qosketch
