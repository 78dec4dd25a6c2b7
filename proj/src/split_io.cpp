#include "qosketch/split_io.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace qosketch {

namespace {

std::vector<Edge> read_edge_pairs(const std::string& path) {
  std::vector<Edge> out;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_split: cannot open " + path);
  std::int64_t a, b;
  while (in >> a >> b) out.emplace_back(static_cast<node_t>(a), static_cast<node_t>(b));
  return out;
}

}  // namespace

void save_split(const std::string& dir, const DatasetSplit& split) {
  std::filesystem::create_directories(dir);
  save_edge_list(dir + "/train.edges", split.train_pos);
  save_edge_list(dir + "/valid.edges", split.valid_pos);
  save_edge_list(dir + "/test.edges", split.test_pos);
  nlohmann::json manifest{
      {"seed", split.seed},
      {"ratios", {split.ratios.train, split.ratios.valid, split.ratios.test}},
      {"counts",
       {{"train", split.train_pos.size()},
        {"valid", split.valid_pos.size()},
        {"test", split.test_pos.size()}}}};
  std::ofstream out(dir + "/manifest.json");
  if (!out) throw std::runtime_error("save_split: cannot open manifest in " + dir);
  out << manifest.dump(2) << '\n';
}

DatasetSplit load_split(const std::string& dir, const Graph& g) {
  std::ifstream in(dir + "/manifest.json");
  if (!in) throw std::runtime_error("load_split: cannot open " + dir + "/manifest.json");
  nlohmann::json manifest = nlohmann::json::parse(in);

  DatasetSplit split;
  split.seed = manifest.at("seed").get<std::uint64_t>();
  auto ratios = manifest.at("ratios").get<std::vector<double>>();
  split.ratios = {ratios.at(0), ratios.at(1), ratios.at(2)};
  split.train_pos = read_edge_pairs(dir + "/train.edges");
  split.valid_pos = read_edge_pairs(dir + "/valid.edges");
  split.test_pos = read_edge_pairs(dir + "/test.edges");

  const auto& counts = manifest.at("counts");
  if (split.train_pos.size() != counts.at("train").get<std::size_t>() ||
      split.valid_pos.size() != counts.at("valid").get<std::size_t>() ||
      split.test_pos.size() != counts.at("test").get<std::size_t>())
    throw std::runtime_error("load_split: edge files disagree with manifest counts");

  split.valid_neg = sample_negative_edges(g, split.valid_pos.size(), split.seed, 1);
  split.test_neg = sample_negative_edges(g, split.test_pos.size(), split.seed, 2);
  return split;
}

}  // namespace qosketch
