#include "qosketch/checkpoint.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

namespace qosketch {

namespace {

using nlohmann::json;

json mlp_to_json(const Mlp& m) {
  json j;
  j["sizes"] = m.sizes();
  json weights = json::array(), biases = json::array();
  for (std::size_t l = 0; l < m.num_layers(); ++l) {
    weights.push_back(m.weights(l));
    biases.push_back(m.biases(l));
  }
  j["weights"] = weights;
  j["biases"] = biases;
  return j;
}

Mlp mlp_from_json(const json& j) {
  Mlp m(j.at("sizes").get<std::vector<std::size_t>>());
  for (std::size_t l = 0; l < m.num_layers(); ++l) {
    m.weights(l) = j.at("weights").at(l).get<std::vector<double>>();
    m.biases(l) = j.at("biases").at(l).get<std::vector<double>>();
  }
  return m;
}

std::string rescale_name(RescaleMode m) {
  switch (m) {
    case RescaleMode::none: return "none";
    case RescaleMode::fixed_fn: return "fixed_fn";
    case RescaleMode::learned: return "learned";
  }
  return "none";
}

RescaleMode rescale_from_name(const std::string& s) {
  if (s == "none") return RescaleMode::none;
  if (s == "fixed_fn") return RescaleMode::fixed_fn;
  if (s == "learned") return RescaleMode::learned;
  throw std::runtime_error("checkpoint: unknown rescale mode " + s);
}

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.contains(it.key()))
      throw std::runtime_error("checkpoint: unknown key '" + it.key() + "' in " +
                               where);
}

}  // namespace

std::string checkpoint_to_json(const ModelParams& params,
                               const SketchConfig& sketch) {
  json j;
  j["schema"] = 1;
  j["sketch"] = {{"dim", sketch.dim},
                 {"hubs", sketch.hubs},
                 {"hops", sketch.hops},
                 {"seed", sketch.seed}};
  j["rescale"] = rescale_name(params.rescale);
  j["features"] = {{"hops", params.features.hops},
                   {"triangles", params.features.triangles}};
  j["input_mean"] = params.input_mean;
  j["input_scale"] = params.input_scale;
  j["classifier"] = mlp_to_json(params.classifier);
  j["rescale_head"] = mlp_to_json(params.rescale_head);
  return j.dump(2);
}

Checkpoint checkpoint_from_json(const std::string& text) {
  json j = json::parse(text);
  reject_unknown_keys(j,
                      {"schema", "sketch", "rescale", "features", "input_mean",
                       "input_scale", "classifier", "rescale_head"},
                      "checkpoint");
  if (j.at("schema").get<int>() != 1)
    throw std::runtime_error("checkpoint: unsupported schema version");

  Checkpoint ck;
  const json& s = j.at("sketch");
  reject_unknown_keys(s, {"dim", "hubs", "hops", "seed"}, "sketch");
  ck.sketch.dim = s.at("dim").get<std::size_t>();
  ck.sketch.hubs = s.at("hubs").get<std::size_t>();
  ck.sketch.hops = s.at("hops").get<int>();
  ck.sketch.seed = s.at("seed").get<std::uint64_t>();

  ck.params.rescale = rescale_from_name(j.at("rescale").get<std::string>());
  const json& f = j.at("features");
  reject_unknown_keys(f, {"hops", "triangles"}, "features");
  ck.params.features.hops = f.at("hops").get<int>();
  ck.params.features.triangles = f.at("triangles").get<bool>();
  ck.params.input_mean = j.at("input_mean").get<std::vector<double>>();
  ck.params.input_scale = j.at("input_scale").get<std::vector<double>>();
  ck.params.classifier = mlp_from_json(j.at("classifier"));
  ck.params.rescale_head = mlp_from_json(j.at("rescale_head"));
  return ck;
}

void save_checkpoint(const std::string& path, const ModelParams& params,
                     const SketchConfig& sketch) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_checkpoint: cannot open " + path);
  out << checkpoint_to_json(params, sketch) << '\n';
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_checkpoint: cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return checkpoint_from_json(text);
}

}  // namespace qosketch
