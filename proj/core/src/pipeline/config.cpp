#include "evoprune/pipeline/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "evoprune/rng.hpp"
#include "json.hpp"

namespace evoprune::pipeline {

using json = nlohmann::json;

namespace {

// Reads keys of one JSON object, rejecting anything not consumed.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError("'" + path_ + "' must be an object");
  }
  ~Section() noexcept(false) {
    if (std::uncaught_exceptions() > 0) return;
    for (const auto& [key, _] : j_.items()) {
      if (!seen_.contains(key)) throw ConfigError("unknown key '" + path_ + "." + key + "'");
    }
  }

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError("'" + path_ + "." + key + "' has the wrong type: " + j_.at(key).dump());
    }
  }

  const json* child(const char* key) {
    seen_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null() ? &j_.at(key) : nullptr;
  }

  const std::string& path() const { return path_; }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

EvalSubset parse_subset(const std::string& s, const std::string& where) {
  if (s == "opt") return EvalSubset::Opt;
  if (s == "val") return EvalSubset::Val;
  throw ConfigError("'" + where + "' must be \"opt\" or \"val\"");
}

std::string subset_name(EvalSubset s) { return s == EvalSubset::Opt ? "opt" : "val"; }

void read_ea(Section& s, moea::EAConfig& ea, EvalSubset& subset) {
  s.get("population", ea.population);
  s.get("generations", ea.generations);
  s.get("crossover_prob", ea.crossover_prob);
  s.get("mutation_prob", ea.mutation_prob);
  s.get("sbx_eta", ea.sbx_eta);
  s.get("poly_eta", ea.poly_eta);
  std::string eval = subset_name(subset);
  s.get("eval_subset", eval);
  subset = parse_subset(eval, s.path() + ".eval_subset");
}

json ea_json(const moea::EAConfig& ea, EvalSubset subset) {
  json j;
  j["population"] = ea.population;
  j["generations"] = ea.generations;
  j["crossover_prob"] = ea.crossover_prob;
  j["mutation_prob"] = ea.mutation_prob;
  j["sbx_eta"] = ea.sbx_eta;
  j["poly_eta"] = ea.poly_eta;
  j["eval_subset"] = subset_name(subset);
  return j;
}

}  // namespace

void RunConfig::validate() const {
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
  if (network.widths.size() < 2) throw ConfigError("network.widths needs at least 2 entries");
  if (network.widths.front() != static_cast<std::size_t>(dataset.dim)) {
    throw ConfigError("network input width must equal dataset.dim");
  }
  if (network.widths.back() < static_cast<std::size_t>(dataset.classes)) {
    throw ConfigError("network output width must be >= dataset.classes");
  }
  if (bins < 1 || phase2.population % bins != 0) throw ConfigError("phase2.population must be a multiple of bins");
  if (phase2.moead_neighbors > phase2.population) throw ConfigError("moead_neighbors exceeds phase2.population");
  try {
    train.validate();
    phase1.validate();
    phase2.validate();
    importance.validate();
    data::SplitSpec{dataset.train_fraction, dataset.val_fraction, dataset.opt_per_class, 0}.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  if (anchors.delta_acc < 0.0 || anchors.delta_loss < 0.0) throw ConfigError("anchor deltas must be >= 0");
}

std::uint64_t RunConfig::data_seed() const { return derive_seed(seed, "data"); }
std::uint64_t RunConfig::split_seed() const { return derive_seed(seed, "split"); }
std::uint64_t RunConfig::init_seed() const { return derive_seed(seed, "init"); }
std::uint64_t RunConfig::train_seed() const { return derive_seed(seed, "train"); }
std::uint64_t RunConfig::phase1_seed() const { return derive_seed(seed, "phase1"); }
std::uint64_t RunConfig::phase2_seed() const { return derive_seed(seed, "phase2"); }
std::uint64_t RunConfig::importance_seed() const { return derive_seed(seed, "importance"); }

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("not valid JSON: ") + e.what());
  }
  RunConfig cfg;
  {
    Section top(root, "config");
    int version = 0;
    top.get("version", version);
    if (version != kConfigVersion) {
      throw ConfigError("config version must be " + std::to_string(kConfigVersion) + " (got " +
                        std::to_string(version) + ")");
    }
    top.get("seed", cfg.seed);
    std::string out = cfg.output_dir.string();
    top.get("output_dir", out);
    cfg.output_dir = out;
    top.get("jobs", cfg.jobs);

    if (const json* j = top.child("dataset")) {
      Section s(*j, "dataset");
      s.get("classes", cfg.dataset.classes);
      s.get("dim", cfg.dataset.dim);
      s.get("per_class", cfg.dataset.per_class);
      s.get("spread", cfg.dataset.spread);
      s.get("train_fraction", cfg.dataset.train_fraction);
      s.get("val_fraction", cfg.dataset.val_fraction);
      s.get("opt_per_class", cfg.dataset.opt_per_class);
    }
    if (const json* j = top.child("network")) {
      Section s(*j, "network");
      s.get("widths", cfg.network.widths);
      s.get("non_prunable", cfg.network.non_prunable);
    }
    if (const json* j = top.child("train")) {
      Section s(*j, "train");
      s.get("epochs", cfg.train.epochs);
      s.get("learning_rate", cfg.train.learning_rate);
      s.get("batch_size", cfg.train.batch_size);
      s.get("beta1", cfg.train.beta1);
      s.get("beta2", cfg.train.beta2);
      s.get("epsilon", cfg.train.epsilon);
    }
    if (const json* j = top.child("phase1")) {
      Section s(*j, "phase1");
      read_ea(s, cfg.phase1, cfg.phase1_eval);
    }
    if (const json* j = top.child("phase2")) {
      Section s(*j, "phase2");
      read_ea(s, cfg.phase2, cfg.phase2_eval);
      std::string engine = phase2::to_string(cfg.engine);
      s.get("engine", engine);
      cfg.engine = phase2::parse_engine(engine);
      s.get("moead_neighbors", cfg.phase2.moead_neighbors);
      s.get("moead_mating_prob", cfg.phase2.moead_mating_prob);
      s.get("moead_proxy", cfg.phase2.moead_proxy);
      s.get("importance_mutation", cfg.phase2.importance_mutation);
      s.get("bins", cfg.bins);
    }
    if (const json* j = top.child("importance")) {
      Section s(*j, "importance");
      s.get("sparsity_threshold", cfg.importance.sparsity_threshold);
      if (const json* ex = s.child("excluded_layers")) {
        try {
          cfg.importance.excluded_layers = ex->get<std::set<std::string>>();
        } catch (const json::exception&) {
          throw ConfigError("'importance.excluded_layers' must be a list of layer names or null");
        }
      }
      std::vector<double> range{cfg.importance.default_range.alpha, cfg.importance.default_range.beta};
      s.get("lambda_range", range);
      if (range.size() != 2) throw ConfigError("'importance.lambda_range' must be [alpha, beta]");
      cfg.importance.default_range = {range[0], range[1]};
      std::map<std::string, std::vector<double>> per_layer;
      s.get("layer_ranges", per_layer);
      for (const auto& [name, r] : per_layer) {
        if (r.size() != 2) throw ConfigError("'importance.layer_ranges." + name + "' must be [alpha, beta]");
        cfg.importance.layer_ranges[name] = {r[0], r[1]};
      }
    }
    if (const json* j = top.child("anchors")) {
      Section s(*j, "anchors");
      s.get("delta_acc", cfg.anchors.delta_acc);
      s.get("delta_loss", cfg.anchors.delta_loss);
      if (const json* ov = s.child("override")) {
        std::vector<std::size_t> idx;
        try {
          idx = ov->get<std::vector<std::size_t>>();
        } catch (const json::exception&) {
          idx.clear();
        }
        if (idx.size() != 2) throw ConfigError("'anchors.override' must be [heavy_index, light_index] or null");
        cfg.anchors.override_indices = std::make_pair(idx[0], idx[1]);
      }
    }
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["version"] = kConfigVersion;
  j["seed"] = cfg.seed;
  j["output_dir"] = cfg.output_dir.string();
  j["jobs"] = cfg.jobs;
  j["dataset"] = {{"classes", cfg.dataset.classes},
                  {"dim", cfg.dataset.dim},
                  {"per_class", cfg.dataset.per_class},
                  {"spread", cfg.dataset.spread},
                  {"train_fraction", cfg.dataset.train_fraction},
                  {"val_fraction", cfg.dataset.val_fraction},
                  {"opt_per_class", cfg.dataset.opt_per_class}};
  j["network"] = {{"widths", cfg.network.widths}, {"non_prunable", cfg.network.non_prunable}};
  j["train"] = {{"epochs", cfg.train.epochs},       {"learning_rate", cfg.train.learning_rate},
                {"batch_size", cfg.train.batch_size}, {"beta1", cfg.train.beta1},
                {"beta2", cfg.train.beta2},           {"epsilon", cfg.train.epsilon}};
  j["phase1"] = ea_json(cfg.phase1, cfg.phase1_eval);
  json p2 = ea_json(cfg.phase2, cfg.phase2_eval);
  p2["engine"] = phase2::to_string(cfg.engine);
  p2["moead_neighbors"] = cfg.phase2.moead_neighbors;
  p2["moead_mating_prob"] = cfg.phase2.moead_mating_prob;
  p2["moead_proxy"] = cfg.phase2.moead_proxy;
  p2["importance_mutation"] = cfg.phase2.importance_mutation;
  p2["bins"] = cfg.bins;
  j["phase2"] = p2;
  json ranges = json::object();
  for (const auto& [name, r] : cfg.importance.layer_ranges) ranges[name] = {r.alpha, r.beta};
  j["importance"] = {
      {"sparsity_threshold", cfg.importance.sparsity_threshold},
      {"excluded_layers", cfg.importance.excluded_layers ? json(*cfg.importance.excluded_layers) : json(nullptr)},
      {"lambda_range", {cfg.importance.default_range.alpha, cfg.importance.default_range.beta}},
      {"layer_ranges", ranges}};
  j["anchors"] = {{"delta_acc", cfg.anchors.delta_acc},
                  {"delta_loss", cfg.anchors.delta_loss},
                  {"override", cfg.anchors.override_indices
                                   ? json{cfg.anchors.override_indices->first, cfg.anchors.override_indices->second}
                                   : json(nullptr)}};
  return j.dump(2) + "\n";
}

}  // namespace evoprune::pipeline
