#include <CLI11.hpp>
#include <iostream>

#include "curation/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNonConvergence = 3;

using namespace curation;

CurationConfig load_config_or_default(const std::string& path, std::uint64_t seed_flag,
                                      bool seed_set) {
  CurationConfig config = path.empty() ? CurationConfig{} : load_config(path);
  if (seed_set) config.seed = seed_flag;
  return config;
}

int cmd_filter_expansions(const std::string& expansions_path, const std::string& counts_path,
                          const std::string& model_path, const std::string& negatives_path,
                          const std::string& config_path, const std::string& out_path,
                          std::uint64_t seed, bool seed_set) {
  CurationConfig config = load_config_or_default(config_path, seed, seed_set);
  std::vector<ExpansionCandidate> all = load_expansion_file(expansions_path);
  if (all.empty()) throw InputError("no expansions in " + expansions_path);
  // The first record is the base query; the rest are its candidates.
  ExpansionCandidate target = all.front();
  std::vector<ExpansionCandidate> candidates(all.begin() + 1, all.end());
  PageCounts counts = load_page_counts(counts_path);
  RelevanceModel model = load_relevance_model(model_path);
  std::vector<Vec> negatives = load_negative_pool(negatives_path);

  FilterResult result = filter_expansions(std::move(candidates), target, counts, model,
                                          negatives, config);
  Json out = Json::array();
  for (const auto& cand : result.all) {
    Json j;
    j["text"] = cand.text;
    j["status"] = to_string(cand.status);
    if (cand.salience) j["salience"] = *cand.salience;
    if (cand.semantic_distance) j["semantic_distance"] = *cand.semantic_distance;
    if (cand.visual_distance) j["visual_distance"] = *cand.visual_distance;
    out.push_back(std::move(j));
  }
  std::string text = out.dump(2) + "\n";
  if (out_path.empty())
    std::cout << text;
  else
    write_file(out_path, text);
  for (const auto& diag : result.diagnostics) std::cerr << diag << "\n";
  return kExitOk;
}

int cmd_curate(const std::string& bags_path, const std::string& config_path,
               const std::string& out_path, int quota, bool quota_set, std::uint64_t seed,
               bool seed_set) {
  CurationConfig config = load_config_or_default(config_path, seed, seed_set);
  if (quota_set) config.quota = quota;
  MilProblem problem = load_bags(bags_path, config);
  CurationResult result = run_curation(problem, config);
  std::string text = manifest_to_json(result.manifest).dump(2) + "\n";
  if (out_path.empty())
    std::cout << text;
  else
    write_file(out_path, text);
  return kExitOk;
}

int cmd_train_instance(const std::string& bags_path, const std::string& config_path,
                       const std::string& out_path, std::uint64_t seed, bool seed_set) {
  CurationConfig config = load_config_or_default(config_path, seed, seed_set);
  MilProblem problem = load_bags(bags_path, config);
  InstanceModel model =
      train_instance_model(problem, config.tolerances.mkl_tol, config.instance_max_iter);
  save_instance_model(model, out_path);
  return kExitOk;
}

int cmd_train_bag(const std::string& bags_path, const std::string& config_path,
                  const std::string& out_path, std::uint64_t seed, bool seed_set) {
  CurationConfig config = load_config_or_default(config_path, seed, seed_set);
  MilProblem problem = load_bags(bags_path, config);
  std::vector<Bag> positive, negative;
  for (const auto& bag : problem.bags)
    (bag.label == BagLabel::positive ? positive : negative).push_back(bag);
  BagTrainOptions options;
  options.C = config.C_bag;
  options.k = config.k;
  options.weights = {config.xi_alpha, config.xi_beta, config.d_clamp};
  options.cccp_tol = config.tolerances.cccp_tol;
  options.dinkelbach_tol = config.tolerances.dinkelbach_tol;
  options.max_outer = config.cccp_max_iter;
  BagModel model = train_bag_model(positive, negative, options);
  save_bag_model(model, out_path);
  return kExitOk;
}

int cmd_select_components(const std::string& graph_path, int budget, const std::string& out_path) {
  ComponentGraph graph = load_component_graph(graph_path);
  SelectionResult result = greedy_select(graph, budget);
  Json j;
  j["selected"] = result.subset;
  j["objective"] = result.objective;
  std::string text = j.dump(2) + "\n";
  if (out_path.empty())
    std::cout << text;
  else
    write_file(out_path, text);
  return kExitOk;
}

int cmd_synth(const SyntheticSpec& spec, const std::string& out_path,
              const std::string& truth_path) {
  CurationConfig config;
  config.seed = spec.seed;
  SyntheticProblem synth = generate_synthetic(spec, config);
  save_bag_file(synth.problem.bags, out_path);
  if (!truth_path.empty()) write_file(truth_path, truth_to_json(synth.truth).dump(2) + "\n");
  return kExitOk;
}

int cmd_report(const std::string& manifest_path) {
  Json j = Json::parse(read_file(manifest_path));
  if (j.value("schema", "") != "curation-manifest/1")
    throw IoError("report: unknown manifest schema");
  std::cout << "curation manifest\n";
  std::cout << "  bags scored:    " << j["bag_scores"].size() << "\n";
  std::cout << "  bags retained:  " << j["retained"].size() << "\n";
  int instances = 0;
  for (const auto& bag : j["retained"]) instances += static_cast<int>(bag["instances"].size());
  std::cout << "  instances kept: " << instances << "\n";
  std::cout << "  final selection " << j["selection"].size() << " instances\n";
  const auto& diag = j["diagnostics"];
  std::cout << "  instance model: " << diag["instance_iterations"] << " cutting-plane iterations"
            << (diag["instance_enumerated"].get<bool>() ? " (exact violator search)"
                                                        : " (per-bag violator search)")
            << "\n";
  std::cout << "  bag model:      " << diag["cccp_iterations"] << " CCCP iterations\n";
  std::cout << "  bag scores:\n";
  for (const auto& b : j["bag_scores"])
    std::cout << "    " << b["id"].get<std::string>() << "  " << b["score"].get<double>() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MIL-based curation of weakly-labeled bag collections"};
  app.require_subcommand(1);

  std::string config_path, out_path, bags_path, manifest_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int quota = 0;
  bool quota_set = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "flat key = value config file");
    cmd->add_option("--seed", seed, "override the config seed")->each([&](const std::string&) {
      seed_set = true;
    });
  };

  auto* fe = app.add_subcommand("filter-expansions", "prune non-salient and irrelevant expansions");
  std::string expansions_path, counts_path, relevance_path, negatives_path;
  fe->add_option("--expansions", expansions_path, "expansion file; first record is the base query")
      ->required();
  fe->add_option("--counts", counts_path, "page-count fixture")->required();
  fe->add_option("--relevance-model", relevance_path, "relevance model JSON")->required();
  fe->add_option("--negatives", negatives_path, "negative image pool JSON")->required();
  fe->add_option("--out", out_path, "output path (stdout if omitted)");
  add_common(fe);

  auto* ti = app.add_subcommand("train-instance", "train the instance decision function");
  ti->add_option("--bags", bags_path, "bag file")->required();
  ti->add_option("--out", out_path, "model output path")->required();
  add_common(ti);

  auto* tb = app.add_subcommand("train-bag", "train the latent bag classifier");
  tb->add_option("--bags", bags_path, "bag file")->required();
  tb->add_option("--out", out_path, "model output path")->required();
  add_common(tb);

  auto* cu = app.add_subcommand("curate", "run the full curation pipeline");
  cu->add_option("--bags", bags_path, "bag file")->required();
  cu->add_option("--out", out_path, "manifest output path (stdout if omitted)");
  cu->add_option("--quota", quota, "final selection quota")->each([&](const std::string&) {
    quota_set = true;
  });
  add_common(cu);

  auto* sc = app.add_subcommand("select-components", "greedy coverage selection over a graph");
  std::string graph_path;
  int budget = 1;
  sc->add_option("--graph", graph_path, "component graph JSON")->required();
  sc->add_option("--budget", budget, "subset cardinality")->required();
  sc->add_option("--out", out_path, "output path (stdout if omitted)");

  auto* sy = app.add_subcommand("synth", "generate a synthetic benchmark problem");
  SyntheticSpec spec;
  std::string truth_path;
  sy->add_option("--out", out_path, "bag file output path")->required();
  sy->add_option("--truth", truth_path, "ground truth output path");
  sy->add_option("--seed", spec.seed, "generator seed");
  sy->add_option("--dim", spec.dim, "feature dimension");
  sy->add_option("--clusters", spec.clusters, "number of visual distributions");
  sy->add_option("--scale", spec.cluster_scale, "cluster scale");
  sy->add_option("--separation", spec.separation, "center separation");
  sy->add_option("--pos-bags", spec.positive_bags, "clean positive bags");
  sy->add_option("--noise-bags", spec.noise_bags, "planted noise bags");
  sy->add_option("--neg-bags", spec.negative_bags, "negative bags");
  sy->add_option("--bag-size", spec.bag_size, "instances per bag");
  sy->add_option("--noise-fraction", spec.noise_fraction, "noise fraction inside positive bags");

  auto* rp = app.add_subcommand("report", "summarize a curation manifest");
  rp->add_option("--manifest", manifest_path, "manifest JSON")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (fe->parsed())
      return cmd_filter_expansions(expansions_path, counts_path, relevance_path, negatives_path,
                                   config_path, out_path, seed, seed_set);
    if (ti->parsed()) return cmd_train_instance(bags_path, config_path, out_path, seed, seed_set);
    if (tb->parsed()) return cmd_train_bag(bags_path, config_path, out_path, seed, seed_set);
    if (cu->parsed())
      return cmd_curate(bags_path, config_path, out_path, quota, quota_set, seed, seed_set);
    if (sc->parsed()) return cmd_select_components(graph_path, budget, out_path);
    if (sy->parsed()) return cmd_synth(spec, out_path, truth_path);
    if (rp->parsed()) return cmd_report(manifest_path);
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNonConvergence;
  } catch (const curation::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}
