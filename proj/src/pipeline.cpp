#include "curation/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace curation {

std::vector<std::string> even_select(const std::vector<RetainedBag>& retained, int quota,
                                     std::uint64_t /*seed*/) {
  int available = 0;
  for (const auto& bag : retained) available += static_cast<int>(bag.instances.size());
  if (quota < 0 || quota > available)
    throw InputError("even_select: quota " + std::to_string(quota) + " exceeds the " +
                     std::to_string(available) + " retained instances");

  std::vector<RetainedBag> order = retained;
  std::stable_sort(order.begin(), order.end(), [](const RetainedBag& a, const RetainedBag& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.id < b.id;
  });
  for (auto& bag : order)
    std::stable_sort(bag.instances.begin(), bag.instances.end(),
                     [](const RetainedInstance& a, const RetainedInstance& b) {
                       if (a.score != b.score) return a.score > b.score;
                       return a.id < b.id;
                     });

  std::vector<std::string> selection;
  std::vector<std::size_t> cursor(order.size(), 0);
  while (static_cast<int>(selection.size()) < quota) {
    bool progressed = false;
    for (std::size_t b = 0; b < order.size() && static_cast<int>(selection.size()) < quota; ++b) {
      if (cursor[b] >= order[b].instances.size()) continue;
      selection.push_back(order[b].instances[cursor[b]++].id);
      progressed = true;
    }
    if (!progressed) break;
  }
  return selection;
}

CurationResult run_curation(const MilProblem& problem, const CurationConfig& config) {
  config.validate();
  ValidationReport report = validate_problem(problem);
  if (!report.ok()) {
    std::string msg = "run_curation: invalid problem:";
    for (const auto& issue : report.issues) msg += " [" + issue + "]";
    throw InputError(msg);
  }

  CurationResult result;
  result.manifest.config = config;

  // Stage 1: individual-noise model over all instances.
  MilProblem instance_problem = problem;
  instance_problem.delta = config.delta;
  instance_problem.C = config.C_instance;
  instance_problem.kernel = resolve_kernel(config.kernel, problem.dimension());
  result.instance_model =
      train_instance_model(instance_problem, config.tolerances.mkl_tol, config.instance_max_iter,
                           &result.manifest.instance_trace);

  // Stage 2: group-noise model over bags.
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
  result.bag_model = train_bag_model(positive, negative, options, &result.manifest.bag_trace);

  // Stage 3: filter bags, then instances within retained bags.
  BagFilterResult bag_filter = filter_bags(result.bag_model, positive);
  result.manifest.bag_scores = bag_filter.scores;
  for (const auto& bag : positive) {
    auto score_it = std::find_if(bag_filter.scores.begin(), bag_filter.scores.end(),
                                 [&bag](const auto& p) { return p.first == bag.id; });
    if (score_it->second <= 0.0) continue;
    RetainedBag retained;
    retained.id = bag.id;
    retained.score = score_it->second;
    for (const auto& inst : bag.instances) {
      double score = score_instance(result.instance_model, inst.features);
      if (score > 0.0) retained.instances.push_back({inst.id, score});
    }
    std::stable_sort(retained.instances.begin(), retained.instances.end(),
                     [](const RetainedInstance& a, const RetainedInstance& b) {
                       if (a.score != b.score) return a.score > b.score;
                       return a.id < b.id;
                     });
    result.manifest.retained.push_back(std::move(retained));
  }

  // Stage 4: even selection across retained bags.
  int available = 0;
  for (const auto& bag : result.manifest.retained)
    available += static_cast<int>(bag.instances.size());
  int quota = config.quota > 0 ? std::min(config.quota, available) : available;
  result.manifest.selection = even_select(result.manifest.retained, quota, config.seed);
  return result;
}

namespace {

Json config_to_json(const CurationConfig& config) {
  Json j;
  j["delta"] = config.delta;
  j["c_instance"] = config.C_instance;
  j["c_bag"] = config.C_bag;
  j["kernel"] = config.kernel.kind == KernelSpec::Kind::linear ? "linear" : "rbf";
  j["gamma"] = config.kernel.gamma;
  j["k"] = config.k;
  j["xi_alpha"] = config.xi_alpha;
  j["xi_beta"] = config.xi_beta;
  j["d_clamp"] = config.d_clamp;
  j["salience_threshold"] = config.salience_threshold;
  j["top_n"] = config.top_n;
  j["coverage_budget"] = config.coverage_budget;
  j["seed"] = config.seed;
  j["quota"] = config.quota;
  j["mkl_tol"] = config.tolerances.mkl_tol;
  j["cccp_tol"] = config.tolerances.cccp_tol;
  j["dinkelbach_tol"] = config.tolerances.dinkelbach_tol;
  j["instance_max_iter"] = config.instance_max_iter;
  j["cccp_max_iter"] = config.cccp_max_iter;
  return j;
}

}  // namespace

Json manifest_to_json(const CurationManifest& manifest) {
  Json j;
  j["schema"] = "curation-manifest/1";
  j["config"] = config_to_json(manifest.config);

  Json bag_scores = Json::array();
  for (const auto& [id, score] : manifest.bag_scores) {
    Json jb;
    jb["id"] = id;
    jb["score"] = score;
    bag_scores.push_back(std::move(jb));
  }
  j["bag_scores"] = std::move(bag_scores);

  Json retained = Json::array();
  for (const auto& bag : manifest.retained) {
    Json jb;
    jb["id"] = bag.id;
    jb["score"] = bag.score;
    Json instances = Json::array();
    for (const auto& inst : bag.instances) {
      Json ji;
      ji["id"] = inst.id;
      ji["score"] = inst.score;
      instances.push_back(std::move(ji));
    }
    jb["instances"] = std::move(instances);
    retained.push_back(std::move(jb));
  }
  j["retained"] = std::move(retained);
  j["selection"] = manifest.selection;

  Json diag;
  diag["instance_iterations"] = manifest.instance_trace.iterations;
  diag["instance_objectives"] = manifest.instance_trace.objectives;
  diag["instance_gaps"] = manifest.instance_trace.gaps;
  diag["instance_enumerated"] = manifest.instance_trace.enumerated;
  diag["cccp_iterations"] = manifest.bag_trace.iterations;
  diag["cccp_objectives"] = manifest.bag_trace.outer_objectives;
  diag["bag_model_degenerate"] = manifest.bag_trace.degenerate;
  j["diagnostics"] = std::move(diag);
  return j;
}

SyntheticProblem generate_synthetic(const SyntheticSpec& spec, const CurationConfig& config) {
  if (spec.noise_fraction < 0.0 || spec.noise_fraction >= 1.0)
    throw InputError("generate_synthetic: noise fraction must be in [0,1)");
  if (spec.dim < 1 || spec.bag_size < 1 || spec.clusters < 1)
    throw InputError("generate_synthetic: bad spec");

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, spec.cluster_scale);

  // Class clusters on coordinate axes; the noise cluster sits opposite them.
  auto cluster_center = [&spec](int c) {
    Vec center = Vec::Zero(spec.dim);
    int axis = c % spec.dim;
    double shell = 1.0 + static_cast<double>(c / spec.dim);
    center(axis) = spec.separation * shell;
    return center;
  };
  Vec noise_center = Vec::Constant(spec.dim, -spec.separation / std::sqrt(double(spec.dim)));

  auto sample = [&](const Vec& center) {
    Vec x(spec.dim);
    for (int i = 0; i < spec.dim; ++i) x(i) = center(i) + gauss(rng);
    return x;
  };

  SyntheticProblem out;
  out.problem.delta = config.delta;
  out.problem.C = config.C_instance;
  out.problem.kernel = resolve_kernel(config.kernel, spec.dim);

  int bag_counter = 0;
  auto make_bag = [&bag_counter](BagLabel label) {
    Bag bag;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "B%03d", bag_counter++);
    bag.id = buf;
    bag.label = label;
    return bag;
  };
  auto add_instance = [](Bag& bag, Vec features) {
    Instance inst;
    inst.id = bag.id + "_i" + std::to_string(bag.instances.size());
    inst.bag_id = bag.id;
    inst.rank = static_cast<int>(bag.instances.size());
    inst.features = std::move(features);
    bag.instances.push_back(std::move(inst));
  };

  const int noise_per_bag = static_cast<int>(std::floor(spec.noise_fraction * spec.bag_size));
  for (int b = 0; b < spec.positive_bags; ++b) {
    Bag bag = make_bag(BagLabel::positive);
    Vec center = cluster_center(b % spec.clusters);
    // Noise positions within the bag are drawn per bag, not fixed up front.
    std::vector<int> slots(spec.bag_size);
    std::iota(slots.begin(), slots.end(), 0);
    std::shuffle(slots.begin(), slots.end(), rng);
    std::vector<char> is_noise(spec.bag_size, 0);
    for (int i = 0; i < noise_per_bag; ++i) is_noise[slots[i]] = 1;
    for (int i = 0; i < spec.bag_size; ++i)
      add_instance(bag, sample(is_noise[i] ? noise_center : center));
    out.truth.bag_clean[bag.id] = true;
    for (int i = 0; i < spec.bag_size; ++i)
      out.truth.instance_clean[bag.instances[i].id] = !is_noise[i];
    out.problem.bags.push_back(std::move(bag));
  }
  for (int b = 0; b < spec.noise_bags; ++b) {
    Bag bag = make_bag(BagLabel::positive);
    for (int i = 0; i < spec.bag_size; ++i) add_instance(bag, sample(noise_center));
    out.truth.bag_clean[bag.id] = false;
    for (const auto& inst : bag.instances) out.truth.instance_clean[inst.id] = false;
    out.problem.bags.push_back(std::move(bag));
  }
  for (int b = 0; b < spec.negative_bags; ++b) {
    Bag bag = make_bag(BagLabel::negative);
    for (int i = 0; i < spec.bag_size; ++i) add_instance(bag, sample(noise_center));
    out.problem.bags.push_back(std::move(bag));
  }
  return out;
}

Json truth_to_json(const GroundTruth& truth) {
  Json j;
  j["schema"] = "ground-truth/1";
  Json bags = Json::object();
  for (const auto& [id, clean] : truth.bag_clean) bags[id] = clean;
  Json instances = Json::object();
  for (const auto& [id, clean] : truth.instance_clean) instances[id] = clean;
  j["bag_clean"] = std::move(bags);
  j["instance_clean"] = std::move(instances);
  return j;
}

GroundTruth truth_from_json(const Json& j) {
  if (j.value("schema", "") != "ground-truth/1") throw IoError("ground truth: unknown schema tag");
  GroundTruth truth;
  for (const auto& [id, clean] : j.at("bag_clean").items()) truth.bag_clean[id] = clean.get<bool>();
  for (const auto& [id, clean] : j.at("instance_clean").items())
    truth.instance_clean[id] = clean.get<bool>();
  return truth;
}

}  // namespace curation
