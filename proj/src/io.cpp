#include "curation/io.hpp"

#include <fstream>
#include <sstream>

namespace curation {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write file: " + path);
  out << content;
}

namespace {

Vec json_to_vec(const Json& j) {
  Vec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(i) = j[i].get<double>();
  return v;
}

Json vec_to_json(const Vec& v) {
  Json j = Json::array();
  for (int i = 0; i < v.size(); ++i) j.push_back(v(i));
  return j;
}

Json kernel_to_json(const KernelSpec& spec) {
  Json j;
  j["kind"] = spec.kind == KernelSpec::Kind::linear ? "linear" : "rbf";
  if (spec.kind == KernelSpec::Kind::rbf) j["gamma"] = spec.gamma;
  return j;
}

KernelSpec kernel_from_json(const Json& j) {
  KernelSpec spec;
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "linear") {
    spec.kind = KernelSpec::Kind::linear;
  } else if (kind == "rbf") {
    spec.kind = KernelSpec::Kind::rbf;
    spec.gamma = j.at("gamma").get<double>();
  } else {
    throw IoError("unknown kernel kind: " + kind);
  }
  return spec;
}

}  // namespace

std::vector<Bag> parse_bags(const std::string& text) {
  std::vector<Bag> bags;
  std::istringstream stream(text);
  std::string line;
  int line_number = 0;
  while (std::getline(stream, line)) {
    ++line_number;
    if (line.empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
      Bag bag;
      bag.id = j.at("id").get<std::string>();
      std::string label = j.at("label").get<std::string>();
      if (label == "pos")
        bag.label = BagLabel::positive;
      else if (label == "neg")
        bag.label = BagLabel::negative;
      else
        throw IoError("label must be \"pos\" or \"neg\"");
      if (j.contains("expansion")) bag.expansion_text = j["expansion"].get<std::string>();
      for (const auto& ji : j.at("instances")) {
        Instance inst;
        inst.id = ji.at("id").get<std::string>();
        inst.rank = ji.at("rank").get<int>();
        inst.features = json_to_vec(ji.at("features"));
        inst.bag_id = bag.id;
        bag.instances.push_back(std::move(inst));
      }
      bags.push_back(std::move(bag));
    } catch (const std::exception& e) {
      throw IoError("bag file parse error at line " + std::to_string(line_number) + ": " +
                    e.what());
    }
  }
  return bags;
}

std::string encode_bags(const std::vector<Bag>& bags) {
  std::string out;
  for (const auto& bag : bags) {
    Json j;
    j["id"] = bag.id;
    j["label"] = bag.label == BagLabel::positive ? "pos" : "neg";
    if (bag.expansion_text) j["expansion"] = *bag.expansion_text;
    Json instances = Json::array();
    for (const auto& inst : bag.instances) {
      Json ji;
      ji["id"] = inst.id;
      ji["rank"] = inst.rank;
      ji["features"] = vec_to_json(inst.features);
      instances.push_back(std::move(ji));
    }
    j["instances"] = std::move(instances);
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<Bag> load_bag_file(const std::string& path) { return parse_bags(read_file(path)); }

void save_bag_file(const std::vector<Bag>& bags, const std::string& path) {
  write_file(path, encode_bags(bags));
}

MilProblem load_bags(const std::string& path, const CurationConfig& config) {
  std::vector<Bag> bags = load_bag_file(path);
  if (bags.empty()) throw IoError("no bags in " + path);
  MilProblem problem;
  problem.bags = std::move(bags);
  problem.delta = config.delta;
  problem.C = config.C_instance;
  problem.kernel = resolve_kernel(config.kernel, problem.dimension());
  ValidationReport report = validate_problem(problem);
  if (!report.ok()) {
    std::string msg = "invalid bag file " + path + ":";
    for (const auto& issue : report.issues) msg += " [" + issue + "]";
    throw InputError(msg);
  }
  return problem;
}

PageCounts parse_page_counts(const std::string& text) {
  Json j = Json::parse(text);
  PageCounts counts;
  counts.total = j.at("total").get<std::int64_t>();
  if (counts.total <= 0) throw IoError("page counts: total must be positive");
  for (const auto& [term, value] : j.at("single").items()) {
    std::int64_t c = value.get<std::int64_t>();
    if (c < 0) throw IoError("page counts: negative count for " + term);
    if (c > counts.total) throw IoError("page counts: single count above total for " + term);
    counts.single[term] = c;
  }
  for (const auto& [key, value] : j.at("pair").items()) {
    auto sep = key.find('|');
    if (sep == std::string::npos) throw IoError("page counts: malformed pair key " + key);
    std::string a = key.substr(0, sep), b = key.substr(sep + 1);
    if (PageCounts::pair_key(a, b) != key)
      throw IoError("page counts: pair key not lexicographically ordered: " + key);
    if (!counts.single.count(a) || !counts.single.count(b))
      throw IoError("page counts: pair references unknown term in " + key);
    std::int64_t c = value.get<std::int64_t>();
    if (c < 0) throw IoError("page counts: negative pair count for " + key);
    if (c > std::min(counts.single[a], counts.single[b]))
      throw IoError("page counts: pair count exceeds single count for " + key);
    counts.pair[key] = c;
  }
  return counts;
}

PageCounts load_page_counts(const std::string& path) {
  return parse_page_counts(read_file(path));
}

std::vector<ExpansionCandidate> parse_expansions(const std::string& text) {
  std::vector<ExpansionCandidate> out;
  std::istringstream stream(text);
  std::string line;
  int line_number = 0;
  while (std::getline(stream, line)) {
    ++line_number;
    if (line.empty()) continue;
    try {
      Json j = Json::parse(line);
      ExpansionCandidate cand;
      cand.text = j.at("text").get<std::string>();
      for (const auto& img : j.at("images")) cand.images.push_back(json_to_vec(img));
      out.push_back(std::move(cand));
    } catch (const std::exception& e) {
      throw IoError("expansion file parse error at line " + std::to_string(line_number) + ": " +
                    e.what());
    }
  }
  return out;
}

std::vector<ExpansionCandidate> load_expansion_file(const std::string& path) {
  return parse_expansions(read_file(path));
}

std::vector<Vec> load_negative_pool(const std::string& path) {
  Json j = Json::parse(read_file(path));
  std::vector<Vec> out;
  for (const auto& img : j.at("images")) out.push_back(json_to_vec(img));
  return out;
}

ComponentGraph parse_component_graph(const std::string& text) {
  Json j = Json::parse(text);
  ComponentGraph graph;
  graph.d = json_to_vec(j.at("d"));
  const int n = graph.n();
  graph.e = Mat::Zero(n, n);
  const auto& rows = j.at("e");
  if (static_cast<int>(rows.size()) != n) throw IoError("component graph: e row count mismatch");
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != n)
      throw IoError("component graph: e column count mismatch");
    for (int c = 0; c < n; ++c) graph.e(i, c) = rows[i][c].get<double>();
  }
  graph.validate();
  return graph;
}

ComponentGraph load_component_graph(const std::string& path) {
  return parse_component_graph(read_file(path));
}

RelevanceModel load_relevance_model(const std::string& path) {
  Json j = Json::parse(read_file(path));
  if (j.value("schema", "") != "relevance-model/1") throw IoError("unknown schema in " + path);
  RelevanceModel model;
  Vec w = json_to_vec(j.at("w"));
  if (w.size() != 2) throw IoError("relevance model: w must be two-dimensional");
  model.w = w;
  model.b = j.at("b").get<double>();
  return model;
}

void save_relevance_model(const RelevanceModel& model, const std::string& path) {
  Json j;
  j["schema"] = "relevance-model/1";
  j["w"] = Json::array({model.w(0), model.w(1)});
  j["b"] = model.b;
  write_file(path, j.dump(2) + "\n");
}

Json instance_model_to_json(const InstanceModel& model) {
  Json j;
  j["schema"] = "instance-model/1";
  j["kernel"] = kernel_to_json(model.kernel);
  Json support = Json::array();
  for (const auto& entry : model.support) {
    Json je;
    je["features"] = vec_to_json(entry.features);
    je["alpha"] = entry.alpha;
    je["y_tilde"] = entry.y_tilde;
    support.push_back(std::move(je));
  }
  j["support"] = std::move(support);
  return j;
}

InstanceModel instance_model_from_json(const Json& j) {
  if (j.value("schema", "") != "instance-model/1")
    throw IoError("instance model: unknown schema tag");
  InstanceModel model;
  model.kernel = kernel_from_json(j.at("kernel"));
  for (const auto& je : j.at("support")) {
    InstanceModel::SupportEntry entry;
    entry.features = json_to_vec(je.at("features"));
    entry.alpha = je.at("alpha").get<double>();
    entry.y_tilde = je.at("y_tilde").get<double>();
    model.support.push_back(std::move(entry));
  }
  return model;
}

Json bag_model_to_json(const BagModel& model) {
  Json j;
  j["schema"] = "bag-model/1";
  j["omega"] = vec_to_json(model.omega);
  j["k"] = model.k;
  j["xi_alpha"] = model.weights.xi_alpha;
  j["xi_beta"] = model.weights.xi_beta;
  j["d_clamp"] = model.weights.d_clamp;
  return j;
}

BagModel bag_model_from_json(const Json& j) {
  if (j.value("schema", "") != "bag-model/1") throw IoError("bag model: unknown schema tag");
  BagModel model;
  model.omega = json_to_vec(j.at("omega"));
  model.k = j.at("k").get<int>();
  model.weights.xi_alpha = j.at("xi_alpha").get<double>();
  model.weights.xi_beta = j.at("xi_beta").get<double>();
  model.weights.d_clamp = j.at("d_clamp").get<double>();
  return model;
}

void save_instance_model(const InstanceModel& model, const std::string& path) {
  write_file(path, instance_model_to_json(model).dump(2) + "\n");
}

InstanceModel load_instance_model(const std::string& path) {
  try {
    return instance_model_from_json(Json::parse(read_file(path)));
  } catch (const Json::exception& e) {
    throw IoError("instance model " + path + ": " + e.what());
  }
}

void save_bag_model(const BagModel& model, const std::string& path) {
  write_file(path, bag_model_to_json(model).dump(2) + "\n");
}

BagModel load_bag_model(const std::string& path) {
  try {
    return bag_model_from_json(Json::parse(read_file(path)));
  } catch (const Json::exception& e) {
    throw IoError("bag model " + path + ": " + e.what());
  }
}

namespace {

std::string trim(const std::string& s) {
  auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

CurationConfig parse_config(const std::string& text) {
  CurationConfig config;
  std::istringstream stream(text);
  std::string line;
  int line_number = 0;
  while (std::getline(stream, line)) {
    ++line_number;
    std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw IoError("config line " + std::to_string(line_number) + ": expected key = value");
    std::string key = trim(stripped.substr(0, eq));
    std::string value = trim(stripped.substr(eq + 1));
    try {
      if (key == "delta") config.delta = std::stod(value);
      else if (key == "c_instance") config.C_instance = std::stod(value);
      else if (key == "c_bag") config.C_bag = std::stod(value);
      else if (key == "kernel") {
        if (value == "linear") config.kernel.kind = KernelSpec::Kind::linear;
        else if (value == "rbf") config.kernel.kind = KernelSpec::Kind::rbf;
        else throw IoError("kernel must be linear or rbf");
      }
      else if (key == "gamma") config.kernel.gamma = std::stod(value);
      else if (key == "k") config.k = std::stoi(value);
      else if (key == "xi_alpha") config.xi_alpha = std::stod(value);
      else if (key == "xi_beta") config.xi_beta = std::stod(value);
      else if (key == "d_clamp") config.d_clamp = std::stod(value);
      else if (key == "salience_threshold") config.salience_threshold = std::stod(value);
      else if (key == "top_n") config.top_n = std::stoi(value);
      else if (key == "coverage_budget") config.coverage_budget = std::stoi(value);
      else if (key == "seed") config.seed = std::stoull(value);
      else if (key == "quota") config.quota = std::stoi(value);
      else if (key == "mkl_tol") config.tolerances.mkl_tol = std::stod(value);
      else if (key == "cccp_tol") config.tolerances.cccp_tol = std::stod(value);
      else if (key == "dinkelbach_tol") config.tolerances.dinkelbach_tol = std::stod(value);
      else if (key == "instance_max_iter") config.instance_max_iter = std::stoi(value);
      else if (key == "cccp_max_iter") config.cccp_max_iter = std::stoi(value);
      else throw IoError("unknown config key: " + key);
    } catch (const IoError&) {
      throw;
    } catch (const std::exception&) {
      throw IoError("config line " + std::to_string(line_number) + ": bad value for " + key);
    }
  }
  config.validate();
  return config;
}

CurationConfig load_config(const std::string& path) { return parse_config(read_file(path)); }

}  // namespace curation
